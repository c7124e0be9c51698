"""Pointwise checks of polynomial identities of the universal 2 x n x n tensor.

Each check specializes the variables u_ijk (and x or y where needed) to
integers and compares both sides exactly; a polynomial identity must hold
at every point, so a single failure is a genuine counterexample.
"""

import random
from dataclasses import dataclass
from fractions import Fraction

from . import exactlat as el


@dataclass(frozen=True)
class Specialization:
    """u[i][j][k] for i in {0, 1} (indices 1 and 2 in the usual notation), j, k in 0..n-1."""

    n: int
    u: tuple
    x: tuple = None
    y: tuple = None

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("need n >= 2")

    @property
    def C1(self):
        return self.u[0]

    @property
    def C2(self):
        return self.u[1]

    def C_x(self, x=None):
        """C(x) = C1 x1 + C2 x2."""
        x1, x2 = x if x is not None else self.x
        return tuple(tuple(x1 * a + x2 * b for a, b in zip(r1, r2))
                     for r1, r2 in zip(self.C1, self.C2))

    def C_y(self, y=None):
        """2 x n matrix with (i, k) entry sum_j u_ijk y_j."""
        y = y if y is not None else self.y
        return tuple(tuple(sum(self.u[i][j][k] * y[j] for j in range(self.n))
                           for k in range(self.n)) for i in range(2))


def random_specialization(n, rng, box=9, with_x=True, with_y=True):
    def mat():
        return tuple(tuple(rng.randint(-box, box) for _ in range(n)) for _ in range(n))

    x = (rng.randint(-box, box), rng.randint(-box, box)) if with_x else None
    y = tuple(rng.randint(-box, box) for _ in range(n)) if with_y else None
    return Specialization(n, (mat(), mat()), x, y)


def check_nodenom(s, k_range=None):
    """c_0 T^k + ... + c_(k-1) T is integral for T = -C1^-1 C2, c = Det(C)."""
    if el.det(s.C1) == 0:
        raise ZeroDivisionError("singular C1 at this specialization; resample")
    n = s.n
    c = el.det_binary_form(s.C1, s.C2)
    T = el.mat_scale(-1, el.mat_mul(el.inverse(s.C1), s.C2))
    powers = [el.identity(n, Fraction(1))]
    for _ in range(n - 1):
        powers.append(el.mat_mul(powers[-1], T))
    for k in (k_range if k_range is not None else range(1, n)):
        acc = el.zeros(n, n)
        for i in range(k):
            acc = el.mat_add(acc, el.mat_scale(c[i], powers[k - i]))
        if not el.is_integral(acc):
            return False
    return True


def C_xy(s, x, y):
    """The vector C(x, y)_k = sum_ij u_ijk x_i y_j."""
    return tuple(sum((x[0] * s.u[0][j][k] + x[1] * s.u[1][j][k]) * y[j] for j in range(s.n))
                 for k in range(s.n))


def x_from_y(s, y, col):
    """x1 = -sum_j u_2j,col y_j, x2 = sum_j u_1j,col y_j."""
    cy = s.C_y(y)
    return -cy[1][col], cy[0][col]


def check_correspondence_forward(s, col):
    """C(x, y)_k = -C(y)_{1,k} C(y)_{2,col} + C(y)_{2,k} C(y)_{1,col} for all k."""
    y = s.y
    x = x_from_y(s, y, col)
    cy = s.C_y(y)
    lhs = C_xy(s, x, y)
    rhs = tuple(-cy[0][k] * cy[1][col] + cy[1][k] * cy[0][col] for k in range(s.n))
    return lhs == rhs


def cofactor_column(m, col):
    """y_j = (-1)^(j+col) det(m without row j and column col)."""
    n = len(m)
    out = []
    for j in range(n):
        minor = tuple(tuple(m[r][c] for c in range(n) if c != col) for r in range(n) if r != j)
        out.append((-1) ** (j + col) * el.det(minor))
    return tuple(out)


def check_correspondence_backward(s, k, ell):
    """-x1' x2 + x2' x1 = det(C(x) with column ell replaced by column k).

    y is the column of signed (n-1)-minors of C(x) along column ell and x'
    comes from y through the forward formulas using column k.
    """
    cx = s.C_x()
    y = cofactor_column(cx, ell)
    x1p, x2p = x_from_y(s, y, k)
    x1, x2 = s.x
    lhs = -x1p * x2 + x2p * x1
    replaced = tuple(tuple(row[k] if c == ell else row[c] for c in range(s.n)) for row in cx)
    return lhs == el.det(replaced)


def run_suite(n, count, rng, box=9):
    """Run all three checks on ``count`` specializations; return the first failure or None."""
    for trial in range(count):
        s = random_specialization(n, rng, box)
        while el.det(s.C1) == 0:
            s = random_specialization(n, rng, box)
        if not check_nodenom(s):
            return ("nodenom", trial, s)
        for col in range(n):
            if not check_correspondence_forward(s, col):
                return ("forward", trial, s)
        k, ell = rng.randrange(n), rng.randrange(n)
        if not check_correspondence_backward(s, k, ell):
            return ("backward", trial, s)
    return None
