"""The ring R_f of a binary n-ic form and its modules I_f, J_f.

Everything is computed inside Q[theta]/F(theta, 1), which needs the leading
coefficient f_0 to be nonzero; use :func:`normalize_leading` (a GL_2(Z)
shear) first when it is not.  Elements of Q[theta]/F are :class:`ThetaVec`
coordinate vectors on 1, theta, ..., theta^(n-1).  Lattices store their
basis as columns of theta-coordinates, always in column Hermite form.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from math import gcd

from . import exactlat as el


class ZeroForm(ValueError):
    pass


class LeadingCoefficientZero(ValueError):
    pass


@dataclass(frozen=True)
class BinaryForm:
    """f_0 x^n + f_1 x^(n-1) y + ... + f_n y^n."""

    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))
        if len(self.coeffs) < 3:
            raise ValueError("a binary n-ic form needs n >= 2")

    @property
    def n(self):
        return len(self.coeffs) - 1

    def __getitem__(self, i):
        return self.coeffs[i]

    def is_zero(self):
        return not any(self.coeffs)

    def __call__(self, x, y):
        n = self.n
        return sum(c * x ** (n - i) * y ** i for i, c in enumerate(self.coeffs))

    def dehomogenized(self):
        """F(t, 1) as a coefficient list, lowest degree first."""
        return tuple(reversed(self.coeffs))

    def __str__(self):
        return "(" + ",".join(map(str, self.coeffs)) + ")"


@dataclass(frozen=True)
class GL2Elem:
    """g = [[a, b], [c, d]] acting by F(x, y) -> F(ax + cy, bx + dy)."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.det() not in (1, -1):
            raise ValueError(f"not in GL_2(Z): det = {self.det()}")

    def det(self):
        return self.a * self.d - self.b * self.c

    def __matmul__(self, other):
        return GL2Elem(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self):
        e = self.det()  # e = 1/e for e = +-1
        return GL2Elem(e * self.d, -e * self.b, -e * self.c, e * self.a)

    @classmethod
    def identity(cls):
        return cls(1, 0, 0, 1)

    def is_identity(self):
        return (self.a, self.b, self.c, self.d) == (1, 0, 0, 1)


def gl2_act_form(g, f):
    """Coefficients of F(ax + cy, bx + dy)."""
    n = f.n
    # polynomials in (x, y) as coefficient lists indexed by the power of y
    lin1 = (g.a, g.c)
    lin2 = (g.b, g.d)
    out = [0] * (n + 1)
    for i, coef in enumerate(f.coeffs):
        if not coef:
            continue
        term = (coef,)
        for _ in range(n - i):
            term = el.poly_mul(term, lin1)
        for _ in range(i):
            term = el.poly_mul(term, lin2)
        for k, t in enumerate(term):
            out[k] += t
    return BinaryForm(out)


def normalize_leading(f):
    """Return (g, g(f)) with g(f) having nonzero leading coefficient.

    g is the identity when f_0 != 0, otherwise the shear
    (x, y) -> (x, y + t x) for the first t in 1, -1, 2, -2, ... with F(1, t) != 0.
    """
    if f.is_zero():
        raise ZeroForm("zero form")
    if f[0] != 0:
        return GL2Elem.identity(), f
    t = 1
    while f(1, t) == 0:
        t = -t if t > 0 else -t + 1
    g = GL2Elem(1, t, 0, 1)
    return g, gl2_act_form(g, f)


def form_stats(f):
    """(discriminant, primitive) of a nonzero form.

    disc = (-1)^(n(n-1)/2) Res(F, F') / f_0 with F = F(x, 1); forms with
    f_0 = 0 are first moved by a shear, which leaves disc unchanged.
    """
    if f.is_zero():
        raise ZeroForm("zero form")
    primitive = gcd(*f.coeffs) == 1
    _, g = normalize_leading(f)
    n = g.n
    F = list(g.coeffs)  # highest degree first
    dF = [(n - i) * c for i, c in enumerate(F[:-1])]
    res = _sylvester_resultant(F, dF)
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    disc, rem = divmod(sign * res, F[0])
    assert rem == 0
    return disc, primitive


def _sylvester_resultant(p, q):
    """Resultant of two polynomials given highest-degree-first."""
    m, k = len(p) - 1, len(q) - 1
    size = m + k
    rows = []
    for i in range(k):
        rows.append([0] * i + p + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + q + [0] * (size - k - 1 - i))
    return el.det(el.to_matrix(rows))


@dataclass(frozen=True, eq=False)
class Field:
    """Arithmetic context Q[theta]/F(theta, 1) for a form with f_0 != 0."""

    form: BinaryForm

    def __post_init__(self):
        if self.form[0] == 0:
            raise LeadingCoefficientZero(
                "leading coefficient vanishes; apply GL_2 transport")

    def __eq__(self, other):
        return isinstance(other, Field) and self.form == other.form

    def __hash__(self):
        return hash(self.form)

    @property
    def n(self):
        return self.form.n

    @cached_property
    def theta_power_n(self):
        """theta^n = -(f_1 theta^(n-1) + ... + f_n) / f_0 in theta-coordinates."""
        f = self.form
        n = f.n
        return tuple(Fraction(-f[n - j], f[0]) for j in range(n))

    @cached_property
    def theta_matrix(self):
        """Matrix of multiplication by theta on theta-coordinates."""
        n = self.n
        top = self.theta_power_n
        rows = [[Fraction(0)] * n for _ in range(n)]
        for j in range(n - 1):
            rows[j + 1][j] = Fraction(1)
        for i in range(n):
            rows[i][n - 1] = top[i]
        return el.to_matrix(rows)

    def element(self, coords):
        if len(coords) != self.n:
            raise ValueError("wrong number of coordinates")
        return ThetaVec(self, tuple(Fraction(c) for c in coords))

    def theta_power(self, k):
        coords = [0] * self.n
        if k < self.n:
            coords[k] = 1
            return self.element(coords)
        return self.element([0] * (self.n - 1) + [1]) * self.theta_power(k - self.n + 1)

    @cached_property
    def one(self):
        return self.theta_power(0)

    @cached_property
    def theta(self):
        return self.theta_power(1)

    def zeta(self, k):
        """zeta_0 = 1, zeta_k = f_0 theta^k + ... + f_(k-1) theta."""
        if not 0 <= k < self.n:
            raise ValueError("k out of range")
        coords = [0] * self.n
        if k == 0:
            coords[0] = 1
        for i in range(k):
            coords[k - i] = self.form[i]
        return self.element(coords)

    def mult_matrix(self, x):
        """Matrix of r -> x r on theta-coordinates."""
        n = self.n
        acc = el.zeros(n, n)
        power = el.identity(n, Fraction(1))
        for c in x.coords:
            if c:
                acc = el.mat_add(acc, el.mat_scale(c, power))
            power = el.mat_mul(self.theta_matrix, power)
        return acc


@dataclass(frozen=True)
class ThetaVec:
    field: Field = field(repr=False)
    coords: tuple

    def _lift(self, other):
        if isinstance(other, ThetaVec):
            if other.field != self.field:
                raise ValueError("context mismatch")
            return other.coords
        c = [Fraction(0)] * self.field.n
        c[0] = Fraction(other)
        return tuple(c)

    def __add__(self, other):
        o = self._lift(other)
        return ThetaVec(self.field, tuple(a + b for a, b in zip(self.coords, o)))

    __radd__ = __add__

    def __neg__(self):
        return ThetaVec(self.field, tuple(-a for a in self.coords))

    def __sub__(self, other):
        return self + (-ThetaVec(self.field, self._lift(other)))

    def __mul__(self, other):
        if not isinstance(other, ThetaVec):
            c = Fraction(other)
            return ThetaVec(self.field, tuple(c * a for a in self.coords))
        o = self._lift(other)
        n = self.field.n
        prod = [Fraction(0)] * (2 * n - 1)
        for i, a in enumerate(self.coords):
            if a:
                for j, b in enumerate(o):
                    prod[i + j] += a * b
        top = self.field.theta_power_n
        # fold theta^k for k >= n back down, highest first
        for k in range(2 * n - 2, n - 1, -1):
            c = prod[k]
            if c:
                prod[k] = Fraction(0)
                for j in range(n):
                    prod[k - n + j] += c * top[j]
        return ThetaVec(self.field, tuple(prod[:n]))

    __rmul__ = __mul__

    def is_zero(self):
        return not any(self.coords)

    def inverse(self):
        m = self.field.mult_matrix(self)
        if el.det(m) == 0:
            raise ZeroDivisionError("zero divisor in Q[theta]/F")
        return ThetaVec(self.field, el.solve(m, self._lift(1)))

    def __truediv__(self, other):
        if isinstance(other, ThetaVec):
            return self * other.inverse()
        return self * (1 / Fraction(other))

    def norm(self):
        return el.det(self.field.mult_matrix(self))

    def theta_coord(self, i):
        return self.coords[i]


# --- dual functionals ------------------------------------------------------

def zeta_dual(r, which):
    """The functionals zeta-check_{n-1} and zeta-check_{n-2} (which = n-1 or n-2)."""
    f = r.field.form
    n = f.n
    f0 = f[0]
    top = r.coords[n - 1]
    if which == n - 1:
        return top / f0
    if which == n - 2:
        return (r.coords[n - 2] - f[1] * top / f0) / f0
    raise ValueError("only zeta-check_{n-1} and zeta-check_{n-2} are defined")


def to_V(r):
    """The map I_f -> V = Z^2, r -> (zeta-check_{n-1}(r), -zeta-check_{n-2}(r))."""
    n = r.field.n
    return zeta_dual(r, n - 1), -zeta_dual(r, n - 2)


def getcoeff_identity(f, r, k):
    """Check zeta-check_{n-1}(zeta_k r) = theta-check_{n-1-k}(r) - f_k zeta-check_{n-1}(r)."""
    n = f.n
    if not 1 <= k <= n - 1:
        raise ValueError("k out of range")
    fld = r.field
    lhs = zeta_dual(fld.zeta(k) * r, n - 1)
    rhs = r.coords[n - 1 - k] - f[k] * zeta_dual(r, n - 1)
    return lhs == rhs


# --- the ring R_f -----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class RingRf:
    """R_f with its zeta-basis and integral structure constants.

    ``struct_consts[i][j]`` is the zeta-coordinate vector of zeta_i zeta_j.
    """

    form: BinaryForm
    field: Field
    zeta_coords: tuple
    struct_consts: tuple

    @property
    def n(self):
        return self.form.n

    @cached_property
    def basis_matrix(self):
        """Columns are the theta-coordinates of zeta_0..zeta_(n-1)."""
        return el.transpose(tuple(z.coords for z in self.zeta_coords))

    @cached_property
    def lattice(self):
        return Lattice(self.field, self.basis_matrix)

    def to_zeta(self, x):
        return el.solve(self.basis_matrix, x.coords)

    def from_zeta(self, coeffs):
        acc = self.field.element([0] * self.n)
        for c, z in zip(coeffs, self.zeta_coords):
            if c:
                acc = acc + z * c
        return acc

    def mult(self, a, b):
        """Product of two zeta-coordinate vectors via structure constants."""
        n = self.n
        out = [0] * n
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        c = self.struct_consts[i][j]
                        for k in range(n):
                            out[k] += x * y * c[k]
        return tuple(out)

    def regular_matrix(self, x):
        """Matrix (on zeta-coordinates, acting on columns) of multiplication by x."""
        cols = [self.mult(x, tuple(int(i == j) for i in range(self.n))) for j in range(self.n)]
        return el.transpose(cols)


@lru_cache(maxsize=4096)
def make_ring(f):
    """Build R_f for a form with f_0 != 0 and check integrality of its table."""
    fld = Field(f)
    n = f.n
    zetas = tuple(fld.zeta(k) for k in range(n))
    basis = el.transpose(tuple(z.coords for z in zetas))
    inv = el.inverse(basis)
    table = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            c = el.mat_vec(inv, (zetas[i] * zetas[j]).coords)
            if any(x.denominator != 1 for x in c):
                raise ArithmeticError(
                    f"non-integral structure constant for zeta_{i} zeta_{j}: {c}")
            table[i][j] = table[j][i] = tuple(int(x) for x in c)
    return RingRf(f, fld, zetas, el.to_matrix(table))


# --- lattices ----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Lattice:
    """A full-rank Z-lattice in Q[theta]/F, basis columns in Hermite form."""

    field: Field = field(repr=False)
    basis: tuple

    def __post_init__(self):
        object.__setattr__(self, "basis", el.hnf_span(self.basis))

    @classmethod
    def spanned_by(cls, fld, elements):
        cols = [e.coords for e in elements]
        return cls(fld, el.transpose(cols))

    @property
    def n(self):
        return len(self.basis)

    def elements(self):
        return [ThetaVec(self.field, col) for col in el.transpose(self.basis)]

    @cached_property
    def inverse_basis(self):
        return el.inverse(self.basis)

    def __contains__(self, x):
        return all(c.denominator == 1 for c in el.mat_vec(self.inverse_basis, x.coords))

    def contains(self, other):
        return el.contains_lattice(self.basis, other.basis)

    def scale(self, x):
        """The lattice x * L for an element (or rational) x."""
        if not isinstance(x, ThetaVec):
            x = self.field.one * x
        return Lattice.spanned_by(self.field, [x * e for e in self.elements()])

    def det(self):
        return el.det(self.basis)

    def __eq__(self, other):
        return isinstance(other, Lattice) and self.field == other.field and self.basis == other.basis

    def __hash__(self):
        return hash((self.field, self.basis))


@lru_cache(maxsize=4096)
def make_If_Jf(f):
    """The modules I_f and J_f as lattices in Q[theta]/F."""
    fld = Field(f)
    n = f.n
    th = [fld.theta_power(k) for k in range(n)]
    low = th[: n - 2]
    if_gens = low + [th[n - 2] * f[0], th[n - 1] * f[0] + th[n - 2] * f[1]]
    jf_gens = th[: n - 1] + [fld.zeta(n - 1)]
    return Lattice.spanned_by(fld, if_gens), Lattice.spanned_by(fld, jf_gens)


def ideal_norm(L, ring=None):
    """|L| = [R_f : L] as a positive rational."""
    if ring is None:
        ring = make_ring(L.field.form)
    return el.lattice_index(L.basis, ring.lattice.basis)


def in_If_via_dual(fld, r, jf):
    """Membership in I_f as characterized through J_f and zeta-check_{n-2}."""
    return r in jf and zeta_dual(r, fld.n - 2).denominator == 1
