"""Exact integer/rational linear algebra over Python ints and Fractions.

Matrices are tuples of row tuples.  Nothing here ever touches floating
point; every routine is a pure function of its arguments.
"""

from fractions import Fraction
from math import gcd, lcm


class DegenerateLattice(ValueError):
    pass


def to_matrix(rows):
    return tuple(tuple(r) for r in rows)


def shape(a):
    return len(a), (len(a[0]) if a else 0)


def identity(n, one=1):
    return tuple(tuple(one if i == j else 0 * one for j in range(n)) for i in range(n))


def zeros(r, c):
    return tuple((0,) * c for _ in range(r))


def transpose(a):
    return tuple(zip(*a))


def mat_mul(a, b):
    bt = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def mat_vec(a, v):
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def vec_mat(v, a):
    return tuple(sum(v[i] * a[i][j] for i in range(len(v))) for j in range(len(a[0])))


def mat_add(a, b):
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_sub(a, b):
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_scale(c, a):
    return tuple(tuple(c * x for x in row) for row in a)


def mat_pow(a, k):
    out = identity(len(a))
    for _ in range(k):
        out = mat_mul(out, a)
    return out


def is_integral(a):
    return all(
        isinstance(x, int) or x.denominator == 1 for row in a for x in row
    )


def as_int_matrix(a):
    """Convert an integral Fraction matrix to ints; raise if not integral."""
    out = []
    for row in a:
        new = []
        for x in row:
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    raise ValueError(f"non-integral entry {x}")
                x = x.numerator
            new.append(int(x))
        out.append(tuple(new))
    return tuple(out)


def as_frac_matrix(a):
    return tuple(tuple(Fraction(x) for x in row) for row in a)


def _check_square(a):
    r, c = shape(a)
    if r != c:
        raise ValueError(f"expected a square matrix, got {r}x{c}")
    return r


def det(a):
    """Determinant.  Bareiss for integer input, Gaussian elimination otherwise."""
    n = _check_square(a)
    if n == 0:
        return 1
    if all(isinstance(x, int) for row in a for x in row):
        return _det_bareiss(a)
    m = [list(map(Fraction, row)) for row in a]
    sign = 1
    result = Fraction(1)
    for i in range(n):
        piv = next((r for r in range(i, n) if m[r][i] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != i:
            m[i], m[piv] = m[piv], m[i]
            sign = -sign
        p = m[i][i]
        result *= p
        for r in range(i + 1, n):
            if m[r][i]:
                q = m[r][i] / p
                rr, ri = m[r], m[i]
                for c in range(i, n):
                    rr[c] -= q * ri[c]
    return sign * result


def _det_bareiss(a):
    n = len(a)
    m = [list(row) for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if m[r][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def inverse(a):
    """Exact inverse over Q (Gauss-Jordan)."""
    n = _check_square(a)
    m = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(a)]
    for i in range(n):
        piv = next((r for r in range(i, n) if m[r][i] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        m[i], m[piv] = m[piv], m[i]
        p = m[i][i]
        m[i] = [x / p for x in m[i]]
        for r in range(n):
            if r != i and m[r][i]:
                q = m[r][i]
                m[r] = [x - q * y for x, y in zip(m[r], m[i])]
    return tuple(tuple(row[n:]) for row in m)


def solve(a, b):
    """Solve a x = b for a square nonsingular a and vector b."""
    return mat_vec(inverse(a), b)


# --- integer column echelon / Hermite normal form -------------------------

def xgcd(a, b):
    """Return (g, x, y) with a*x + b*y = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def column_echelon(a, track=False):
    """Integer column Hermite form of an r x c matrix.

    Returns (H, U, rank) with H = a U, U unimodular (None unless
    ``track``).  The first ``rank`` columns of H are the pivot columns:
    the pivot of each is positive and every entry left of a pivot in its
    row lies in [0, pivot).  The remaining c - rank columns are zero, so
    with ``track`` the matching columns of U are a Z-basis of the kernel.
    """
    rows, cols = shape(a)
    h = [list(map(int, col)) for col in zip(*a)]  # column-major working copy
    u = [[int(i == j) for i in range(cols)] for j in range(cols)] if track else None

    def combine(p, q, x, y, s, t):
        # (col p, col q) <- (x*p + y*q, s*p + t*q)
        cp, cq = h[p], h[q]
        h[p] = [x * e + y * f for e, f in zip(cp, cq)]
        h[q] = [s * e + t * f for e, f in zip(cp, cq)]
        if u is not None:
            up, uq = u[p], u[q]
            u[p] = [x * e + y * f for e, f in zip(up, uq)]
            u[q] = [s * e + t * f for e, f in zip(up, uq)]

    p = 0
    for i in range(rows):
        if p == cols:
            break
        for q in range(p + 1, cols):
            b = h[q][i]
            if b == 0:
                continue
            a_ = h[p][i]
            g, x, y = xgcd(a_, b)
            combine(p, q, x, y, -b // g, a_ // g)
        piv = h[p][i]
        if piv == 0:
            continue
        if piv < 0:
            h[p] = [-e for e in h[p]]
            if u is not None:
                u[p] = [-e for e in u[p]]
            piv = -piv
        for j in range(p):
            q_ = h[j][i] // piv
            if q_:
                h[j] = [e - q_ * f for e, f in zip(h[j], h[p])]
                if u is not None:
                    u[j] = [e - q_ * f for e, f in zip(u[j], u[p])]
        p += 1
    H = transpose(h) if h else tuple(() for _ in range(rows))
    U = transpose(u) if u is not None else None
    return H, U, p


def _common_denominator(a):
    d = 1
    for row in a:
        for x in row:
            if isinstance(x, Fraction):
                d = lcm(d, x.denominator)
    return d


def hnf_span(gens):
    """Canonical basis (n x n) of the lattice spanned by the columns of gens.

    ``gens`` is n x m with rational entries and rank n.
    """
    n, m = shape(gens)
    d = _common_denominator(gens)
    scaled = tuple(tuple(int(Fraction(x) * d) for x in row) for row in gens)
    H, _, rank = column_echelon(scaled)
    if rank < n:
        raise DegenerateLattice("degenerate lattice")
    return tuple(tuple(Fraction(H[i][j], d) for j in range(n)) for i in range(n))


def hnf(basis):
    """Column Hermite normal form of a square nonsingular rational basis."""
    _check_square(basis)
    if det(basis) == 0:
        raise DegenerateLattice("degenerate lattice")
    return hnf_span(basis)


def lattice_index(sub, sup):
    """Generalized index |det(sup^-1 sub)| of two full-rank lattices."""
    if shape(sub) != shape(sup):
        raise ValueError("dimension mismatch")
    _check_square(sub)
    ds, dp = Fraction(det(sub)), Fraction(det(sup))
    if ds == 0 or dp == 0:
        raise DegenerateLattice("degenerate lattice")
    return abs(ds / dp)


def in_lattice(basis, v):
    """True iff the rational vector v lies in the lattice with these columns."""
    return all(Fraction(x).denominator == 1 for x in solve(basis, v))


def contains_lattice(sup, sub):
    inv = inverse(sup)
    return is_integral(mat_mul(inv, sub))


def dual_basis(basis):
    """Basis of {x : b . x in Z for every column b}, i.e. basis^-T."""
    return transpose(inverse(basis))


def int_kernel(a):
    """Z-basis (as columns of an c x k matrix, list of vectors) of {x in Z^c : a x = 0}."""
    rows, cols = shape(a)
    d = _common_denominator(a)
    scaled = tuple(tuple(int(Fraction(x) * d) for x in row) for row in a)
    _, U, rank = column_echelon(scaled, track=True)
    return [tuple(U[i][j] for i in range(cols)) for j in range(rank, cols)]


# --- polynomials (coefficient lists, lowest degree first) ------------------

def poly_trim(p):
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return tuple(p)


def poly_mul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return tuple(out)


def poly_add(p, q):
    if len(p) < len(q):
        p, q = q, p
    return tuple(a + (q[i] if i < len(q) else 0) for i, a in enumerate(p))


def poly_eval(p, t):
    acc = 0
    for c in reversed(p):
        acc = acc * t + c
    return acc


def charpoly(m):
    """Monic characteristic polynomial det(tI - m), lowest degree first.

    Berkowitz's division-free algorithm, so integer input stays integral.
    """
    n = _check_square(m)
    if n == 0:
        return (1,)
    hi = [1, -m[0][0]]  # highest degree first while building
    for r in range(1, n):
        row = m[r][:r]
        col = [m[i][r] for i in range(r)]
        q = [1, -m[r][r]]
        v = col
        for _ in range(r):
            q.append(-sum(x * y for x, y in zip(row, v)))
            v = [sum(m[i][j] * v[j] for j in range(r)) for i in range(r)]
        hi = [sum(q[i - j] * hi[j] for j in range(min(i, r) + 1)) for i in range(r + 2)]
    return tuple(reversed(hi))


def interpolate_consecutive(ys):
    """Integer-valued-polynomial interpolation through (k, ys[k]), k = 0..len-1.

    Newton forward differences, kept integral by working with d! * p(t)
    and dividing once at the end.  Returns Fraction coefficients, lowest first.
    """
    d = len(ys) - 1
    diffs = []
    row = list(ys)
    while row:
        diffs.append(row[0])
        row = [b - a for a, b in zip(row, row[1:])]
    fact = [1]
    for k in range(1, d + 1):
        fact.append(fact[-1] * k)
    acc = (0,)
    falling = (1,)
    for k, delta in enumerate(diffs):
        acc = poly_add(acc, tuple(delta * (fact[d] // fact[k]) * c for c in falling))
        falling = poly_mul(falling, (-k, 1))
    acc = acc + (0,) * (d + 1 - len(acc))
    return [Fraction(c, fact[d]) for c in acc]


def adjugate(a):
    """Classical adjoint of an integer matrix (so a adj(a) = det(a) I)."""
    n = _check_square(a)
    if n == 1:
        return ((1,),)
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = tuple(tuple(a[r][c] for c in range(n) if c != j) for r in range(n) if r != i)
            out[j][i] = (-1) ** (i + j) * det(minor)
    return to_matrix(out)


def det_binary_form(a1, a2):
    """Coefficients (c_0..c_n) of Det(A1 x + A2 y) = sum c_i x^(n-i) y^i.

    det(A1 t + A2) is interpolated from its values at t = 0..n; the end
    coefficients are asserted against det A1 and det A2.
    """
    n = _check_square(a1)
    if shape(a2) != (n, n):
        raise ValueError("A1 and A2 must have the same square size")
    ts = list(range(n + 1))
    vals = [det(tuple(tuple(t * x + y for x, y in zip(r1, r2)) for r1, r2 in zip(a1, a2)))
            for t in ts]
    coeffs = interpolate_consecutive(vals)  # coeffs[k] multiplies t^k = x^k y^(n-k)
    form = []
    for i in range(n + 1):
        c = coeffs[n - i]
        if c.denominator != 1:
            raise ArithmeticError("interpolated determinant is not integral")
        form.append(int(c))
    assert form[0] == det(a1) and form[n] == det(a2)
    return tuple(form)


def lll_reduce(vectors, delta=Fraction(3, 4)):
    """LLL-reduced basis of the integer lattice spanned by independent ``vectors``.

    Exact rational Gram-Schmidt, recomputed after each swap; fine for the
    small dimensions used here.
    """
    b = [list(v) for v in vectors]
    k = len(b)

    def dot(u, v):
        return sum(x * y for x, y in zip(u, v))

    def gram_schmidt():
        bstar, mu = [], [[Fraction(0)] * k for _ in range(k)]
        for i in range(k):
            v = [Fraction(x) for x in b[i]]
            for j in range(i):
                mu[i][j] = dot(b[i], bstar[j]) / dot(bstar[j], bstar[j])
                v = [x - mu[i][j] * y for x, y in zip(v, bstar[j])]
            bstar.append(v)
        return bstar, mu

    bstar, mu = gram_schmidt()
    i = 1
    while i < k:
        for j in range(i - 1, -1, -1):
            q = round(mu[i][j])
            if q:
                b[i] = [x - q * y for x, y in zip(b[i], b[j])]
                bstar, mu = gram_schmidt()
        lhs = dot(bstar[i], bstar[i])
        rhs = (delta - mu[i][i - 1] ** 2) * dot(bstar[i - 1], bstar[i - 1])
        if lhs >= rhs:
            i += 1
        else:
            b[i], b[i - 1] = b[i - 1], b[i]
            bstar, mu = gram_schmidt()
            i = max(i - 1, 1)
    return [tuple(v) for v in b]
