"""Tensors A = (A1, A2) and based balanced pairs of R_f-modules.

``psi`` builds the pair (M, N) and its pairing into I_f from a tensor,
``phi`` reads the tensor back off the pairing.  Elements of M are row
vectors (R_f acts on the right), elements of N are column vectors (R_f
acts on the left), and pairing[j][k] = m_j o n_k.

When det A1 = 0 the construction is carried out for g(A), g the shear
from :func:`formring.normalize_leading`, and the pair remembers g as its
``transport``; ``phi`` undoes it.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from . import exactlat as el
from .formring import (
    BinaryForm,
    GL2Elem,
    make_If_Jf,
    make_ring,
    normalize_leading,
    to_V,
    zeta_dual,
)

ROW = "row"
COLUMN = "column"


class DegenerateTensor(ValueError):
    pass


class InvariantViolation(AssertionError):
    pass


@dataclass(frozen=True, order=True)
class Tensor2nn:
    A1: tuple
    A2: tuple

    def __post_init__(self):
        a1 = el.as_int_matrix(self.A1)
        a2 = el.as_int_matrix(self.A2)
        n = len(a1)
        if n < 1 or el.shape(a1) != (n, n) or el.shape(a2) != (n, n):
            raise ValueError("A1 and A2 must both be n x n")
        object.__setattr__(self, "A1", a1)
        object.__setattr__(self, "A2", a2)

    @property
    def n(self):
        return len(self.A1)

    def det_form(self):
        try:
            return self._det_form
        except AttributeError:
            f = BinaryForm(el.det_binary_form(self.A1, self.A2))
            object.__setattr__(self, "_det_form", f)
            return f

    def is_symmetric(self):
        return self.A1 == el.transpose(self.A1) and self.A2 == el.transpose(self.A2)


def companion_tensor(f):
    """(I, -Comp(F)) for a monic form f; its determinant form is f."""
    if f[0] != 1:
        raise ValueError("companion tensor needs a monic form")
    n = f.n
    comp = [[0] * n for _ in range(n)]
    for i in range(1, n):
        comp[i][i - 1] = 1
    for i in range(n):
        comp[i][n - 1] = -f[n - i]
    return Tensor2nn(el.identity(n), el.mat_scale(-1, el.to_matrix(comp)))


@dataclass(frozen=True)
class RfModule:
    """Z^n with integer matrices Z_1..Z_(n-1) for the action of zeta_1..zeta_(n-1)."""

    ring: object
    side: str
    actions: tuple

    def matrix(self, k):
        if k == 0:
            return el.identity(self.ring.n)
        return self.actions[k - 1]

    def act(self, coeffs):
        """Matrix of the element sum coeffs[k] zeta_k."""
        n = self.ring.n
        acc = el.zeros(n, n)
        for k, c in enumerate(coeffs):
            if c:
                acc = el.mat_add(acc, el.mat_scale(c, self.matrix(k)))
        return acc

    def theta_matrix(self):
        """The theta-action over Q, Z_1 / f_0."""
        f0 = self.ring.form[0]
        return el.mat_scale(Fraction(1, f0), self.matrix(1))

    def check_axioms(self):
        """Z_i Z_j = sum_k c^k_ij Z_k (with Z_0 = Id) for all i, j."""
        n = self.ring.n
        sc = self.ring.struct_consts
        for i in range(n):
            for j in range(i, n):
                lhs = el.mat_mul(self.matrix(i), self.matrix(j))
                if lhs != el.mat_mul(self.matrix(j), self.matrix(i)):
                    return False
                if lhs != self.act(sc[i][j]):
                    return False
        return True


def regular_module(ring, side=COLUMN):
    """R_f acting on itself, on zeta-coordinates."""
    mats = tuple(ring.regular_matrix(tuple(int(i == k) for i in range(ring.n)))
                 for k in range(1, ring.n))
    if side == ROW:
        mats = tuple(el.transpose(m) for m in mats)
    return RfModule(ring, side, mats)


@dataclass(frozen=True)
class BalancedPair:
    M: RfModule
    N: RfModule
    pairing: tuple
    transport: GL2Elem

    @property
    def ring(self):
        return self.M.ring

    @property
    def n(self):
        return self.ring.n

    @cached_property
    def local_tensor(self):
        """(A1, A2) read off the pairing through I_f -> V, before undoing transport."""
        n = self.n
        a1 = [[None] * n for _ in range(n)]
        a2 = [[None] * n for _ in range(n)]
        for j in range(n):
            for k in range(n):
                v1, v2 = to_V(self.pairing[j][k])
                if v1.denominator != 1 or v2.denominator != 1:
                    raise InvariantViolation(
                        f"pairing entry ({j},{k}) does not land in I_f")
                a1[j][k], a2[j][k] = int(v1), int(v2)
        return Tensor2nn(el.to_matrix(a1), el.to_matrix(a2))

    @property
    def form(self):
        """The form f of the original tensor (undoing the transport)."""
        from .groups import gl2_act_form
        return gl2_act_form(self.transport.inverse(), self.ring.form)


def _theta_numerators(t):
    """(P_row, P_col, d) with theta acting as P_row / d on M and P_col / d on N."""
    d = el.det(t.A1)
    adj = el.adjugate(t.A1)
    col = el.mat_scale(-1, el.mat_mul(adj, t.A2))
    row = el.mat_scale(-1, el.mat_mul(t.A2, adj))
    return row, col, d


def _zeta_matrices(p, d, f, side):
    """[Z_1..Z_(n-1)] for theta = p / d, with Z_k = f_0 T^k + ... + f_(k-1) T.

    Uses Z_k = T (Z_(k-1) + f_(k-1) I); every division must be exact.
    """
    n = f.n
    out = []
    prev = el.zeros(n, n)
    for k in range(1, n):
        shifted = tuple(tuple(x + (f[k - 1] if i == j else 0) for j, x in enumerate(r))
                        for i, r in enumerate(prev))
        num = el.mat_mul(p, shifted) if side == COLUMN else el.mat_mul(shifted, p)
        z = []
        for r in num:
            zr = []
            for x in r:
                q, rem = divmod(x, d)
                if rem:
                    raise InvariantViolation(f"zeta_{k} action is not integral")
                zr.append(q)
            z.append(tuple(zr))
        prev = tuple(z)
        out.append(prev)
    return out


def zeta_action_matrix(t, k, side):
    """Integer matrix of zeta_k on N (side='column') or M (side='row')."""
    if el.det(t.A1) == 0:
        raise DegenerateTensor("leading coefficient vanishes; apply GL_2 transport")
    f = t.det_form()
    if not 1 <= k <= t.n - 1:
        raise ValueError("k out of range")
    row, col, d = _theta_numerators(t)
    if side == COLUMN:
        return _zeta_matrices(col, d, f, COLUMN)[k - 1]
    return _zeta_matrices(row, d, f, ROW)[k - 1]


def pairing_element(fld, values):
    """The x in Q[theta]/F with zeta-check_{n-1}(zeta_i x) = values[i], i = 0..n-1.

    Solved in closed form from zeta-check_{n-1}(zeta_i x)
    = theta-check_{n-1-i}(x) - f_i zeta-check_{n-1}(x).
    """
    f = fld.form
    n = f.n
    coords = [0] * n
    coords[n - 1] = f[0] * values[0]
    for i in range(1, n):
        coords[n - 1 - i] = values[i] + f[i] * values[0]
    return fld.element(coords)


def _psi_local(t):
    """psi for a tensor with det A1 != 0; returns (M, N, pairing)."""
    f = t.det_form()
    ring = make_ring(f)
    fld = ring.field
    n = t.n
    row, col, d = _theta_numerators(t)
    zm = _zeta_matrices(row, d, f, ROW)
    zn = _zeta_matrices(col, d, f, COLUMN)
    M = RfModule(ring, ROW, tuple(zm))
    N = RfModule(ring, COLUMN, tuple(zn))
    # m_j o n_k is pinned down by zeta-check_{n-1}(zeta_i (m_j o n_k)) = (m_j Z_i) A1 n_k
    values = [t.A1] + [el.mat_mul(z, t.A1) for z in zm]
    pairing = tuple(
        tuple(pairing_element(fld, [values[i][j][k] for i in range(n)]) for k in range(n))
        for j in range(n)
    )
    return M, N, pairing


def psi(t, check=True):
    """The based balanced pair attached to a tensor with nonzero determinant form."""
    f = t.det_form()
    if f.is_zero():
        raise DegenerateTensor("degenerate tensor: zero determinant form")
    g, _ = normalize_leading(f)
    local = t
    if not g.is_identity():
        from .groups import gl2_act_tensor
        local = gl2_act_tensor(g, t)
    M, N, pairing = _psi_local(local)
    pair = BalancedPair(M, N, pairing, g)
    if check:
        check_pair(pair, expected=local)
    return pair


def check_pair(p, expected=None):
    """Verify every BalancedPair invariant; raise InvariantViolation on failure."""
    ring = p.ring
    n = ring.n
    if not (p.M.check_axioms() and p.N.check_axioms()):
        raise InvariantViolation("module axioms fail")
    local = p.local_tensor
    if expected is not None and local != expected:
        raise InvariantViolation("pairing does not reproduce the tensor")
    if local.det_form() != ring.form:
        raise InvariantViolation("Det(A) differs from the ring's form")
    If, _ = make_If_Jf(ring.form)
    for j in range(n):
        for k in range(n):
            if p.pairing[j][k] not in If:
                raise InvariantViolation(f"pairing entry ({j},{k}) not in I_f")
    if not pairing_is_balanced_bilinear(p):
        raise InvariantViolation("pairing is not R_f-bilinear")
    return True


def pairing_is_balanced_bilinear(p):
    """zeta-check_{n-1}((zeta_k m) o n) = zeta-check_{n-1}(m o (zeta_k n)) on bases.

    Values are zeta-check_{n-1}(m_j o n_k) = A1[j][k] extended bilinearly
    (Prop. Jstruc), so the test is (Z^M_k A1) = (A1 Z^N_k).
    """
    a1 = p.local_tensor.A1
    for k in range(1, p.n):
        if el.mat_mul(p.M.matrix(k), a1) != el.mat_mul(a1, p.N.matrix(k)):
            return False
    return True


def phi(p):
    """The tensor of a based balanced pair."""
    local = p.local_tensor
    if p.transport.is_identity():
        return local
    from .groups import gl2_act_tensor
    return gl2_act_tensor(p.transport.inverse(), local)


def change_basis(p, g1, g2):
    """Re-base M by g1 (m'_j = sum g1[j][a] m_a) and N by g2 likewise."""
    g1inv = el.as_int_matrix(el.inverse(g1))
    g2t = el.transpose(g2)
    g2invt = el.as_int_matrix(el.inverse(g2t))
    M = RfModule(p.ring, ROW, tuple(el.mat_mul(el.mat_mul(g1, z), g1inv) for z in p.M.actions))
    N = RfModule(p.ring, COLUMN, tuple(el.mat_mul(el.mat_mul(g2invt, z), g2t) for z in p.N.actions))
    n = p.n
    fld = p.ring.field
    pairing = []
    for j in range(n):
        row = []
        for k in range(n):
            acc = fld.element([0] * n)
            for a in range(n):
                if g1[j][a]:
                    for b in range(n):
                        if g2[k][b]:
                            acc = acc + p.pairing[a][b] * (g1[j][a] * g2[k][b])
            row.append(acc)
        pairing.append(tuple(row))
    return BalancedPair(M, N, tuple(pairing), p.transport)


def same_pair(p, q):
    return (p.M.actions == q.M.actions and p.N.actions == q.N.actions
            and p.pairing == q.pairing and p.transport == q.transport
            and p.ring.form == q.ring.form)


def symmetric_ops(t):
    """(is_symmetric, self-balanced pair or None)."""
    if not t.is_symmetric():
        return False, None
    p = psi(t)
    for zm, zn in zip(p.M.actions, p.N.actions):
        if zm != el.transpose(zn):
            raise InvariantViolation("symmetric tensor gave non-mirrored actions")
    return True, p
