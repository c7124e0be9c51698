"""Balancing criteria for pairs of fractional ideals of R_f.

A fractional ideal is a :class:`formring.Lattice` stable under every
zeta_k.  For a pair (M, N) with MN inside I_f there are two tests that
must agree: the norm test |M||N| = |I_f| and the index test
[(J_f : N) : M] = [J_f : I_f].  Hom_{R_f}(N, X) is computed as the ideal
quotient (X : N), which is valid for fractional ideals.
"""

import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import exactlat as el
from .formring import Lattice, ThetaVec, form_stats, make_If_Jf, make_ring, zeta_dual
from .tensorlink import COLUMN, ROW


class NotCharacteristic(ValueError):
    pass


class DegenerateForm(ValueError):
    pass


@dataclass(frozen=True)
class FractionalIdeal:
    lattice: Lattice

    def __post_init__(self):
        fld = self.lattice.field
        ring = make_ring(fld.form)
        for z in ring.zeta_coords[1:]:
            for e in self.lattice.elements():
                if z * e not in self.lattice:
                    raise ValueError("lattice is not closed under R_f")

    @property
    def field(self):
        return self.lattice.field

    @property
    def basis(self):
        return self.lattice.basis

    def elements(self):
        return self.lattice.elements()

    def norm(self):
        """|L| = [R_f : L]."""
        return el.lattice_index(self.basis, make_ring(self.field.form).lattice.basis)

    def scale(self, x):
        return FractionalIdeal(self.lattice.scale(x))

    def __contains__(self, x):
        return x in self.lattice

    def contains(self, other):
        return self.lattice.contains(other.lattice)


def unit_ideal(ring):
    return FractionalIdeal(ring.lattice)


def principal_ideal(ring, x):
    return FractionalIdeal(Lattice.spanned_by(ring.field, [x * z for z in ring.zeta_coords]))


def ideal_If(f):
    return FractionalIdeal(make_If_Jf(f)[0])


def ideal_Jf(f):
    return FractionalIdeal(make_If_Jf(f)[1])


def _check_nondegenerate(f):
    disc, _ = form_stats(f)
    if disc == 0:
        raise DegenerateForm("form has zero discriminant")


# --- characteristic modules -------------------------------------------------

def is_characteristic(M, trials=4, rng=None):
    """Compare characteristic polynomials of the action with the regular representation.

    Checked on zeta_1..zeta_(n-1) and on ``trials`` random combinations
    with coefficients in [-3, 3].
    """
    ring = M.ring
    n = ring.n
    rng = rng or random.Random(0)
    elements = [tuple(int(i == k) for i in range(n)) for k in range(1, n)]
    for _ in range(trials):
        elements.append(tuple(rng.randint(-3, 3) for _ in range(n)))
    for x in elements:
        if el.charpoly(M.act(x)) != el.charpoly(ring.regular_matrix(x)):
            return False
    return True


def _cyclic_vector(T, rng):
    n = len(T)
    candidates = [tuple(int(i == j) for i in range(n)) for j in range(n)]
    for _ in range(200):
        candidates.append(tuple(rng.randint(-3, 3) for _ in range(n)))
    for v in candidates:
        krylov = [tuple(Fraction(x) for x in v)]
        for _ in range(n - 1):
            krylov.append(el.mat_vec(T, krylov[-1]))
        K = el.transpose(krylov)
        if el.det(K) != 0:
            return K
    raise RuntimeError("no cyclic vector found")


def realize_embedding(M, rng=None):
    """theta-coordinates of the images of the standard basis of M in Q[theta]/F.

    Picks v with v, Tv, ..., T^(n-1)v independent (T the theta-action) and
    sends v to 1, so p(T) v goes to p(theta).
    """
    ring = M.ring
    f = ring.form
    _check_nondegenerate(f)
    if not is_characteristic(M, rng=random.Random(1)):
        raise NotCharacteristic("module is not characteristic")
    T = M.theta_matrix()
    if M.side == ROW:
        T = el.transpose(T)
    K = _cyclic_vector(T, rng or random.Random(0))
    images = el.inverse(K)  # column i: theta-coords of the image of e_i
    return [ring.field.element(col) for col in el.transpose(images)]


def realize_fractional_ideal(M, rng=None):
    imgs = realize_embedding(M, rng)
    return FractionalIdeal(Lattice.spanned_by(M.ring.field, imgs))


# --- ideal arithmetic ------------------------------------------------------

def _same_context(*ideals):
    flds = {i.field for i in ideals}
    if len(flds) != 1:
        raise ValueError("context mismatch")


def ideal_product(L1, L2):
    _same_context(L1, L2)
    prods = [a * b for a in L1.elements() for b in L2.elements()]
    return FractionalIdeal(Lattice.spanned_by(L1.field, prods))


def ideal_quotient(I, N):
    """(I : N) = {x : x N in I}.

    x N in I  <=>  H_I^-1 (b x) is integral for each basis element b of N,
    i.e. x pairs integrally with every row of the stacked matrices
    H_I^-1 mult(b); the solution set is the dual of the row lattice.
    """
    _same_context(I, N)
    fld = I.field
    hinv = I.lattice.inverse_basis
    rows = []
    for b in N.elements():
        rows.extend(el.mat_mul(hinv, fld.mult_matrix(b)))
    try:
        row_lattice = el.hnf_span(el.transpose(rows))
    except el.DegenerateLattice:
        raise el.DegenerateLattice("degenerate lattice: quotient is not a lattice") from None
    return FractionalIdeal(Lattice(fld, el.dual_basis(row_lattice)))


def is_invertible(N):
    ring = make_ring(N.field.form)
    R = unit_ideal(ring)
    return ideal_product(N, ideal_quotient(R, N)).lattice == R.lattice


# --- balancing verdicts -------------------------------------------------------

@dataclass
class Verdict:
    contained: bool
    norm_ok: bool
    index_ok: bool
    norms: dict = field(default_factory=dict)
    flags: list = field(default_factory=list)

    @property
    def criteria_agree(self):
        return (self.contained and self.norm_ok) == (self.contained and self.index_ok)

    @property
    def balanced(self):
        return self.contained and self.norm_ok and self.index_ok

    def to_json(self):
        return {
            "contained": self.contained,
            "norm_ok": self.norm_ok,
            "index_ok": self.index_ok,
            "criteria_agree": self.criteria_agree,
            "norms": {k: _frac_str(v) for k, v in self.norms.items()},
            **({"flags": list(self.flags)} if self.flags else {}),
        }


def _frac_str(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def check_balanced(M, N, I=None, J=None):
    """Containment, norm and index criteria for the pair (M, N)."""
    _same_context(M, N)
    f = M.field.form
    if I is None or J is None:
        I, J = ideal_If(f), make_If_Jf(f)[1]
    J = J.lattice if isinstance(J, FractionalIdeal) else J
    contained = I.contains(ideal_product(M, N))
    disc, _ = form_stats(f)
    nM, nN, nI = M.norm(), N.norm(), I.norm()
    norm_ok = disc != 0 and nM * nN == nI
    hom_NJ = ideal_quotient(FractionalIdeal(J), N)
    index_ok = (el.lattice_index(M.basis, hom_NJ.basis)
                == el.lattice_index(I.basis, J.basis))
    flags = [] if disc else ["degenerate form: norm criterion not applicable"]
    return Verdict(contained, norm_ok, index_ok, {"M": nM, "N": nN, "If": nI}, flags)


def balancing_partner(N):
    """(I_f : N) together with a flag list (empty when existence is guaranteed)."""
    f = N.field.form
    disc, primitive = form_stats(f)
    flags = []
    if not (disc != 0 and primitive) and not is_invertible(N):
        flags.append("partner existence not guaranteed")
    return ideal_quotient(ideal_If(f), N), flags


def pairing_determinant(M, N):
    """det[zeta-check_{n-1}(m_i n_j)] over the stored bases."""
    n = M.field.n
    return el.det(el.to_matrix(
        [[zeta_dual(m * b, n - 1) for b in N.elements()] for m in M.elements()]))


@dataclass
class SelfVerdict:
    contained: bool
    norm_ok: bool
    quotient_ok: object  # bool, or None when f is not primitive

    @property
    def self_balanced(self):
        return self.contained and self.norm_ok and self.quotient_ok is not False


def self_balance_check(M, k):
    """M^2 (k) in I_f, |M|^2 |(k)| = |I_f|, and (primitive f) M = (I_f k^-1 : M).

    k is the element with M^2 k in I_f; the quotient form of the condition is
    stated with its inverse, which scales by lambda^2 when M scales by lambda.
    """
    f = M.field.form
    disc, primitive = form_stats(f)
    if disc == 0:
        raise DegenerateForm("form has zero discriminant")
    if el.det(M.field.mult_matrix(k)) == 0:
        raise ZeroDivisionError("k is a zero divisor")
    ring = make_ring(f)
    I = ideal_If(f)
    kI = principal_ideal(ring, k)
    sq = ideal_product(ideal_product(M, M), kI)
    contained = I.contains(sq)
    norm_ok = M.norm() ** 2 * kI.norm() == I.norm()
    quotient_ok = None
    if primitive:
        quotient_ok = ideal_quotient(I.scale(k.inverse()), M).lattice == M.lattice
    return SelfVerdict(contained, norm_ok, quotient_ok)


# --- psi outputs as ideals ----------------------------------------------------

def pair_as_ideals(p, rng=None):
    """Realize psi(A) = (M, N) as fractional ideals with the pairing equal to multiplication.

    Returns (M_ideal, N_ideal, kappa) where N_ideal already absorbs kappa,
    the element with m o n = kappa * iota_M(m) * iota_N(n).
    """
    fld = p.ring.field
    n = fld.n
    im = realize_embedding(p.M, rng)
    inn = realize_embedding(p.N, rng)
    kappa = None
    for j in range(n):
        for k in range(n):
            prod = im[j] * inn[k]
            if el.det(fld.mult_matrix(prod)) != 0:
                kappa = p.pairing[j][k] * prod.inverse()
                break
        if kappa is not None:
            break
    if kappa is None:
        raise RuntimeError("no invertible product among basis pairs")
    for j in range(n):
        for k in range(n):
            if kappa * im[j] * inn[k] != p.pairing[j][k]:
                raise AssertionError("pairing is not multiplication by a single element")
    Mi = FractionalIdeal(Lattice.spanned_by(fld, im))
    Ni = FractionalIdeal(Lattice.spanned_by(fld, [kappa * x for x in inn]))
    return Mi, Ni, kappa


# --- random sampling ---------------------------------------------------------

def random_ideal(ring, rng, gens=2, coeff=4, denom=3):
    """Random fractional ideal: R_f-span of a few random elements, divided by a small integer."""
    n = ring.n
    fld = ring.field
    for _ in range(100):
        elems = [ring.from_zeta([rng.randint(-coeff, coeff) for _ in range(n)])
                 for _ in range(gens)]
        spanning = [e * z for e in elems for z in ring.zeta_coords]
        try:
            L = Lattice.spanned_by(fld, spanning)
        except el.DegenerateLattice:
            continue
        L = saturate(L, ring)
        d = rng.randint(1, denom)
        return FractionalIdeal(L.scale(Fraction(1, d)))
    raise RuntimeError("could not sample a full-rank ideal")


def saturate(L, ring, max_rounds=20):
    """Smallest R_f-stable lattice containing L."""
    for _ in range(max_rounds):
        new = L.elements() + [z * e for z in ring.zeta_coords[1:] for e in L.elements()]
        L2 = Lattice.spanned_by(L.field, new)
        if L2 == L:
            return L
        L = L2
    raise RuntimeError("saturation did not stabilize")
