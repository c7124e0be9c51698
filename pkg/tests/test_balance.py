import random
from fractions import Fraction

import pytest

from binform import exactlat as el
from binform.balance import (
    DegenerateForm,
    FractionalIdeal,
    NotCharacteristic,
    balancing_partner,
    check_balanced,
    ideal_If,
    ideal_Jf,
    ideal_product,
    ideal_quotient,
    is_characteristic,
    is_invertible,
    pair_as_ideals,
    pairing_determinant,
    principal_ideal,
    random_ideal,
    realize_fractional_ideal,
    self_balance_check,
    unit_ideal,
)
from binform.formring import BinaryForm, Lattice, make_ring
from binform.tensorlink import COLUMN, ROW, RfModule, Tensor2nn, companion_tensor, psi, regular_module

FORMS = [(2, 3, 5), (3, 1, 4, 1), (2, 1, -3, 7), (3, 1, 4, 1, 5)]


def rand_element(ring, rng, b=4):
    while True:
        x = ring.from_zeta([rng.randint(-b, b) for _ in range(ring.n)])
        if x.norm() != 0:
            return x


def rand_tensor(rng, n, b=4):
    while True:
        a1 = tuple(tuple(rng.randint(-b, b) for _ in range(n)) for _ in range(n))
        a2 = tuple(tuple(rng.randint(-b, b) for _ in range(n)) for _ in range(n))
        t = Tensor2nn(a1, a2)
        f = t.det_form()
        if el.det(a1) and not f.is_zero():
            from binform.formring import form_stats
            if form_stats(f)[0]:
                return t


# --- characteristic modules ----------------------------------------------------

def test_regular_is_characteristic():
    for coeffs in FORMS:
        ring = make_ring(BinaryForm(coeffs))
        assert is_characteristic(regular_module(ring, COLUMN))
        assert is_characteristic(regular_module(ring, ROW))


def test_psi_outputs_characteristic():
    rng = random.Random(1)
    for n in (2, 3, 4):
        for _ in range(8):
            p = psi(rand_tensor(rng, n))
            assert is_characteristic(p.M) and is_characteristic(p.N)


def test_zero_action_not_characteristic():
    ring = make_ring(BinaryForm((2, 3, 5)))
    zero = RfModule(ring, COLUMN, (el.zeros(2, 2),))
    assert not is_characteristic(zero)
    with pytest.raises(NotCharacteristic):
        realize_fractional_ideal(zero)


# --- realization ------------------------------------------------------------------

def test_realize_regular_gives_Rf():
    for coeffs in FORMS:
        ring = make_ring(BinaryForm(coeffs))
        assert realize_fractional_ideal(regular_module(ring, COLUMN)).lattice == ring.lattice


def test_realize_companion():
    f = BinaryForm((1, 2, 3, 4))
    p = psi(companion_tensor(f))
    assert realize_fractional_ideal(p.N).lattice == make_ring(f).lattice


def test_realize_gaussian():
    p = psi(Tensor2nn(((1, 0), (0, 1)), ((0, -1), (1, 0))))
    assert realize_fractional_ideal(p.N).norm() == 1


def test_realize_degenerate_form_refused():
    ring = make_ring(BinaryForm((1, 2, 1)))
    with pytest.raises(DegenerateForm):
        realize_fractional_ideal(regular_module(ring, COLUMN))


def test_fractional_ideal_requires_closure():
    ring = make_ring(BinaryForm((2, 3, 5)))
    fld = ring.field
    # Z + 3 zeta_1 Z: zeta_1 * 1 = zeta_1 is missing
    lat = Lattice.spanned_by(fld, [fld.one, ring.zeta_coords[1] * 3])
    with pytest.raises(ValueError):
        FractionalIdeal(lat)


# --- products and quotients --------------------------------------------------------

def test_product_examples():
    rng = random.Random(2)
    for coeffs in FORMS:
        ring = make_ring(BinaryForm(coeffs))
        R = unit_ideal(ring)
        L = random_ideal(ring, rng)
        assert ideal_product(R, L).lattice == L.lattice
    ring = make_ring(BinaryForm((1, 0, 2)))
    two, three = principal_ideal(ring, ring.field.one * 2), principal_ideal(ring, ring.field.one * 3)
    assert ideal_product(two, three).lattice == principal_ideal(ring, ring.field.one * 6).lattice


def test_principal_norms_multiply():
    rng = random.Random(3)
    for coeffs in FORMS:
        ring = make_ring(BinaryForm(coeffs))
        for _ in range(4):
            a, b = rand_element(ring, rng), rand_element(ring, rng)
            A, B = principal_ideal(ring, a), principal_ideal(ring, b)
            AB = ideal_product(A, B)
            assert AB.lattice == principal_ideal(ring, a * b).lattice
            assert AB.norm() == A.norm() * B.norm()
            assert A.norm() == abs(a.norm())


def test_quotient_examples():
    rng = random.Random(4)
    for coeffs in FORMS:
        f = BinaryForm(coeffs)
        ring = make_ring(f)
        If = ideal_If(f)
        assert ideal_quotient(If, unit_ideal(ring)).lattice == If.lattice
        mult = ideal_quotient(If, If)
        assert mult.contains(unit_ideal(ring))
        assert mult.lattice == ring.lattice  # primitive forms: I_f invertible
        a = rand_element(ring, rng)
        A = principal_ideal(ring, a)
        assert ideal_quotient(ideal_product(A, If), A).lattice == If.lattice


def test_quotient_membership():
    """Oracle: x is in (I:N) exactly when x n is in I for every basis element n of N."""
    rng = random.Random(5)
    f = BinaryForm((3, 1, 4, 1))
    ring = make_ring(f)
    If = ideal_If(f)
    for _ in range(5):
        N = random_ideal(ring, rng)
        Q = ideal_quotient(If, N)
        assert If.contains(ideal_product(Q, N))
        qb = Q.elements()
        hits = 0
        for _ in range(40):
            x = ring.field.element([0] * f.n)
            for b in qb:
                x = x + b * Fraction(rng.randint(-4, 4), rng.choice((1, 2, 3)))
            inside = all(x * e in If for e in N.elements())
            hits += inside
            assert inside == (x in Q)
        assert hits > 0


def test_non_primitive_If_not_invertible():
    f = BinaryForm((2, 4, 6))
    assert is_invertible(unit_ideal(make_ring(f)))
    If = ideal_If(f)
    assert ideal_quotient(If, If).lattice != make_ring(f).lattice
    assert not is_invertible(If)


# --- balancing ----------------------------------------------------------------------

def test_unit_partner():
    for coeffs in FORMS:
        f = BinaryForm(coeffs)
        ring = make_ring(f)
        R = unit_ideal(ring)
        M, flags = balancing_partner(R)
        assert M.lattice == ideal_If(f).lattice and flags == []
        v = check_balanced(ideal_If(f), R)
        assert v.balanced and v.criteria_agree


def test_partner_of_principal():
    rng = random.Random(6)
    for coeffs in FORMS:
        f = BinaryForm(coeffs)
        ring = make_ring(f)
        a = rand_element(ring, rng)
        M, _ = balancing_partner(principal_ideal(ring, a))
        assert M.lattice == ideal_If(f).lattice.scale(a.inverse())


@pytest.mark.parametrize("coeffs", FORMS)
def test_partner_balanced_scaled_broken_and_unique(coeffs):
    rng = random.Random(len(coeffs))
    f = BinaryForm(coeffs)
    ring = make_ring(f)
    n = f.n
    for _ in range(6):
        N = random_ideal(ring, rng)
        M, flags = balancing_partner(N)
        v = check_balanced(M, N)
        assert v.balanced and v.criteria_agree and flags == []
        assert v.norms["M"] * v.norms["N"] == v.norms["If"]
        w = check_balanced(M.scale(2), N)
        assert not w.balanced and w.criteria_agree
        assert w.norms["M"] == v.norms["M"] * 2 ** n
        # double partner returns N (I_f invertible for primitive f)
        assert balancing_partner(M)[0].lattice == N.lattice
        # any other ideal M' fails against N
        for s in (Fraction(1, 2), 3):
            assert not check_balanced(M.scale(s), N).balanced
        sub = FractionalIdeal(Lattice.spanned_by(
            ring.field, [e * z for e in M.elements() for z in (ring.zeta_coords[1] * 1,)]
            + [e * 2 for e in M.elements()]))
        if sub.lattice != M.lattice:
            assert not check_balanced(sub, N).balanced


def test_scaling_equivalence():
    rng = random.Random(8)
    f = BinaryForm((2, 1, -3, 7))
    ring = make_ring(f)
    for _ in range(4):
        N = random_ideal(ring, rng)
        M, _ = balancing_partner(N)
        lam = rand_element(ring, rng)
        a = check_balanced(M, N)
        b = check_balanced(M.scale(lam), N.scale(lam.inverse()))
        assert (a.contained, a.norm_ok, a.index_ok) == (b.contained, b.norm_ok, b.index_ok)


def test_norm_lemma():
    rng = random.Random(9)
    for coeffs in FORMS:
        f = BinaryForm(coeffs)
        ring = make_ring(f)
        Jf = ideal_Jf(f)
        for _ in range(4):
            M, N = random_ideal(ring, rng), random_ideal(ring, rng)
            assert abs(pairing_determinant(M, N)) == M.norm() * N.norm() / Jf.norm()


def test_partner_flag_when_not_guaranteed():
    f = BinaryForm((2, 4, 6))
    ring = make_ring(f)
    rng = random.Random(10)
    flagged = 0
    for _ in range(30):
        N = random_ideal(ring, rng)
        M, flags = balancing_partner(N)
        if not is_invertible(N):
            assert flags == ["partner existence not guaranteed"]
            flagged += 1
        else:
            assert flags == []
    assert flagged > 0
    M, flags = balancing_partner(ideal_If(f))
    assert flags == ["partner existence not guaranteed"]


def test_degenerate_form_norm_criterion():
    f = BinaryForm((1, 2, 1))
    ring = make_ring(f)
    v = check_balanced(ideal_If(f), unit_ideal(ring))
    assert not v.norm_ok and v.flags


# --- psi outputs and self-balance ------------------------------------------------------

def test_psi_pair_realizes_balanced_ideals():
    rng = random.Random(11)
    for n in (2, 3, 4):
        for _ in range(5):
            p = psi(rand_tensor(rng, n))
            Mi, Ni, kappa = pair_as_ideals(p)
            v = check_balanced(Mi, Ni)
            assert v.balanced and v.criteria_agree


def test_self_balance_trivial():
    f = BinaryForm((1, 0, 1))
    ring = make_ring(f)
    v = self_balance_check(unit_ideal(ring), ring.field.one)
    assert v.self_balanced and v.quotient_ok is True


def test_self_balance_symmetric_psi():
    p = psi(Tensor2nn(((1, 0), (0, 1)), ((0, 1), (1, 0))))
    Mi, Ni, kappa = pair_as_ideals(p)
    v = self_balance_check(Mi, kappa)
    assert v.contained and v.norm_ok and v.quotient_ok


def test_self_balance_scaling():
    rng = random.Random(12)
    t = Tensor2nn(((1, 2, 0), (2, 1, 1), (0, 1, 3)), ((0, 1, 1), (1, 2, 0), (1, 0, 1)))
    p = psi(t)
    Mi, _, kappa = pair_as_ideals(p)
    base = self_balance_check(Mi, kappa)
    assert base.self_balanced
    for _ in range(3):
        lam = rand_element(p.ring, rng)
        scaled = self_balance_check(Mi.scale(lam), kappa * lam.inverse() * lam.inverse())
        assert (scaled.contained, scaled.norm_ok, scaled.quotient_ok) == \
            (base.contained, base.norm_ok, base.quotient_ok)


def test_self_balance_errors():
    f = BinaryForm((1, 0, -1))
    ring = make_ring(f)
    with pytest.raises(ZeroDivisionError):
        self_balance_check(unit_ideal(ring), ring.field.element((1, 1)))
    with pytest.raises(DegenerateForm):
        r2 = make_ring(BinaryForm((1, 2, 1)))
        self_balance_check(unit_ideal(r2), r2.field.one)


def test_verdict_json():
    f = BinaryForm((2, 3, 5))
    v = check_balanced(ideal_If(f), unit_ideal(make_ring(f)))
    js = v.to_json()
    assert js == {"contained": True, "norm_ok": True, "index_ok": True, "criteria_agree": True,
                  "norms": {"M": "2", "N": "1", "If": "2"}}
