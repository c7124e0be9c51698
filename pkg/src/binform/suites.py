"""Seeded property suites used by ``binform verify`` and the acceptance tests.

Every suite is a function ``trial(cfg, seed) -> None | dict``: it draws
its inputs from ``random.Random(seed)`` and returns None on success or a
JSON-ready failure artifact holding the violating input.  Trial seeds are
derived from the master seed, so results do not depend on the number of
workers.
"""

import random
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import exactlat as el
from . import univcheck
from .balance import (
    balancing_partner,
    check_balanced,
    random_ideal,
)
from .formring import (
    BinaryForm,
    form_stats,
    getcoeff_identity,
    make_If_Jf,
    make_ring,
    zeta_dual,
)
from .groups import (
    g_act_tensor,
    gl2_act_form,
    gl2_act_tensor,
    gln_act_symmetric,
    random_gl2,
    random_gpair,
    random_unimodular,
)
from .serial import form_to_json, plain, tensor_to_json
from .tensorlink import (
    InvariantViolation,
    Tensor2nn,
    change_basis,
    phi,
    psi,
    same_pair,
    symmetric_ops,
)

SUITES = ("roundtrip", "ring", "balance", "equivariance", "universal", "symmetric")

DEFAULT_BOUND = {"roundtrip": 5, "ring": 9, "balance": 4, "equivariance": 5,
                 "universal": 9, "symmetric": 5}


# --- random inputs ------------------------------------------------------------

def random_matrix(n, rng, bound):
    return tuple(tuple(rng.randint(-bound, bound) for _ in range(n)) for _ in range(n))


def random_tensor(n, rng, bound, nondegenerate=True):
    while True:
        t = Tensor2nn(random_matrix(n, rng, bound), random_matrix(n, rng, bound))
        if not nondegenerate or not t.det_form().is_zero():
            return t


def random_symmetric_tensor(n, rng, bound):
    def sym():
        m = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                m[i][j] = m[j][i] = rng.randint(-bound, bound)
        return el.to_matrix(m)

    while True:
        t = Tensor2nn(sym(), sym())
        if not t.det_form().is_zero():
            return t


def random_form(n, rng, bound, lead_nonzero=True):
    while True:
        f = BinaryForm([rng.randint(-bound, bound) for _ in range(n + 1)])
        if not f.is_zero() and (f[0] != 0 or not lead_nonzero):
            return f


def random_good_form(n, rng, bound):
    """Primitive, nondegenerate, f_0 != 0."""
    while True:
        f = random_form(n, rng, bound)
        disc, primitive = form_stats(f)
        if disc and primitive:
            return f


# --- individual trials ----------------------------------------------------------

def _fail(kind, **data):
    return {"violation": kind, **plain(data)}


def trial_roundtrip(cfg, seed):
    rng = random.Random(seed)
    t = random_tensor(cfg["n"], rng, cfg["bound"])
    inp = {"tensor": tensor_to_json(t)}
    try:
        p = psi(t)
    except InvariantViolation as exc:
        return _fail("psi invariant", error=str(exc), **inp)
    if phi(p) != t:
        return _fail("phi(psi(A)) != A", **inp)
    f = t.det_form()
    if el.det(t.A1) != f[0] or el.det(t.A2) != f[t.n]:
        return _fail("det A1 / det A2 vs f", **inp)
    if f[0] != 0:
        cp = el.charpoly(el.mat_scale(Fraction(1, f[0]), p.N.matrix(1)))
        if tuple(f[0] * c for c in cp) != f.dehomogenized():
            return _fail("f0 charpoly(theta) != F(t,1)", **inp)
    h = random_gpair(t.n, rng)
    q = change_basis(p, h.g1, h.g2)
    if not same_pair(psi(g_act_tensor(h, t)), q):
        return _fail("psi not covariant under G", g1=h.g1, g2=h.g2, **inp)
    return None


def trial_ring(cfg, seed):
    rng = random.Random(seed)
    n = cfg["n"]
    f = random_form(n, rng, cfg["bound"])
    inp = {"form": form_to_json(f)}
    try:
        ring = make_ring(f)
    except ArithmeticError as exc:
        return _fail("non-integral structure constant", error=str(exc), **inp)
    z = ring.zeta_coords
    for i in range(n):
        for j in range(n):
            if z[i] * z[j] != z[j] * z[i]:
                return _fail("not commutative", **inp)
            if ring.from_zeta(ring.struct_consts[i][j]) != z[i] * z[j]:
                return _fail("structure constant mismatch", i=i, j=j, **inp)
    for _ in range(3):
        a, b, c = (tuple(rng.randint(-3, 3) for _ in range(n)) for _ in range(3))
        if ring.mult(ring.mult(a, b), c) != ring.mult(a, ring.mult(b, c)):
            return _fail("not associative", a=a, b=b, c=c, **inp)
    If, Jf = make_If_Jf(f)
    if el.lattice_index(If.basis, Jf.basis) != abs(f[0]):
        return _fail("[J_f:I_f] != |f0|", **inp)
    r = ring.field.element([Fraction(rng.randint(-20, 20), rng.randint(1, 6)) for _ in range(n)])
    for k in range(1, n):
        if not getcoeff_identity(f, r, k):
            return _fail("getcoeff identity", r=r.coords, k=k, **inp)
    if zeta_dual(ring.field.theta * r, n - 1) != zeta_dual(r, n - 2):
        return _fail("theta shift of the dual functional", r=r.coords, **inp)
    return None


def _balance_form(cfg, rng):
    if cfg.get("form"):
        return BinaryForm(cfg["form"])
    return random_good_form(cfg["n"], rng, 5)


def trial_balance(cfg, seed):
    rng = random.Random(seed)
    f = _balance_form(cfg, rng)
    ring = make_ring(f)
    N = random_ideal(ring, rng, coeff=cfg["bound"])
    inp = {"form": form_to_json(f), "N": [plain(c) for c in el.transpose(N.basis)]}
    M, flags = balancing_partner(N)
    v = check_balanced(M, N)
    disc, primitive = form_stats(f)
    if not v.criteria_agree:
        return _fail("criteria disagree on the partner", **inp)
    if disc and primitive and not v.balanced:
        return _fail("partner not balanced", verdict=v.to_json(), **inp)
    broken = check_balanced(M.scale(2), N)
    if not broken.criteria_agree or broken.balanced:
        return _fail("scaled partner", verdict=broken.to_json(), **inp)
    return None


def trial_equivariance(cfg, seed):
    rng = random.Random(seed)
    n = cfg["n"]
    t = random_tensor(n, rng, cfg["bound"], nondegenerate=False)
    g, h = random_gl2(rng), random_gl2(rng)
    inp = {"tensor": tensor_to_json(t), "g": [g.a, g.b, g.c, g.d], "h": [h.a, h.b, h.c, h.d]}
    gt = gl2_act_tensor(g, t, check=False)
    if gt.det_form() != gl2_act_form(g, t.det_form()):
        return _fail("Det(gA) != g Det(A)", **inp)
    if gl2_act_tensor(g, gl2_act_tensor(h, t, False), False) != gl2_act_tensor(g @ h, t, False):
        return _fail("GL2 action law on tensors", **inp)
    f = t.det_form()
    if not f.is_zero() and gl2_act_form(g, gl2_act_form(h, f)) != gl2_act_form(g @ h, f):
        return _fail("GL2 action law on forms", **inp)
    p = random_gpair(n, rng)
    if g_act_tensor(p, t).det_form() != f:
        return _fail("Det not G-invariant", g1=p.g1, g2=p.g2, **inp)
    return None


def trial_universal(cfg, seed):
    rng = random.Random(seed)
    n = cfg["n"]
    s = univcheck.random_specialization(n, rng, cfg["bound"])
    while el.det(s.C1) == 0:
        s = univcheck.random_specialization(n, rng, cfg["bound"])
    inp = {"u": s.u, "x": s.x, "y": s.y}
    if not univcheck.check_nodenom(s):
        return _fail("nodenom", **inp)
    for col in range(n):
        if not univcheck.check_correspondence_forward(s, col):
            return _fail("forward correspondence", col=col, **inp)
    for k in range(n):
        for ell in range(n):
            if not univcheck.check_correspondence_backward(s, k, ell):
                return _fail("backward correspondence", k=k, ell=ell, **inp)
    return None


def trial_symmetric(cfg, seed):
    rng = random.Random(seed)
    n = cfg["n"]
    t = random_symmetric_tensor(n, rng, cfg["bound"])
    inp = {"tensor": tensor_to_json(t)}
    try:
        ok, p = symmetric_ops(t)
    except InvariantViolation as exc:
        return _fail("symmetric mirror", error=str(exc), **inp)
    if not ok:
        return _fail("symmetric tensor not recognized", **inp)
    back = phi(p)
    if back != t or not back.is_symmetric():
        return _fail("phi of the self pair", **inp)
    g = random_unimodular(n, rng)
    if gln_act_symmetric(g, t).det_form() != t.det_form():
        return _fail("GL_n action changed Det", g=g, **inp)
    return None


TRIALS = {
    "roundtrip": trial_roundtrip,
    "ring": trial_ring,
    "balance": trial_balance,
    "equivariance": trial_equivariance,
    "universal": trial_universal,
    "symmetric": trial_symmetric,
}


def _run_one(args):
    name, cfg, seed = args
    return TRIALS[name](cfg, seed)


def trial_seeds(seed, count):
    rng = random.Random(seed)
    return [rng.getrandbits(64) for _ in range(count)]


def run_suite(name, cfg, count, seed, workers=1, max_failures=10):
    """Run ``count`` trials; returns a JSON-ready report."""
    seeds = trial_seeds(seed, count)
    jobs = [(name, cfg, s) for s in seeds]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_run_one, jobs, chunksize=max(1, count // (4 * workers))))
    else:
        results = [_run_one(j) for j in jobs]
    failures = []
    for i, (s, r) in enumerate(zip(seeds, results)):
        if r is not None:
            failures.append({"trial": i, "trial_seed": str(s), **r})
    report = {"suite": name, "count": count, "seed": seed, "passed": count - len(failures),
              "failed": len(failures), "config": cfg,
              "failures": failures[:max_failures]}
    return plain(report)
