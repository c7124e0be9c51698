"""Group actions on forms and tensors, module isomorphism search, orbit census.

Conventions:
  * GL_2(Z) acts on forms by F(x, y) -> F(ax + cy, bx + dy) and on tensors
    by (A1, A2) -> (a A1 + b A2, c A1 + d A2), which makes the determinant
    map equivariant.  Both are left actions: g(h(x)) = (gh)(x).
  * G = {(g1, g2) : det g1 det g2 = 1} acts by A_i -> g1 A_i g2^T (M is
    rows, N is columns).
"""

import itertools
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from . import exactlat as el
from .formring import BinaryForm, GL2Elem, gl2_act_form  # noqa: F401  (re-exported)
from .tensorlink import Tensor2nn

DEFAULT_MAX_ENUM = 2_000_000


class CensusTooLarge(ValueError):
    pass


def gl2_act_tensor(g, t, check=__debug__):
    """(a A1 + b A2, c A1 + d A2)."""
    a1 = el.mat_add(el.mat_scale(g.a, t.A1), el.mat_scale(g.b, t.A2))
    a2 = el.mat_add(el.mat_scale(g.c, t.A1), el.mat_scale(g.d, t.A2))
    out = Tensor2nn(a1, a2)
    if check:
        assert out.det_form() == gl2_act_form(g, t.det_form()), "determinant equivariance"
    return out


@dataclass(frozen=True)
class GPair:
    g1: tuple
    g2: tuple

    def __post_init__(self):
        g1 = el.as_int_matrix(self.g1)
        g2 = el.as_int_matrix(self.g2)
        if el.det(g1) * el.det(g2) != 1:
            raise ValueError("need det g1 * det g2 = 1")
        object.__setattr__(self, "g1", g1)
        object.__setattr__(self, "g2", g2)


def g_act_tensor(h, t):
    g2t = el.transpose(h.g2)
    return Tensor2nn(el.mat_mul(el.mat_mul(h.g1, t.A1), g2t),
                     el.mat_mul(el.mat_mul(h.g1, t.A2), g2t))


def gln_act_symmetric(g, t):
    """(g A1 g^T, g A2 g^T) for unimodular g and symmetric A."""
    g = el.as_int_matrix(g)
    if el.det(g) not in (1, -1):
        raise ValueError("g is not unimodular")
    if not t.is_symmetric():
        raise ValueError("tensor is not symmetric")
    gt = el.transpose(g)
    return Tensor2nn(el.mat_mul(el.mat_mul(g, t.A1), gt), el.mat_mul(el.mat_mul(g, t.A2), gt))


# --- module isomorphism ---------------------------------------------------

@dataclass(frozen=True)
class IsoResult:
    status: str  # "isomorphic", "not_isomorphic", "unknown"
    matrix: tuple = None

    def __bool__(self):
        return self.status == "isomorphic"


def intertwiner_basis(M, M2):
    """LLL-reduced Z-basis of {X : X Z_k(M) = Z_k(M2) X for all k}, as n x n matrices."""
    n = M.ring.n
    eqs = []
    for k in range(1, n):
        z, z2 = M.matrix(k), M2.matrix(k)
        for r in range(n):
            for c in range(n):
                # (X z)[r][c] - (z2 X)[r][c], X flattened row-major
                row = [0] * (n * n)
                for m in range(n):
                    row[r * n + m] += z[m][c]
                    row[m * n + c] -= z2[r][m]
                eqs.append(tuple(row))
    if not eqs:
        return [el.to_matrix([[int(i * n + j == p) for j in range(n)] for i in range(n)])
                for p in range(n * n)]
    kernel = el.int_kernel(el.to_matrix(eqs))
    if kernel:
        kernel = el.lll_reduce(kernel)
    return [el.to_matrix([vec[i * n:(i + 1) * n] for i in range(n)]) for vec in kernel]


def modules_isomorphic(M, M2, budget=2):
    """Search for a unimodular g with g Z_k(M) g^-1 = Z_k(M2) for every k.

    Integer combinations of an intertwiner basis with coefficients in
    [-budget, budget] are tried.  "not_isomorphic" is only reported when it
    is certain (different characteristic polynomials or no intertwiners);
    otherwise an exhausted search gives "unknown".
    """
    if M.ring.form != M2.ring.form or M.side != M2.side:
        raise ValueError("context mismatch")
    for k in range(1, M.ring.n):
        if el.charpoly(M.matrix(k)) != el.charpoly(M2.matrix(k)):
            return IsoResult("not_isomorphic")
    basis = intertwiner_basis(M, M2)
    if not basis:
        return IsoResult("not_isomorphic")
    n = M.ring.n
    rng = range(-budget, budget + 1)
    for coeffs in sorted(itertools.product(rng, repeat=len(basis)),
                         key=lambda c: (sum(map(abs, c)), c)):
        if not any(coeffs):
            continue
        x = el.zeros(n, n)
        for c, b in zip(coeffs, basis):
            if c:
                x = el.mat_add(x, el.mat_scale(c, b))
        if el.det(x) in (1, -1):
            return IsoResult("isomorphic", x)
    return IsoResult("unknown")


# --- orbit census ---------------------------------------------------------

def _g_generators(n):
    """Elementary moves of G: transvections on either side, and (D, D), D = diag(-1, 1, ...)."""
    moves = []
    for i in range(n):
        for j in range(n):
            if i != j:
                for s in (1, -1):
                    e = [[int(r == c) for c in range(n)] for r in range(n)]
                    e[i][j] = s
                    e = el.to_matrix(e)
                    moves.append(GPair(e, el.identity(n)))
                    moves.append(GPair(el.identity(n), e))
    d = el.to_matrix([[(-1 if r == c == 0 else int(r == c)) for c in range(n)] for r in range(n)])
    moves.append(GPair(d, d))
    return moves


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


def _matrices_with_det(n, bound, target):
    vals = range(-bound, bound + 1)
    for entries in itertools.product(vals, repeat=n * n):
        m = tuple(tuple(entries[i * n:(i + 1) * n]) for i in range(n))
        if el.det(m) == target:
            yield m


def _census_shard(args):
    f_coeffs, n, bound, shard, shards = args
    f = BinaryForm(f_coeffs)
    firsts = list(_matrices_with_det(n, bound, f[0]))[shard::shards]
    seconds = list(_matrices_with_det(n, bound, f[n]))
    found = []
    for a1 in firsts:
        for a2 in seconds:
            if el.det_binary_form(a1, a2) == f.coeffs:
                found.append((a1, a2))
    return found


def census_box(f, bound, workers=1, max_enum=None):
    """All A with entries in [-bound, bound] and Det(A) = f, in a fixed order."""
    n = f.n
    if max_enum is None:
        max_enum = int(os.environ.get("BINFORM_MAX_ENUM", DEFAULT_MAX_ENUM))
    size = (2 * bound + 1) ** (n * n)
    if bound < 0 or size > max_enum:
        raise CensusTooLarge(
            f"census box has {size} matrices per slot, cap is {max_enum}")
    shards = max(1, workers)
    jobs = [(f.coeffs, n, bound, s, shards) for s in range(shards)]
    if shards == 1:
        parts = [_census_shard(jobs[0])]
    else:
        with ProcessPoolExecutor(max_workers=shards) as ex:
            parts = list(ex.map(_census_shard, jobs))
    return sorted(Tensor2nn(a1, a2) for part in parts for a1, a2 in part)


@dataclass
class OrbitReport:
    form: BinaryForm
    entry_bound: int
    move_budget: int
    classes: list  # [(representative, size_in_box)]
    members: list
    budget_limited: bool = True


def enumerate_orbits(f, entry_bound, move_budget=3, workers=1, max_enum=None):
    """Census of the box, merged by union-find under words of at most move_budget moves.

    Distinct reported classes may still merge under a larger budget.
    """
    members = census_box(f, entry_bound, workers=workers, max_enum=max_enum)
    index = {t: i for i, t in enumerate(members)}
    uf = _UnionFind(range(len(members)))
    gens = _g_generators(f.n)
    for i, t in enumerate(members):
        frontier = {t}
        seen = {t}
        for _ in range(move_budget):
            nxt = set()
            for s in frontier:
                for h in gens:
                    u = g_act_tensor(h, s)
                    if u in seen:
                        continue
                    seen.add(u)
                    nxt.add(u)
                    j = index.get(u)
                    if j is not None:
                        uf.union(i, j)
            frontier = nxt
    groups = {}
    for i in range(len(members)):
        groups.setdefault(uf.find(i), []).append(i)
    classes = [(members[root], len(idx)) for root, idx in sorted(groups.items())]
    return OrbitReport(f, entry_bound, move_budget, classes, members)


# --- random group elements --------------------------------------------------

def random_gl2(rng, length=6):
    """A random word in the generators S = [[0,1],[1,0]], T = [[1,1],[0,1]] and their inverses."""
    gens = [GL2Elem(0, 1, 1, 0), GL2Elem(1, 1, 0, 1), GL2Elem(1, -1, 0, 1),
            GL2Elem(1, 0, 1, 1), GL2Elem(-1, 0, 0, 1)]
    g = GL2Elem.identity()
    for _ in range(length):
        g = g @ rng.choice(gens)
    return g


def random_unimodular(n, rng, length=None):
    """A random product of elementary transvections and sign changes."""
    g = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(length if length is not None else 3 * n):
        i, j = rng.sample(range(n), 2)
        s = rng.choice((-1, 1))
        for r in range(n):
            g[r][i] += s * g[r][j]
        if rng.random() < 0.2:
            k = rng.randrange(n)
            for r in range(n):
                g[r][k] = -g[r][k]
    return el.to_matrix(g)


def random_gpair(n, rng):
    g1 = random_unimodular(n, rng)
    g2 = random_unimodular(n, rng)
    if el.det(g1) * el.det(g2) != 1:
        g2 = el.to_matrix([[-x if c == 0 else x for c, x in enumerate(row)] for row in g2])
    return GPair(g1, g2)
