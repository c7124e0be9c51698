"""Command-line front end: ``binform {ring,psi,phi,det,orbits,partner,verify}``.

All output is canonical JSON.  Exit codes: 0 success, 1 property
violation, 2 usage error, 3 degenerate input.
"""

import argparse
import sys
from dataclasses import dataclass

from . import exactlat as el
from .balance import (
    DegenerateForm,
    FractionalIdeal,
    NotCharacteristic,
    balancing_partner,
    check_balanced,
)
from .formring import (
    Field,
    LeadingCoefficientZero,
    ZeroForm,
    form_stats,
    make_If_Jf,
    make_ring,
    normalize_leading,
)
from .groups import CensusTooLarge, enumerate_orbits
from .serial import (
    MalformedInput,
    dumps,
    form_coeffs,
    form_from_json,
    form_to_json,
    lattice_from_json,
    lattice_to_json,
    load_text,
    pair_from_json,
    pair_to_json,
    plain,
    tensor_from_json,
    tensor_to_json,
)
from .suites import DEFAULT_BOUND, SUITES, run_suite
from .tensorlink import DegenerateTensor, InvariantViolation, check_pair, phi, psi

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_DEGENERATE = 0, 1, 2, 3

MAX_N = 8
MAX_BOUND = 1000
MAX_COUNT = 1_000_000
MAX_WORKERS = 64


class UsageError(ValueError):
    pass


class Degenerate(ValueError):
    pass


class Violation(AssertionError):
    pass


@dataclass
class RunConfig:
    seed: int = 0
    count: int = 100
    bound: int = None
    n: int = 3
    out: str = None
    workers: int = 1

    def __post_init__(self):
        if not 2 <= self.n <= MAX_N:
            raise UsageError(f"--n must be in 2..{MAX_N}")
        if self.bound is not None and not 1 <= self.bound <= MAX_BOUND:
            raise UsageError(f"--bound must be in 1..{MAX_BOUND}")
        if not 1 <= self.count <= MAX_COUNT:
            raise UsageError(f"--count must be in 1..{MAX_COUNT}")
        if not 1 <= self.workers <= MAX_WORKERS:
            raise UsageError(f"--workers must be in 1..{MAX_WORKERS}")
        if not 0 <= self.seed < 2 ** 64:
            raise UsageError("--seed must be a 64-bit unsigned integer")


# --- input helpers ------------------------------------------------------------

def _read_form(text):
    if text is None:
        raise UsageError("--form is required")
    data = load_text(text)
    if not any(form_coeffs(data)):
        raise Degenerate("zero form")
    return form_from_json(data)


def _read_tensor(text):
    if text is None:
        raise UsageError("--tensor is required")
    return tensor_from_json(load_text(text))


def _transported(f):
    g, local = normalize_leading(f)
    extra = {} if g.is_identity() else {"transport": [g.a, g.b, g.c, g.d],
                                        "local_form": form_to_json(local)}
    return local, extra


# --- commands --------------------------------------------------------------------

def cmd_ring(args):
    f = _read_form(args.form)
    local, extra = _transported(f)
    ring = make_ring(local)
    If, Jf = make_If_Jf(local)
    disc, primitive = form_stats(f)
    return {
        "form": form_to_json(f),
        **plain(extra),
        "n": f.n,
        "disc": plain(disc),
        "primitive": primitive,
        "zeta": [plain(z.coords) for z in ring.zeta_coords],
        "struct_consts": plain(ring.struct_consts),
        "If": lattice_to_json(If),
        "Jf": lattice_to_json(Jf),
        "index_Jf_If": plain(el.lattice_index(If.basis, Jf.basis)),
        "norm_If": plain(el.lattice_index(If.basis, ring.lattice.basis)),
        "norm_Jf": plain(el.lattice_index(Jf.basis, ring.lattice.basis)),
    }


def cmd_det(args):
    t = _read_tensor(args.tensor)
    return form_to_json(t.det_form())


def cmd_psi(args):
    t = _read_tensor(args.tensor)
    p = psi(t)
    return pair_to_json(p, t)


def cmd_phi(args):
    if args.pair is None:
        raise UsageError("--pair is required")
    p, stated = pair_from_json(load_text(args.pair))
    check_pair(p)
    t = phi(p)
    if stated is not None and stated != t:
        raise Violation("stated tensor differs from phi(pair)")
    return tensor_to_json(t)


def cmd_orbits(args):
    f = _read_form(args.form)
    cfg = RunConfig(bound=args.bound or 1, workers=args.workers)
    rep = enumerate_orbits(f, cfg.bound, move_budget=args.moves, workers=cfg.workers)
    return {
        "form": form_to_json(f),
        "entry_bound": rep.entry_bound,
        "move_budget": rep.move_budget,
        "members": len(rep.members),
        "classes": [{"representative": tensor_to_json(t), "size_in_box": size}
                    for t, size in rep.classes],
        "budget_limited": rep.budget_limited,
    }


def cmd_partner(args):
    f = _read_form(args.form)
    local, extra = _transported(f)
    ring = make_ring(local)
    if args.ideal is None:
        N = FractionalIdeal(ring.lattice)
    else:
        N = FractionalIdeal(lattice_from_json(load_text(args.ideal), Field(local)))
    M, flags = balancing_partner(N)
    disc, primitive = form_stats(f)
    if not primitive:
        flags = sorted(set(flags) | {"form is not primitive"})
    verdict = check_balanced(M, N)
    return {
        "form": form_to_json(f),
        **plain(extra),
        "N": lattice_to_json(N.lattice),
        "partner": lattice_to_json(M.lattice),
        "flags": flags,
        "verdict": verdict.to_json(),
    }


def cmd_verify(args):
    names = SUITES if args.suite == "all" else (args.suite,)
    form = None
    if args.form is not None:
        f = _read_form(args.form)
        if f[0] == 0:
            raise Degenerate("leading coefficient vanishes; apply GL_2 transport")
        form = f.coeffs
    reports = []
    for name in names:
        bound = args.bound if args.bound is not None else DEFAULT_BOUND[name]
        n = form and len(form) - 1 or args.n
        cfg = RunConfig(seed=args.seed, count=args.count, bound=bound, n=n,
                        out=args.out, workers=args.workers)
        suite_cfg = {"n": cfg.n, "bound": cfg.bound}
        if name == "balance":
            suite_cfg["form"] = form
        reports.append(run_suite(name, suite_cfg, cfg.count, cfg.seed, workers=cfg.workers))
    failed = sum(int(r["failed"]) for r in reports)
    if failed and args.out:
        artifacts = [{"suite": r["suite"], "failures": r["failures"]} for r in reports if r["failures"]]
        with open(args.out, "w") as fh:
            fh.write(dumps(artifacts) + "\n")
    out = {"ok": failed == 0, "suites": reports}
    if failed:
        raise Violation(dumps(out))
    return out


COMMANDS = {
    "ring": cmd_ring,
    "psi": cmd_psi,
    "phi": cmd_phi,
    "det": cmd_det,
    "orbits": cmd_orbits,
    "partner": cmd_partner,
    "verify": cmd_verify,
}


def build_parser():
    parser = argparse.ArgumentParser(prog="binform", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--out", help="also write the JSON result (or failure artifacts) here")
        return p

    add("ring", "ring report for a form").add_argument("--form", required=True)
    add("det", "determinant form of a tensor").add_argument("--tensor", required=True)
    add("psi", "balanced pair of a tensor").add_argument("--tensor", required=True)
    add("phi", "tensor of a balanced pair").add_argument("--pair", required=True)

    p = add("orbits", "bounded census of tensors with a given form")
    p.add_argument("--form", required=True)
    p.add_argument("--bound", type=int, default=1)
    p.add_argument("--moves", type=int, default=3, help="move budget per member")
    p.add_argument("--workers", type=int, default=1)

    p = add("partner", "balancing partner (I_f : N) of an ideal")
    p.add_argument("--form", required=True)
    p.add_argument("--ideal", help="JSON list of theta-coordinate vectors spanning N (default R_f)")

    p = add("verify", "run seeded property suites")
    p.add_argument("--suite", required=True, choices=SUITES + ("all",))
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--bound", type=int, help="entry/coefficient box (suite default if omitted)")
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--form", help="fixed form for the balance suite")
    p.add_argument("--workers", type=int, default=1)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result = COMMANDS[args.command](args)
    except (UsageError, MalformedInput, CensusTooLarge) as exc:
        print(f"binform: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (Degenerate, ZeroForm, DegenerateTensor, DegenerateForm, el.DegenerateLattice,
            LeadingCoefficientZero, NotCharacteristic) as exc:
        print(f"binform: degenerate input: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (Violation, InvariantViolation) as exc:
        text = str(exc)
        if text.startswith("{"):
            print(text)
        else:
            print(f"binform: violation: {text}", file=sys.stderr)
        return EXIT_VIOLATION
    except ValueError as exc:
        print(f"binform: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = dumps(result)
    print(text)
    if args.out and args.command != "verify":
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
