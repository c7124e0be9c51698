"""Canonical JSON for forms, tensors, pairs, lattices and reports.

Integers are written as decimal strings and rationals as "p/q" strings;
keys are sorted and there is no whitespace, so equal objects give
byte-identical output.
"""

import json
from fractions import Fraction

from . import exactlat as el
from .formring import BinaryForm, GL2Elem, make_ring
from .tensorlink import COLUMN, ROW, BalancedPair, RfModule, Tensor2nn


class MalformedInput(ValueError):
    pass


def num(x):
    if isinstance(x, bool):
        return x
    if isinstance(x, int):
        return str(x)
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def plain(obj):
    """Recursively turn numbers into strings and tuples into lists."""
    if isinstance(obj, (bool, str)) or obj is None:
        return obj
    if isinstance(obj, (int, Fraction)):
        return num(obj)
    if isinstance(obj, dict):
        return {str(k): plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [plain(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj):
    """Canonical JSON text; ``obj`` must already be plain (see :func:`plain`)."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def load_text(text):
    """Parse JSON given inline, or read it from a file when ``text`` starts with '@'."""
    if text.startswith("@"):
        with open(text[1:]) as fh:
            text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"malformed JSON: {exc}") from None


def _int(x):
    if isinstance(x, bool):
        raise MalformedInput("expected an integer")
    try:
        if isinstance(x, str):
            return int(x.strip())
        if isinstance(x, int):
            return x
    except ValueError:
        pass
    raise MalformedInput(f"expected an integer, got {x!r}")


def _rat(x):
    if isinstance(x, bool):
        raise MalformedInput("expected a rational")
    try:
        if isinstance(x, (int, str)):
            return Fraction(x)
    except (ValueError, ZeroDivisionError):
        pass
    raise MalformedInput(f"expected a rational, got {x!r}")


def _matrix(rows, conv=_int):
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise MalformedInput("expected a non-empty list of rows")
    return tuple(tuple(conv(x) for x in r) for r in rows)


# --- forms -------------------------------------------------------------------

def form_coeffs(data):
    """Accept [2,3,5], ["2","3","5"] or {"coeffs": [...]}; returns a tuple of ints."""
    if isinstance(data, dict):
        if "coeffs" not in data:
            raise MalformedInput("form JSON needs 'coeffs'")
        data = data["coeffs"]
    if not isinstance(data, list):
        raise MalformedInput("form must be a coefficient list")
    return tuple(_int(c) for c in data)


def form_to_json(f):
    return {"coeffs": [num(c) for c in f.coeffs]}


def form_from_json(data):
    coeffs = form_coeffs(data)
    if len(coeffs) < 3:
        raise MalformedInput("a binary n-ic form needs n >= 2")
    return BinaryForm(coeffs)


# --- tensors -------------------------------------------------------------------

def tensor_to_json(t):
    return {"n": t.n, "A1": plain(t.A1), "A2": plain(t.A2)}


def tensor_from_json(data):
    if not isinstance(data, dict) or "A1" not in data or "A2" not in data:
        raise MalformedInput("tensor JSON needs 'A1' and 'A2'")
    try:
        t = Tensor2nn(_matrix(data["A1"]), _matrix(data["A2"]))
    except ValueError as exc:
        if isinstance(exc, MalformedInput):
            raise
        raise MalformedInput(str(exc)) from None
    if "n" in data and _int(data["n"]) != t.n:
        raise MalformedInput("'n' does not match the matrix size")
    return t


# --- balanced pairs -------------------------------------------------------------

def pair_to_json(p, tensor):
    g = p.transport
    return {
        "form": form_to_json(p.form),
        "ring_form": form_to_json(p.ring.form),
        "transport": plain([g.a, g.b, g.c, g.d]),
        "M": {"side": ROW, "actions": plain(p.M.actions)},
        "N": {"side": COLUMN, "actions": plain(p.N.actions)},
        "pairing": [[plain(x.coords) for x in row] for row in p.pairing],
        "tensor": tensor_to_json(tensor),
    }


def pair_from_json(data):
    """Rebuild a BalancedPair; returns (pair, stated tensor or None)."""
    try:
        ring_form = form_from_json(data["ring_form"])
        g = GL2Elem(*(_int(x) for x in data["transport"]))
        ring = make_ring(ring_form)
        n = ring.n
        mods = []
        for key, side in (("M", ROW), ("N", COLUMN)):
            acts = tuple(_matrix(m) for m in data[key]["actions"])
            if len(acts) != n - 1 or any(el.shape(a) != (n, n) for a in acts):
                raise MalformedInput(f"{key} needs {n - 1} action matrices of size {n}")
            mods.append(RfModule(ring, side, acts))
        fld = ring.field
        pairing = tuple(tuple(fld.element([_rat(c) for c in x]) for x in row)
                        for row in data["pairing"])
        if len(pairing) != n or any(len(r) != n for r in pairing):
            raise MalformedInput("pairing must be n x n")
    except (KeyError, TypeError) as exc:
        raise MalformedInput(f"malformed pair JSON: {exc}") from None
    stated = tensor_from_json(data["tensor"]) if "tensor" in data else None
    return BalancedPair(mods[0], mods[1], pairing, g), stated


# --- lattices --------------------------------------------------------------------

def lattice_to_json(L):
    """Basis elements (columns of the Hermite form) as theta-coordinate lists."""
    return [plain(col) for col in el.transpose(L.basis)]


def lattice_from_json(data, fld):
    from .formring import Lattice
    if not isinstance(data, list) or len(data) < fld.n:
        raise MalformedInput("ideal JSON must list at least n theta-coordinate vectors")
    elems = []
    for v in data:
        if not isinstance(v, list) or len(v) != fld.n:
            raise MalformedInput("each generator needs n theta-coordinates")
        elems.append(fld.element([_rat(c) for c in v]))
    return Lattice.spanned_by(fld, elems)
