"""Command line front end: ``pctfkit <verb> FILE [options]``, JSON report on stdout.

Exit codes: 0 success (or a verified property), 1 a property was decided
false, 2 invalid input or options, 3 undecided within the given budget.
"""

import argparse
import sys
from itertools import product
from pathlib import Path

from . import __version__
from .homology import Coefficients, homology, stabilize
from .io import (
    SCHEMA, ParseError, SemanticError, digest, dumps_report, fan_to_dict, is_fan_document,
    load_json, monoid_to_dict, parse_fan, parse_monoid,
)
from .monoid import (
    NoPositiveGrading, grading, is_reduced, nilradical, primes, units,
)
from .nerve import delta_r_check, fixed_points, ncy_component, ncy_slice, subdivide
from .polyhedra import CapExceeded
from .saturation import NotFinite, conductor, is_seminormal, normalize, seminormalize
from .toric import (
    ShapeError, cech, g_presheaf, is_smooth, make_square, omega_presheaf, stellar_subdivide,
    verify_L312, verify_square,
)

DEFAULT_DEGREE = 4
DEFAULT_WINDOW = 8
DEFAULT_FAN_WINDOW = 3
DEFAULT_KMAX = 5

OK, FALSE, INVALID, UNDECIDED = 0, 1, 2, 3


class UsageError(ValueError):
    pass


def _ints(text, name):
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise UsageError(f"--{name} expects comma-separated integers, got {text!r}") from None


def _field(text):
    try:
        return Coefficients.parse(text)
    except ValueError as exc:
        raise UsageError(f"--field: {exc}") from None


def _vecs(A):
    return [list(v) for v in A]


def _weight(A, text):
    """A single integer is a total grading weight, a vector an element of the monoid."""
    w = _ints(text, "weight")
    if len(w) == 1:
        return "N", w[0]
    if len(w) != A.ambient_rank:
        raise UsageError(f"--weight needs 1 or {A.ambient_rank} entries")
    return "A", w


def _slice(A, text, D):
    kind, w = _weight(A, text)
    if kind == "N":
        return ncy_slice(A, None, w, D)
    return ncy_component(A, w, D)


# verbs -----------------------------------------------------------------------

def cmd_analyze(A, args):
    out = {"units_rank": len(units(A)), "cancellative": A.is_cancellative(),
           "reduced": is_reduced(A), "nilradical": _vecs(nilradical(A).generators)}
    P = primes(A)
    out["primes"] = [{"generators": _vecs(p.ideal.generators),
                      "face": sorted(p.face.indices)} for p in P.primes]
    try:
        out["grading"] = list(grading(A).p)
    except NoPositiveGrading:
        out["grading"] = None
    if not A.collapsed and A.carrier.generators:
        out["normal"] = all(A.carrier.contains(h) for h in normalize(A.carrier).generators)
        out["seminormal"] = is_seminormal(A.carrier)
    return out, OK, {}


def cmd_saturate(A, args):
    C = A.carrier
    nor = normalize(C)
    sn = seminormalize(C, args.window)
    out = {"normalization": _vecs(nor.generators),
           "seminormalization": _vecs(sn.generators),
           "witnesses": {"normalization": list(nor.witnesses), "seminormalization": list(sn.witnesses)}}
    validity = {"seminormalization_window": sn.window, "seminormalization_certified": sn.certified}
    code = OK if sn.certified else UNDECIDED
    try:
        res = conductor(C, nor.monoid)
        out["conductor"] = "improper" if res.improper else _vecs(res.ideal.generators)
        validity["conductor_window"] = res.window
        validity["conductor_certified"] = res.certified
        if not res.certified:
            code = UNDECIDED
    except (NotFinite, NoPositiveGrading) as exc:
        out["conductor"] = None
        validity["conductor_error"] = str(exc)
    return out, code, validity


def cmd_hh(A, args):
    F = _field(args.field)
    D = args.max_degree
    if D < 1:
        raise UsageError("--max-degree must be at least 1")
    s = _slice(A, args.weight, D)
    H = homology(s, F)
    out = {"weight": s.weight if s.kind == "N" else list(s.weight), "coeff": str(F),
           "counts": s.counts(), "complete": s.complete}
    out.update(H.as_dict())
    return out, OK, {"valid_through": H.valid_through, "max_degree": D}


def cmd_dilate(A, args):
    F = _field(args.field)
    seq = _ints(args.seq, "seq")
    if any(c < 2 for c in seq):
        raise UsageError("--seq entries must be at least 2")
    kind, w = _weight(A, args.weight)
    if kind == "N":
        if A.ambient_rank != 1:
            raise UsageError("--weight must be an element of the monoid")
        w = (w,)
    rep = stabilize(A, seq, w, args.qmax, F, args.kmax, args.budget)
    code = OK if rep.converged else UNDECIDED
    return rep.as_dict(), code, {"q_max": args.qmax, "K_max": args.kmax, "budget": args.budget}


def cmd_subdivide_monoid(A, args):
    D = args.max_degree
    s = _slice(A, args.weight, D)
    r = args.r
    sub = subdivide(s, r)
    fix = fixed_points(sub, r)
    out = {"weight": s.weight if s.kind == "N" else list(s.weight), "r": r,
           "counts": sub.counts(), "base_degree_counts": [sub.base_degree_count(n) for n in range(D + 1)],
           "fixed_counts": fix.counts()}
    if s.kind == "A" and r > 1 and all(x % r == 0 for x in s.weight):
        base = tuple(x // r for x in s.weight)
        if A.carrier.contains(base):
            out["delta_isomorphism"] = delta_r_check(A, base, r, D)
    return out, OK, {"max_degree": D}


def cmd_subdivide_fan(F, args):
    if not args.ray:
        raise UsageError("--ray is required for a fan")
    G = stellar_subdivide(F, _ints(args.ray, "ray"))
    out = {"fan": fan_to_dict(G), "smooth": all(is_smooth(c) for c in G.cones)}
    return out, OK, {}


def _dual_box(n, window):
    return list(product(range(-window, window + 1), repeat=n))


def cmd_cech(F, args):
    Fd = _field(args.field)
    if args.m:
        ms = [_ints(args.m, "m")]
    else:
        ms = _dual_box(F.rank, args.window if args.window is not None else DEFAULT_FAN_WINDOW)
    results = []
    for m in ms:
        if len(m) != F.rank:
            raise UsageError(f"--m needs {F.rank} entries")
        if args.presheaf == "g":
            results.append({"m": list(m), "dims": cech(F, g_presheaf(F, m), Fd)})
        else:
            dims = [cech(F, omega_presheaf(F, m, q), Fd) for q in range(args.qmax + 1)]
            results.append({"m": list(m), "dims_by_q": dims})
    return {"presheaf": args.presheaf, "coeff": str(Fd), "results": results}, OK, {}


def _refinement(F, args):
    if args.refinement:
        return parse_fan(load_json(args.refinement), args.refinement)
    if args.ray:
        return stellar_subdivide(F, _ints(args.ray, "ray"))
    raise UsageError("give --ray or --refinement")


def cmd_l312(F, args):
    Fd = _field(args.field)
    G = _refinement(F, args)
    if args.m:
        ms = [_ints(args.m, "m")]
    else:
        ms = _dual_box(F.rank, args.window if args.window is not None else DEFAULT_FAN_WINDOW)
    results = []
    ok = True
    for m in ms:
        r = verify_L312(F, G, m, Fd)
        ok &= r.holds
        results.append({"m": list(m), "holds": r.holds, "source": r.source, "target": r.target})
    return {"holds": ok, "refinement": fan_to_dict(G), "results": results}, OK if ok else FALSE, {}


def cmd_square(obj, args, is_fan):
    Fd = _field(args.field)
    t = args.type
    if is_fan:
        if t == "blowup":
            data = {"fan": obj}
            if args.refinement:
                data["refinement"] = _refinement(obj, args)
            else:
                data["ray"] = _ints(args.ray, "ray") if args.ray else None
                if data["ray"] is None:
                    raise UsageError("--ray or --refinement is required for a blow-up")
        elif t == "zariski":
            if not args.cover_y or not args.cover_c:
                raise UsageError("--cover-y and --cover-c list cone indices of the two opens")
            mx = obj.maximal
            try:
                data = {"fan": obj, "Y": [mx[i] for i in _ints(args.cover_y, "cover-y")],
                        "C": [mx[i] for i in _ints(args.cover_c, "cover-c")]}
            except IndexError:
                raise UsageError("cover index out of range") from None
        else:
            raise UsageError(f"square type {t} needs a monoid file")
        window = args.window if args.window is not None else DEFAULT_FAN_WINDOW
    else:
        data = {"monoid": obj}
        if t == "closed-cover":
            if args.ideal_i is None or args.ideal_j is None:
                raise UsageError("--ideal-i and --ideal-j are required")
            data["I"] = [_ints(x, "ideal-i") for x in args.ideal_i.split(";")]
            data["J"] = [_ints(x, "ideal-j") for x in args.ideal_j.split(";")]
        elif t not in ("sn", "conductor"):
            raise UsageError(f"square type {t} needs a fan file")
        window = args.window if args.window is not None else DEFAULT_WINDOW
    sq = make_square(t, data)
    rep = verify_square(sq, window, args.qmax, Fd)
    out = rep.as_dict()
    out["notes"] = sq.notes
    return out, OK if rep.acyclic else FALSE, {"window": window, "q_max": args.qmax}


# plumbing --------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="pctfkit", description="Cyclic nerves, seminormalization "
                                "and descent checks for pointed monoids and fans.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="verb", required=True)

    def add(name, help_, fans=False):
        s = sub.add_parser(name, help=help_)
        s.add_argument("input", help="monoid or fan JSON file")
        s.add_argument("-o", "--output", help="write the report here instead of stdout")
        s.add_argument("--field", default="Q", help="Q, Z or fp:<prime> (default Q)")
        s.add_argument("--window", type=int, default=None,
                       help=f"weight window: degree bound for monoids (default {DEFAULT_WINDOW}; "
                            "saturate derives its own bound), "
                            f"box radius for fans (default {DEFAULT_FAN_WINDOW})")
        return s

    add("analyze", "units, primes, nilradical, grading")
    add("saturate", "normalization, seminormalization and conductor")
    s = add("hh", "homology of one weight piece of the cyclic nerve")
    s.add_argument("--weight", required=True, help="total weight n, or an element a,b,...")
    s.add_argument("--max-degree", type=int, default=DEFAULT_DEGREE)
    s = add("dilate", "homology along a dilation tower")
    s.add_argument("--weight", required=True)
    s.add_argument("--seq", required=True, help="dilation factors, e.g. 2,2,2")
    s.add_argument("--qmax", type=int, default=2)
    s.add_argument("--kmax", type=int, default=DEFAULT_KMAX)
    s.add_argument("--budget", type=int, default=200_000, help="simplices per slice")
    s = add("subdivide", "edgewise subdivision of a slice, or stellar subdivision of a fan")
    s.add_argument("--weight")
    s.add_argument("--r", type=int, default=2)
    s.add_argument("--max-degree", type=int, default=DEFAULT_DEGREE)
    s.add_argument("--ray")
    s = add("cech", "Čech cohomology of G_m or of Ω̃ weight presheaves")
    s.add_argument("--m", help="dual vector; default is the whole window")
    s.add_argument("--presheaf", choices=("g", "omega"), default="g")
    s.add_argument("--qmax", type=int, default=2)
    s = add("verify-square", "Mayer-Vietoris check of a square of one of the five types")
    s.add_argument("--type", required=True, choices=("sn", "zariski", "conductor", "closed-cover", "blowup"))
    s.add_argument("--qmax", type=int, default=2)
    s.add_argument("--ray")
    s.add_argument("--refinement")
    s.add_argument("--ideal-i", help="generators separated by ';', e.g. '1,0;2,1'")
    s.add_argument("--ideal-j")
    s.add_argument("--cover-y", help="indices of maximal cones forming one open")
    s.add_argument("--cover-c", help="indices of maximal cones forming the other open")
    s = add("verify-l312", "compare Čech cohomology of G_m on a fan and a refinement")
    s.add_argument("--m")
    s.add_argument("--ray")
    s.add_argument("--refinement")
    return p


_OPTIONS_SKIP = {"input", "output", "verb"}


def run(args):
    """Execute a parsed command; returns ``(report, exit_code)``."""
    obj = load_json(args.input)
    name = Path(args.input).name
    fan = is_fan_document(obj)
    parsed = parse_fan(obj, name) if fan else parse_monoid(obj, name)
    canon = fan_to_dict(parsed) if fan else monoid_to_dict(parsed)
    verb = args.verb
    if verb == "subdivide":
        if fan:
            res, code, valid = cmd_subdivide_fan(parsed, args)
        else:
            if not args.weight:
                raise UsageError("--weight is required for a monoid")
            res, code, valid = cmd_subdivide_monoid(parsed, args)
    elif verb == "verify-square":
        res, code, valid = cmd_square(parsed, args, fan)
    else:
        table = {"analyze": cmd_analyze, "saturate": cmd_saturate, "hh": cmd_hh,
                 "dilate": cmd_dilate, "cech": cmd_cech, "verify-l312": cmd_l312}
        wants_fan = verb in ("cech", "verify-l312")
        if wants_fan != fan:
            raise UsageError(f"{verb} needs a {'fan' if wants_fan else 'monoid'} file")
        res, code, valid = table[verb](parsed, args)
    options = {k: v for k, v in sorted(vars(args).items()) if k not in _OPTIONS_SKIP}
    report = {
        "schema": SCHEMA,
        "command": verb,
        "input": {"kind": "fan" if fan else "monoid", "sha256": digest(canon), "canonical": canon},
        "options": options,
        "results": res,
        "validity": valid,
        "status": {OK: "ok", FALSE: "false", UNDECIDED: "inconclusive"}[code],
    }
    return report, code


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report, code = run(args)
    except (ParseError, SemanticError, UsageError, ShapeError) as exc:
        print(f"pctfkit: error: {exc}", file=sys.stderr)
        return INVALID
    except (CapExceeded, NoPositiveGrading, NotFinite, ValueError) as exc:
        kind = INVALID if not isinstance(exc, CapExceeded) else UNDECIDED
        print(f"pctfkit: {'budget exceeded' if kind == UNDECIDED else 'error'}: {exc}", file=sys.stderr)
        return kind
    text = dumps_report(report)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
