"""Command-line driver.

Subcommands: gen, family, dual, check, classify, certify, ot.
Exit codes: 0 pass/success, 1 certified failure (with witnesses),
2 input error, 3 resource cap exceeded.  The environment variable
WEYLOT_ORBIT_CAP overrides the orbit/group size cap.
"""

from __future__ import annotations

import argparse
import sys

from .errors import (CombinatorialBudgetExceeded, OrbitCapExceeded,
                     WeylotError)
from . import fileio
from .rootsystems import build_from_label, weight_to_coords
from .weyl import (FAMILY_ROWS, classify, is_weyl_polytope, mr_family,
                   star_containment_check, vertex_condition, weyl_polytope,
                   WeylPolytopeRecord)


def _read(path):
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _parse_weight(text):
    try:
        return tuple(int(tok) for tok in text.split(","))
    except ValueError:
        raise WeylotError(f"cannot parse weight {text!r}; expected comma ints")


def _build_record(type_label, weight, lattice):
    system = build_from_label(type_label, lattice)
    m = weight_to_coords(system, weight)
    return weyl_polytope(system, m)


def cmd_gen(args):
    rec = _build_record(args.type, _parse_weight(args.weight), args.lattice)
    sys.stdout.write(fileio.serialize_polytope(rec.polytope))
    return 0


def cmd_family(args):
    rec = mr_family(args.row, args.rank)
    sys.stdout.write(fileio.serialize_polytope(rec.polytope))
    return 0


def cmd_dual(args):
    text = _read(args.file)
    p = fileio.parse_polytope(text)
    d = p.dual()
    if not d.is_lattice:
        bad = next(v for v in d.vertices
                   if any(not isinstance(x, int) for x in v))
        sys.stderr.write(
            f"dual is not a lattice polytope (vertex {bad}); "
            "the input is not reflexive\n")
        return 1
    sys.stdout.write(fileio.serialize_polytope(d))
    return 0


def cmd_check(args):
    text = _read(args.file)
    p = fileio.parse_polytope(text)
    doc = {"tool": fileio.TOOL_VERSION, "input_hash": fileio.input_hash(text)}
    ok = True
    if args.reflexive:
        doc["reflexive"] = p.is_reflexive
        ok &= p.is_reflexive
    if args.delzant:
        doc["delzant"] = p.is_delzant
        ok &= p.is_delzant
    if args.weyl:
        det = is_weyl_polytope(p)
        doc["weyl"] = (None if det is None else
                       {"type": det.type_label,
                        "dominant_vertex": fileio._vector_json(
                            det.dominant_vertex)})
        ok &= det is not None
    if args.vertex_condition:
        verdict, witness = vertex_condition(p)
        doc["vertex_condition"] = verdict
        doc["vertex_condition_witness"] = (
            None if witness is None
            else [fileio._vector_json(v) for v in witness])
        ok &= verdict
    if args.star:
        det = is_weyl_polytope(p)
        if det is None:
            doc["star_containment"] = None
            ok = False
        else:
            rec = _detected_record(p, det)
            verdict = star_containment_check(rec)
            doc["star_containment"] = {"pass": verdict.passed,
                                       "mode": verdict.mode}
            ok &= verdict.passed
    sys.stdout.write(fileio.write_report(doc))
    return 0 if ok else 1


def _detected_record(p, det):
    """Wrap a detected Weyl polytope as a record over its own lattice."""
    from .rootsystems import RootSystem
    from . import linalg as la
    roots = []
    seen = {}
    for mat in det.reflections:
        from .symmetry import reflection_data
        rd = reflection_data(mat)
        for sign in (1, -1):
            a = tuple(sign * x for x in rd.root)
            seen[a] = tuple(sign * x for x in rd.coroot)
    all_roots = sorted(seen)
    coroots = [seen[a] for a in all_roots]
    simple_idx = [all_roots.index(a) for a in det.simple_roots]
    cartan = tuple(tuple(la.vdot(det.simple_roots[j], det.simple_coroots[i])
                         for j in range(len(det.simple_roots)))
                   for i in range(len(det.simple_roots)))
    system = RootSystem([("detected", len(det.simple_roots))], all_roots,
                        coroots, simple_idx, cartan, "custom")
    return WeylPolytopeRecord(p, system, det.dominant_vertex, "custom")


def cmd_classify(args):
    code = 0
    for path in args.files:
        text = _read(path)
        record = classify(fileio.parse_polytope(text))
        doc = fileio.classification_json(record, fileio.input_hash(text))
        doc["input"] = path
        sys.stdout.write(fileio.write_report(doc))
    return code


def cmd_certify(args):
    from .transport import certify
    text = _read(args.file)
    p = fileio.parse_polytope(text)
    rec = _build_record(args.type, _parse_weight(args.weight), args.lattice)
    if set(rec.polytope.vertices) != set(p.vertices):
        sys.stderr.write(
            "input polytope differs from the orbit hull of the given "
            "type and weight\n")
        return 2
    report = certify(rec, args.refine, args.cycles)
    doc = fileio.certification_json(report, fileio.input_hash(text),
                                    args.type, _parse_weight(args.weight))
    sys.stdout.write(fileio.write_report(doc))
    return 0 if report.passed else 1


def cmd_ot(args):
    from .measures import WeightedPointCloud
    from .transport import solve_ot
    mu_text = _read(args.mu)
    nu_text = _read(args.nu)
    mp, mm = fileio.parse_measure(mu_text)
    np_, nm = fileio.parse_measure(nu_text)
    mu = WeightedPointCloud(mp, mm, (None,) * len(mp), (None,) * len(mp),
                            None, "M")
    nu = WeightedPointCloud(np_, nm, (None,) * len(np_), (None,) * len(np_),
                            None, "N")
    plan, pots = solve_ot(mu, nu)
    doc = {
        "tool": fileio.TOOL_VERSION,
        "input_hash": fileio.input_hash(mu_text + nu_text),
        "cost": fileio.rational_str(plan.cost_value),
        "plan": [[i, j, fileio.rational_str(mass)]
                 for i, j, mass in plan.triples],
        "phi": [fileio.rational_str(x) for x in pots.phi],
        "psi": [fileio.rational_str(x) for x in pots.psi],
    }
    sys.stdout.write(fileio.write_report(doc))
    return 0


def build_parser():
    ap = argparse.ArgumentParser(
        prog="weylot",
        description="Reflexive Weyl polytopes and exact optimal-transport "
                    "stability certificates")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="orbit hull of a weight")
    g.add_argument("--type", required=True, help="root system, e.g. B3 or A1xA2")
    g.add_argument("--weight", required=True,
                   help="comma-separated fundamental-weight coefficients")
    g.add_argument("--lattice", choices=("root", "weight"), default="root")
    g.set_defaults(func=cmd_gen)

    f = sub.add_parser("family", help="classified reflexive family member")
    f.add_argument("--row", required=True,
                   help=f"one of: {', '.join(sorted(FAMILY_ROWS))}")
    f.add_argument("--rank", required=True, type=int)
    f.set_defaults(func=cmd_family)

    d = sub.add_parser("dual", help="dual polytope file")
    d.add_argument("file")
    d.set_defaults(func=cmd_dual)

    c = sub.add_parser("check", help="predicates on one polytope")
    c.add_argument("file")
    c.add_argument("--reflexive", action="store_true")
    c.add_argument("--delzant", action="store_true")
    c.add_argument("--weyl", action="store_true")
    c.add_argument("--vertex-condition", action="store_true")
    c.add_argument("--star", action="store_true")
    c.set_defaults(func=cmd_check)

    cl = sub.add_parser("classify", help="classification record per input")
    cl.add_argument("files", nargs="+")
    cl.set_defaults(func=cmd_classify)

    ce = sub.add_parser("certify", help="transport stability certification")
    ce.add_argument("file")
    ce.add_argument("--type", required=True)
    ce.add_argument("--weight", required=True)
    ce.add_argument("--lattice", choices=("root", "weight"), default="root")
    ce.add_argument("--refine", type=int, default=0)
    ce.add_argument("--cycles", type=int, default=3)
    ce.set_defaults(func=cmd_certify)

    o = sub.add_parser("ot", help="transport plan between two measure files")
    o.add_argument("mu")
    o.add_argument("nu")
    o.set_defaults(func=cmd_ot)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (OrbitCapExceeded, CombinatorialBudgetExceeded) as exc:
        sys.stderr.write(f"resource cap: {exc}\n")
        return 3
    except (WeylotError, OSError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
