"""Command-line front end.

Exit codes: 0 success, 1 a verification failed, 2 usage error, 3 an internal
cross-check failed.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import tempfile
from collections import Counter
from fractions import Fraction
from pathlib import Path

from . import constructions as cons
from . import verifier
from .action import CrossCheckError, orbits, regular_orbit_certificate
from .group import Group, close, count_prime_order_subgroups, fingerprint, minimal_subgroups
from .linalg import Matrix, OrderCapExceeded, SingularMatrixError
from .shapes import recognize_shape

log = logging.getLogger("regorb")

OK, FAILED, USAGE, INTERNAL = 0, 1, 2, 3

KINDS = ("dihedral_field", "semilinear", "sylow2_gl23", "central_product_d8", "heisenberg3",
         "d8_star_c4", "order24")


class UsageError(Exception):
    pass


def write_output(text: str, out: str | None) -> None:
    """Write to ``out`` atomically (temp file + rename), or to stdout."""
    if out is None:
        sys.stdout.write(text)
        return
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def generator_file(g: Group, **extra) -> dict:
    return {"p": g.p, "n": g.n, "generators": [m.to_json() for m in g.generators], **extra}


def load_generators(path: str) -> Group:
    try:
        d = json.loads(Path(path).read_text())
        p, n = d["p"], d["n"]
        mats = [Matrix.from_json(m) for m in d["generators"]]
    except (OSError, ValueError, KeyError, TypeError) as e:
        raise UsageError(f"cannot read generator file {path}: {e}") from e
    if any(m.p != p or m.n != n for m in mats):
        raise UsageError("generator shapes disagree with the file header")
    try:
        return close(p, n, mats)
    except (SingularMatrixError, OrderCapExceeded) as e:
        raise UsageError(f"{path}: {e}") from e


def _group_from_args(args) -> Group:
    if bool(args.gens) == bool(args.entry):
        raise UsageError("give exactly one of --gens or --entry")
    if args.gens:
        return load_generators(args.gens)
    try:
        return cons.lookup(args.entry)
    except KeyError as e:
        raise UsageError(str(e)) from e


def _need(args, *names):
    missing = [f"--{n}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"{args.command} requires {', '.join(missing)}")


# --- commands ----------------------------------------------------------------


def cmd_construct(args) -> int:
    k = args.kind
    if k == "dihedral_field":
        _need(args, "p")
        g = cons.dihedral_field_action(args.p)
    elif k == "semilinear":
        _need(args, "p", "t")
        g = cons.semilinear_gamma_l(args.p, args.t, args.frobenius)
    elif k == "sylow2_gl23":
        g = cons.sylow2_of_gl23()
    elif k == "central_product_d8":
        _need(args, "p")
        g = cons.central_product_d8(args.copies, args.p)
    elif k == "heisenberg3":
        g = cons.heisenberg_reference()
    elif k == "d8_star_c4":
        g = cons.d8_star_c4_search(args.p or 5)
    else:
        g = verifier.find_order24_counterexample()
    write_output(dump(generator_file(g, order=g.order, kind=k)), args.out)
    return OK


def cmd_check(args) -> int:
    g = _group_from_args(args)
    cert = regular_orbit_certificate(g)
    out = {
        "p": g.p,
        "n": g.n,
        "order": g.order,
        "coprime": g.order % g.p != 0,
        "m": len(minimal_subgroups(g)),
        "certificate": cert.to_json(),
    }
    if g.order <= 64:
        out["fingerprint"] = fingerprint(g).to_json()
        out["shape"] = recognize_shape(g).to_json()
    write_output(dump(out), args.out)
    return OK


def cmd_orbits(args) -> int:
    g = _group_from_args(args)
    part = orbits(g)
    if args.format == "csv":
        write_output(part.to_csv(), args.out)
    else:
        write_output(dump({"order": g.order, "points": g.p**g.n, "orbits": len(part.sizes),
                           "max_orbit": part.max_size, "regular_orbits": len(part.regular()),
                           "sizes": {str(s): c for s, c in part.size_counts()}}), args.out)
    return OK


def cmd_minsub(args) -> int:
    g = _group_from_args(args)
    mins = minimal_subgroups(g)
    by_order = Counter(s.order for s in mins)
    threshold = Fraction(g.order, 2) - 1
    congruence = {str(r): count_prime_order_subgroups(g, r) for r in sorted(by_order)}
    out = {
        "order": g.order,
        "m": len(mins),
        "threshold": str(threshold),
        "above_threshold": len(mins) > threshold,
        "by_order": {str(k): v for k, v in sorted(by_order.items())},
        "congruence_ok": all(v % int(r) == 1 for r, v in congruence.items()),
    }
    if args.format == "csv":
        lines = ["subgroup_order,count"] + [f"{k},{v}" for k, v in sorted(by_order.items())]
        write_output("\n".join(lines) + "\n", args.out)
    else:
        write_output(dump(out), args.out)
    return OK


def cmd_verify_theorem(args) -> int:
    _need(args, "n", "p")
    try:
        report = verifier.verify_main_theorem(args.n, args.p, args.bound, timing=args.timing)
    except ValueError as e:
        raise UsageError(str(e)) from e
    write_output(dump(report.to_json()), args.out)
    return OK if report.theorem_holds else FAILED


def cmd_verify_converse(args) -> int:
    _need(args, "p")
    try:
        report = verifier.verify_converse(args.p)
    except ValueError as e:
        raise UsageError(str(e)) from e
    write_output(dump(report), args.out)
    return OK if report["ok"] else FAILED


def cmd_verify_classification(args) -> int:
    report = verifier.verify_classification_threshold()
    write_output(dump(report), args.out)
    return OK if report["ok"] else FAILED


def cmd_find24(args) -> int:
    report = verifier.order24_report()
    write_output(dump(report), args.out)
    return OK if not report["isomorphic_to_S4"] else FAILED


def cmd_catalog(args) -> int:
    write_output(dump(cons.catalog_json()), args.out)
    return OK


COMMANDS = {
    "construct": cmd_construct,
    "check": cmd_check,
    "orbits": cmd_orbits,
    "minsub": cmd_minsub,
    "verify-theorem": cmd_verify_theorem,
    "verify-converse": cmd_verify_converse,
    "verify-classification": cmd_verify_classification,
    "find-24": cmd_find24,
    "catalog": cmd_catalog,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="regorb", description="Regular orbits of coprime linear groups.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, *flags):
        sp = sub.add_parser(name)
        sp.add_argument("--out")
        for f in flags:
            if f == "p":
                sp.add_argument("--p", type=int)
            elif f == "n":
                sp.add_argument("--n", type=int)
            elif f == "group":
                sp.add_argument("--gens")
                sp.add_argument("--entry", help="catalog label, e.g. SD16_on_C3^2")
            elif f == "format":
                sp.add_argument("--format", choices=("json", "csv"), default="json")
        return sp

    sp = add("construct", "p")
    sp.add_argument("--kind", choices=KINDS, required=True)
    sp.add_argument("--t", type=int)
    sp.add_argument("--copies", type=int, default=1)
    sp.add_argument("--frobenius", default="full")
    add("check", "group")
    add("orbits", "group", "format")
    add("minsub", "group", "format")
    sp = add("verify-theorem", "n", "p")
    sp.add_argument("--bound", type=int)
    sp.add_argument("--timing", action="store_true", help="include elapsed_ms (breaks byte-stability)")
    add("verify-converse", "p")
    add("verify-classification")
    add("find-24")
    add("catalog")
    return parser


def run(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return USAGE if e.code else OK
    logging.basicConfig(level=logging.INFO, format="%(name)s: %(message)s", stream=sys.stderr)
    try:
        return COMMANDS[args.command](args)
    except UsageError as e:
        print(f"regorb: {e}", file=sys.stderr)
        return USAGE
    except CrossCheckError as e:
        print(f"regorb: internal cross-check failed: {e}", file=sys.stderr)
        return INTERNAL
    except AssertionError as e:
        print(f"regorb: verification failed: {e}", file=sys.stderr)
        return FAILED


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
