"""Command-line driver.

Exit status: 0 when every check passed (or no witness was found), 1 when a
check failed or a witness was found, 2 on usage or spec errors. Reports are
JSON on standard output with sorted keys, so identical inputs give
byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .errors import ConvexError, SpecError
from .distributions import format_rational, parse_rational
from .harness import (
    LAWS,
    CancellationWitness,
    Witness,
    cancellation_propagation,
    cancellation_search,
    check_convex_space_axioms,
    check_gamma_axioms,
    check_metric_axiom,
    replay,
)
from .norms import boundedness_check, recover_norm, verify_isometry
from .spec_io import SEED_ENV, load_spec
from .embedding import embed

PROPAGATION_STEPS = 20


def _check_axioms(spec, args):
    sampler = spec.sampler(args.seed)
    sections = {
        "convex_space": check_convex_space_axioms(spec.model, sampler).to_dict(),
        "gamma": check_gamma_axioms(spec.model, sampler).to_dict(),
    }
    if spec.model.metric_kind is not None:
        sections["metric"] = check_metric_axiom(spec.model, sampler).to_dict()
    return sections, all(s["passed"] for s in sections.values())


def _embed(spec, args):
    carrier, relations, report, check = embed(spec.model, spec.generators(), spec.embed_grid, spec.depth)
    sections = {
        "carrier": {
            "size": len(carrier),
            "points": [spec.model.point_json(p) for p in carrier.points],
            "provenance": [None if p is None else [format_rational(p[0]), p[1], p[2]] for p in carrier.provenance],
        },
        "relations": {"rows": len(relations), "escaped": relations.escaped},
        "embedding": report.to_dict(),
        "verification": check.to_dict(),
    }
    return sections, check.passed


def _cancel_search(spec, args):
    witness = cancellation_search(spec.model, spec.sampler(args.seed))
    sections = {"witness": None if witness is None else witness.to_dict()}
    if witness is not None:
        sections["propagation"] = cancellation_propagation(
            spec.model, witness, PROPAGATION_STEPS, spec.sampler(args.seed)
        ).to_dict()
    return sections, witness is None


def _recover_norm(spec, args):
    probe = recover_norm(spec.model, args.direction)
    return {"probe": probe.to_dict()}, probe.well_defined


def _verify_isometry(spec, args):
    report = verify_isometry(spec.model, spec.sampler(args.seed), depth=spec.depth, grid=spec.embed_grid)
    return {"isometry": report.to_dict()}, report.passed


def _bounded(spec, args):
    report = boundedness_check(spec.model, spec.sampler(args.seed), args.constant)
    return {"boundedness": report.to_dict()}, report.passed


def _replay(spec, args):
    with open(args.report, encoding="utf-8") as fh:
        data = json.load(fh)
    found, reproduced, skipped = 0, 0, 0

    def walk(node):
        nonlocal found, reproduced, skipped
        if isinstance(node, dict):
            if "law" in node and "inputs" in node:
                if node["law"] in LAWS:
                    found += 1
                    reproduced += replay(spec.model, Witness.from_dict(spec.model, node))
                else:
                    skipped += 1
                return
            if {"x", "y", "z", "lam"} <= node.keys():
                found += 1
                reproduced += CancellationWitness.from_dict(spec.model, node).is_valid(spec.model)
                return
            for v in node.values():
                walk(v)
        elif isinstance(node, list):
            for v in node:
                walk(v)

    walk(data.get("sections", data))
    sections = {"replay": {"witnesses": found, "reproduced": reproduced, "not_replayable": skipped}}
    return sections, found == reproduced


COMMANDS = {
    "check-axioms": _check_axioms,
    "embed": _embed,
    "cancel-search": _cancel_search,
    "recover-norm": _recover_norm,
    "verify-isometry": _verify_isometry,
    "bounded": _bounded,
    "replay": _replay,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="barycentric",
        description="Check convex-space axioms, embed finite samples linearly, recover norms.",
        epilog=f"The default seed (when a spec has none) is read from ${SEED_ENV}.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("spec", help="path to a JSON model spec")
        p.add_argument("--seed", type=int, default=None, help="override the spec's seed")
        return p

    add("check-axioms", "convex-space, gamma and metric axioms")
    add("embed", "finite carrier, relations, quotient coordinates and verification")
    add("cancel-search", "search for a cancellation counterexample")
    add("recover-norm", "norm of a direction read off the metric").add_argument(
        "--direction", required=True, help="comma-separated rationals, e.g. 1/2,1/4"
    )
    add("verify-isometry", "embedding plus recovered norm against the metric")
    add("bounded", "first metric condition and diameter bound").add_argument(
        "--constant", default=None, help="claimed constant as num/den (default: computed)"
    )
    add("replay", "re-evaluate every witness in a saved report").add_argument("report", help="path to a JSON report")
    return parser


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "direction", None) is not None:
            args.direction = [parse_rational(c) for c in args.direction.split(",")]
        if getattr(args, "constant", None) is not None:
            args.constant = parse_rational(args.constant)
    except (ValueError, ZeroDivisionError) as e:
        print(f"barycentric: bad rational argument: {e}", file=sys.stderr)
        return 2
    try:
        spec = load_spec(args.spec)
    except OSError as e:
        print(f"barycentric: cannot read spec: {e}", file=sys.stderr)
        return 2
    except SpecError as e:
        print(f"barycentric: invalid spec {args.spec}: {e}", file=sys.stderr)
        return 2
    report = {
        "tool": "barycentric",
        "version": __version__,
        "command": args.command,
        "spec_digest": spec.digest,
        "seed": spec.seed if args.seed is None else args.seed,
    }
    try:
        sections, passed = COMMANDS[args.command](spec, args)
    except (ConvexError, TypeError) as e:
        sections, passed = {"error": {"type": type(e).__name__, "message": str(e)}}, False
    report["sections"] = sections
    report["passed"] = passed
    out.write(json.dumps(report, indent=2, sort_keys=True) + "\n")
    return 0 if passed else 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
