"""Command-line surface: classify, embed, verify, audit, gen, distance.

Exit codes: 0 success or positive verdict, 1 negative verdict or failed
verification, 2 usage error, 3 internal numeric error.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys

import numpy as np

from . import __version__
from .classifier import (
    ORACLE_EXTENDED,
    PAPER_STRICT,
    decide_hadamard,
    decide_sphere,
    decision_to_dict,
    necessary_form,
)
from .graph_core import (
    Graph6ParseError,
    classify_shape,
    construct_family,
    distance_matrix,
    from_edge_list_json,
    parse_graph6,
    write_graph6,
)
from .harness import (
    audit_hadamard,
    audit_sphere,
    unexpected_discrepancies,
    write_report,
)
from .model_spaces import EUCLIDEAN, HYPERBOLIC, SPHERE, ModelSpace
from .oracle import (
    default_verify_tol,
    embedding_from_dict,
    verify_isometric,
)


class UsageError(ValueError):
    pass


def parse_radius(text: str) -> float:
    """Accept a decimal or the symbolic radii used by the classification."""
    s = text.strip().lower().replace(" ", "")
    if s in ("2/pi",):
        return 2.0 / math.pi
    if s in ("1/arccos(-1/3)", "1/acos(-1/3)"):
        return 1.0 / math.acos(-1.0 / 3.0)
    m = re.fullmatch(r"(\d+)/\(2pi\)", s)
    if m:
        return int(m.group(1)) / (2.0 * math.pi)
    try:
        return float(s)
    except ValueError:
        raise UsageError(f"cannot parse radius {text!r}")


def _read_graph(source: str):
    """file path | '-' (stdin) | inline graph6; JSON detected by first byte."""
    if source == "-":
        text = sys.stdin.read()
    elif os.path.exists(source):
        with open(source) as fh:
            text = fh.read()
    else:
        text = source
    text = text.strip()
    if not text:
        raise UsageError("empty graph input")
    if text[0] == "{":
        return from_edge_list_json(text)
    return parse_graph6(text.splitlines()[0])


def _emit(obj, out):
    payload = json.dumps(obj, indent=2, sort_keys=True)
    if out:
        with open(out, "w") as fh:
            fh.write(payload + "\n")
    else:
        print(payload)


def _default_tol() -> float:
    return float(os.environ.get("ISOGRAPH_TOL", "1e-9"))


def _space_from_args(args) -> ModelSpace:
    kind = args.space
    if kind == SPHERE:
        radius = parse_radius(args.radius) if args.radius else 2.0 / math.pi
        return ModelSpace(SPHERE, args.dim, radius)
    return ModelSpace(kind, args.dim)


def cmd_gen(args) -> int:
    fam = {
        "path": ("path", [args.n]),
        "cycle": ("cycle", [args.n]),
        "complete": ("complete", [args.n]),
        "cocktail": ("cocktail", [args.n]),
        "complete-minus-matching": ("complete_minus_matching", [args.n, args.t]),
    }.get(args.family)
    if fam is None:
        raise UsageError(f"unknown family {args.family!r}")
    name, params = fam
    if name == "complete_minus_matching" and args.t is None:
        raise UsageError("complete-minus-matching requires --t")
    g = construct_family(name, *params)
    print(write_graph6(g))
    return 0


def cmd_classify(args) -> int:
    g = _read_graph(args.input)
    flags = classify_shape(g)
    _emit(
        {
            "flags": {
                "is_path": flags.is_path,
                "is_cycle": flags.is_cycle,
                "is_complete": flags.is_complete,
                "is_complete_minus_matching": flags.is_complete_minus_matching,
                "max_degree": flags.max_degree,
                "matching_size": flags.matching_size,
            },
            "necessary_form": sorted(necessary_form(g)),
        },
        args.out,
    )
    return 0


def cmd_distance(args) -> int:
    g = _read_graph(args.input)
    d = distance_matrix(g)
    entries = [
        [None if math.isinf(x) else x for x in row] for row in d.values.tolist()
    ]
    _emit({"size": d.size, "entries": entries}, args.out)
    return 0


def cmd_embed(args) -> int:
    g = _read_graph(args.input)
    tol = _default_tol()
    if args.space == SPHERE:
        r = parse_radius(args.radius) if args.radius else None
        decision = decide_sphere(g, args.dim, r, args.mode, tol)
    else:
        decision = decide_hadamard(g, ModelSpace(args.space, args.dim), tol)
    _emit(decision_to_dict(decision), args.out)
    return 0 if decision.embeddable else 1


def cmd_verify(args) -> int:
    g = _read_graph(args.graph)
    with open(args.embedding) as fh:
        obj = json.load(fh)
    if "witness" in obj and obj.get("witness"):
        obj = obj["witness"]
    embedding = embedding_from_dict(obj)
    d = distance_matrix(g)
    tol = float(args.tol) if args.tol else default_verify_tol(d)
    report = verify_isometric(embedding, d, tol)
    _emit(
        {
            "max_error": report.max_error,
            "mean_error": report.mean_error,
            "min_pairwise": report.min_pairwise,
            "tol": tol,
            "passes": report.passes,
        },
        args.out,
    )
    return 0 if report.passes else 1


def cmd_audit(args) -> int:
    tol = _default_tol()
    if args.space == SPHERE:
        if not args.radii:
            raise UsageError("sphere audit requires --radii")
        radii = [parse_radius(r) for r in args.radii.split(",")]
        report = audit_sphere(
            args.max_vertices, args.dim, radii, tol, workers=args.workers
        )
    else:
        report = audit_hadamard(
            args.max_vertices,
            ModelSpace(args.space, args.dim),
            tol,
            workers=args.workers,
        )
    if args.out:
        write_report(report, args.format, args.out)
    else:
        from .harness import report_to_csv, report_to_json

        sys.stdout.write(
            report_to_csv(report) if args.format == "csv" else report_to_json(report)
        )
        sys.stdout.write("\n")
    bad = unexpected_discrepancies(report)
    if bad:
        for row in bad:
            print(
                f"unexpected discrepancy: {row.graph6} paper={row.paper_verdict} "
                f"oracle={row.oracle_verdict}",
                file=sys.stderr,
            )
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="isograph",
        description="Isometric embeddability of graphs into constant-curvature spaces.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="emit a family graph as graph6")
    p.add_argument("--family", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t", type=int)
    p.set_defaults(func=cmd_gen)

    for name, func in (("classify", cmd_classify), ("distance", cmd_distance)):
        p = sub.add_parser(name)
        p.add_argument("input")
        p.add_argument("--out")
        p.set_defaults(func=func)

    p = sub.add_parser("embed", help="decide embeddability and emit a witness")
    p.add_argument("input")
    p.add_argument("--space", required=True, choices=[SPHERE, EUCLIDEAN, HYPERBOLIC])
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--radius")
    p.add_argument(
        "--mode", choices=[PAPER_STRICT, ORACLE_EXTENDED], default=PAPER_STRICT
    )
    p.add_argument("--out")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("verify", help="check an embedding file against a graph metric")
    p.add_argument("--embedding", required=True)
    p.add_argument("--graph", required=True)
    p.add_argument("--tol")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("audit", help="exhaustive classification-vs-oracle sweep")
    p.add_argument("--space", required=True, choices=[SPHERE, EUCLIDEAN, HYPERBOLIC])
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--radii", help="comma-separated; symbolic forms accepted")
    p.add_argument("--max-vertices", type=int, required=True)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--out")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_audit)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (UsageError, Graph6ParseError, ValueError, FileNotFoundError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ArithmeticError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
