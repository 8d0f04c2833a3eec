"""Command-line front end: limit/kernel algebra plus experiment drivers.

All file formats are the package's JSON wire forms. Exit codes form a
stable contract: 0 success, 2 input error, 3 enumeration budget
exceeded, 4 internal invariant violation. Stochastic subcommands require
an explicit --seed; there is no hidden entropy, so identical invocations
produce identical bytes.
"""

from __future__ import annotations

import argparse
import json
import sys

from .catalog import enumerate_connected
from .cuts import EXACT_CUT_MAX_VERTICES, balanced_cut_heuristic, min_balanced_cut_exact
from .errors import EnumerationBudgetError, InvariantError
from .experiments import (
    ExperimentConfig,
    ExperimentReport,
    run_components_experiment,
    run_cut_experiment,
    run_density_fingerprint_experiment,
    run_sum_convergence_experiment,
    write_report,
)
from .graphs import Graph, cut_norm_distance
from .kernels import fingerprint
from .limits import (
    Sum,
    decompose_limit,
    is_connected_limit,
    limit_density,
    limit_from_json_dict,
    realize,
)
from .rng import check_seed
from .sampling import sample_graph

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_BUDGET = 3
EXIT_INVARIANT = 4


def _load_json(path: str) -> dict:
    with open(path) as handle:
        return json.load(handle)


def _load_limit(path: str):
    return limit_from_json_dict(_load_json(path))


def _load_graph(path: str) -> Graph:
    return Graph.from_json_dict(_load_json(path))


def _dump(data: dict, out: str | None) -> None:
    text = json.dumps(data, sort_keys=True, indent=2) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w") as handle:
            handle.write(text)
        print(out)


def _format_number(x: float) -> str:
    return format(x, ".12g")


def cmd_density(args: argparse.Namespace) -> int:
    limit = _load_limit(args.limit)
    graph = _load_graph(args.graph)
    print(_format_number(limit_density(graph, limit)))
    return EXIT_OK


def cmd_sum(args: argparse.Namespace) -> int:
    data = _load_json(args.terms)
    if not isinstance(data, dict) or "terms" not in data:
        raise ValueError('sum input must have the form {"terms": [{"alpha": ..., "limit": ...}]}')
    terms = tuple(
        (float(item["alpha"]), limit_from_json_dict(item["limit"]))
        for item in data["terms"]
    )
    kernel = realize(Sum(terms=terms))
    _dump(kernel.to_json_dict(), args.out)
    return EXIT_OK


def cmd_decompose(args: argparse.Namespace) -> int:
    decomposition = decompose_limit(_load_limit(args.limit))
    _dump(decomposition.to_json_dict(), args.out)
    return EXIT_OK


def cmd_connected(args: argparse.Namespace) -> int:
    print("true" if is_connected_limit(_load_limit(args.limit)) else "false")
    return EXIT_OK


def cmd_fingerprint(args: argparse.Namespace) -> int:
    kernel = realize(_load_limit(args.limit))
    result = fingerprint(kernel, enumerate_connected(args.k))
    _dump(result.to_json_dict(), args.out)
    return EXIT_OK


def cmd_sample(args: argparse.Namespace) -> int:
    kernel = realize(_load_limit(args.limit))
    sample = sample_graph(kernel, args.n, args.seed)
    _dump(sample.to_json_dict(), args.out)
    return EXIT_OK


def cmd_cutnorm(args: argparse.Namespace) -> int:
    print(_format_number(cut_norm_distance(_load_graph(args.graph_a), _load_graph(args.graph_b))))
    return EXIT_OK


def cmd_mincut(args: argparse.Namespace) -> int:
    graph = _load_graph(args.graph)
    if graph.n <= EXACT_CUT_MAX_VERTICES:
        result = min_balanced_cut_exact(graph, args.delta)
    else:
        if args.seed is None:
            raise ValueError(f"--seed is required for the heuristic (n={graph.n} > "
                             f"{EXACT_CUT_MAX_VERTICES})")
        result = balanced_cut_heuristic(graph, args.delta, args.seed)
    _dump(result.to_json_dict(), args.out)
    return EXIT_OK


def cmd_experiment(args: argparse.Namespace) -> int:
    data = _load_json(args.config)
    if args.reps is not None:
        data = dict(data, reps=args.reps)
    cfg = ExperimentConfig.from_json_dict(data, seed=args.seed)
    report: ExperimentReport
    if args.kind == "components":
        report = run_components_experiment(cfg)
    elif args.kind == "cut":
        report = run_cut_experiment(cfg)
    elif args.kind == "sum-convergence":
        if "graph" not in data or "alpha" not in data:
            raise ValueError('sum-convergence config needs "graph" and "alpha" fields')
        f = Graph.from_json_dict(data["graph"])
        report = run_sum_convergence_experiment(cfg, f, float(data["alpha"]))
    elif args.kind == "fingerprint":
        report = run_density_fingerprint_experiment(cfg)
    else:  # pragma: no cover - argparse restricts choices
        raise ValueError(f"unknown experiment kind {args.kind!r}")
    if args.out is None:
        sys.stdout.write(report.to_json() if args.format == "json" else report.to_csv())
    else:
        write_report(report, args.out, args.format)
        print(args.out)
    return EXIT_OK


def _seed_type(text: str) -> int:
    return check_seed(int(text))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="graphlim",
        description="Step-kernel graph limits: algebra, sampling and Monte Carlo checks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("density", help="density of a test graph in a limit")
    p.add_argument("limit", help="limit JSON file")
    p.add_argument("graph", help="graph JSON file")
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("sum", help="materialize a weighted direct sum as a kernel")
    p.add_argument("terms", help='JSON file {"terms": [{"alpha": a, "limit": {...}}]}')
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_sum)

    p = sub.add_parser("decompose", help="component decomposition of a limit")
    p.add_argument("limit")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("connected", help="print whether a limit is connected")
    p.add_argument("limit")
    p.set_defaults(func=cmd_connected)

    p = sub.add_parser("fingerprint", help="density fingerprint of a limit")
    p.add_argument("limit")
    p.add_argument("--k", type=int, default=4, help="catalog size (default 4)")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_fingerprint)

    p = sub.add_parser("sample", help="sample a random graph from a limit")
    p.add_argument("limit")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=_seed_type, required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("cutnorm", help="exact cut-norm distance of two graphs")
    p.add_argument("graph_a")
    p.add_argument("graph_b")
    p.set_defaults(func=cmd_cutnorm)

    p = sub.add_parser("mincut", help="balanced minimum cut of a graph")
    p.add_argument("graph")
    p.add_argument("--delta", type=float, default=0.3)
    p.add_argument("--seed", type=_seed_type, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_mincut)

    p = sub.add_parser("experiment", help="run a Monte Carlo experiment")
    p.add_argument("kind", choices=["components", "cut", "sum-convergence", "fingerprint"])
    p.add_argument("config", help="experiment config JSON file")
    p.add_argument("--seed", type=_seed_type, required=True)
    p.add_argument("--reps", type=int, default=None, help="override the config's replicate count")
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=cmd_experiment)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on bad usage, matching the input-error code
        return exc.code if isinstance(exc.code, int) else EXIT_INPUT
    try:
        return args.func(args)
    except EnumerationBudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except InvariantError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (ValueError, KeyError, TypeError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def entrypoint() -> None:
    raise SystemExit(main())
