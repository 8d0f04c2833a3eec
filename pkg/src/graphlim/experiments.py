"""Monte Carlo drivers that check the limit theory's quantitative claims
at desk scale and emit structured, regenerable reports.

Every target in a report is computed exactly from the limit algebra,
never hard-coded; every row records the derived seed that regenerates
it; and the pass/fail tolerances are config fields echoed into the
report. The default check is |estimate - target| <= max(4 * stderr,
abs_tolerance).
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .cuts import EXACT_CUT_MAX_VERTICES, balanced_cut_heuristic, min_balanced_cut_exact, perturb
from .errors import InvariantError
from .graphs import Graph, complete_graph, direct_sum_graphs, is_connected_graph
from .catalog import enumerate_connected
from .limits import (
    GraphLimit,
    Zero,
    decompose_limit,
    is_connected_limit,
    largest_component_weight,
    limit_density,
    limit_from_json_dict,
    realize,
)
from .rng import check_seed, derive_seed
from .sampling import (
    component_stats,
    density_convergence,
    empirical_density,
    sample_graph,
    subgraph_frequency,
)

IDENTITY_TOLERANCE = 1e-12


@dataclass(frozen=True)
class ExperimentConfig:
    """Shared configuration for all experiment drivers.

    `limit` is the limit under study; `limit_b` is the second summand used
    only by the sum-convergence driver. `noise` is an (add_rate, del_rate)
    pair applied to every sample in the cut driver. `cut_threshold` is the
    declared lower bound for balanced-cut densities of connected limits
    (None computes edge_density * delta * (1 - delta) / 2), and
    `cut_disconnected_bound` is what "vanishing" means for disconnected
    limits at the largest sampled n.
    """

    limit: GraphLimit
    n_values: tuple[int, ...]
    reps: int
    seed: int
    delta: float = 0.3
    catalog_k: int = 4
    noise: tuple[float, float] = (0.0, 0.0)
    limit_b: GraphLimit = field(default_factory=Zero)
    abs_tolerance: float = 0.03
    stderr_multiplier: float = 4.0
    cut_threshold: float | None = None
    cut_disconnected_bound: float = 0.01
    freq_reps: int = 10_000

    def __post_init__(self) -> None:
        object.__setattr__(self, "n_values", tuple(int(n) for n in self.n_values))
        object.__setattr__(self, "noise", tuple(float(x) for x in self.noise))
        check_seed(self.seed)
        if not self.n_values:
            raise ValueError("n_values must be nonempty")
        if any(n < 1 for n in self.n_values):
            raise ValueError("sample sizes must be positive")
        if list(self.n_values) != sorted(self.n_values):
            raise ValueError("n_values must be ascending")
        if self.reps < 1:
            raise ValueError(f"reps must be positive, got {self.reps}")
        if len(self.noise) != 2:
            raise ValueError("noise must be an (add_rate, del_rate) pair")

    def to_json_dict(self) -> dict:
        return {
            "limit": self.limit.to_json_dict(),
            "limit_b": self.limit_b.to_json_dict(),
            "n_values": list(self.n_values),
            "reps": self.reps,
            "seed": self.seed,
            "delta": self.delta,
            "catalog_k": self.catalog_k,
            "noise": list(self.noise),
            "abs_tolerance": self.abs_tolerance,
            "stderr_multiplier": self.stderr_multiplier,
            "cut_threshold": self.cut_threshold,
            "cut_disconnected_bound": self.cut_disconnected_bound,
            "freq_reps": self.freq_reps,
        }

    @staticmethod
    def from_json_dict(data: dict, seed: int) -> "ExperimentConfig":
        if not isinstance(data, dict) or "limit" not in data or "n_values" not in data:
            raise ValueError('experiment config needs at least "limit" and "n_values"')
        kwargs = {
            "limit": limit_from_json_dict(data["limit"]),
            "n_values": tuple(data["n_values"]),
            "reps": int(data.get("reps", 20)),
            "seed": seed,
        }
        if "limit_b" in data:
            kwargs["limit_b"] = limit_from_json_dict(data["limit_b"])
        for name in ("delta", "abs_tolerance", "stderr_multiplier",
                     "cut_disconnected_bound"):
            if name in data:
                kwargs[name] = float(data[name])
        for name in ("catalog_k", "freq_reps"):
            if name in data:
                kwargs[name] = int(data[name])
        if "noise" in data:
            kwargs["noise"] = tuple(data["noise"])
        if data.get("cut_threshold") is not None:
            kwargs["cut_threshold"] = float(data["cut_threshold"])
        return ExperimentConfig(**kwargs)


@dataclass(frozen=True)
class ReportRow:
    """One sample-size row: estimates with errors, exact targets, verdicts."""

    n: int
    seed: int
    estimates: dict
    stderrs: dict
    targets: dict
    tolerances: dict
    passed: dict

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "seed": self.seed,
            "estimates": self.estimates,
            "stderrs": self.stderrs,
            "targets": self.targets,
            "tolerances": self.tolerances,
            "passed": self.passed,
        }


@dataclass(frozen=True)
class ExperimentReport:
    kind: str
    config: ExperimentConfig
    rows: tuple[ReportRow, ...]
    summary: dict

    def passed(self) -> bool:
        row_flags = all(flag for row in self.rows for flag in row.passed.values())
        summary_flags = all(
            value for key, value in self.summary.items() if isinstance(value, bool)
        )
        return row_flags and summary_flags

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "config": self.config.to_json_dict(),
            "rows": [row.to_json_dict() for row in self.rows],
            "summary": self.summary,
            "passed": self.passed(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, indent=2) + "\n"

    def to_csv(self) -> str:
        """Long-form per-metric rows; list metrics get an index suffix."""
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(
            ["n", "seed", "metric", "estimate", "stderr", "target", "tolerance", "passed"]
        )

        def fmt(value) -> str:
            if value is None:
                return ""
            if isinstance(value, bool):
                return str(value).lower()
            if isinstance(value, float):
                return format(value, ".12g")
            return str(value)

        for row in self.rows:
            for name in sorted(row.estimates):
                est = row.estimates[name]
                items = enumerate(est) if isinstance(est, list) else [(None, est)]
                for idx, value in items:
                    label = name if idx is None else f"{name}_{idx}"

                    def pick(table):
                        entry = table.get(name)
                        if idx is not None and isinstance(entry, list):
                            return entry[idx] if idx < len(entry) else None
                        return entry

                    writer.writerow([
                        row.n, row.seed, label, fmt(value), fmt(pick(row.stderrs)),
                        fmt(pick(row.targets)), fmt(pick(row.tolerances)),
                        fmt(row.passed.get(name)),
                    ])
        return out.getvalue()


def write_report(report: ExperimentReport, path: str, fmt: str = "json") -> None:
    if fmt not in ("json", "csv"):
        raise ValueError(f"format must be json or csv, got {fmt!r}")
    text = report.to_json() if fmt == "json" else report.to_csv()
    with open(path, "w") as handle:
        handle.write(text)


def _tolerance(cfg: ExperimentConfig, stderr: float) -> float:
    return max(cfg.stderr_multiplier * stderr, cfg.abs_tolerance)


def _mean_stderr(values: np.ndarray) -> tuple[float, float]:
    mean = float(values.mean())
    stderr = float(values.std(ddof=1) / math.sqrt(len(values))) if len(values) > 1 else 0.0
    return mean, stderr


# ---------------------------------------------------------------------------
# Drivers
# ---------------------------------------------------------------------------

def run_components_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    """Component structure of samples against the exact decomposition:
    largest-component fraction vs the top part weight, sorted component
    densities vs the part weights, isolated fraction and first-vertex
    isolation vs the deficit."""
    kernel = realize(cfg.limit)
    decomposition = decompose_limit(cfg.limit)
    alphas = list(decomposition.alphas())
    rho = largest_component_weight(cfg.limit)
    deficit = float(decomposition.deficit)
    num_parts = len(alphas)

    rows = []
    for row_idx, n in enumerate(cfg.n_values):
        row_seed = derive_seed(cfg.seed, row_idx)
        largest = np.empty(cfg.reps)
        isolated = np.empty(cfg.reps)
        vertex1 = np.empty(cfg.reps)
        part_densities = np.zeros((cfg.reps, num_parts))
        for r in range(cfg.reps):
            stats = component_stats(sample_graph(kernel, n, derive_seed(row_seed, r)))
            largest[r] = stats.largest_fraction
            isolated[r] = stats.isolated_fraction
            vertex1[r] = 1.0 if stats.vertex1_isolated else 0.0
            top = stats.sorted_densities[:num_parts]
            part_densities[r, : len(top)] = top

        estimates, stderrs, targets, tolerances, passed = {}, {}, {}, {}, {}
        for name, values, target in (
            ("largest_fraction", largest, rho),
            ("isolated_fraction", isolated, deficit),
            ("vertex1_isolated_rate", vertex1, deficit),
        ):
            mean, stderr = _mean_stderr(values)
            tol = _tolerance(cfg, stderr)
            estimates[name] = mean
            stderrs[name] = stderr
            targets[name] = target
            tolerances[name] = tol
            passed[name] = abs(mean - target) <= tol
        if num_parts:
            means, errs, tols = [], [], []
            for i in range(num_parts):
                mean, stderr = _mean_stderr(part_densities[:, i])
                means.append(mean)
                errs.append(stderr)
                tols.append(_tolerance(cfg, stderr))
            estimates["component_densities"] = means
            stderrs["component_densities"] = errs
            targets["component_densities"] = alphas
            tolerances["component_densities"] = tols
            passed["component_densities"] = all(
                abs(m - a) <= t for m, a, t in zip(means, alphas, tols)
            )
        rows.append(ReportRow(n, row_seed, estimates, stderrs, targets, tolerances, passed))

    summary = {"rho": rho, "alphas": alphas, "deficit": deficit}
    return ExperimentReport("components", cfg, tuple(rows), summary)


def run_sum_convergence_experiment(
    cfg: ExperimentConfig, f: Graph, alpha: float
) -> ExperimentReport:
    """Densities of disjoint unions of independent samples of `limit` and
    `limit_b`, sized alpha : (1 - alpha), against the weighted two-term
    target. The exact finite two-term identity is also asserted on every
    sampled pair whenever the densities are exactly computable."""
    if f.edge_count < 1 or not is_connected_graph(f):
        raise ValueError("the test graph must be connected with at least one edge")
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must be in [0, 1], got {alpha}")
    kernel_a = realize(cfg.limit)
    kernel_b = realize(cfg.limit_b)
    target = (
        alpha**f.n * limit_density(f, cfg.limit)
        + (1.0 - alpha) ** f.n * limit_density(f, cfg.limit_b)
    )

    rows = []
    for row_idx, n in enumerate(cfg.n_values):
        n1 = math.floor(alpha * n)
        n2 = n - n1
        if n1 < 1 or n2 < 1:
            raise ValueError(f"split of n={n} at alpha={alpha} leaves an empty part")
        row_seed = derive_seed(cfg.seed, row_idx)
        values = np.empty(cfg.reps)
        for r in range(cfg.reps):
            rep_seed = derive_seed(row_seed, r)
            g1 = sample_graph(kernel_a, n1, derive_seed(rep_seed, 0)).graph
            g2 = sample_graph(kernel_b, n2, derive_seed(rep_seed, 1)).graph
            union = direct_sum_graphs(g1, g2)
            t_union = empirical_density(f, union, seed=derive_seed(rep_seed, 2))
            values[r] = t_union
            _check_union_identity(f, g1, g2, union, t_union)
        mean, stderr = _mean_stderr(values)
        tol = _tolerance(cfg, stderr)
        rows.append(ReportRow(
            n, row_seed,
            estimates={"density": mean},
            stderrs={"density": stderr},
            targets={"density": target},
            tolerances={"density": tol},
            passed={"density": abs(mean - target) <= tol},
        ))

    summary = {"alpha": alpha, "test_graph": f.to_json_dict(), "target": target}
    return ExperimentReport("sum-convergence", cfg, tuple(rows), summary)


def _check_union_identity(
    f: Graph, g1: Graph, g2: Graph, union: Graph, t_union: float
) -> None:
    """Exact finite identity for connected f:
    t(f, g1+g2) = (n1/n)^v t(f, g1) + (n2/n)^v t(f, g2)."""
    exact_possible = f.n <= 3 or union.n**f.n <= 10**8
    if not exact_possible:
        return
    share1 = (g1.n / union.n) ** f.n
    share2 = (g2.n / union.n) ** f.n
    expected = share1 * empirical_density(f, g1) + share2 * empirical_density(f, g2)
    if abs(expected - t_union) > IDENTITY_TOLERANCE:
        raise InvariantError(
            f"disjoint-union density identity violated: {t_union!r} vs {expected!r}"
        )


def run_cut_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    """Balanced-cut densities of noisy samples of the limit.

    Connected limits must stay above the declared threshold at every n;
    disconnected limits must fall to the declared vanishing bound at the
    largest n.
    """
    kernel = realize(cfg.limit)
    connected = is_connected_limit(cfg.limit)
    edge_density = limit_density(complete_graph(2), cfg.limit)
    threshold = (
        cfg.cut_threshold
        if cfg.cut_threshold is not None
        else edge_density * cfg.delta * (1.0 - cfg.delta) / 2.0
    )
    add_rate, del_rate = cfg.noise

    rows = []
    last_n = cfg.n_values[-1]
    for row_idx, n in enumerate(cfg.n_values):
        row_seed = derive_seed(cfg.seed, row_idx)
        densities = np.empty(cfg.reps)
        exact_densities: list[float] = []
        for r in range(cfg.reps):
            rep_seed = derive_seed(row_seed, r)
            g = sample_graph(kernel, n, derive_seed(rep_seed, 0)).graph
            if add_rate > 0 or del_rate > 0:
                g = perturb(g, add_rate, del_rate, derive_seed(rep_seed, 1))
            result = balanced_cut_heuristic(g, cfg.delta, derive_seed(rep_seed, 2))
            densities[r] = result.density
            if n <= EXACT_CUT_MAX_VERTICES:
                exact_densities.append(min_balanced_cut_exact(g, cfg.delta).density)
        mean, stderr = _mean_stderr(densities)
        if connected:
            verdict = mean >= threshold
            target = threshold
        else:
            verdict = mean <= cfg.cut_disconnected_bound if n == last_n else True
            target = 0.0
        estimates = {"cut_density": mean, "densities": [float(x) for x in densities]}
        if exact_densities:
            estimates["exact_densities"] = exact_densities
        rows.append(ReportRow(
            n, row_seed,
            estimates=estimates,
            stderrs={"cut_density": stderr},
            targets={"cut_density": target},
            tolerances={"cut_density": None},
            passed={"cut_density": verdict},
        ))

    summary = {
        "connected": connected,
        "threshold": threshold,
        "disconnected_bound": cfg.cut_disconnected_bound,
    }
    return ExperimentReport("cut", cfg, tuple(rows), summary)


def run_density_fingerprint_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    """Sampled densities and subgraph frequencies against exact targets,
    for every graph in the catalog of size catalog_k."""
    catalog = enumerate_connected(cfg.catalog_k)
    kernel = realize(cfg.limit)
    targets = [limit_density(f, cfg.limit) for f in catalog.graphs]

    rows = []
    for row_idx, n in enumerate(cfg.n_values):
        row_seed = derive_seed(cfg.seed, row_idx)
        density_means, density_errs = [], []
        freqs, freq_errs = [], []
        for i, f in enumerate(catalog.graphs):
            mean, stderr = density_convergence(
                kernel, f, n, cfg.reps, derive_seed(row_seed, i)
            )
            density_means.append(mean)
            density_errs.append(stderr)
            freq = subgraph_frequency(
                kernel, f, f.n, cfg.freq_reps, derive_seed(row_seed, 1000 + i)
            )
            freqs.append(freq)
            freq_errs.append(math.sqrt(max(freq * (1.0 - freq), 0.0) / cfg.freq_reps))
        density_tols = [_tolerance(cfg, e) for e in density_errs]
        freq_tols = [_tolerance(cfg, e) for e in freq_errs]
        rows.append(ReportRow(
            n, row_seed,
            estimates={"density_means": density_means, "subgraph_freqs": freqs},
            stderrs={"density_means": density_errs, "subgraph_freqs": freq_errs},
            targets={"density_means": targets, "subgraph_freqs": targets},
            tolerances={"density_means": density_tols, "subgraph_freqs": freq_tols},
            passed={
                "density_means": all(
                    abs(m - t) <= tol
                    for m, t, tol in zip(density_means, targets, density_tols)
                ),
                "subgraph_freqs": all(
                    abs(q - t) <= tol for q, t, tol in zip(freqs, targets, freq_tols)
                ),
            },
        ))

    summary = {
        "catalog_k": cfg.catalog_k,
        "catalog": [g.to_json_dict() for g in catalog.graphs],
        "targets": targets,
    }
    return ExperimentReport("fingerprint", cfg, tuple(rows), summary)
