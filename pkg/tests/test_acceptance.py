"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines live. Exact algebraic identities are checked at 1e-12; Monte Carlo
trend checks run at their stated sample sizes, replicate counts and
tolerances, all from one fixed seed. Every stochastic criterion is
re-executed in the determinism criterion and must reproduce its report
byte for byte.
"""

from __future__ import annotations

import math
import time

import pytest

from graphlim.catalog import enumerate_connected
from graphlim.cuts import _heuristic_stages, min_balanced_cut_exact, _pack_components
from graphlim.experiments import (
    ExperimentConfig,
    run_components_experiment,
    run_sum_convergence_experiment,
)
from graphlim.graphs import (
    complete_graph,
    direct_sum_graphs,
    hom_density_graph,
)
from graphlim.kernels import (
    constant_kernel,
    decompose_kernel,
    direct_sum_kernels,
    fingerprint,
    hom_density_kernel,
    is_connected_kernel,
)
from graphlim.limits import Step, Sum, Zero, realize
from graphlim.rng import derive_seed, generator
from graphlim.sampling import sample_graph, subgraph_frequency
from graphlim.cuts import perturb, balanced_cut_heuristic

from conftest import random_graph, random_kernel, subset_connected_oracle

SEED = 20260810
EXACT_TOL = 1e-12

TWO_PART_LIMIT = Sum(terms=(
    (0.6, Step(constant_kernel(0.5))),
    (0.3, Step(constant_kernel(0.7))),
))
EQUAL_SPLIT_LIMIT = Sum(terms=(
    (0.5, Step(constant_kernel(0.5))),
    (0.5, Step(constant_kernel(0.5))),
))


def announce(number: int, ok: bool, detail: str) -> None:
    print(f"ACCEPTANCE {number:2d} [{'PASS' if ok else 'FAIL'}] {detail}")


def graph_pair_corpus():
    """100 seeded random graph pairs with 1 <= n1, n2 <= 8."""
    pairs = []
    for i in range(100):
        gen = generator(derive_seed(SEED, i))
        n1 = int(gen.integers(1, 9))
        n2 = int(gen.integers(1, 9))
        p = float(gen.uniform(0.2, 0.8))
        pairs.append((
            random_graph(n1, p, derive_seed(SEED, 1000 + i)),
            random_graph(n2, p, derive_seed(SEED, 2000 + i)),
        ))
    return pairs


def random_sum_corpus():
    """50 seeded random direct sums with <= 4 terms of <= 3 blocks each."""
    sums = []
    for i in range(50):
        gen = generator(derive_seed(SEED, 3000 + i))
        count = int(gen.integers(1, 5))
        raw = gen.random(count) + 0.1
        total = float(gen.uniform(0.3, 1.0))
        alphas = raw / raw.sum() * total
        terms = tuple(
            (float(alphas[t]), random_kernel(3, derive_seed(SEED, 4000 + 10 * i + t)))
            for t in range(count)
        )
        sums.append(terms)
    return sums


def test_criterion_1_two_term_union_identity():
    start = time.perf_counter()
    catalog = enumerate_connected(4)
    worst = 0.0
    for g1, g2 in graph_pair_corpus():
        union = direct_sum_graphs(g1, g2)
        for f in catalog.graphs:
            lhs = hom_density_graph(f, union)
            rhs = (
                (g1.n / union.n) ** f.n * hom_density_graph(f, g1)
                + (g2.n / union.n) ** f.n * hom_density_graph(f, g2)
            )
            worst = max(worst, abs(lhs - rhs))
    elapsed = time.perf_counter() - start
    ok = worst <= EXACT_TOL and elapsed < 10
    announce(1, ok, f"two-term union density identity: max |diff| = {worst:.2e}, {elapsed:.1f}s")
    assert worst <= EXACT_TOL
    assert elapsed < 10


def test_criterion_2_pattern_multiplicativity():
    start = time.perf_counter()
    catalog = enumerate_connected(3)
    worst = 0.0
    for g1, g2 in graph_pair_corpus():
        g = direct_sum_graphs(g1, g2)
        for f1 in catalog.graphs:
            for f2 in catalog.graphs:
                combined = direct_sum_graphs(f1, f2)
                lhs = hom_density_graph(combined, g)
                rhs = hom_density_graph(f1, g) * hom_density_graph(f2, g)
                worst = max(worst, abs(lhs - rhs))
    elapsed = time.perf_counter() - start
    ok = worst <= EXACT_TOL and elapsed < 10
    announce(2, ok, f"pattern multiplicativity: max |diff| = {worst:.2e}, {elapsed:.1f}s")
    assert worst <= EXACT_TOL
    assert elapsed < 10


def test_criterion_3_realized_vs_weighted_recursion():
    start = time.perf_counter()
    catalog = enumerate_connected(4)
    worst = 0.0
    for terms in random_sum_corpus():
        realized = direct_sum_kernels(terms)
        for f in catalog.graphs:
            lhs = hom_density_kernel(f, realized)
            rhs = sum(alpha**f.n * hom_density_kernel(f, k) for alpha, k in terms)
            worst = max(worst, abs(lhs - rhs))
    elapsed = time.perf_counter() - start
    ok = worst <= EXACT_TOL and elapsed < 30
    announce(3, ok, f"realized vs weighted-sum densities: max |diff| = {worst:.2e}, {elapsed:.1f}s")
    assert worst <= EXACT_TOL
    assert elapsed < 30


def test_criterion_4_decomposition_round_trip():
    start = time.perf_counter()
    catalog = enumerate_connected(4)
    worst = 0.0
    for terms in random_sum_corpus():
        kernel = direct_sum_kernels(terms)
        decomposition = decompose_kernel(kernel)
        for _, part in decomposition.parts:
            assert is_connected_kernel(part)
            assert subset_connected_oracle(part)
        resum = direct_sum_kernels(decomposition.parts)
        original = fingerprint(kernel, catalog)
        rebuilt = fingerprint(resum, catalog)
        for a, b in zip(original.values, rebuilt.values):
            worst = max(worst, abs(a - b))
    elapsed = time.perf_counter() - start
    ok = worst <= EXACT_TOL and elapsed < 30
    announce(4, ok, f"decompose/re-sum fingerprint round trip: max |diff| = {worst:.2e}, {elapsed:.1f}s")
    assert worst <= EXACT_TOL
    assert elapsed < 30


# ---------------------------------------------------------------------------
# Stochastic criteria; each has a make_* used again by the determinism check
# ---------------------------------------------------------------------------

def make_components_report():
    cfg = ExperimentConfig(
        limit=TWO_PART_LIMIT, n_values=(2000,), reps=50, seed=derive_seed(SEED, 5)
    )
    return run_components_experiment(cfg)


def make_edge_case_reports():
    connected_cfg = ExperimentConfig(
        limit=Step(constant_kernel(0.5)), n_values=(2000,), reps=10,
        seed=derive_seed(SEED, 6),
    )
    zero_cfg = ExperimentConfig(
        limit=Zero(), n_values=(2000,), reps=5, seed=derive_seed(SEED, 7)
    )
    return run_components_experiment(connected_cfg), run_components_experiment(zero_cfg)


def make_triangle_frequency():
    return subgraph_frequency(
        constant_kernel(0.5), complete_graph(3), 3, 10_000, derive_seed(SEED, 8)
    )


def make_cut_densities(limit, noise_add: bool, tag: int) -> list[float]:
    kernel = realize(limit)
    n, reps = 1000, 20
    densities = []
    for r in range(reps):
        rep_seed = derive_seed(derive_seed(SEED, tag), r)
        g = sample_graph(kernel, n, derive_seed(rep_seed, 0)).graph
        if noise_add:
            g = perturb(g, 1.0 / n, 0.0, derive_seed(rep_seed, 1))
        result = balanced_cut_heuristic(g, 0.3, derive_seed(rep_seed, 2))
        densities.append(result.density)
    return densities


def make_sum_convergence_report():
    cfg = ExperimentConfig(
        limit=Step(constant_kernel(1.0)), limit_b=Step(constant_kernel(0.5)),
        n_values=(400,), reps=50, seed=derive_seed(SEED, 9), abs_tolerance=0.02,
    )
    return run_sum_convergence_experiment(cfg, complete_graph(2), alpha=0.5)


@pytest.fixture(scope="module")
def components_report():
    return make_components_report()


@pytest.fixture(scope="module")
def edge_case_reports():
    return make_edge_case_reports()


@pytest.fixture(scope="module")
def triangle_frequency():
    return make_triangle_frequency()


@pytest.fixture(scope="module")
def cut_densities():
    return (
        make_cut_densities(EQUAL_SPLIT_LIMIT, True, 10),
        make_cut_densities(Step(constant_kernel(0.3)), False, 11),
    )


@pytest.fixture(scope="module")
def sum_convergence_report():
    return make_sum_convergence_report()


def test_criterion_5_component_structure(components_report):
    start = time.perf_counter()
    row = components_report.rows[0]
    largest = row.estimates["largest_fraction"]
    second = row.estimates["component_densities"][1]
    isolated = row.estimates["isolated_fraction"]
    vertex1 = row.estimates["vertex1_isolated_rate"]
    checks = [
        ("largest", largest, 0.6, 0.03),
        ("second", second, 0.3, 0.03),
        ("isolated", isolated, 0.1, 0.03),
        ("vertex1", vertex1, 0.1, 0.05),
    ]
    ok = all(abs(value - target) <= tol for _, value, target, tol in checks)
    detail = ", ".join(f"{name} {value:.4f} (target {target})" for name, value, target, _ in checks)
    announce(5, ok, f"component structure at n=2000: {detail}")
    for name, value, target, tol in checks:
        assert abs(value - target) <= tol, (name, value, target)
    assert time.perf_counter() - start < 300


def test_criterion_6_largest_component_edge_cases(edge_case_reports):
    connected_report, zero_report = edge_case_reports
    largest = connected_report.rows[0].estimates["largest_fraction"]
    zero_largest = zero_report.rows[0].estimates["largest_fraction"]
    ok = largest >= 0.99 and zero_largest == 1 / 2000
    announce(6, ok, f"edge cases: dense mean {largest:.5f} >= 0.99, empty mean = {zero_largest} = 1/n")
    assert largest >= 0.99
    assert zero_largest == 1 / 2000


def test_criterion_7_subgraph_probability(triangle_frequency):
    stderr = (0.125 * 0.875 / 10_000) ** 0.5
    diff = abs(triangle_frequency - 0.125)
    ok = diff <= 4 * stderr
    announce(7, ok, f"triangle containment frequency {triangle_frequency:.4f} vs 0.125 "
                    f"(|diff| = {diff:.4f} <= {4 * stderr:.4f})")
    assert diff <= 4 * stderr


def test_criterion_8_cut_dichotomy(cut_densities):
    start = time.perf_counter()
    split_densities, dense_densities = cut_densities
    low = sum(1 for d in split_densities if d <= 0.01)
    high = sum(1 for d in dense_densities if d >= 0.04)

    # (c) n <= 16: staged pipeline never beats exact; equality when packing applies
    pipeline_ok = True
    for i in range(20):
        n = 8 + i % 9
        g = random_graph(n, 0.35, derive_seed(SEED, 6000 + i))
        exact = min_balanced_cut_exact(g, 0.25)
        staged = _heuristic_stages(g, 0.25, derive_seed(SEED, 7000 + i))
        if staged.cut_edges < exact.cut_edges:
            pipeline_ok = False
        if _pack_components(g, math.ceil(0.25 * n - 1e-9)) is not None:
            if staged.cut_edges != exact.cut_edges:
                pipeline_ok = False
        # the public heuristic delegates to exact at this size
        if balanced_cut_heuristic(g, 0.25, 0).cut_edges != exact.cut_edges:
            pipeline_ok = False

    elapsed = time.perf_counter() - start
    ok = low >= 19 and high >= 19 and pipeline_ok
    announce(8, ok, f"cut dichotomy: {low}/20 noisy-split runs <= 0.01, "
                    f"{high}/20 dense runs >= 0.04, pipeline vs exact ok = {pipeline_ok}")
    assert low >= 19
    assert high >= 19
    assert pipeline_ok


def test_criterion_9_union_density_convergence(sum_convergence_report):
    row = sum_convergence_report.rows[0]
    mean = row.estimates["density"]
    target = row.targets["density"]
    ok = abs(mean - 0.375) <= 0.02 and target == pytest.approx(0.375, abs=1e-12)
    announce(9, ok, f"union density at n=400: mean {mean:.4f} vs target 0.375")
    assert target == pytest.approx(0.375, abs=1e-12)
    assert abs(mean - 0.375) <= 0.02


def test_criterion_10_determinism(
    components_report, edge_case_reports, triangle_frequency,
    cut_densities, sum_convergence_report,
):
    rerun_components = make_components_report()
    rerun_edges = make_edge_case_reports()
    rerun_frequency = make_triangle_frequency()
    rerun_cuts = (
        make_cut_densities(EQUAL_SPLIT_LIMIT, True, 10),
        make_cut_densities(Step(constant_kernel(0.3)), False, 11),
    )
    rerun_sum = make_sum_convergence_report()

    same = [
        components_report.to_json().encode() == rerun_components.to_json().encode(),
        edge_case_reports[0].to_json().encode() == rerun_edges[0].to_json().encode(),
        edge_case_reports[1].to_json().encode() == rerun_edges[1].to_json().encode(),
        repr(triangle_frequency) == repr(rerun_frequency),
        repr(cut_densities) == repr(rerun_cuts),
        sum_convergence_report.to_json().encode() == rerun_sum.to_json().encode(),
    ]
    ok = all(same)
    announce(10, ok, f"byte-identical reruns for all stochastic criteria: {same}")
    assert all(same)
