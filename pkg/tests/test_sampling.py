"""sampler module: seeded kernel-random graphs and component statistics."""

import numpy as np
import pytest

from graphlim.graphs import complete_graph, empty_graph
from graphlim.kernels import constant_kernel, direct_sum_kernels, zero_kernel
from graphlim.rng import derive_seed, generator
from graphlim.sampling import (
    component_stats,
    density_convergence,
    empirical_density,
    sample_graph,
    subgraph_frequency,
)

from conftest import brute_hom_density, random_graph

K2 = complete_graph(2)
K3 = complete_graph(3)


class TestSampleGraph:
    def test_constant_one_is_complete(self):
        for seed in (0, 1, 99):
            sample = sample_graph(constant_kernel(1.0), 5, seed)
            assert sample.graph.edges == complete_graph(5).edges

    def test_zero_kernel_is_empty(self):
        for seed in (0, 7):
            sample = sample_graph(zero_kernel(), 5, seed)
            assert sample.graph.edge_count == 0

    def test_edge_density_concentrates(self):
        sample = sample_graph(constant_kernel(0.5), 2000, 12345)
        density = sample.graph.edge_count / (2000 * 1999 / 2)
        assert abs(density - 0.5) < 0.01

    def test_determinism(self):
        a = sample_graph(constant_kernel(0.3), 50, 42)
        b = sample_graph(constant_kernel(0.3), 50, 42)
        assert a.graph == b.graph
        assert a.labels == b.labels
        c = sample_graph(constant_kernel(0.3), 50, 43)
        assert c.graph != a.graph

    def test_labels_follow_weights(self):
        w = direct_sum_kernels([(0.7, constant_kernel(1)), (0.3, constant_kernel(1))])
        sample = sample_graph(w, 5000, 7)
        fraction = sum(1 for lab in sample.labels if lab == 0) / 5000
        assert abs(fraction - 0.7) < 0.03

    def test_no_edges_across_parts(self):
        # cross-block values of a direct sum are exactly 0
        w = direct_sum_kernels([(0.5, constant_kernel(0.8)), (0.5, constant_kernel(0.8))])
        for seed in range(5):
            sample = sample_graph(w, 200, seed)
            labels = np.array(sample.labels)
            for i, j in sample.graph.edges:
                assert labels[i] == labels[j]

    def test_invalid_n(self):
        with pytest.raises(ValueError):
            sample_graph(constant_kernel(0.5), 0, 1)

    def test_json_export(self):
        sample = sample_graph(constant_kernel(1.0), 3, 5)
        data = sample.to_json_dict()
        assert data["n"] == 3
        assert data["edges"] == [[0, 1], [0, 2], [1, 2]]
        assert len(data["labels"]) == 3

    def test_edge_array_cache_is_consistent(self):
        sample = sample_graph(constant_kernel(0.4), 60, 11)
        cached = sample.graph.edge_array
        rebuilt = np.array(sorted(sample.graph.edges), dtype=np.int64)
        assert np.array_equal(cached, rebuilt)


class TestComponentStats:
    def test_complete_graph(self):
        stats = component_stats(sample_graph(constant_kernel(1.0), 8, 0))
        assert stats.largest_fraction == 1.0
        assert stats.isolated_fraction == 0.0
        assert not stats.vertex1_isolated

    def test_empty_graph(self):
        stats = component_stats(sample_graph(zero_kernel(), 8, 0))
        assert stats.largest_fraction == 1 / 8
        assert stats.isolated_fraction == 1.0
        assert stats.vertex1_isolated
        assert stats.sorted_densities == tuple([1 / 8] * 8)

    def test_two_part_limit_monte_carlo(self):
        w = direct_sum_kernels(
            [(0.6, constant_kernel(0.5)), (0.3, constant_kernel(0.7))]
        )
        largest, second, isolated = [], [], []
        for r in range(50):
            stats = component_stats(sample_graph(w, 2000, derive_seed(99, r)))
            largest.append(stats.largest_fraction)
            second.append(stats.sorted_densities[1])
            isolated.append(stats.isolated_fraction)
        assert abs(np.mean(largest) - 0.6) < 0.05
        assert abs(np.mean(second) - 0.3) < 0.05
        assert abs(np.mean(isolated) - 0.1) < 0.03

    def test_exchangeability_proxy(self):
        # relabeling the sample by a random permutation leaves all
        # computed statistics unchanged, exactly
        from graphlim.graphs import Graph

        w = direct_sum_kernels([(0.5, constant_kernel(0.6)), (0.3, constant_kernel(0.9))])
        for seed in range(5):
            sample = sample_graph(w, 150, seed)
            perm = generator(derive_seed(seed, 77)).permutation(150)
            relabeled = Graph.from_edges(
                150, [(int(perm[i]), int(perm[j])) for i, j in sample.graph.edges]
            )
            labels = tuple(int(x) for x in np.argsort(perm))  # placeholder labels
            from graphlim.sampling import LabeledSample

            stats_a = component_stats(sample)
            stats_b = component_stats(LabeledSample(graph=relabeled, labels=labels))
            assert stats_a.sorted_densities == stats_b.sorted_densities
            assert stats_a.largest_fraction == stats_b.largest_fraction
            assert stats_a.isolated_fraction == stats_b.isolated_fraction


class TestSubgraphFrequency:
    def test_empty_pattern_always_contained(self):
        assert subgraph_frequency(constant_kernel(0.2), empty_graph(2), 2, 50, 1) == 1.0

    def test_k2_frequency_near_p(self):
        p = 0.35
        freq = subgraph_frequency(constant_kernel(p), K2, 2, 10_000, 3)
        stderr = (p * (1 - p) / 10_000) ** 0.5
        assert abs(freq - p) < 4 * stderr

    def test_k3_frequency_near_cube(self):
        freq = subgraph_frequency(constant_kernel(0.5), K3, 3, 10_000, 4)
        stderr = (0.125 * 0.875 / 10_000) ** 0.5
        assert abs(freq - 0.125) < 4 * stderr

    def test_size_mismatch(self):
        with pytest.raises(ValueError):
            subgraph_frequency(constant_kernel(0.5), K3, 4, 10, 1)


class TestEmpiricalDensity:
    def test_matches_brute_force_small(self):
        for seed in range(6):
            g = random_graph(7, 0.5, seed)
            for f in (K2, K3):
                assert empirical_density(f, g) == pytest.approx(
                    brute_hom_density(f, g), abs=1e-12
                )

    def test_small_patterns_allowed_beyond_budget(self):
        g = random_graph(500, 0.3, 9)  # 500**3 > 1e8, but v(f)=3 is closed-form
        value = empirical_density(K3, g)
        assert 0.0 <= value <= 1.0

    def test_mapping_estimate_close_to_exact(self):
        from graphlim.graphs import Graph

        g = random_graph(12, 0.5, 10)
        f = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3)])  # 4-cycle
        exact = empirical_density(f, g)
        estimate = empirical_density(f, g, seed=5, mapping_samples=400_000)
        assert abs(estimate - exact) < 0.01

    def test_large_pattern_without_seed_is_error(self):
        from graphlim.errors import EnumerationBudgetError
        from graphlim.graphs import path_graph

        g = random_graph(200, 0.4, 11)
        with pytest.raises(EnumerationBudgetError):
            empirical_density(path_graph(5), g)  # 200**5 > 1e8, no seed


class TestDensityConvergence:
    def test_k2_constant_half(self):
        mean, stderr = density_convergence(constant_kernel(0.5), K2, 200, 30, 21)
        assert abs(mean - 0.5) < 0.02
        assert stderr < 0.01

    def test_zero_kernel_exactly_zero(self):
        mean, stderr = density_convergence(zero_kernel(), K2, 100, 5, 22)
        assert mean == 0.0
        assert stderr == 0.0

    def test_split_sum_of_complete(self):
        w = direct_sum_kernels([(0.5, constant_kernel(1)), (0.5, constant_kernel(1))])
        mean, _ = density_convergence(w, K3, 300, 20, 23)
        assert abs(mean - 0.25) < 0.02

    def test_small_pattern_mean_within_four_deviations(self):
        # empirical mean of t(f, G(n, w)) vs t(f, w) for patterns on <= 3
        # vertices, within four per-replicate standard deviations: the
        # estimator carries an O(1/n) bias from non-injective maps, so the
        # per-replicate spread (same order) is the meaningful yardstick
        from graphlim.kernels import hom_density_kernel
        from graphlim.graphs import path_graph

        w = constant_kernel(0.4)
        reps = 200
        for f in (K2, path_graph(3), K3):
            target = hom_density_kernel(f, w)
            mean, stderr = density_convergence(w, f, 200, reps, 24)
            per_rep_std = stderr * reps**0.5
            assert abs(mean - target) <= 4 * per_rep_std

    def test_mean_matches_exact_finite_size_expectation(self):
        # sharp check: E[t(f, G(n, w))] decomposes over injective and
        # coincident assignments. For constant w = p and patterns on <= 3
        # vertices (oracle, counting which coincidences need loops):
        #   K2: p (n-1)/n
        #   P3: p^2 (n-1)(n-2)/n^2 + p (n-1)/n^2   (endpoints may coincide)
        #   K3: p^3 (n-1)(n-2)/n^2
        from graphlim.graphs import path_graph

        p, n, reps = 0.4, 200, 200
        expectations = {
            "K2": p * (n - 1) / n,
            "P3": p**2 * (n - 1) * (n - 2) / n**2 + p * (n - 1) / n**2,
            "K3": p**3 * (n - 1) * (n - 2) / n**2,
        }
        w = constant_kernel(p)
        for f, name in ((K2, "K2"), (path_graph(3), "P3"), (K3, "K3")):
            mean, stderr = density_convergence(w, f, n, reps, 24)
            assert abs(mean - expectations[name]) <= 5 * max(stderr, 1e-9)
