import math

import numpy as np
import pytest

from enetgraph._rng import derive_rng
from enetgraph.enet import PenaltySpec
from enetgraph.graphs import Graph, star_graph
from enetgraph.models import build_gmrf, build_ising, constant
from enetgraph.neighborhoods import (
    NeighborhoodEstimate,
    VoteMatrix,
    default_lambda1,
    estimate_all_neighborhoods,
    estimate_neighborhood,
    exact_vote_matrix,
    normalize_symmetrize,
    pair_neighborhood,
    read_neighborhoods,
    read_vote_matrix,
    reconstruct_edges,
    select_neighbors,
    symmetrize,
    vote_matrix,
    vote_neighborhoods,
    write_neighborhoods,
    write_vote_matrix,
)
from enetgraph.samplers import SampleMatrix, sample_gaussian

K2 = Graph(p=2, edges=frozenset({(0, 1)}))


def _gmrf_samples(g, n, seed, coupling=0.5):
    return sample_gaussian(build_gmrf(g, coupling=coupling), n, derive_rng(seed, "sample", 0, 0))


class TestEstimateNeighborhood:
    def test_two_node_recovery(self):
        s = _gmrf_samples(K2, 2000, 0)
        pen = PenaltySpec(lambda1=default_lambda1(s))
        n0 = estimate_neighborhood(s, 0, pen)
        n1 = estimate_neighborhood(s, 1, pen)
        assert n0.neighbors == {1} and n1.neighbors == {0}

    def test_independent_columns_mostly_empty(self):
        g = Graph(p=6, edges=frozenset())
        hits = 0
        for seed in range(10):
            s = _gmrf_samples(g, 400, seed)
            pen = PenaltySpec(lambda1=4 * default_lambda1(s))  # moderate shrinkage
            ests = estimate_all_neighborhoods(s, pen)
            if all(not e.neighbors for e in ests):
                hits += 1
        assert hits >= 9

    def test_constant_column_rejected(self):
        data = np.ones((50, 3))
        data[:, :2] = np.random.default_rng(0).standard_normal((50, 2))
        s = SampleMatrix(data=data, kind="real")
        with pytest.raises(ValueError, match="constant"):
            estimate_neighborhood(s, 2, PenaltySpec(lambda1=0.1))

    def test_ising_neighborhood(self):
        from enetgraph.samplers import ChainConfig, swendsen_wang_sample

        g = star_graph(1, 3)
        m = build_ising(g, constant(0.25))
        s = swendsen_wang_sample(m, 3000, ChainConfig(burn_in=100, thin=2),
                                 derive_rng(2, "sample", 0, 0))
        pen = PenaltySpec(lambda1=default_lambda1(s))
        hub = estimate_neighborhood(s, 0, pen)
        assert hub.neighbors == {1, 2, 3}

    def test_degree_selection(self):
        g = star_graph(1, 4)
        s = _gmrf_samples(g, 1200, 3)
        est = estimate_neighborhood(s, 0, PenaltySpec(lambda1=0.0), selection="degree", degree=4)
        assert est.neighbors == {1, 2, 3, 4}

    def test_unknown_selection_mode(self):
        s = _gmrf_samples(K2, 100, 0)
        with pytest.raises(ValueError):
            estimate_neighborhood(s, 0, PenaltySpec(lambda1=0.1), selection="aic")

    def test_self_neighbor_rejected(self):
        with pytest.raises(ValueError):
            NeighborhoodEstimate(node=0, neighbors=frozenset({0}), method="single")


class TestReconstructEdges:
    def test_rule_definitions(self):
        ests = [
            NeighborhoodEstimate(node=0, neighbors=frozenset({1}), method="single"),
            NeighborhoodEstimate(node=1, neighbors=frozenset(), method="single"),
        ]
        assert reconstruct_edges(ests, "and") == frozenset()
        assert reconstruct_edges(ests, "or") == frozenset({(0, 1)})

    def test_consistent_estimates_and_equals_or(self):
        g = star_graph(2, 2)
        ests = [
            NeighborhoodEstimate(node=v, neighbors=frozenset(g.neighbors(v)), method="single")
            for v in range(g.p)
        ]
        assert reconstruct_edges(ests, "and") == reconstruct_edges(ests, "or") == g.edges

    def test_and_subset_of_or_random(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            p = 8
            ests = []
            for v in range(p):
                nbrs = frozenset(
                    int(u) for u in rng.choice(p, size=rng.integers(0, 4), replace=False)
                    if u != v
                )
                ests.append(NeighborhoodEstimate(node=v, neighbors=nbrs, method="single"))
            assert reconstruct_edges(ests, "and") <= reconstruct_edges(ests, "or")

    def test_unknown_rule(self):
        with pytest.raises(ValueError):
            reconstruct_edges([], "xor")


class TestPairNeighborhood:
    def test_disjoint_stars_cover_leaves(self):
        # vertices 0 and 5 are centers of two disjoint 4-leaf stars on p=10
        edges = {(0, j) for j in (1, 2, 3, 4)} | {(5, j) for j in (6, 7, 8, 9)}
        g = Graph(p=10, edges=frozenset(edges))
        s = _gmrf_samples(g, 4000, 1)
        pen = PenaltySpec(lambda1=default_lambda1(s))
        est = pair_neighborhood(s, 0, 5, pen)
        assert est >= {1, 2, 3, 4, 6, 7, 8, 9}

    def test_isolated_pair_mostly_empty(self):
        g = Graph(p=8, edges=frozenset({(2, 3), (4, 5)}))
        hits = 0
        for seed in range(10):
            s = _gmrf_samples(g, 500, seed)
            pen = PenaltySpec(lambda1=4 * default_lambda1(s))  # moderate shrinkage
            if not pair_neighborhood(s, 0, 7, pen):
                hits += 1
        assert hits >= 9

    def test_rejects_discrete_and_degenerate_pairs(self):
        real = _gmrf_samples(K2, 50, 0)
        with pytest.raises(ValueError):
            pair_neighborhood(real, 0, 0, PenaltySpec(lambda1=0.1))
        disc = SampleMatrix(data=np.ones((10, 4), dtype=int), kind="state", k=3)
        with pytest.raises(ValueError):
            pair_neighborhood(disc, 0, 1, PenaltySpec(lambda1=0.1))


class TestVoteMatrices:
    def test_type_invariants(self):
        with pytest.raises(ValueError):
            VoteMatrix(counts=np.ones((2, 3)), variant="L")
        with pytest.raises(ValueError):
            VoteMatrix(counts=np.eye(3), variant="L")

    def test_exact_votes_neighbor_multiplicity(self):
        g = star_graph(1, 4)
        vm = exact_vote_matrix(g)
        for i, j in g.edges:
            assert vm.counts[i, j] == g.p - 2
        assert np.all(vm.counts <= g.p - 2)
        assert np.all(vm.counts >= 0)

    def test_estimated_vote_bounds(self):
        g = star_graph(1, 5)
        s = _gmrf_samples(g, 800, 2)
        vm = vote_matrix(s, PenaltySpec(lambda1=default_lambda1(s)))
        assert np.all(vm.counts >= 0) and np.all(vm.counts <= g.p - 2)
        assert np.all(np.diag(vm.counts) == 0)

    def test_symmetrize_rules(self):
        counts = np.array([[0.0, 4.0, 2.0], [4.0, 0.0, 1.0], [2.0, 1.0, 0.0]])
        vm = VoteMatrix(counts=counts, variant="L")
        s = symmetrize(vm)
        assert np.array_equal(s.counts, 2 * counts)  # symmetric L -> S = 2L
        sbar = normalize_symmetrize(vm)
        assert np.all((sbar.counts >= 0) & (sbar.counts <= 1))
        assert np.array_equal(s.counts, s.counts.T)
        assert np.array_equal(sbar.counts, sbar.counts.T)

    def test_row_max_normalization(self):
        counts = np.array([[0.0, 4.0, 1.0], [2.0, 0.0, 2.0], [0.0, 0.0, 0.0]])
        lbar_expected = np.array([[0.0, 1.0, 0.25], [1.0, 0.0, 1.0], [0.0, 0.0, 0.0]])
        sbar = normalize_symmetrize(VoteMatrix(counts=counts, variant="L"))
        assert np.allclose(sbar.counts, 0.5 * (lbar_expected + lbar_expected.T))

    def test_variant_guards(self):
        vm = VoteMatrix(counts=np.zeros((3, 3)), variant="S")
        with pytest.raises(ValueError):
            symmetrize(vm)
        with pytest.raises(ValueError):
            normalize_symmetrize(vm)

    def test_error_free_degree_recovery_all_variants(self):
        rng = derive_rng(8, "graph")
        from enetgraph.graphs import random_bounded_degree

        for g in (star_graph(1, 6), star_graph(3, 3), random_bounded_degree(12, 4, 18, rng)):
            vm = exact_vote_matrix(g)
            degrees = g.degrees()
            for variant in (vm, symmetrize(vm), normalize_symmetrize(vm)):
                ests = vote_neighborhoods(variant, mode="degree", degrees=degrees)
                assert reconstruct_edges(ests, "and") == g.edges

    def test_mutual_full_adjacency_pathology(self):
        # 0 and 1 are each adjacent to all of {2,3,4} but not to each other;
        # error-free votes then rank each as the other's neighbor, so
        # degree-threshold recovery is documented to fail here.
        edges = {(0, v) for v in (2, 3, 4)} | {(1, v) for v in (2, 3, 4)}
        g = Graph(p=5, edges=frozenset(edges))
        vm = exact_vote_matrix(g)
        assert vm.counts[0, 1] == g.p - 2  # 1 gets full votes in 0's row
        ests = vote_neighborhoods(vm, mode="degree", degrees=g.degrees())
        assert reconstruct_edges(ests, "and") != g.edges


class TestSelectNeighbors:
    def test_degree_mode_tie_break(self):
        scores = np.full(6, 3.0)
        assert select_neighbors(scores, "degree", degree=3) == {0, 1, 2}

    def test_zero_scores_never_selected(self):
        scores = np.array([2.0, 0.0, 1.0, 0.0])
        assert select_neighbors(scores, "degree", degree=4) == {0, 2}
        assert select_neighbors(np.zeros(4), "degree", degree=2) == frozenset()

    def test_top_mode(self):
        scores = np.array([5.0, 1.0, 4.0, 2.0])
        assert select_neighbors(scores, "top", top=2) == {0, 2}

    def test_jump_cut_on_clear_drop(self):
        scores = np.array([10.0, 9.5, 9.0, 2.0, 1.9, 1.8])
        assert select_neighbors(scores, "jump", d_max=2) == {0, 1, 2}

    def test_jump_fallback_without_drop(self):
        scores = np.array([5.0, 5.0, 5.0, 5.0, 5.0])
        assert select_neighbors(scores, "jump", d_max=2) == frozenset()
        assert select_neighbors(scores, "jump", d_max=2, fallback_degree=2) == {0, 1}

    def test_mode_argument_validation(self):
        with pytest.raises(ValueError):
            select_neighbors(np.ones(3), "degree")
        with pytest.raises(ValueError):
            select_neighbors(np.ones(3), "top")
        with pytest.raises(ValueError):
            select_neighbors(np.ones(3), "banana")


class TestPipelineDeterminism:
    def test_same_inputs_same_edges(self):
        g = star_graph(1, 6)
        s = _gmrf_samples(g, 600, 4)
        pen = PenaltySpec(lambda1=default_lambda1(s))
        a = reconstruct_edges(estimate_all_neighborhoods(s, pen), "and")
        b = reconstruct_edges(estimate_all_neighborhoods(s, pen), "and")
        assert a == b


class TestSerialization:
    def test_neighborhoods_round_trip(self, tmp_path):
        ests = [
            NeighborhoodEstimate(node=0, neighbors=frozenset({1, 2}), method="single"),
            NeighborhoodEstimate(node=1, neighbors=frozenset({0}), method="single"),
            NeighborhoodEstimate(node=2, neighbors=frozenset(), method="single"),
        ]
        write_neighborhoods(ests, tmp_path / "n.txt")
        assert (tmp_path / "n.txt").read_text() == "1: 2 3\n2: 1\n3:\n"
        back = read_neighborhoods(tmp_path / "n.txt")
        assert [e.neighbors for e in back] == [e.neighbors for e in ests]

    def test_vote_matrix_round_trip(self, tmp_path):
        vm = exact_vote_matrix(star_graph(1, 3))
        write_vote_matrix(vm, tmp_path / "v.csv")
        back = read_vote_matrix(tmp_path / "v.csv")
        assert np.array_equal(back.counts, vm.counts)
