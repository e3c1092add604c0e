import math

import numpy as np
import pytest
from scipy import stats as sps

from enetgraph._rng import derive_rng
from enetgraph.graphs import (
    Graph,
    community_graph,
    densify,
    random_bounded_degree,
    read_graph,
    star_graph,
    stats,
    write_graph,
)


class TestGraphType:
    def test_canonical_edges_and_degrees(self):
        g = Graph(p=4, edges=frozenset({(0, 1), (1, 2)}))
        assert g.m == 2
        assert g.has_edge(1, 0) and g.has_edge(2, 1)
        assert list(g.degrees()) == [1, 2, 1, 0]
        assert g.neighbors(1) == {0, 2}

    def test_rejects_self_loops_and_out_of_range(self):
        with pytest.raises(ValueError):
            Graph(p=3, edges=frozenset({(1, 1)}))
        with pytest.raises(ValueError):
            Graph(p=3, edges=frozenset({(0, 3)}))

    def test_adjacency_symmetric_zero_diagonal(self):
        g = star_graph(2, 3)
        a = g.adjacency()
        assert np.array_equal(a, a.T)
        assert np.all(np.diag(a) == 0)


class TestStats:
    def test_complete_graph(self):
        g = Graph(p=5, edges=frozenset((i, j) for i in range(5) for j in range(i + 1, 5)))
        st = stats(g)
        assert st.edge_density == 1.0
        assert st.max_degree == 4
        assert st.avg_degree == 4.0

    def test_empty_graph(self):
        st = stats(Graph(p=10, edges=frozenset()))
        assert st.edge_density == 0.0
        assert st.max_degree == 0

    def test_density_formula_exact(self):
        for g in (star_graph(1, 24), star_graph(6, 4)):
            st = stats(g)
            assert st.edge_density == 2 * g.m / (g.p * (g.p - 1))
            assert st.avg_degree == (g.p - 1) * st.edge_density


class TestStarGraph:
    def test_single_hub(self):
        g = star_graph(1, 24)
        assert (g.p, g.m) == (25, 24)
        st = stats(g)
        assert st.max_degree == 24
        assert st.edge_density == pytest.approx(0.08)
        assert st.avg_degree == pytest.approx(1.92)

    def test_smallest_star(self):
        g = star_graph(1, 1)
        assert (g.p, g.m) == (2, 1)
        assert stats(g).max_degree == 1

    def test_hub_clique(self):
        g = star_graph(6, 4)
        assert (g.p, g.m) == (30, 39)
        st = stats(g)
        assert st.max_degree == 9
        assert st.edge_density == pytest.approx(78 / 870)

    def test_invalid_sizes(self):
        with pytest.raises(ValueError):
            star_graph(0, 3)
        with pytest.raises(ValueError):
            star_graph(1, 0)


class TestDensify:
    def test_supergraph_and_target_density(self):
        g1 = star_graph(1, 24)
        g2 = densify(g1, 0.76, preserve_max_degree=True, rng=derive_rng(5, "graph"))
        assert g1.edges <= g2.edges
        assert stats(g2).edge_density >= 0.76
        assert stats(g2).max_degree == 24

    def test_preserves_max_degree_on_hub_clique(self):
        g = densify(star_graph(6, 4), 0.30, preserve_max_degree=True,
                    rng=derive_rng(5, "graph"))
        assert stats(g).max_degree == 9
        assert stats(g).edge_density >= 0.30

    def test_unreachable_target_names_achievable_maximum(self):
        # max degree 2 on 4 vertices caps the graph at 4 edges (rho = 2/3)
        g = Graph(p=4, edges=frozenset({(0, 1), (1, 2)}))
        with pytest.raises(ValueError, match=r"achievable maximum is 0\.\d+"):
            densify(g, 0.9, preserve_max_degree=True, rng=derive_rng(5, "graph"))

    def test_deterministic_given_seed(self):
        g = star_graph(1, 24)
        a = densify(g, 0.5, rng=derive_rng(9, "graph"))
        b = densify(g, 0.5, rng=derive_rng(9, "graph"))
        assert a == b


class TestCommunityGraph:
    def test_single_community_certain_edges_is_complete(self):
        g = community_graph(1, 6, 1.0, 0.0, derive_rng(1, "graph"))
        assert g.m == 15

    def test_two_disjoint_edges(self):
        g = community_graph(2, 2, 1.0, 0.0, derive_rng(1, "graph"))
        assert g.edges == frozenset({(0, 1), (2, 3)})

    def test_expected_density_ballpark(self):
        dens = [
            stats(community_graph(4, 8, 0.8, 0.15, derive_rng(s, "graph"))).edge_density
            for s in range(60)
        ]
        assert np.mean(dens) == pytest.approx((4 * 28 * 0.8 + 448 * 0.15) / 496, abs=0.02)

    def test_equal_probabilities_are_erdos_renyi(self):
        # beta_in == beta_out == q makes every pair an independent Bern(q);
        # chi-square on per-pair counts over 200 seeded draws at the 1% level.
        p, q, draws = 8, 0.4, 200
        pairs = p * (p - 1) // 2
        counts = np.zeros(pairs)
        for s in range(draws):
            g = community_graph(2, 4, q, q, derive_rng(s, "graph"))
            for idx, (i, j) in enumerate(
                (i, j) for i in range(p) for j in range(i + 1, p)
            ):
                counts[idx] += g.has_edge(i, j)
        chi2 = float(((counts - draws * q) ** 2 / (draws * q * (1 - q))).sum())
        assert sps.chi2.sf(chi2, df=pairs) > 0.01


class TestRandomBoundedDegree:
    def test_single_edge(self):
        g = random_bounded_degree(2, 1, 1, derive_rng(0, "graph"))
        assert g.edges == frozenset({(0, 1)})

    def test_infeasible_raises(self):
        with pytest.raises(ValueError):
            random_bounded_degree(4, 1, 3, derive_rng(0, "graph"))

    def test_respects_degree_cap(self):
        g = random_bounded_degree(64, 10, 160, derive_rng(3, "graph"))
        assert g.m == 160
        assert g.degrees().max() <= 10

    def test_deterministic_given_seed(self):
        a = random_bounded_degree(20, 4, 30, derive_rng(7, "graph"))
        b = random_bounded_degree(20, 4, 30, derive_rng(7, "graph"))
        assert a == b

    def test_require_connected(self):
        g = random_bounded_degree(12, 4, 14, derive_rng(2, "graph"),
                                  require_connected=True)
        assert g.is_connected()


class TestGraphFiles:
    def test_round_trip(self, tmp_path):
        g = densify(star_graph(2, 3), 0.5, rng=derive_rng(4, "graph"))
        path = tmp_path / "g.txt"
        write_graph(g, path)
        assert read_graph(path) == g

    def test_format_one_based_sorted(self, tmp_path):
        g = Graph(p=3, edges=frozenset({(0, 2), (0, 1)}))
        path = tmp_path / "g.txt"
        write_graph(g, path)
        assert path.read_text() == "3 2\n1 2\n1 3\n"
