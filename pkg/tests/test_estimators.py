import numpy as np
import pytest
from sklearn.base import clone

from enetgraph._rng import derive_rng
from enetgraph.estimators import (
    NeighborhoodGraphEstimator,
    PairVoteGraphEstimator,
    as_sample_matrix,
)
from enetgraph.graphs import star_graph
from enetgraph.models import build_gmrf, build_ising, constant
from enetgraph.samplers import ChainConfig, sample_gaussian, swendsen_wang_sample


def _gaussian_data(g, n, seed):
    return sample_gaussian(build_gmrf(g, coupling=0.5), n, derive_rng(seed, "sample", 0, 0)).data


class TestAsSampleMatrix:
    def test_kind_inference(self):
        assert as_sample_matrix(np.random.default_rng(0).standard_normal((5, 3))).kind == "real"
        ising = as_sample_matrix(np.array([[1, -1], [-1, 1]]))
        assert (ising.kind, ising.k) == ("state", 2)
        potts = as_sample_matrix(np.array([[1, 2], [3, 1]]))
        assert (potts.kind, potts.k) == ("state", 3)

    def test_input_validation(self):
        with pytest.raises(ValueError):
            as_sample_matrix(np.ones(5))
        with pytest.raises(ValueError):
            as_sample_matrix(np.ones((1, 5)))
        with pytest.raises(ValueError):
            as_sample_matrix(np.ones((5, 1)))


class TestNeighborhoodGraphEstimator:
    def test_recovers_star_gmrf(self):
        g = star_graph(1, 6)
        est = NeighborhoodGraphEstimator(lambda1=0.12).fit(_gaussian_data(g, 2000, 0))
        assert est.edges_ == g.edges
        assert est.n_features_in_ == g.p
        a = est.adjacency_()
        assert np.array_equal(a, a.T) and a.sum() == 2 * g.m

    def test_recovers_ising(self):
        g = star_graph(1, 3)
        m = build_ising(g, constant(0.25))
        s = swendsen_wang_sample(m, 4000, ChainConfig(burn_in=100, thin=2),
                                 derive_rng(1, "sample", 0, 0))
        est = NeighborhoodGraphEstimator(rule="or").fit(s.data)
        assert est.edges_ >= g.edges

    def test_get_set_params_and_clone(self):
        est = NeighborhoodGraphEstimator(lambda2=0.1, rule="or")
        params = est.get_params()
        assert params["lambda2"] == 0.1 and params["rule"] == "or"
        est2 = clone(est)
        assert est2.get_params() == params
        est.set_params(rule="and")
        assert est.rule == "and"

    def test_alpha_maps_to_ridge_share(self):
        g = star_graph(1, 4)
        X = _gaussian_data(g, 500, 2)
        est = NeighborhoodGraphEstimator(alpha=0.8).fit(X)
        assert est.edges_  # fit ran; alpha controls the penalty split
        samples = as_sample_matrix(X)
        pen = est._resolved_penalty(samples)
        assert pen.alpha == pytest.approx(0.8)


class TestPairVoteGraphEstimator:
    def test_recovers_star_with_degree_oracle(self):
        g = star_graph(1, 6)
        est = PairVoteGraphEstimator(degrees=g.degrees()).fit(_gaussian_data(g, 2000, 3))
        assert est.edges_ == g.edges
        assert est.vote_matrix_.variant == "S_bar"

    def test_variant_validation(self):
        g = star_graph(1, 4)
        X = _gaussian_data(g, 300, 4)
        with pytest.raises(ValueError):
            PairVoteGraphEstimator(variant="Z", degrees=g.degrees()).fit(X)

    def test_rejects_discrete_input(self):
        with pytest.raises(ValueError):
            PairVoteGraphEstimator(degrees=[1, 1, 1]).fit(
                np.array([[1, -1, 1], [-1, 1, -1], [1, 1, -1]])
            )
