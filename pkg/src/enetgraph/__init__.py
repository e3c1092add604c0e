"""Structure recovery for Gaussian, Ising and Potts Markov random fields via
elastic-net penalized neighborhood regression and pairwise-union voting."""

from .enet import DesignProblem, PenaltySpec, cross_validate, first_k_active, fit, lambda_path
from .estimators import NeighborhoodGraphEstimator, PairVoteGraphEstimator
from .evaluate import ErrorReport, SweepSpec, recall_precision_curve, run_sweep, score
from .graphs import (
    Graph,
    GraphStats,
    community_graph,
    densify,
    random_bounded_degree,
    star_graph,
    stats,
)
from .models import (
    GaussianPrecision,
    IsingParams,
    PottsParams,
    build_gmrf,
    build_ising,
    build_potts,
    constant,
    enumerate_exact,
    ising_conditional,
    potts_conditional,
    rademacher,
    uniform,
)
from .neighborhoods import (
    NeighborhoodEstimate,
    VoteMatrix,
    estimate_neighborhood,
    pair_neighborhood,
    reconstruct_edges,
    select_neighbors,
    symmetrize,
    normalize_symmetrize,
    vote_matrix,
)
from .samplers import ChainConfig, SampleMatrix, gibbs_sample, sample_gaussian, swendsen_wang_sample

__version__ = "0.1.0"
