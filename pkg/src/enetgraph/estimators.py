"""Scikit-learn style wrappers around the structure-recovery pipeline.

Both estimators consume an n x p sample matrix through ``fit(X)`` and
expose the recovered structure as ``edges_`` (0-based unordered pairs),
so they compose with sklearn model-selection tooling via get/set_params.
"""
from __future__ import annotations

import math

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array

from .enet import PenaltySpec
from .neighborhoods import (
    estimate_all_neighborhoods,
    normalize_symmetrize,
    reconstruct_edges,
    symmetrize,
    vote_matrix,
    vote_neighborhoods,
)
from .samplers import SampleMatrix

__all__ = ["NeighborhoodGraphEstimator", "PairVoteGraphEstimator", "as_sample_matrix"]


def as_sample_matrix(X: np.ndarray) -> SampleMatrix:
    """Wrap an array, inferring real / Ising / Potts sample kind."""
    X = check_array(X, ensure_min_samples=2, ensure_min_features=2)
    if np.all(X == np.round(X)):
        ints = X.astype(int)
        vals = np.unique(ints)
        if np.isin(vals, (-1, 1)).all():
            return SampleMatrix(data=ints, kind="state", k=2)
        if (vals >= 1).all():
            return SampleMatrix(data=ints, kind="state", k=int(vals.max()))
    return SampleMatrix(data=X, kind="real")


class _GraphEstimatorBase(BaseEstimator):
    def _resolved_penalty(self, samples: SampleMatrix) -> PenaltySpec:
        l1 = self.lambda1
        if l1 == "auto":
            l1 = math.sqrt(math.log(samples.p) / samples.n)
        if self.alpha is not None:
            return PenaltySpec.from_alpha(float(l1), float(self.alpha))
        return PenaltySpec(lambda1=float(l1), lambda2=float(self.lambda2))

    def adjacency_(self):
        a = np.zeros((self.n_features_in_, self.n_features_in_), dtype=int)
        for i, j in self.edges_:
            a[i, j] = a[j, i] = 1
        return a


class NeighborhoodGraphEstimator(_GraphEstimatorBase):
    """Per-node elastic-net neighborhood regression + AND/OR reconstruction."""

    def __init__(
        self,
        lambda1="auto",
        lambda2=0.0,
        alpha=None,
        rule="and",
        selection="fixed",
        degrees=None,
        random_state=None,
        n_jobs=1,
    ):
        self.lambda1 = lambda1
        self.lambda2 = lambda2
        self.alpha = alpha
        self.rule = rule
        self.selection = selection
        self.degrees = degrees
        self.random_state = random_state
        self.n_jobs = n_jobs

    def fit(self, X, y=None):
        samples = as_sample_matrix(X)
        pen = self._resolved_penalty(samples)
        seeds = None
        if self.selection == "cv":
            root = np.random.SeedSequence(self.random_state)
            seeds = [np.random.default_rng(s) for s in root.spawn(samples.p)]
        self.neighborhoods_ = estimate_all_neighborhoods(
            samples, pen,
            selection=self.selection,
            degrees=None if self.degrees is None else np.asarray(self.degrees),
            n_jobs=self.n_jobs,
            rng_seeds=seeds,
        )
        self.edges_ = reconstruct_edges(self.neighborhoods_, self.rule)
        self.n_features_in_ = samples.p
        return self


class PairVoteGraphEstimator(_GraphEstimatorBase):
    """Pairwise neighborhood-union voting (gaussian samples only)."""

    def __init__(
        self,
        lambda1="auto",
        lambda2=0.0,
        alpha=None,
        variant="Sbar",
        threshold="degree",
        degrees=None,
        d_max=None,
        top=None,
        n_jobs=1,
    ):
        self.lambda1 = lambda1
        self.lambda2 = lambda2
        self.alpha = alpha
        self.variant = variant
        self.threshold = threshold
        self.degrees = degrees
        self.d_max = d_max
        self.top = top
        self.n_jobs = n_jobs

    def fit(self, X, y=None):
        samples = as_sample_matrix(X)
        if samples.kind != "real":
            raise ValueError("pair voting requires real-valued samples")
        pen = self._resolved_penalty(samples)
        vm = vote_matrix(samples, pen, n_jobs=self.n_jobs)
        if self.variant == "S":
            vm = symmetrize(vm)
        elif self.variant == "Sbar":
            vm = normalize_symmetrize(vm)
        elif self.variant != "L":
            raise ValueError("variant must be 'L', 'S' or 'Sbar'")
        self.vote_matrix_ = vm
        self.neighborhoods_ = vote_neighborhoods(
            vm,
            mode=self.threshold,
            degrees=None if self.degrees is None else np.asarray(self.degrees),
            d_max=self.d_max,
            top=self.top,
        )
        # vote rows are symmetric evidence; mutual (AND) reconstruction
        self.edges_ = reconstruct_edges(self.neighborhoods_, "and")
        self.n_features_in_ = samples.p
        return self
