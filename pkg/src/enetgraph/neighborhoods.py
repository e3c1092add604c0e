"""From penalized regressions to neighborhoods, votes and recovered graphs.

Single-node estimation regresses each column on the rest (gaussian for real
samples, logistic for Ising, softmax over one-hot indicators for Potts).
The pairwise scheme regresses X_i + X_j on the remaining columns and pools
the supports of all pairs into vote matrices L, S = L + L^T and the
row-max-normalized S-bar.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from joblib import Parallel, delayed

from .enet import (
    DesignProblem,
    PenaltySpec,
    active_predictors,
    cross_validate,
    first_k_active,
    fit,
    lambda_path,
)
from .graphs import Graph
from .samplers import SampleMatrix

__all__ = [
    "NeighborhoodEstimate",
    "VoteMatrix",
    "default_lambda1",
    "estimate_neighborhood",
    "estimate_all_neighborhoods",
    "reconstruct_edges",
    "pair_neighborhood",
    "vote_matrix",
    "exact_vote_matrix",
    "symmetrize",
    "normalize_symmetrize",
    "select_neighbors",
    "vote_neighborhoods",
    "write_neighborhoods",
    "read_neighborhoods",
    "write_vote_matrix",
    "read_vote_matrix",
]


@dataclass(frozen=True)
class NeighborhoodEstimate:
    node: int
    neighbors: frozenset[int]
    method: str  # "single" | "pair_vote"
    weights: dict | None = None

    def __post_init__(self):
        if self.node in self.neighbors:
            raise ValueError("a node cannot neighbor itself")


@dataclass(frozen=True)
class VoteMatrix:
    counts: np.ndarray
    variant: str  # "L" | "S" | "S_bar"

    def __post_init__(self):
        c = self.counts
        if c.ndim != 2 or c.shape[0] != c.shape[1]:
            raise ValueError("vote matrix must be square")
        if np.any(np.diag(c) != 0):
            raise ValueError("vote matrix diagonal must be zero")

    @property
    def p(self) -> int:
        return self.counts.shape[0]


def default_lambda1(samples: SampleMatrix) -> float:
    return math.sqrt(math.log(samples.p) / samples.n)


# ---------------------------------------------------------------------------
# Design construction
# ---------------------------------------------------------------------------

def _node_design(samples: SampleMatrix, s: int):
    """DesignProblem for regressing column s on the rest.

    Returns (problem, others, groups): `others[j]` is the vertex behind
    predictor group j, `groups[j]` the design-column indices for that vertex.
    """
    data = samples.data
    col = data[:, s]
    if np.all(col == col[0]):
        raise ValueError(f"column {s} is constant: node undetectable")
    others = [t for t in range(samples.p) if t != s]
    if samples.kind == "real":
        X = data[:, others].astype(float)
        problem = DesignProblem(X=X, y=col, family="gaussian", standardize=False)
        groups = [np.array([j]) for j in range(len(others))]
    elif samples.k == 2:
        X = data[:, others].astype(float)
        problem = DesignProblem(X=X, y=col, family="binomial", standardize=False)
        groups = [np.array([j]) for j in range(len(others))]
    else:
        k = samples.k
        X = np.zeros((samples.n, len(others) * k))
        for j, t in enumerate(others):
            X[np.arange(samples.n), j * k + data[:, t].astype(int) - 1] = 1.0
        problem = DesignProblem(X=X, y=col.astype(int), family="multinomial", n_classes=k,
                                standardize=False)
        groups = [np.arange(j * k, (j + 1) * k) for j in range(len(others))]
    return problem, others, groups


# ---------------------------------------------------------------------------
# Single-node estimation and edge reconstruction
# ---------------------------------------------------------------------------

def estimate_neighborhood(
    samples: SampleMatrix,
    s: int,
    pen: PenaltySpec,
    selection: str = "fixed",
    degree: int | None = None,
    rng: np.random.Generator | None = None,
    path_grid: int = 100,
) -> NeighborhoodEstimate:
    """Estimated neighborhood of s; `selection` is "fixed", "cv" or "degree"."""
    problem, others, groups = _node_design(samples, s)
    if selection == "fixed":
        res = fit(problem, pen)
        coef, icpt = res.coef, res.intercept
    elif selection == "cv":
        cv = cross_validate(problem, lambda2=pen.lambda2, rng=rng)
        coef, icpt = cv.coef, cv.intercept
    elif selection == "degree":
        if degree is None:
            raise ValueError("selection='degree' needs the degree argument")
        path = lambda_path(problem, lambda2=pen.lambda2, grid_size=path_grid, groups=groups)
        coef, icpt, _ = first_k_active(path, degree)
    else:
        raise ValueError(f"unknown selection mode {selection!r}")
    idx = active_predictors(coef, groups)
    c = np.abs(np.atleast_2d(coef.T)).max(axis=0) if coef.ndim > 1 else np.abs(coef)
    weights = {others[j]: float(max(c[g] for g in groups[j])) for j in idx}
    return NeighborhoodEstimate(
        node=s,
        neighbors=frozenset(others[j] for j in idx),
        method="single",
        weights=weights,
    )


def estimate_all_neighborhoods(
    samples: SampleMatrix,
    pen: PenaltySpec,
    selection: str = "fixed",
    degrees: np.ndarray | None = None,
    n_jobs: int = 1,
    rng_seeds: list | None = None,
) -> list[NeighborhoodEstimate]:
    def job(s):
        rng = np.random.default_rng(rng_seeds[s]) if rng_seeds is not None else None
        return estimate_neighborhood(
            samples, s, pen, selection=selection,
            degree=None if degrees is None else int(degrees[s]), rng=rng,
        )

    if n_jobs == 1:
        return [job(s) for s in range(samples.p)]
    return Parallel(n_jobs=n_jobs)(delayed(job)(s) for s in range(samples.p))


def reconstruct_edges(estimates: list[NeighborhoodEstimate], rule: str) -> frozenset[tuple[int, int]]:
    """AND: mutual membership; OR: either membership."""
    if rule not in ("and", "or"):
        raise ValueError("rule must be 'and' or 'or'")
    by_node = {e.node: e.neighbors for e in estimates}
    if len(by_node) != len(estimates):
        raise ValueError("duplicate node estimates")
    edges = set()
    for a, nbrs in by_node.items():
        for b in nbrs:
            i, j = min(a, b), max(a, b)
            if rule == "or" or (a in by_node.get(b, frozenset())):
                edges.add((i, j))
    return frozenset(edges)


# ---------------------------------------------------------------------------
# Pairwise-union voting
# ---------------------------------------------------------------------------

def pair_neighborhood(
    samples: SampleMatrix, i: int, j: int, pen: PenaltySpec
) -> frozenset[int]:
    """Support of the elastic-net regression of X_i + X_j on the rest."""
    if i == j:
        raise ValueError("pair requires distinct vertices")
    if samples.kind != "real":
        raise ValueError("pairwise unions are defined for real-valued samples only")
    others = [t for t in range(samples.p) if t not in (i, j)]
    X = samples.data[:, others]
    y = samples.data[:, i] + samples.data[:, j]
    res = fit(DesignProblem(X=X, y=y, family="gaussian", standardize=False), pen)
    return frozenset(others[t] for t in active_predictors(res.coef))


def vote_matrix(
    samples: SampleMatrix, pen: PenaltySpec, n_jobs: int = 1
) -> VoteMatrix:
    """Pair-union frequency matrix L over all unordered pairs."""
    p = samples.p
    if p < 3:
        raise ValueError("vote matrix needs at least 3 vertices")
    pairs = [(i, j) for i in range(p) for j in range(i + 1, p)]

    def job(i, j):
        try:
            return pair_neighborhood(samples, i, j, pen)
        except Exception as exc:
            raise RuntimeError(f"pair fit ({i},{j}) failed") from exc

    if n_jobs == 1:
        supports = [job(i, j) for i, j in pairs]
    else:
        supports = Parallel(n_jobs=n_jobs)(delayed(job)(i, j) for i, j in pairs)
    counts = np.zeros((p, p))
    for (i, j), support in zip(pairs, supports):
        for v in support:
            counts[i, v] += 1
            counts[j, v] += 1
    return VoteMatrix(counts=counts, variant="L")


def exact_vote_matrix(g: Graph) -> VoteMatrix:
    """Error-free votes built from the true pair unions of a known graph."""
    counts = np.zeros((g.p, g.p))
    nbrs = [g.neighbors(v) for v in range(g.p)]
    for i in range(g.p):
        for j in range(i + 1, g.p):
            for v in (nbrs[i] | nbrs[j]) - {i, j}:
                counts[i, v] += 1
                counts[j, v] += 1
    return VoteMatrix(counts=counts, variant="L")


def symmetrize(vm: VoteMatrix) -> VoteMatrix:
    if vm.variant != "L":
        raise ValueError("symmetrize expects the L variant")
    return VoteMatrix(counts=vm.counts + vm.counts.T, variant="S")


def normalize_symmetrize(vm: VoteMatrix) -> VoteMatrix:
    """Row-max-normalize L (zero rows stay zero), then average with the transpose."""
    if vm.variant != "L":
        raise ValueError("normalize_symmetrize expects the L variant")
    row_max = vm.counts.max(axis=1)
    scale = np.where(row_max > 0, row_max, 1.0)
    lbar = vm.counts / scale[:, None]
    return VoteMatrix(counts=0.5 * (lbar + lbar.T), variant="S_bar")


# ---------------------------------------------------------------------------
# Threshold selection on vote rows
# ---------------------------------------------------------------------------

JUMP_MIN_RATIO = 1.15


def _ranked(scores: np.ndarray) -> np.ndarray:
    """Indices sorted by descending score; ties broken by smaller index."""
    return np.lexsort((np.arange(len(scores)), -scores))


def select_neighbors(
    scores: np.ndarray,
    mode: str,
    degree: int | None = None,
    d_max: int | None = None,
    top: int | None = None,
    fallback_degree: int | None = None,
) -> frozenset[int]:
    """Pick neighbors from one vote-matrix row.

    mode "degree": the `degree` highest-scoring vertices.
    mode "jump":   cut after the rank r (within 1..min(2*d_max, p-2)) that
                   maximizes the combined one- and two-step drop
                   score_r^2 / (score_{r+1} * score_{r+2}); the cut is
                   accepted when its two-step ratio score_r / score_{r+2}
                   reaches 1.15, otherwise fall back to `fallback_degree`
                   (empty set when none given).
    mode "top":    the `top` highest-scoring vertices.
    Zero-score vertices are never selected.
    """
    scores = np.asarray(scores, dtype=float)
    order = _ranked(scores)
    positive = [int(v) for v in order if scores[v] > 0]
    if not positive:
        return frozenset()
    if mode == "degree":
        if degree is None:
            raise ValueError("mode='degree' needs degree")
        return frozenset(positive[:degree])
    if mode == "top":
        if top is None:
            raise ValueError("mode='top' needs top")
        return frozenset(positive[:top])
    if mode != "jump":
        raise ValueError(f"unknown mode {mode!r}")
    p = len(scores)
    horizon = min(2 * d_max if d_max is not None else p - 2, p - 2, len(positive))
    vals = [scores[v] for v in positive]
    best_r, best_score, best_ratio = 0, 0.0, 0.0
    for r in range(1, horizon + 1):
        if r >= len(vals):
            score = ratio = np.inf  # positive support ends exactly here
        else:
            # windows clamped at the end of the list
            nxt = vals[r]
            nxt2 = vals[min(r + 1, len(vals) - 1)]
            ratio = vals[r - 1] / nxt2
            score = vals[r - 1] ** 2 / (nxt * nxt2)
        if score > best_score:
            best_score, best_ratio, best_r = score, ratio, r
    if best_ratio >= JUMP_MIN_RATIO:
        return frozenset(positive[:best_r])
    if fallback_degree is not None:
        return frozenset(positive[:fallback_degree])
    return frozenset()


def vote_neighborhoods(
    vm: VoteMatrix,
    mode: str = "degree",
    degrees: np.ndarray | None = None,
    d_max: int | None = None,
    top: int | None = None,
) -> list[NeighborhoodEstimate]:
    out = []
    for i in range(vm.p):
        nbrs = select_neighbors(
            vm.counts[i],
            mode=mode,
            degree=None if degrees is None else int(degrees[i]),
            d_max=d_max,
            top=top,
            fallback_degree=None if degrees is None else int(degrees[i]),
        )
        out.append(NeighborhoodEstimate(node=i, neighbors=nbrs, method="pair_vote"))
    return out


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def write_neighborhoods(estimates: list[NeighborhoodEstimate], path: str | Path) -> None:
    """One line per node: "i: j1 j2 ..." with 1-based sorted members."""
    lines = []
    for e in sorted(estimates, key=lambda e: e.node):
        members = " ".join(str(v + 1) for v in sorted(e.neighbors))
        lines.append(f"{e.node + 1}: {members}".rstrip())
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_neighborhoods(path: str | Path) -> list[NeighborhoodEstimate]:
    out = []
    for ln in Path(path).read_text(encoding="utf-8").splitlines():
        if not ln.strip():
            continue
        head, _, rest = ln.partition(":")
        node = int(head) - 1
        nbrs = frozenset(int(v) - 1 for v in rest.split())
        out.append(NeighborhoodEstimate(node=node, neighbors=nbrs, method="single"))
    return out


def write_vote_matrix(vm: VoteMatrix, path: str | Path) -> None:
    lines = [",".join(repr(float(v)) for v in row) for row in vm.counts]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_vote_matrix(path: str | Path, variant: str = "L") -> VoteMatrix:
    rows = [
        [float(v) for v in ln.split(",")]
        for ln in Path(path).read_text(encoding="utf-8").splitlines()
        if ln.strip()
    ]
    return VoteMatrix(counts=np.array(rows), variant=variant)
