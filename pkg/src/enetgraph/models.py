"""Model parameterizations on a graph and exact probability evaluation.

Gaussian precision matrices, Ising couplings and Potts couplings are built
directly from a :class:`~enetgraph.graphs.Graph`; small instances can be
enumerated exactly, which serves as the oracle for every sampler test.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .graphs import Graph

__all__ = [
    "GaussianPrecision",
    "IsingParams",
    "PottsParams",
    "constant",
    "uniform",
    "rademacher",
    "build_gmrf",
    "build_ising",
    "build_potts",
    "ising_conditional",
    "potts_conditional",
    "enumerate_exact",
    "write_model",
    "read_model",
]

ENUM_STATE_CAP = 2**20


# ---------------------------------------------------------------------------
# Coupling laws
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CouplingLaw:
    kind: str
    a: float = 0.0
    b: float = 0.0

    def sample(self, size: int, rng: np.random.Generator) -> np.ndarray:
        if self.kind == "constant":
            return np.full(size, self.a)
        if self.kind == "uniform":
            return rng.uniform(self.a, self.b, size=size)
        if self.kind == "rademacher":
            return self.a * rng.choice([-1.0, 1.0], size=size)
        raise ValueError(f"unknown coupling law {self.kind!r}")


def constant(c: float) -> CouplingLaw:
    if c == 0.0:
        raise ValueError("constant(0) would remove every edge from the model")
    return CouplingLaw("constant", c)


def uniform(lo: float, hi: float) -> CouplingLaw:
    return CouplingLaw("uniform", lo, hi)


def rademacher(c: float) -> CouplingLaw:
    if c == 0.0:
        raise ValueError("rademacher(0) would remove every edge from the model")
    return CouplingLaw("rademacher", c)


# ---------------------------------------------------------------------------
# Parameter containers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GaussianPrecision:
    graph: Graph
    theta: np.ndarray
    tau: float

    @property
    def p(self) -> int:
        return self.graph.p


@dataclass(frozen=True)
class IsingParams:
    graph: Graph
    couplings: dict[tuple[int, int], float]

    @property
    def p(self) -> int:
        return self.graph.p

    @property
    def k(self) -> int:
        return 2

    def state_values(self) -> np.ndarray:
        return np.array([-1, 1])


@dataclass(frozen=True)
class PottsParams:
    graph: Graph
    k: int
    couplings: dict[tuple[int, int], float]
    node_potentials: np.ndarray = field(default=None)  # (p, k), zeros by default

    def __post_init__(self):
        if self.node_potentials is None:
            object.__setattr__(self, "node_potentials", np.zeros((self.graph.p, self.k)))

    @property
    def p(self) -> int:
        return self.graph.p

    def state_values(self) -> np.ndarray:
        return np.arange(1, self.k + 1)


def _check_support(g: Graph, couplings: dict[tuple[int, int], float]) -> None:
    if set(couplings) != set(g.edges):
        raise ValueError("coupling support must equal the edge set")
    if any(v == 0.0 or not math.isfinite(v) for v in couplings.values()):
        raise ValueError("couplings must be finite and nonzero")


# ---------------------------------------------------------------------------
# Builders
# ---------------------------------------------------------------------------

def build_gmrf(g: Graph, coupling: float = 0.5) -> GaussianPrecision:
    """Precision matrix with `coupling` on edges; diagonal tau found by search.

    tau starts at 1.0 and grows in steps of 0.1 until the matrix is strictly
    positive definite (smallest eigenvalue > 1e-8 — a bare numerical Cholesky
    can accept exactly singular matrices, e.g. a 4-leaf star at tau = 1).
    Terminates since tau > coupling * d gives diagonal dominance.
    """
    if g.p < 2:
        raise ValueError("build_gmrf requires p >= 2")
    theta = np.zeros((g.p, g.p))
    for i, j in g.edges:
        theta[i, j] = theta[j, i] = coupling
    step = 0
    while True:
        tau = round(1.0 + 0.1 * step, 10)
        np.fill_diagonal(theta, tau)
        if np.linalg.eigvalsh(theta).min() > 1e-8:
            return GaussianPrecision(graph=g, theta=theta, tau=tau)
        step += 1


def build_ising(g: Graph, law: CouplingLaw, rng: np.random.Generator | None = None) -> IsingParams:
    if g.p < 2:
        raise ValueError("build_ising requires p >= 2")
    if rng is None:
        rng = np.random.default_rng()
    edges = g.sorted_edges()
    values = law.sample(len(edges), rng)
    couplings = {e: float(v) for e, v in zip(edges, values)}
    _check_support(g, couplings)
    return IsingParams(graph=g, couplings=couplings)


def build_potts(
    g: Graph,
    k: int,
    law: CouplingLaw,
    rng: np.random.Generator | None = None,
    node_potentials: np.ndarray | None = None,
) -> PottsParams:
    if k < 3:
        raise ValueError("Potts requires k >= 3; use build_ising for two states")
    if rng is None:
        rng = np.random.default_rng()
    edges = g.sorted_edges()
    values = law.sample(len(edges), rng)
    couplings = {e: float(v) for e, v in zip(edges, values)}
    _check_support(g, couplings)
    if node_potentials is not None:
        node_potentials = np.asarray(node_potentials, dtype=float)
        if node_potentials.shape != (g.p, k):
            raise ValueError(f"node_potentials must have shape ({g.p}, {k})")
    return PottsParams(graph=g, k=k, couplings=couplings, node_potentials=node_potentials)


# ---------------------------------------------------------------------------
# Conditionals and exact enumeration
# ---------------------------------------------------------------------------

def _neighbor_items(m: IsingParams | PottsParams, s: int) -> list[tuple[int, float]]:
    out = []
    for (i, j), v in m.couplings.items():
        if i == s:
            out.append((j, v))
        elif j == s:
            out.append((i, v))
    return out


def ising_conditional(m: IsingParams, s: int, x: np.ndarray) -> float:
    """P(X_s = +1 | X_rest) for states in {-1, +1}."""
    x = np.asarray(x)
    if not np.isin(x, (-1, 1)).all():
        raise ValueError("Ising states must be -1 or +1")
    a = sum(v * x[t] for t, v in _neighbor_items(m, s))
    return float(np.exp(2 * a) / (np.exp(2 * a) + 1))


def potts_conditional(m: PottsParams, s: int, x: np.ndarray) -> np.ndarray:
    """Length-k probability vector of X_s given the rest; states in 1..k."""
    x = np.asarray(x)
    if ((x < 1) | (x > m.k)).any():
        raise ValueError(f"Potts states must lie in 1..{m.k}")
    logits = m.node_potentials[s].astype(float).copy()
    for t, v in _neighbor_items(m, s):
        # agree/disagree potential: +v if same state, -v otherwise
        logits += np.where(np.arange(1, m.k + 1) == x[t], v, -v)
    logits -= logits.max()
    w = np.exp(logits)
    return w / w.sum()


def _log_weight_ising(m: IsingParams, x: np.ndarray) -> float:
    return sum(v * x[i] * x[j] for (i, j), v in m.couplings.items())


def _log_weight_potts(m: PottsParams, x: np.ndarray) -> float:
    lw = sum(m.node_potentials[s, x[s] - 1] for s in range(m.p))
    lw += sum(v if x[i] == x[j] else -v for (i, j), v in m.couplings.items())
    return float(lw)


def log_weight(m: IsingParams | PottsParams, x: np.ndarray) -> float:
    """Unnormalized log joint probability of configuration x."""
    if isinstance(m, IsingParams):
        return _log_weight_ising(m, np.asarray(x))
    return _log_weight_potts(m, np.asarray(x))


def enumerate_exact(m: IsingParams | PottsParams) -> tuple[np.ndarray, np.ndarray, float]:
    """Full probability table over all k^p outcomes.

    Returns (states, probs, Z) where states has shape (k^p, p), probs sums
    to one, and Z is the partition function.
    """
    k = m.k
    vals = m.state_values()
    if k**m.p > ENUM_STATE_CAP:
        raise ValueError(f"state space k^p = {k**m.p} exceeds cap {ENUM_STATE_CAP}")
    states = np.array(list(itertools.product(vals, repeat=m.p)), dtype=int)
    logw = np.array([log_weight(m, s) for s in states])
    shift = logw.max()
    w = np.exp(logw - shift)
    z = float(w.sum() * np.exp(shift))
    return states, w / w.sum(), z


# ---------------------------------------------------------------------------
# Model file format
# ---------------------------------------------------------------------------

def write_model(m: GaussianPrecision | IsingParams | PottsParams, path: str | Path) -> None:
    """Header "gmrf|ising|potts p k", then "s t value" lines, 1-based.

    GMRF writes the shared diagonal as "s s tau" per vertex; Potts node
    potentials are written as k consecutive "s 0 value" lines (state order).
    """
    lines = []
    if isinstance(m, GaussianPrecision):
        lines.append(f"gmrf {m.p} 0")
        for i, j in m.graph.sorted_edges():
            lines.append(f"{i + 1} {j + 1} {float(m.theta[i, j])!r}")
        for s in range(m.p):
            lines.append(f"{s + 1} {s + 1} {float(m.tau)!r}")
    elif isinstance(m, IsingParams):
        lines.append(f"ising {m.p} 2")
        for i, j in m.graph.sorted_edges():
            lines.append(f"{i + 1} {j + 1} {m.couplings[(i, j)]!r}")
    elif isinstance(m, PottsParams):
        lines.append(f"potts {m.p} {m.k}")
        for i, j in m.graph.sorted_edges():
            lines.append(f"{i + 1} {j + 1} {m.couplings[(i, j)]!r}")
        if np.any(m.node_potentials != 0):
            for s in range(m.p):
                for i in range(m.k):
                    lines.append(f"{s + 1} 0 {float(m.node_potentials[s, i])!r}")
    else:
        raise TypeError(f"unsupported model type {type(m).__name__}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_model(path: str | Path) -> GaussianPrecision | IsingParams | PottsParams:
    lines = [ln for ln in Path(path).read_text(encoding="utf-8").splitlines() if ln.strip()]
    kind, p_s, k_s = lines[0].split()
    p, k = int(p_s), int(k_s)
    edges: dict[tuple[int, int], float] = {}
    diag: dict[int, float] = {}
    potentials: list[tuple[int, float]] = []
    for ln in lines[1:]:
        s_s, t_s, v_s = ln.split()
        s, t, v = int(s_s), int(t_s), float(v_s)
        if t == 0:
            potentials.append((s - 1, v))
        elif s == t:
            diag[s - 1] = v
        else:
            edges[(min(s, t) - 1, max(s, t) - 1)] = v
    g = Graph(p=p, edges=frozenset(edges))
    if kind == "gmrf":
        theta = np.zeros((p, p))
        for (i, j), v in edges.items():
            theta[i, j] = theta[j, i] = v
        tau = diag[0]
        np.fill_diagonal(theta, [diag[s] for s in range(p)])
        return GaussianPrecision(graph=g, theta=theta, tau=tau)
    if kind == "ising":
        return IsingParams(graph=g, couplings=edges)
    if kind == "potts":
        np_mat = np.zeros((p, k))
        if potentials:
            counters = {s: 0 for s in range(p)}
            for s, v in potentials:
                np_mat[s, counters[s]] = v
                counters[s] += 1
        return PottsParams(graph=g, k=k, couplings=edges, node_potentials=np_mat)
    raise ValueError(f"unknown model kind {kind!r}")
