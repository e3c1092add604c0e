"""Samplers: exact Gaussian draws, Gibbs sweeps, Swendsen-Wang clusters.

Discrete chains are single long runs, thinned after burn-in; every sampler
takes an explicit numpy Generator and is bit-reproducible given the seed.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.linalg import solve_triangular
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .models import GaussianPrecision, IsingParams, PottsParams

__all__ = [
    "SampleMatrix",
    "ChainConfig",
    "sample_gaussian",
    "gibbs_sample",
    "swendsen_wang_sample",
    "write_samples",
    "read_samples",
]


@dataclass(frozen=True)
class SampleMatrix:
    """n x p observations; column j corresponds to vertex j."""

    data: np.ndarray
    kind: str  # "real" | "state"
    k: int = 0  # number of states for kind="state"; 2 means Ising {-1,+1}

    def __post_init__(self):
        if self.kind not in ("real", "state"):
            raise ValueError(f"kind must be 'real' or 'state', got {self.kind!r}")
        if self.kind == "state":
            vals = np.unique(self.data)
            if self.k == 2:
                if not np.isin(vals, (-1, 1)).all():
                    raise ValueError("Ising samples must take values in {-1, +1}")
            elif ((vals < 1) | (vals > self.k)).any():
                raise ValueError(f"state samples must lie in 1..{self.k}")

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def p(self) -> int:
        return self.data.shape[1]


@dataclass(frozen=True)
class ChainConfig:
    burn_in: int = 200
    thin: int = 5

    def __post_init__(self):
        if self.burn_in < 0 or self.thin < 1:
            raise ValueError("require burn_in >= 0 and thin >= 1")


def sample_gaussian(prec: GaussianPrecision, n: int, rng: np.random.Generator) -> SampleMatrix:
    """n i.i.d. draws from N(0, Theta^{-1}) via the Cholesky factor of Theta."""
    try:
        chol = np.linalg.cholesky(prec.theta)
    except np.linalg.LinAlgError as exc:
        raise ValueError("precision matrix is not positive definite") from exc
    z = rng.standard_normal((prec.p, n))
    # Theta = L L^T  =>  x = L^{-T} z has covariance Theta^{-1}
    x = solve_triangular(chol.T, z, lower=False)
    return SampleMatrix(data=x.T.copy(), kind="real")


def _neighbor_arrays(m: IsingParams | PottsParams):
    nbrs: list[list[int]] = [[] for _ in range(m.p)]
    ths: list[list[float]] = [[] for _ in range(m.p)]
    for (i, j), v in sorted(m.couplings.items()):
        nbrs[i].append(j)
        ths[i].append(v)
        nbrs[j].append(i)
        ths[j].append(v)
    return (
        [np.array(a, dtype=int) for a in nbrs],
        [np.array(a, dtype=float) for a in ths],
    )


def gibbs_sample(
    m: IsingParams | PottsParams,
    n: int,
    cfg: ChainConfig = ChainConfig(),
    rng: np.random.Generator | None = None,
) -> SampleMatrix:
    """Systematic-scan Gibbs; retains every thin-th sweep after burn_in."""
    if rng is None:
        rng = np.random.default_rng()
    nbrs, ths = _neighbor_arrays(m)
    is_ising = isinstance(m, IsingParams)
    k = m.k
    if is_ising:
        x = rng.choice([-1, 1], size=m.p)
    else:
        x = rng.integers(1, k + 1, size=m.p)
        pots = m.node_potentials
        levels = np.arange(1, k + 1)
    out = np.empty((n, m.p), dtype=int)
    kept = 0
    sweep = 0
    while kept < n:
        for s in range(m.p):
            if is_ising:
                a = float(ths[s] @ x[nbrs[s]]) if nbrs[s].size else 0.0
                p_plus = 1.0 / (1.0 + np.exp(-2 * a))
                x[s] = 1 if rng.random() < p_plus else -1
            else:
                logits = pots[s].astype(float).copy()
                for t, v in zip(nbrs[s], ths[s]):
                    logits += np.where(levels == x[t], v, -v)
                logits -= logits.max()
                w = np.exp(logits)
                x[s] = rng.choice(levels, p=w / w.sum())
        sweep += 1
        if sweep > cfg.burn_in and (sweep - cfg.burn_in) % cfg.thin == 0:
            out[kept] = x
            kept += 1
    return SampleMatrix(data=out, kind="state", k=k)


def swendsen_wang_sample(
    m: IsingParams | PottsParams,
    n: int,
    cfg: ChainConfig = ChainConfig(),
    rng: np.random.Generator | None = None,
) -> SampleMatrix:
    """Cluster sampling: activate agreeing edges w.p. 1 - exp(-2*theta), then
    relabel each bond-connected component with a uniform state.

    Requires ferromagnetic couplings (theta > 0); the bond rule has no
    probability interpretation otherwise.
    """
    if rng is None:
        rng = np.random.default_rng()
    edges = sorted(m.couplings)
    thetas = np.array([m.couplings[e] for e in edges])
    if (thetas <= 0).any():
        raise ValueError("Swendsen-Wang requires all couplings > 0; use gibbs_sample instead")
    if isinstance(m, PottsParams) and np.any(m.node_potentials != 0):
        raise ValueError("Swendsen-Wang relabel step assumes zero node potentials")
    src = np.array([e[0] for e in edges], dtype=int)
    dst = np.array([e[1] for e in edges], dtype=int)
    bond_p = 1.0 - np.exp(-2.0 * thetas)
    is_ising = isinstance(m, IsingParams)
    k = m.k
    values = np.array([-1, 1]) if is_ising else np.arange(1, k + 1)
    x = rng.choice(values, size=m.p)
    out = np.empty((n, m.p), dtype=int)
    kept = 0
    it = 0
    ones = np.ones(len(edges), dtype=np.int8)
    while kept < n:
        active = (x[src] == x[dst]) & (rng.random(len(edges)) < bond_p)
        if active.any():
            adj = coo_matrix(
                (ones[active], (src[active], dst[active])), shape=(m.p, m.p)
            )
            n_comp, labels = connected_components(adj, directed=False)
        else:
            n_comp, labels = m.p, np.arange(m.p)
        x = rng.choice(values, size=n_comp)[labels]
        it += 1
        if it > cfg.burn_in and (it - cfg.burn_in) % cfg.thin == 0:
            out[kept] = x
            kept += 1
    return SampleMatrix(data=out, kind="state", k=k)


def write_samples(s: SampleMatrix, path: str | Path) -> None:
    """CSV with header x1..xp; full-precision reals, plain integers for states."""
    header = ",".join(f"x{j + 1}" for j in range(s.p))
    rows = [header]
    if s.kind == "real":
        rows += [",".join(repr(float(v)) for v in row) for row in s.data]
    else:
        rows += [",".join(str(int(v)) for v in row) for row in s.data]
    Path(path).write_text("\n".join(rows) + "\n", encoding="utf-8")


def read_samples(path: str | Path) -> SampleMatrix:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    data = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:] if ln])
    if np.all(data == np.round(data)):
        ints = data.astype(int)
        vals = np.unique(ints)
        if np.isin(vals, (-1, 1)).all():
            return SampleMatrix(data=ints, kind="state", k=2)
        if (vals >= 1).all():
            return SampleMatrix(data=ints, kind="state", k=int(vals.max()))
    return SampleMatrix(data=data, kind="real")
