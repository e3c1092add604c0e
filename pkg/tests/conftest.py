"""Shared test helpers: brute-force solver oracle and distribution distances."""
from itertools import combinations, product

import numpy as np

from enetgraph.samplers import SampleMatrix


def enet_oracle(X, y, l1, l2, tol=1e-9):
    """Exact gaussian elastic-net minimizer by sign enumeration.

    Minimizes (1/2n)||y - b - X theta||^2 + l1*||theta||_1 + l2*||theta||^2
    over (theta, b) by enumerating every support subset and sign pattern,
    keeping candidates whose stationarity and subgradient conditions hold,
    and returning the one with the lowest objective. Exponential in q;
    intended for q <= 12.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n, q = X.shape
    mu = X.mean(axis=0)
    Xc = X - mu
    ybar = y.mean()
    yc = y - ybar
    G = Xc.T @ Xc / n
    b = Xc.T @ yc / n

    def objective(theta):
        r = yc - Xc @ theta
        return float(r @ r) / (2 * n) + l1 * np.abs(theta).sum() + l2 * float(theta @ theta)

    best_obj, best_theta = np.inf, np.zeros(q)
    if np.all(np.abs(b) <= l1 + tol):
        best_obj = objective(best_theta)
    for r in range(1, q + 1):
        for A in combinations(range(q), r):
            A = list(A)
            M = G[np.ix_(A, A)] + 2.0 * l2 * np.eye(r)
            signs = np.array(list(product([-1.0, 1.0], repeat=r))).T  # (r, 2^r)
            try:
                TH = np.linalg.solve(M, b[A][:, None] - l1 * signs)
            except np.linalg.LinAlgError:
                continue
            ok = np.all(np.sign(TH) == signs, axis=0)
            if not ok.any():
                continue
            TH = TH[:, ok]
            inact = np.setdiff1d(np.arange(q), A)
            if inact.size:
                grad = b[inact][:, None] - G[np.ix_(inact, A)] @ TH
                ok2 = np.all(np.abs(grad) <= l1 + tol, axis=0)
            else:
                ok2 = np.ones(TH.shape[1], dtype=bool)
            for c in np.flatnonzero(ok2):
                theta = np.zeros(q)
                theta[A] = TH[:, c]
                o = objective(theta)
                if o < best_obj:
                    best_obj, best_theta = o, theta
    return best_theta, float(ybar - mu @ best_theta)


def tv_distance(samples: SampleMatrix, states: np.ndarray, probs: np.ndarray) -> float:
    """Total-variation distance between empirical and exact distributions."""
    index = {tuple(s): i for i, s in enumerate(states)}
    counts = np.zeros(len(states))
    for row in samples.data:
        counts[index[tuple(row)]] += 1
    return 0.5 * float(np.abs(counts / counts.sum() - probs).sum())


def random_gaussian_problem(rng, n_max=40, q_max=12):
    """A random dense-ish regression problem with a sparse truth."""
    n = int(rng.integers(12, n_max + 1))
    q = int(rng.integers(2, q_max + 1))
    X = rng.standard_normal((n, q)) @ (np.eye(q) + 0.3 * rng.standard_normal((q, q)))
    theta = np.zeros(q)
    support = rng.choice(q, size=max(1, q // 3), replace=False)
    theta[support] = rng.standard_normal(len(support))
    y = 0.5 + X @ theta + 0.5 * rng.standard_normal(n)
    return X, y
