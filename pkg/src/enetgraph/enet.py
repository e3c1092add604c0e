"""Elastic-net penalized GLMs by coordinate descent.

Families: gaussian (squared error), binomial (logistic), multinomial
(symmetric softmax). The objective is

    (1/(2n)) * SSR + l1*||theta||_1 + l2*||theta||_2^2          (gaussian)
    (1/n) * NLL  + l1*||theta||_1 + l2*||theta||_2^2            (binomial/multinomial)

with an unpenalized intercept. Logistic and softmax losses are driven by a
fixed-curvature quadratic majorization (weight 1/4 bounds the Bernoulli and
per-class softmax variance), so every coordinate sweep decreases the true
objective. Predictors may be centered/scaled to unit variance internally;
coefficients are always returned on the original scale.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "PenaltySpec",
    "DesignProblem",
    "FitResult",
    "CoefficientPath",
    "CVResult",
    "ConvergenceError",
    "fit",
    "lambda_max",
    "lambda_path",
    "cross_validate",
    "first_k_active",
    "objective",
    "loss_gradient",
    "kkt_residual",
    "active_predictors",
    "active_count",
]

ACTIVE_TOL = 1e-8
PROB_CLAMP = 1e-9
MAX_SWEEPS = 100_000


class ConvergenceError(RuntimeError):
    def __init__(self, message: str, gap: float):
        super().__init__(f"{message} (final gap proxy {gap:.3e})")
        self.gap = gap


@dataclass(frozen=True)
class PenaltySpec:
    lambda1: float
    lambda2: float = 0.0

    def __post_init__(self):
        if self.lambda1 < 0 or self.lambda2 < 0:
            raise ValueError("penalties must be nonnegative")

    @property
    def alpha(self) -> float:
        tot = self.lambda1 + self.lambda2
        return self.lambda1 / tot if tot > 0 else 1.0

    @classmethod
    def from_alpha(cls, lambda1: float, alpha: float) -> "PenaltySpec":
        """lambda2 implied by alpha = l1/(l1+l2) at the given lambda1."""
        if not 0 < alpha <= 1:
            raise ValueError("alpha must be in (0, 1]")
        return cls(lambda1=lambda1, lambda2=lambda1 * (1.0 / alpha - 1.0))


@dataclass
class DesignProblem:
    """Predictors, response and family for one penalized regression."""

    X: np.ndarray
    y: np.ndarray
    family: str  # "gaussian" | "binomial" | "multinomial"
    n_classes: int = 0  # multinomial only
    standardize: bool = True

    def __post_init__(self):
        self.X = np.asarray(self.X, dtype=float)
        if self.X.ndim != 2 or self.X.shape[1] < 1 or self.X.shape[0] < 2:
            raise ValueError("X must be n x q with n >= 2, q >= 1")
        if self.family == "gaussian":
            self.y = np.asarray(self.y, dtype=float)
        elif self.family == "binomial":
            y = np.asarray(self.y)
            if np.isin(y, (-1, 1)).all():
                y = (y + 1) // 2
            if not np.isin(y, (0, 1)).all():
                raise ValueError("binomial response must be in {0,1} or {-1,+1}")
            if len(np.unique(y)) < 2:
                raise ValueError("degenerate binomial response: single class present")
            self.y = y.astype(float)
        elif self.family == "multinomial":
            y = np.asarray(self.y, dtype=int)
            if self.n_classes < 3:
                raise ValueError("multinomial requires n_classes >= 3")
            if ((y < 1) | (y > self.n_classes)).any():
                raise ValueError(f"multinomial response must lie in 1..{self.n_classes}")
            if len(np.unique(y)) < 2:
                raise ValueError("degenerate multinomial response: single class present")
            self.y = y
        else:
            raise ValueError(f"unknown family {self.family!r}")
        if len(self.y) != self.X.shape[0]:
            raise ValueError("X and y disagree on n")

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def q(self) -> int:
        return self.X.shape[1]


@dataclass
class FitResult:
    coef: np.ndarray  # (q,) or (q, k), original predictor scale
    intercept: np.ndarray  # scalar array or (k,)
    sweeps: int
    # internal (standardized-problem) solution, used for exact KKT checks
    coef_internal: np.ndarray = None
    intercept_internal: np.ndarray = None


@dataclass
class CoefficientPath:
    lambdas: np.ndarray  # strictly decreasing l1 grid
    lambda2: float
    coefs: list  # FitResult-style original-scale coefficient arrays
    intercepts: list
    active_counts: np.ndarray  # active predictor groups per grid point


@dataclass
class CVResult:
    lambda1: float
    coef: np.ndarray
    intercept: np.ndarray
    lambdas: np.ndarray
    mean_deviance: np.ndarray


# ---------------------------------------------------------------------------
# Internals
# ---------------------------------------------------------------------------

def _soft(x: float, t: float) -> float:
    if x > t:
        return x - t
    if x < -t:
        return x + t
    return 0.0


def _standardized(problem: DesignProblem):
    X = problem.X
    mu = X.mean(axis=0)
    if problem.standardize:
        sd = X.std(axis=0)
        sd = np.where(sd > 0, sd, 1.0)
    else:
        sd = np.ones(problem.q)
    return (X - mu) / sd, mu, sd


def _softmax_rows(eta: np.ndarray) -> np.ndarray:
    e = np.exp(eta - eta.max(axis=1, keepdims=True))
    probs = e / e.sum(axis=1, keepdims=True)
    return np.clip(probs, PROB_CLAMP, 1.0 - PROB_CLAMP)


def _one_hot(y: np.ndarray, k: int) -> np.ndarray:
    out = np.zeros((len(y), k))
    out[np.arange(len(y)), y - 1] = 1.0
    return out


def _cd_quadratic(Xc, r, theta, cols, colsq, l1, l2, w, n):
    """One weighted-least-squares coordinate sweep over `cols`; updates r and
    theta in place, returns max absolute coefficient change."""
    max_delta = 0.0
    for j in cols:
        xj = Xc[:, j]
        if colsq[j] == 0.0 and l2 == 0.0:
            continue
        g = (w / n) * float(xj @ r) + colsq[j] * theta[j]
        new = _soft(g, l1) / (colsq[j] + 2.0 * l2)
        delta = new - theta[j]
        if delta != 0.0:
            r -= xj * delta
            theta[j] = new
            max_delta = max(max_delta, abs(delta))
    return max_delta


def _internal_objective_gaussian(r, theta, l1, l2, n):
    return float(r @ r) / (2 * n) + l1 * np.abs(theta).sum() + l2 * float(theta @ theta)


def _binomial_nll(eta, y, n):
    # y in {0,1}; stable log(1 + exp(-s*eta))
    s = np.where(y > 0.5, 1.0, -1.0)
    return float(np.logaddexp(0.0, -s * eta).sum()) / n


def _multinomial_nll(eta, yh, n):
    lse = np.log(np.exp(eta - eta.max(axis=1, keepdims=True)).sum(axis=1)) + eta.max(axis=1)
    return float((lse - (eta * yh).sum(axis=1)).sum()) / n


def _penalty(theta, l1, l2):
    return l1 * np.abs(theta).sum() + l2 * float((theta * theta).sum())


# ---------------------------------------------------------------------------
# Fitting
# ---------------------------------------------------------------------------

def fit(
    problem: DesignProblem,
    pen: PenaltySpec,
    tol: float = 1e-7,
    max_sweeps: int = MAX_SWEEPS,
    check_descent: bool = False,
    warm_start: FitResult | None = None,
) -> FitResult:
    """Minimize the penalized objective; see module docstring for conventions."""
    l1, l2 = pen.lambda1, pen.lambda2
    if l1 == 0.0 and l2 == 0.0 and problem.q >= problem.n:
        raise ValueError("unpenalized fit requires q < n")
    Xc, mu, sd = _standardized(problem)
    n, q = problem.n, problem.q
    if problem.family == "gaussian":
        return _fit_gaussian(problem, Xc, mu, sd, l1, l2, tol, max_sweeps, check_descent, warm_start)
    if problem.family == "binomial":
        return _fit_logistic(problem, Xc, mu, sd, l1, l2, tol, max_sweeps, check_descent, warm_start)
    return _fit_multinomial(problem, Xc, mu, sd, l1, l2, tol, max_sweeps, check_descent, warm_start)


def _converged(max_delta, theta, tol):
    return max_delta < tol * max(1.0, float(np.abs(theta).max(initial=0.0)))


def _fit_gaussian(problem, Xc, mu, sd, l1, l2, tol, max_sweeps, check_descent, warm_start):
    n, q = problem.n, problem.q
    ybar = problem.y.mean()
    yc = problem.y - ybar
    theta = np.zeros(q)
    if warm_start is not None and warm_start.coef_internal is not None:
        theta = warm_start.coef_internal.copy()
    r = yc - Xc @ theta
    colsq = (Xc * Xc).sum(axis=0) / n
    all_cols = np.arange(q)
    prev_obj = np.inf
    sweeps = 0
    while sweeps < max_sweeps:
        max_delta = _cd_quadratic(Xc, r, theta, all_cols, colsq, l1, l2, 1.0, n)
        sweeps += 1
        if check_descent:
            obj = _internal_objective_gaussian(r, theta, l1, l2, n)
            assert obj <= prev_obj + 1e-10 * max(1.0, abs(prev_obj)), "objective increased"
            prev_obj = obj
        if _converged(max_delta, theta, tol):
            break
        # active-set passes between full sweeps
        active = np.flatnonzero(theta != 0.0)
        while sweeps < max_sweeps and active.size:
            max_delta = _cd_quadratic(Xc, r, theta, active, colsq, l1, l2, 1.0, n)
            sweeps += 1
            if check_descent:
                obj = _internal_objective_gaussian(r, theta, l1, l2, n)
                assert obj <= prev_obj + 1e-10 * max(1.0, abs(prev_obj)), "objective increased"
                prev_obj = obj
            if _converged(max_delta, theta, tol):
                break
    else:
        raise ConvergenceError("coordinate descent did not converge", max_delta)
    coef = theta / sd
    intercept = np.array(ybar - float(mu @ coef))
    return FitResult(coef=coef, intercept=intercept, sweeps=sweeps,
                     coef_internal=theta, intercept_internal=np.array(ybar))


def _fit_logistic(problem, Xc, mu, sd, l1, l2, tol, max_sweeps, check_descent, warm_start):
    n, q = problem.n, problem.q
    y = problem.y
    theta = np.zeros(q)
    pbar = min(max(y.mean(), PROB_CLAMP), 1 - PROB_CLAMP)
    b = float(np.log(pbar / (1 - pbar)))
    if warm_start is not None and warm_start.coef_internal is not None:
        theta = warm_start.coef_internal.copy()
        b = float(warm_start.intercept_internal)
    colsq = 0.25 * (Xc * Xc).sum(axis=0) / n
    all_cols = np.arange(q)
    eta = b + Xc @ theta
    prev_obj = np.inf
    sweeps = 0
    while sweeps < max_sweeps:
        p = np.clip(1.0 / (1.0 + np.exp(-eta)), PROB_CLAMP, 1.0 - PROB_CLAMP)
        r = 4.0 * (y - p)  # residual of the working response at the current point
        db = r.mean()
        b += db
        r -= db
        max_delta = _cd_quadratic(Xc, r, theta, all_cols, colsq, l1, l2, 0.25, n)
        sweeps += 1
        eta = b + Xc @ theta
        if check_descent:
            obj = _binomial_nll(eta, y, n) + _penalty(theta, l1, l2)
            assert obj <= prev_obj + 1e-10 * max(1.0, abs(prev_obj)), "objective increased"
            prev_obj = obj
        if _converged(max(max_delta, abs(db)), theta, tol):
            break
    else:
        raise ConvergenceError("logistic coordinate descent did not converge", max_delta)
    coef = theta / sd
    intercept = np.array(b - float(mu @ coef))
    return FitResult(coef=coef, intercept=intercept, sweeps=sweeps,
                     coef_internal=theta, intercept_internal=np.array(b))


def _fit_multinomial(problem, Xc, mu, sd, l1, l2, tol, max_sweeps, check_descent, warm_start):
    n, q = problem.n, problem.q
    k = problem.n_classes
    yh = _one_hot(problem.y, k)
    B = np.zeros((q, k))
    freq = np.clip(yh.mean(axis=0), PROB_CLAMP, 1 - PROB_CLAMP)
    b = np.log(freq)
    if warm_start is not None and warm_start.coef_internal is not None:
        B = warm_start.coef_internal.copy()
        b = warm_start.intercept_internal.copy()
    colsq = 0.25 * (Xc * Xc).sum(axis=0) / n
    all_cols = np.arange(q)
    eta = b + Xc @ B
    prev_obj = np.inf
    sweeps = 0
    while sweeps < max_sweeps:
        probs = _softmax_rows(eta)
        max_delta = 0.0
        for c in range(k):
            r = 4.0 * (yh[:, c] - probs[:, c])
            db = r.mean()
            b[c] += db
            r -= db
            theta_c = B[:, c]
            d = _cd_quadratic(Xc, r, theta_c, all_cols, colsq, l1, l2, 0.25, n)
            max_delta = max(max_delta, d, abs(db))
            eta[:, c] = b[c] + Xc @ theta_c
            # refresh class probabilities so later classes see the update
            probs = _softmax_rows(eta)
        sweeps += 1
        if check_descent:
            obj = _multinomial_nll(eta, yh, n) + _penalty(B, l1, l2)
            assert obj <= prev_obj + 1e-10 * max(1.0, abs(prev_obj)), "objective increased"
            prev_obj = obj
        if _converged(max_delta, B, tol):
            break
    else:
        raise ConvergenceError("multinomial coordinate descent did not converge", max_delta)
    coef = B / sd[:, None]
    intercept = b - mu @ coef
    return FitResult(coef=coef, intercept=intercept, sweeps=sweeps,
                     coef_internal=B, intercept_internal=b)


# ---------------------------------------------------------------------------
# Diagnostics: objective, gradients, KKT
# ---------------------------------------------------------------------------

def objective(problem: DesignProblem, pen: PenaltySpec, coef: np.ndarray, intercept) -> float:
    """Penalized objective at (coef, intercept) on the problem's raw scale."""
    eta = np.asarray(intercept) + problem.X @ coef
    if problem.family == "gaussian":
        r = problem.y - eta
        data = float(r @ r) / (2 * problem.n)
    elif problem.family == "binomial":
        data = _binomial_nll(eta, problem.y, problem.n)
    else:
        data = _multinomial_nll(eta, _one_hot(problem.y, problem.n_classes), problem.n)
    return data + _penalty(np.asarray(coef), pen.lambda1, pen.lambda2)


def loss_gradient(problem: DesignProblem, coef: np.ndarray, intercept) -> np.ndarray:
    """Gradient of the (1/n or 1/2n scaled) data term w.r.t. coef, raw scale."""
    eta = np.asarray(intercept) + problem.X @ coef
    if problem.family == "gaussian":
        return -(problem.X.T @ (problem.y - eta)) / problem.n
    if problem.family == "binomial":
        p = 1.0 / (1.0 + np.exp(-eta))
        return (problem.X.T @ (p - problem.y)) / problem.n
    probs = _softmax_rows(eta)
    yh = _one_hot(problem.y, problem.n_classes)
    return (problem.X.T @ (probs - yh)) / problem.n


def _kkt_from_gradient(grad, coef, l1, l2):
    res = 0.0
    for g, t in zip(np.ravel(grad), np.ravel(coef)):
        if t != 0.0:
            res = max(res, abs(g + 2 * l2 * t + l1 * np.sign(t)))
        else:
            res = max(res, max(0.0, abs(g) - l1))
    return res


def kkt_residual(problem: DesignProblem, pen: PenaltySpec, result: FitResult) -> float:
    """Max KKT violation, evaluated on the internally standardized problem."""
    Xc, mu, sd = _standardized(problem)
    std = DesignProblem(
        X=Xc, y=problem.y, family=problem.family,
        n_classes=problem.n_classes, standardize=False,
    )
    grad = loss_gradient(std, result.coef_internal, result.intercept_internal)
    return _kkt_from_gradient(grad, result.coef_internal, pen.lambda1, pen.lambda2)


# ---------------------------------------------------------------------------
# Paths, cross-validation, degree stopping
# ---------------------------------------------------------------------------

def active_predictors(coef: np.ndarray, groups: list[np.ndarray] | None = None) -> np.ndarray:
    """Indices of active predictors; for grouped/multiclass coefficients a
    predictor is active when the group's max |coefficient| exceeds 1e-8."""
    c = np.abs(np.atleast_2d(coef.T)).max(axis=0) if coef.ndim > 1 else np.abs(coef)
    if groups is None:
        return np.flatnonzero(c > ACTIVE_TOL)
    gmax = np.array([c[g].max() if len(g) else 0.0 for g in groups])
    return np.flatnonzero(gmax > ACTIVE_TOL)


def active_count(coef: np.ndarray, groups: list[np.ndarray] | None = None) -> int:
    return int(len(active_predictors(coef, groups)))


def lambda_max(problem: DesignProblem) -> float:
    """Smallest l1 at which the intercept-only model is optimal."""
    Xc, mu, sd = _standardized(problem)
    n = problem.n
    if problem.family == "gaussian":
        yc = problem.y - problem.y.mean()
        return float(np.abs(Xc.T @ yc).max()) / n
    if problem.family == "binomial":
        p0 = problem.y.mean()
        return float(np.abs(Xc.T @ (problem.y - p0)).max()) / n
    yh = _one_hot(problem.y, problem.n_classes)
    p0 = yh.mean(axis=0)
    return float(np.abs(Xc.T @ (yh - p0)).max()) / n


def lambda_path(
    problem: DesignProblem,
    lambda2: float = 0.0,
    grid_size: int = 100,
    lambda_min_ratio: float = 1e-3,
    groups: list[np.ndarray] | None = None,
) -> CoefficientPath:
    """Warm-started fits along a log-spaced decreasing l1 grid from lambda_max."""
    if grid_size < 2:
        raise ValueError("grid_size must be >= 2")
    lmax = lambda_max(problem)
    if lmax == 0.0:
        lmax = 1.0
    lambdas = lmax * np.power(lambda_min_ratio, np.linspace(0.0, 1.0, grid_size))
    coefs, intercepts, counts = [], [], []
    prev = None
    for l1 in lambdas:
        prev = fit(problem, PenaltySpec(lambda1=float(l1), lambda2=lambda2), warm_start=prev)
        coefs.append(prev.coef.copy())
        intercepts.append(np.array(prev.intercept, copy=True))
        counts.append(active_count(prev.coef, groups))
    return CoefficientPath(
        lambdas=lambdas, lambda2=lambda2, coefs=coefs,
        intercepts=intercepts, active_counts=np.array(counts),
    )


def first_k_active(path: CoefficientPath, k: int) -> tuple[np.ndarray, np.ndarray, bool]:
    """Coefficients at the first (largest-l1) grid point with >= k active
    predictors; returns (coef, intercept, saturated)."""
    if k < 0:
        raise ValueError("k must be >= 0")
    for coef, icpt, count in zip(path.coefs, path.intercepts, path.active_counts):
        if count >= k:
            return coef, icpt, False
    return path.coefs[-1], path.intercepts[-1], True


def _fold_assignment(problem: DesignProblem, folds: int, rng: np.random.Generator) -> np.ndarray:
    n = problem.n
    assign = np.empty(n, dtype=int)
    if problem.family == "gaussian":
        order = rng.permutation(n)
        assign[order] = np.arange(n) % folds
        return assign
    # stratified: round-robin within each class after a shuffle
    y = problem.y if problem.family == "multinomial" else problem.y.astype(int)
    classes, counts = np.unique(y, return_counts=True)
    if (counts < 2).any():
        raise ValueError("cannot stratify: a class has fewer than two samples")
    offset = 0
    for c in classes:
        idx = np.flatnonzero(y == c)
        idx = idx[rng.permutation(len(idx))]
        assign[idx] = (np.arange(len(idx)) + offset) % folds
        offset += len(idx)
    return assign


def _deviance(problem: DesignProblem, coef, intercept, rows: np.ndarray) -> float:
    eta = np.asarray(intercept) + problem.X[rows] @ coef
    if problem.family == "gaussian":
        r = problem.y[rows] - eta
        return float(r @ r) / len(rows)
    if problem.family == "binomial":
        return 2.0 * _binomial_nll(eta, problem.y[rows], len(rows))
    return 2.0 * _multinomial_nll(eta, _one_hot(problem.y[rows], problem.n_classes), len(rows))


def cross_validate(
    problem: DesignProblem,
    lambda2: float = 0.0,
    folds: int = 10,
    rng: np.random.Generator | None = None,
    grid_size: int = 50,
    lambda_min_ratio: float = 1e-3,
) -> CVResult:
    """K-fold selection of l1 by mean held-out deviance; ties go to the
    larger (sparser) l1. Refits on the full data at the chosen value."""
    if not 2 <= folds <= problem.n:
        raise ValueError("require 2 <= folds <= n")
    if rng is None:
        rng = np.random.default_rng()
    lmax = lambda_max(problem)
    if lmax == 0.0:
        lmax = 1.0
    lambdas = lmax * np.power(lambda_min_ratio, np.linspace(0.0, 1.0, grid_size))
    assign = _fold_assignment(problem, folds, rng)
    dev = np.zeros((folds, grid_size))
    for f in range(folds):
        train = np.flatnonzero(assign != f)
        test = np.flatnonzero(assign == f)
        sub = DesignProblem(
            X=problem.X[train], y=problem.y[train], family=problem.family,
            n_classes=problem.n_classes, standardize=problem.standardize,
        )
        prev = None
        for gi, l1 in enumerate(lambdas):
            prev = fit(sub, PenaltySpec(lambda1=float(l1), lambda2=lambda2), warm_start=prev)
            dev[f, gi] = _deviance(problem, prev.coef, prev.intercept, test)
    mean_dev = dev.mean(axis=0)
    best = int(np.argmin(mean_dev))  # first minimum <=> largest l1 on exact ties
    # statistical ties also go to the larger (sparser) l1: accept the largest
    # l1 whose mean deviance is within one standard error of the minimum
    se = float(dev[:, best].std(ddof=1)) / np.sqrt(folds) if folds > 1 else 0.0
    best = int(np.argmax(mean_dev <= mean_dev[best] + se))
    chosen = float(lambdas[best])
    final = fit(problem, PenaltySpec(lambda1=chosen, lambda2=lambda2))
    return CVResult(
        lambda1=chosen, coef=final.coef, intercept=final.intercept,
        lambdas=lambdas, mean_deviance=mean_dev,
    )
