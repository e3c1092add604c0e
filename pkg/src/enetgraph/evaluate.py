"""Scoring recovered edge sets and driving experiment sweeps.

The results CSV written here is the contract consumed by the plot emitter:
columns run_id, graph_family, p, d, rho, model, k, n, lambda1, lambda2,
alpha, rule, method, trial, type1, type2, total, precision, recall, tp, fp,
fn, tn, seed. Aggregate rows carry "mean" / "std" in the trial column.
"""
from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from joblib import Parallel, delayed

from ._rng import derive_rng
from .enet import PenaltySpec
from .graphs import Graph, stats
from .models import (
    CouplingLaw,
    GaussianPrecision,
    IsingParams,
    PottsParams,
    build_gmrf,
    build_ising,
    build_potts,
)
from .neighborhoods import (
    estimate_all_neighborhoods,
    normalize_symmetrize,
    reconstruct_edges,
    symmetrize,
    vote_matrix,
    vote_neighborhoods,
)
from .samplers import ChainConfig, gibbs_sample, sample_gaussian, swendsen_wang_sample

__all__ = [
    "ErrorReport",
    "SweepSpec",
    "score",
    "run_sweep",
    "recall_precision_curve",
    "RESULT_COLUMNS",
    "write_results_csv",
    "read_results_csv",
    "build_model",
    "draw_samples",
]

RESULT_COLUMNS = [
    "run_id", "graph_family", "p", "d", "rho", "model", "k", "n",
    "lambda1", "lambda2", "alpha", "rule", "method", "trial",
    "type1", "type2", "total", "precision", "recall",
    "tp", "fp", "fn", "tn", "seed",
]

AGG_COLUMNS = ["type1", "type2", "total", "precision", "recall", "tp", "fp", "fn", "tn"]


@dataclass(frozen=True)
class ErrorReport:
    tp: int
    fp: int
    fn: int
    tn: int
    type1: float
    type2: float
    total: float
    precision: float
    recall: float


def score(true_graph: Graph, estimated: frozenset[tuple[int, int]] | set) -> ErrorReport:
    """Exact confusion counts over the p(p-1)/2 unordered vertex pairs.

    type1 = FP / true non-edges, type2 = FN / true edges, total = type1 +
    type2 (matching the additive convention of the oracle-degree table);
    precision and recall use the 0/0 -> 1 rule.
    """
    p = true_graph.p
    est = {(min(i, j), max(i, j)) for (i, j) in estimated}
    for i, j in est:
        if not (0 <= i < p and 0 <= j < p):
            raise ValueError(f"estimated edge ({i},{j}) outside vertex range of p={p}")
    true = true_graph.edges
    tp = len(est & true)
    fp = len(est - true)
    fn = len(true - est)
    pairs = p * (p - 1) // 2
    tn = pairs - tp - fp - fn
    non_edges = pairs - len(true)
    type1 = fp / non_edges if non_edges else 0.0
    type2 = fn / len(true) if true else 0.0
    precision = tp / (tp + fp) if tp + fp else 1.0
    recall = tp / (tp + fn) if tp + fn else 1.0
    return ErrorReport(
        tp=tp, fp=fp, fn=fn, tn=tn,
        type1=type1, type2=type2, total=type1 + type2,
        precision=precision, recall=recall,
    )


# ---------------------------------------------------------------------------
# Sweeps
# ---------------------------------------------------------------------------

@dataclass
class SweepSpec:
    graph: Graph
    graph_family: str
    model_kind: str  # "gmrf" | "ising" | "potts"
    n_values: list[int]
    trials: int
    seed: int
    coupling: float = 0.5  # gmrf edge value
    coupling_law: CouplingLaw | None = None  # ising/potts
    k: int = 0
    sampler: str = "auto"  # "exact" | "gibbs" | "sw" | "auto"
    chain: ChainConfig = field(default_factory=ChainConfig)
    lambda1: float | str = "auto"
    lambda2_grid: list[float] | None = None
    alpha_grid: list[float] | None = None
    rules: tuple[str, ...] = ("and", "or")
    methods: tuple[str, ...] = ("N1",)
    selection: str = "fixed"
    pair_lambda2: float = 0.0

    def __post_init__(self):
        if (self.lambda2_grid is None) == (self.alpha_grid is None):
            raise ValueError("exactly one of lambda2_grid / alpha_grid must be set")
        if not self.n_values or self.trials < 1:
            raise ValueError("need a non-empty n list and trials >= 1")


def build_model(spec: SweepSpec) -> GaussianPrecision | IsingParams | PottsParams:
    rng = derive_rng(spec.seed, "model")
    if spec.model_kind == "gmrf":
        return build_gmrf(spec.graph, coupling=spec.coupling)
    if spec.model_kind == "ising":
        return build_ising(spec.graph, spec.coupling_law, rng)
    if spec.model_kind == "potts":
        return build_potts(spec.graph, spec.k, spec.coupling_law, rng)
    raise ValueError(f"unknown model kind {spec.model_kind!r}")


def draw_samples(model, n: int, sampler: str, chain: ChainConfig, rng):
    if isinstance(model, GaussianPrecision):
        return sample_gaussian(model, n, rng)
    if sampler == "gibbs":
        return gibbs_sample(model, n, chain, rng)
    if sampler in ("sw", "auto"):
        return swendsen_wang_sample(model, n, chain, rng)
    raise ValueError(f"sampler {sampler!r} not valid for {type(model).__name__}")


def _penalty_cells(spec: SweepSpec, lambda1: float) -> list[tuple[float, float, float]]:
    """(lambda1, lambda2, alpha) triples for the grid."""
    cells = []
    if spec.lambda2_grid is not None:
        for l2 in spec.lambda2_grid:
            tot = lambda1 + l2
            cells.append((lambda1, l2, lambda1 / tot if tot > 0 else 1.0))
    else:
        for a in spec.alpha_grid:
            pen = PenaltySpec.from_alpha(lambda1, a)
            cells.append((pen.lambda1, pen.lambda2, a))
    return cells


def _trial_rows(spec: SweepSpec, model, gstats, run_id: str, ni: int, n: int, trial: int):
    rng = derive_rng(spec.seed, "sample", ni, trial)
    samples = draw_samples(model, n, spec.sampler, spec.chain, rng)
    lambda1 = math.sqrt(math.log(spec.graph.p) / n) if spec.lambda1 == "auto" else float(spec.lambda1)
    degrees = spec.graph.degrees()
    rows = []
    for gi, (l1, l2, alpha) in enumerate(_penalty_cells(spec, lambda1)):
        pen = PenaltySpec(lambda1=l1, lambda2=l2)
        per_method: dict[str, list] = {}
        if "N1" in spec.methods:
            per_method["N1"] = estimate_all_neighborhoods(
                samples, pen,
                selection=spec.selection,
                degrees=degrees if spec.selection == "degree" else None,
                rng_seeds=[derive_rng(spec.seed, "cv", ni, trial, gi, s) for s in range(spec.graph.p)]
                if spec.selection == "cv" else None,
            )
        vote_methods = [m for m in spec.methods if m.startswith("N2")]
        if vote_methods:
            vm_l = vote_matrix(samples, PenaltySpec(lambda1=lambda1, lambda2=spec.pair_lambda2))
            variants = {"N2_L": vm_l, "N2_S": symmetrize(vm_l), "N2_Sbar": normalize_symmetrize(vm_l)}
            for m in vote_methods:
                per_method[m] = vote_neighborhoods(variants[m], mode="degree", degrees=degrees)
        for method, estimates in per_method.items():
            for rule in spec.rules:
                rep = score(spec.graph, reconstruct_edges(estimates, rule))
                rows.append({
                    "run_id": run_id, "graph_family": spec.graph_family,
                    "p": spec.graph.p, "d": gstats.max_degree, "rho": gstats.edge_density,
                    "model": spec.model_kind, "k": spec.k, "n": n,
                    "lambda1": l1, "lambda2": l2, "alpha": alpha,
                    "rule": rule, "method": method, "trial": trial,
                    "type1": rep.type1, "type2": rep.type2, "total": rep.total,
                    "precision": rep.precision, "recall": rep.recall,
                    "tp": rep.tp, "fp": rep.fp, "fn": rep.fn, "tn": rep.tn,
                    "seed": spec.seed,
                })
    return rows


def _safe_trial(spec, model, gstats, run_id, ni, n, t):
    try:
        return _trial_rows(spec, model, gstats, run_id, ni, n, t), None
    except Exception as exc:
        return [], {"n": n, "trial": t, "error": f"{type(exc).__name__}: {exc}"}


def run_sweep(
    spec: SweepSpec, n_jobs: int = 1, failures: list | None = None
) -> list[dict]:
    """Per-trial result rows plus mean/std aggregate rows per cell.

    When `failures` is a list, failing cells are recorded there instead of
    raising; otherwise the first failure propagates tagged with its cell.
    """
    model = build_model(spec)
    gstats = stats(spec.graph)
    run_id = hashlib.sha256(repr(spec).encode()).hexdigest()[:12]
    jobs = [(ni, n, t) for ni, n in enumerate(spec.n_values) for t in range(spec.trials)]
    if n_jobs == 1:
        results = [_safe_trial(spec, model, gstats, run_id, ni, n, t) for ni, n, t in jobs]
    else:
        results = Parallel(n_jobs=n_jobs)(
            delayed(_safe_trial)(spec, model, gstats, run_id, ni, n, t) for ni, n, t in jobs
        )
    rows = []
    for chunk, failure in results:
        rows.extend(chunk)
        if failure is not None:
            if failures is None:
                raise RuntimeError(
                    f"sweep cell n={failure['n']} trial={failure['trial']} failed: {failure['error']}"
                )
            failures.append(failure)
    rows.sort(key=lambda r: (r["n"], r["lambda2"], r["rule"], r["method"], r["trial"]))
    # aggregate rows per (n, lambda2, rule, method)
    agg_rows = []
    keys = sorted({(r["n"], r["lambda2"], r["rule"], r["method"]) for r in rows})
    for key in keys:
        members = [r for r in rows if (r["n"], r["lambda2"], r["rule"], r["method"]) == key]
        for label, fn in (("mean", np.mean), ("std", np.std)):
            agg = dict(members[0])
            agg["trial"] = label
            for col in AGG_COLUMNS:
                agg[col] = float(fn([m[col] for m in members]))
            agg_rows.append(agg)
    return rows + agg_rows


def recall_precision_curve(rows: list[dict]) -> list[dict]:
    """Mean (recall, precision) points grouped by (alpha, n) from trial rows."""
    trial_rows = [r for r in rows if isinstance(r["trial"], int)]
    points = []
    for alpha in sorted({r["alpha"] for r in trial_rows}):
        for n in sorted({r["n"] for r in trial_rows if r["alpha"] == alpha}):
            members = [r for r in trial_rows if r["alpha"] == alpha and r["n"] == n]
            points.append({
                "alpha": alpha, "n": n,
                "recall": float(np.mean([m["recall"] for m in members])),
                "precision": float(np.mean([m["precision"] for m in members])),
            })
    return points


# ---------------------------------------------------------------------------
# Results CSV
# ---------------------------------------------------------------------------

def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_results_csv(rows: list[dict], path: str | Path) -> None:
    lines = [",".join(RESULT_COLUMNS)]
    for r in rows:
        lines.append(",".join(_fmt(r[c]) for c in RESULT_COLUMNS))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_results_csv(path: str | Path) -> list[dict]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    header = lines[0].split(",")
    if header != RESULT_COLUMNS:
        raise ValueError(f"unexpected results CSV columns: {header}")
    out = []
    for ln in lines[1:]:
        if not ln.strip():
            continue
        raw = dict(zip(header, ln.split(",")))
        for col in ("p", "d", "k", "n", "tp", "fp", "fn", "tn", "seed"):
            raw[col] = int(float(raw[col]))
        for col in ("rho", "lambda1", "lambda2", "alpha", "type1", "type2",
                    "total", "precision", "recall"):
            raw[col] = float(raw[col])
        if raw["trial"] not in ("mean", "std"):
            raw["trial"] = int(raw["trial"])
        out.append(raw)
    return out
