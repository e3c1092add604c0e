"""Experiment configuration: sectioned key-value files with schema checks.

Flat INI-style files (configparser syntax), schema version 1. Validation
happens up front and reports the offending section and key; nothing is
written to disk until the whole config has been accepted.
"""
from __future__ import annotations

import configparser
from dataclasses import dataclass
from pathlib import Path

from ._rng import derive_rng
from .evaluate import SweepSpec
from .graphs import (
    Graph,
    community_graph,
    densify,
    random_bounded_degree,
    read_graph,
    star_graph,
)
from .models import CouplingLaw, constant, rademacher, uniform
from .samplers import ChainConfig

__all__ = ["ConfigError", "ExperimentConfig", "load_config", "build_graph"]

SCHEMA_VERSION = "1"


class ConfigError(ValueError):
    def __init__(self, section: str, key: str, message: str):
        super().__init__(f"[{section}] {key}: {message}")
        self.section = section
        self.key = key


@dataclass
class ExperimentConfig:
    graph_family: str
    graph_params: dict
    model_kind: str
    coupling: float
    coupling_law: CouplingLaw | None
    k: int
    sampler: str
    n_values: list[int]
    chain: ChainConfig
    lambda1: float | str
    lambda2_grid: list[float] | None
    alpha_grid: list[float] | None
    selection: str
    rules: tuple[str, ...]
    methods: tuple[str, ...]
    trials: int
    seed: int
    out_dir: str
    keep_samples: bool
    workers: int


def _get(cp, section, key, cast, default=None, required=False, choices=None):
    if not cp.has_section(section):
        raise ConfigError(section, key, "missing section")
    if not cp.has_option(section, key):
        if required:
            raise ConfigError(section, key, "missing required key")
        return default
    raw = cp.get(section, key)
    try:
        value = cast(raw)
    except Exception:
        raise ConfigError(section, key, f"cannot parse {raw!r}") from None
    if choices is not None and value not in choices:
        raise ConfigError(section, key, f"must be one of {sorted(choices)}, got {value!r}")
    return value


def _floats(raw: str) -> list[float]:
    return [float(v) for v in raw.split()]


def _ints(raw: str) -> list[int]:
    return [int(v) for v in raw.split()]


def _bool(raw: str) -> bool:
    lowered = raw.strip().lower()
    if lowered in ("true", "yes", "1"):
        return True
    if lowered in ("false", "no", "0"):
        return False
    raise ValueError(raw)


def load_config(path: str | Path) -> ExperimentConfig:
    cp = configparser.ConfigParser()
    read = cp.read(path)
    if not read:
        raise ConfigError("meta", "file", f"config file {path} not readable")
    version = _get(cp, "meta", "schema_version", str, required=True)
    if version != SCHEMA_VERSION:
        raise ConfigError("meta", "schema_version", f"expected {SCHEMA_VERSION}, got {version}")

    family = _get(cp, "graph", "family", str, required=True,
                  choices={"star", "community", "bounded", "file"})
    gp: dict = {"require_connected": _get(cp, "graph", "require_connected", _bool, default=False)}
    if family == "star":
        gp["a"] = _get(cp, "graph", "a", int, required=True)
        gp["b"] = _get(cp, "graph", "b", int, required=True)
        gp["densify_rho"] = _get(cp, "graph", "densify_rho", float)
        gp["preserve_max_degree"] = _get(cp, "graph", "preserve_max_degree", _bool, default=True)
    elif family == "community":
        for key in ("s", "t"):
            gp[key] = _get(cp, "graph", key, int, required=True)
        for key in ("beta_in", "beta_out"):
            gp[key] = _get(cp, "graph", key, float, required=True)
    elif family == "bounded":
        for key in ("p", "d_max", "m"):
            gp[key] = _get(cp, "graph", key, int, required=True)
    else:
        gp["path"] = _get(cp, "graph", "path", str, required=True)

    kind = _get(cp, "model", "kind", str, required=True, choices={"gmrf", "ising", "potts"})
    coupling = _get(cp, "model", "coupling", float, default=0.5)
    law = None
    k = 0
    if kind in ("ising", "potts"):
        law_name = _get(cp, "model", "law", str, default="constant",
                        choices={"constant", "uniform", "rademacher"})
        params = _get(cp, "model", "law_params", _floats, default=[0.25])
        try:
            if law_name == "constant":
                law = constant(params[0])
            elif law_name == "rademacher":
                law = rademacher(params[0])
            else:
                law = uniform(params[0], params[1])
        except (IndexError, ValueError) as exc:
            raise ConfigError("model", "law_params", str(exc)) from None
    if kind == "potts":
        k = _get(cp, "model", "k", int, required=True)
        if k < 3:
            raise ConfigError("model", "k", "Potts requires k >= 3")
    elif kind == "ising":
        k = 2

    sampler = _get(cp, "sampling", "sampler", str, default="auto",
                   choices={"exact", "gibbs", "sw", "auto"})
    n_values = _get(cp, "sampling", "n", _ints, required=True)
    if any(n <= 0 for n in n_values):
        raise ConfigError("sampling", "n", "sample sizes must be positive")
    chain = ChainConfig(
        burn_in=_get(cp, "sampling", "burn_in", int, default=200),
        thin=_get(cp, "sampling", "thin", int, default=5),
    )

    lambda1_raw = _get(cp, "penalty", "lambda1", str, default="auto")
    lambda1: float | str = "auto" if lambda1_raw == "auto" else float(lambda1_raw)
    lambda2_grid = _get(cp, "penalty", "lambda2_grid", _floats)
    alpha_grid = _get(cp, "penalty", "alpha_grid", _floats)
    if (lambda2_grid is None) == (alpha_grid is None):
        raise ConfigError("penalty", "lambda2_grid",
                          "exactly one of lambda2_grid / alpha_grid must be present")

    selection = _get(cp, "selection", "mode", str, default="fixed",
                     choices={"fixed", "cv", "degree"})
    rules = tuple(_get(cp, "selection", "rules", str, default="and or").split())
    for rule in rules:
        if rule not in ("and", "or"):
            raise ConfigError("selection", "rules", f"unknown rule {rule!r}")
    methods = tuple(_get(cp, "selection", "methods", str, default="N1").split())
    for m in methods:
        if m not in ("N1", "N2_L", "N2_S", "N2_Sbar"):
            raise ConfigError("selection", "methods", f"unknown method {m!r}")

    trials = _get(cp, "evaluation", "trials", int, required=True)
    if trials < 1:
        raise ConfigError("evaluation", "trials", "trials must be >= 1")
    seed = _get(cp, "evaluation", "seed", int, required=True)

    out_dir = _get(cp, "output", "directory", str, required=True)
    keep_samples = _get(cp, "output", "keep_samples", _bool, default=False)
    workers = _get(cp, "output", "workers", int, default=1)

    return ExperimentConfig(
        graph_family=family, graph_params=gp, model_kind=kind, coupling=coupling,
        coupling_law=law, k=k, sampler=sampler, n_values=n_values, chain=chain,
        lambda1=lambda1, lambda2_grid=lambda2_grid, alpha_grid=alpha_grid,
        selection=selection, rules=rules, methods=methods, trials=trials,
        seed=seed, out_dir=out_dir, keep_samples=keep_samples, workers=workers,
    )


def build_graph(family: str, params: dict, seed: int) -> Graph:
    """Deterministic graph construction from the stage stream of `seed`."""
    rng = derive_rng(seed, "graph")
    rc = params.get("require_connected", False)
    if family == "star":
        g = star_graph(params["a"], params["b"])
        if params.get("densify_rho") is not None:
            g = densify(g, params["densify_rho"],
                        preserve_max_degree=params.get("preserve_max_degree", True), rng=rng)
        return g
    if family == "community":
        return community_graph(params["s"], params["t"], params["beta_in"],
                               params["beta_out"], rng, require_connected=rc)
    if family == "bounded":
        return random_bounded_degree(params["p"], params["d_max"], params["m"],
                                     rng, require_connected=rc)
    if family == "file":
        return read_graph(params["path"])
    raise ValueError(f"unknown graph family {family!r}")


def to_sweep_spec(cfg: ExperimentConfig, graph: Graph) -> SweepSpec:
    return SweepSpec(
        graph=graph,
        graph_family=cfg.graph_family,
        model_kind=cfg.model_kind,
        n_values=cfg.n_values,
        trials=cfg.trials,
        seed=cfg.seed,
        coupling=cfg.coupling,
        coupling_law=cfg.coupling_law,
        k=cfg.k,
        sampler=cfg.sampler,
        chain=cfg.chain,
        lambda1=cfg.lambda1,
        lambda2_grid=cfg.lambda2_grid,
        alpha_grid=cfg.alpha_grid,
        rules=cfg.rules,
        methods=cfg.methods,
        selection=cfg.selection,
    )
