"""Command-line harness: `run` for whole experiments, plus per-stage
subcommands (gen-graph, sample, fit-neighborhoods, vote, score) that
compose through the documented file formats.

Each stage derives its random stream from (master seed, stage label, cell
indices), so a chain of stage commands reproduces `run` bit for bit.
"""
from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import math
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from ._rng import derive_rng
from .config import ConfigError, build_graph, load_config, to_sweep_spec
from .enet import PenaltySpec
from .evaluate import build_model, draw_samples, run_sweep, score, write_results_csv
from .graphs import read_graph, stats, write_graph
from .models import read_model, write_model
from .neighborhoods import (
    estimate_all_neighborhoods,
    normalize_symmetrize,
    read_neighborhoods,
    reconstruct_edges,
    symmetrize,
    vote_matrix,
    write_neighborhoods,
    write_vote_matrix,
)
from .samplers import ChainConfig, read_samples, write_samples

OUT_ROOT_ENV = "ENETGRAPH_OUT"


def _resolve_out(path: str) -> Path:
    root = os.environ.get(OUT_ROOT_ENV)
    p = Path(path)
    if root and not p.is_absolute():
        return Path(root) / p
    return p


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _parse_lambda1(raw: str, samples) -> float:
    if raw == "auto":
        return math.sqrt(math.log(samples.p) / samples.n)
    return float(raw)


# ---------------------------------------------------------------------------
# Subcommand implementations
# ---------------------------------------------------------------------------

def cmd_run(args) -> int:
    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    if args.seed is not None:
        cfg.seed = args.seed
    out_dir = _resolve_out(args.out or cfg.out_dir)
    graph = build_graph(cfg.graph_family, cfg.graph_params, cfg.seed)
    spec = to_sweep_spec(cfg, graph)
    model = build_model(spec)

    out_dir.mkdir(parents=True, exist_ok=True)
    write_graph(graph, out_dir / "graph.txt")
    write_model(model, out_dir / "model.txt")
    failures: list = []
    rows = run_sweep(spec, n_jobs=cfg.workers, failures=failures)
    write_results_csv(rows, out_dir / "results.csv")
    if cfg.keep_samples:
        for ni, n in enumerate(cfg.n_values):
            for t in range(cfg.trials):
                rng = derive_rng(cfg.seed, "sample", ni, t)
                s = draw_samples(model, n, cfg.sampler, cfg.chain, rng)
                write_samples(s, out_dir / f"samples_n{n}_t{t}.csv")
    artifacts = {
        f.name: _sha256(f) for f in sorted(out_dir.iterdir()) if f.name != "manifest.json"
    }
    manifest = {
        "schema_version": 1,
        "config": dataclasses.asdict(cfg),
        "master_seed": cfg.seed,
        "artifacts": artifacts,
        "failures": failures,
        "created_at": datetime.now(timezone.utc).isoformat(),
    }
    (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    if failures:
        print(f"{len(failures)} cell(s) failed; see manifest.json", file=sys.stderr)
        return 1
    print(f"wrote {out_dir}")
    return 0


def cmd_gen_graph(args) -> int:
    params = {
        "a": args.a, "b": args.b, "s": args.s, "t": args.t,
        "beta_in": args.beta_in, "beta_out": args.beta_out,
        "p": args.p, "d_max": args.d_max, "m": args.m,
        "densify_rho": args.densify_rho, "preserve_max_degree": True,
        "require_connected": args.require_connected, "path": None,
    }
    g = build_graph(args.family, params, args.seed)
    out = _resolve_out(args.out)
    write_graph(g, out)
    st = stats(g)
    print(f"p={g.p} m={g.m} d={st.max_degree} rho={st.edge_density:.4f} -> {out}")
    return 0


def cmd_sample(args) -> int:
    model = read_model(args.model)
    rng = derive_rng(args.seed, "sample", args.cell, args.trial)
    chain = ChainConfig(burn_in=args.burn_in, thin=args.thin)
    s = draw_samples(model, args.n, args.sampler, chain, rng)
    out = _resolve_out(args.out)
    write_samples(s, out)
    print(f"wrote {s.n} x {s.p} samples -> {out}")
    return 0


def cmd_fit_neighborhoods(args) -> int:
    samples = read_samples(args.samples)
    pen = PenaltySpec(lambda1=_parse_lambda1(args.lambda1, samples), lambda2=args.lambda2)
    degrees = None
    if args.degrees:
        degrees = np.array([int(v) for v in args.degrees.split(",")])
    estimates = estimate_all_neighborhoods(
        samples, pen, selection=args.selection, degrees=degrees,
    )
    out = _resolve_out(args.out)
    write_neighborhoods(estimates, out)
    print(f"wrote neighborhoods -> {out}")
    return 0


def cmd_vote(args) -> int:
    samples = read_samples(args.samples)
    pen = PenaltySpec(lambda1=_parse_lambda1(args.lambda1, samples), lambda2=args.lambda2)
    vm = vote_matrix(samples, pen)
    prefix = _resolve_out(args.out)
    write_vote_matrix(vm, f"{prefix}_L.csv")
    write_vote_matrix(symmetrize(vm), f"{prefix}_S.csv")
    write_vote_matrix(normalize_symmetrize(vm), f"{prefix}_Sbar.csv")
    print(f"wrote {prefix}_L.csv, {prefix}_S.csv, {prefix}_Sbar.csv")
    return 0


def cmd_score(args) -> int:
    g = read_graph(args.graph)
    if args.neighborhoods:
        estimates = read_neighborhoods(args.neighborhoods)
        edges = reconstruct_edges(estimates, args.rule)
    else:
        edges = read_graph(args.edges).edges
    rep = score(g, edges)
    line = (
        f"type1={rep.type1!r} type2={rep.type2!r} total={rep.total!r} "
        f"precision={rep.precision!r} recall={rep.recall!r} "
        f"tp={rep.tp} fp={rep.fp} fn={rep.fn} tn={rep.tn}"
    )
    print(line)
    if args.out:
        _resolve_out(args.out).write_text(line + "\n", encoding="utf-8")
    return 0


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="enetgraph")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a full experiment from a config file")
    p_run.add_argument("config")
    p_run.add_argument("--seed", type=int, default=None)
    p_run.add_argument("--out", default=None)
    p_run.set_defaults(func=cmd_run)

    p_gg = sub.add_parser("gen-graph", help="generate a synthetic graph file")
    p_gg.add_argument("--family", required=True, choices=["star", "community", "bounded"])
    p_gg.add_argument("--a", type=int)
    p_gg.add_argument("--b", type=int)
    p_gg.add_argument("--s", type=int)
    p_gg.add_argument("--t", type=int)
    p_gg.add_argument("--beta-in", type=float, dest="beta_in")
    p_gg.add_argument("--beta-out", type=float, dest="beta_out")
    p_gg.add_argument("--p", type=int)
    p_gg.add_argument("--d-max", type=int, dest="d_max")
    p_gg.add_argument("--m", type=int)
    p_gg.add_argument("--densify-rho", type=float, dest="densify_rho")
    p_gg.add_argument("--require-connected", action="store_true")
    p_gg.add_argument("--seed", type=int, required=True)
    p_gg.add_argument("--out", required=True)
    p_gg.set_defaults(func=cmd_gen_graph)

    p_s = sub.add_parser("sample", help="draw samples from a model file")
    p_s.add_argument("--model", required=True)
    p_s.add_argument("--n", type=int, required=True)
    p_s.add_argument("--sampler", default="auto", choices=["exact", "gibbs", "sw", "auto"])
    p_s.add_argument("--burn-in", type=int, default=200, dest="burn_in")
    p_s.add_argument("--thin", type=int, default=5)
    p_s.add_argument("--cell", type=int, default=0)
    p_s.add_argument("--trial", type=int, default=0)
    p_s.add_argument("--seed", type=int, required=True)
    p_s.add_argument("--out", required=True)
    p_s.set_defaults(func=cmd_sample)

    p_f = sub.add_parser("fit-neighborhoods", help="estimate all per-node neighborhoods")
    p_f.add_argument("--samples", required=True)
    p_f.add_argument("--lambda1", default="auto")
    p_f.add_argument("--lambda2", type=float, default=0.0)
    p_f.add_argument("--selection", default="fixed", choices=["fixed", "cv", "degree"])
    p_f.add_argument("--degrees", default=None, help="comma-separated per-node degrees")
    p_f.add_argument("--seed", type=int, default=0)
    p_f.add_argument("--out", required=True)
    p_f.set_defaults(func=cmd_fit_neighborhoods)

    p_v = sub.add_parser("vote", help="pairwise-union vote matrices (L, S, S-bar)")
    p_v.add_argument("--samples", required=True)
    p_v.add_argument("--lambda1", default="auto")
    p_v.add_argument("--lambda2", type=float, default=0.0)
    p_v.add_argument("--seed", type=int, default=0)
    p_v.add_argument("--out", required=True, help="output path prefix")
    p_v.set_defaults(func=cmd_vote)

    p_sc = sub.add_parser("score", help="score an estimate against a ground-truth graph")
    p_sc.add_argument("--graph", required=True)
    p_sc.add_argument("--neighborhoods", default=None)
    p_sc.add_argument("--edges", default=None, help="estimated edges in graph file format")
    p_sc.add_argument("--rule", default="and", choices=["and", "or"])
    p_sc.add_argument("--seed", type=int, default=0)
    p_sc.add_argument("--out", default=None)
    p_sc.set_defaults(func=cmd_score)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "score" and not (args.neighborhoods or args.edges):
        print("score: need --neighborhoods or --edges", file=sys.stderr)
        return 2
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
