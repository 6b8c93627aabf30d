"""Command-line front end: generate, measure, detect, evaluate, sweep.

Exit codes: 0 on success, 1 on configuration/usage errors, 2 when a sweep
finished but some rows failed.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys

from .config import ALGORITHMS, MODELS, SweepConfig, load_config
from .detection import detect_fast_greedy, detect_label_propagation, detect_louvain
from .errors import CommbenchError, ConfigError
from .evaluation import nmi
from .generators import BaParams, CmParams, EvParams
from .io import (
    ingest_external_partition,
    read_edge_list,
    save_network,
    write_membership,
)
from .metrics import measure_topology
from .planting import PlantingParams, plant
from .rng import RandomSource
from .sweep import run_sweep


def _add_model_flags(sub):
    sub.add_argument("--model", choices=MODELS)
    sub.add_argument("--n", type=int)
    sub.add_argument("--gamma", type=float)
    sub.add_argument("--k_max", type=int)
    sub.add_argument("--avg_k", type=float)
    sub.add_argument("--m", type=int)
    sub.add_argument("--m0", type=int)
    sub.add_argument("--b", type=float)
    sub.add_argument("--epsilon", type=float)
    sub.add_argument("--beta", type=float)
    sub.add_argument("--c_min", type=int)
    sub.add_argument("--c_max", type=int)
    sub.add_argument("--tolerance", type=float)
    sub.add_argument("--max_sweeps", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="commbench",
        description="Benchmark networks with planted communities.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    gen = subs.add_parser("generate", help="plant one network and write it out")
    _add_model_flags(gen)
    gen.add_argument("--mu", type=float, required=True)
    gen.add_argument("--seed", type=int, default=1)
    gen.add_argument("--out", required=True, help="output path prefix")

    meas = subs.add_parser("measure", help="topology report for an edge-list file")
    meas.add_argument("--edges", required=True)
    meas.add_argument("--n", type=int, help="node count if larger than max id + 1")

    det = subs.add_parser("detect", help="run one detection algorithm")
    det.add_argument("--edges", required=True)
    det.add_argument("--algorithm", choices=ALGORITHMS, required=True)
    det.add_argument("--seed", type=int, default=1)
    det.add_argument("--n", type=int)
    det.add_argument("--out", required=True, help="membership file to write")

    ev = subs.add_parser("evaluate", help="NMI between two membership files")
    ev.add_argument("--truth", required=True)
    ev.add_argument("--found", required=True)
    ev.add_argument("--n", type=int, help="expected node count (default: truth file size)")

    sw = subs.add_parser("sweep", help="run the full benchmark sweep")
    sw.add_argument("--config", help="flat JSON config file")
    _add_model_flags(sw)
    sw.add_argument("--mu_values", help="comma-separated list, e.g. 0.1,0.3,0.5")
    sw.add_argument("--replicates", type=int)
    sw.add_argument("--algorithms", help="comma-separated subset of lp,fastgreedy,louvain")
    sw.add_argument("--base_seed", type=int)
    sw.add_argument("--seed", type=int, help="alias for --base_seed")
    sw.add_argument("--workers", type=int)
    sw.add_argument("--out")
    return parser


def _seed_params_from_args(cfg: SweepConfig):
    if cfg.model == "cm":
        return CmParams(cfg.n, cfg.gamma, cfg.k_max, cfg.avg_k)
    if cfg.model == "ba":
        return BaParams(cfg.n, cfg.m, cfg.m0)
    return EvParams(cfg.n, cfg.m, cfg.m0, cfg.b, cfg.epsilon)


def _overrides(args, keys) -> dict:
    return {k: getattr(args, k) for k in keys if getattr(args, k, None) is not None}


_MODEL_KEYS = ("model", "n", "gamma", "k_max", "avg_k", "m", "m0", "b", "epsilon",
               "beta", "c_min", "c_max", "tolerance", "max_sweeps")


def _cmd_generate(args) -> int:
    cfg = load_config(None, _overrides(args, _MODEL_KEYS))
    planting = PlantingParams(mu=args.mu, beta=cfg.beta, c_min=cfg.c_min,
                              c_max=cfg.c_max, tolerance=cfg.tolerance,
                              max_sweeps=cfg.max_sweeps)
    planted = plant(_seed_params_from_args(cfg), planting, RandomSource(args.seed))
    ep, mp = save_network(planted.graph, planted.truth, args.out)
    summary = {
        "nodes": planted.graph.n,
        "edges": planted.graph.edge_count,
        "achieved_mu": planted.achieved_mu_mean,
        "mu_limit": planted.mu_limit,
        "converged": planted.converged,
        "edges_file": str(ep),
        "membership_file": str(mp),
    }
    print(json.dumps(summary, indent=2, sort_keys=True))
    return 0


def _cmd_measure(args) -> int:
    g = read_edge_list(args.edges, n=args.n).freeze()
    report = measure_topology(g)
    print(json.dumps(dataclasses.asdict(report), indent=2, sort_keys=True))
    return 0


def _cmd_detect(args) -> int:
    g = read_edge_list(args.edges, n=args.n).freeze()
    rng = RandomSource(args.seed)
    if args.algorithm == "lp":
        result = detect_label_propagation(g, rng)
    elif args.algorithm == "fastgreedy":
        result = detect_fast_greedy(g)
    else:
        result = detect_louvain(g, rng)
    write_membership(result.partition, args.out)
    print(json.dumps({
        "algorithm": result.algorithm,
        "communities": result.partition.num_communities,
        "modularity": result.modularity,
        "elapsed_seconds": round(result.elapsed, 6),
        "membership_file": args.out,
    }, indent=2, sort_keys=True))
    return 0


def _cmd_evaluate(args) -> int:
    if args.n is not None:
        n = args.n
    else:
        truth_lines = [ln for ln in open(args.truth).read().split("\n")
                       if ln.strip() and not ln.startswith("#")]
        n = len(truth_lines)
    truth = ingest_external_partition(args.truth, n)
    found = ingest_external_partition(args.found, n)
    print(f"nmi={nmi(truth, found)!r}")
    return 0


def _cmd_sweep(args) -> int:
    keys = _MODEL_KEYS + ("mu_values", "replicates", "algorithms", "base_seed",
                          "workers", "out")
    overrides = _overrides(args, keys)
    if args.seed is not None and "base_seed" not in overrides:
        overrides["base_seed"] = args.seed
    cfg = load_config(args.config, overrides)
    result = run_sweep(cfg)
    failures = sum(1 for row in result.rows if row.error)
    print(f"rows={len(result.rows)} failures={failures} results={result.results_path}")
    return 2 if failures else 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "generate": _cmd_generate,
        "measure": _cmd_measure,
        "detect": _cmd_detect,
        "evaluate": _cmd_evaluate,
        "sweep": _cmd_sweep,
    }
    try:
        return handlers[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except CommbenchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
