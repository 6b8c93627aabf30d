"""Sweep orchestrator: plant, measure, detect, and score one row per
(mu, replicate), with resumable incremental output.

Row seeds are a pure function of the configuration, so interrupted sweeps
resume bit-identically and the worker count never changes the result files.
Per-algorithm wall times go to a sidecar file because the main results file
is required to be deterministic.
"""

from __future__ import annotations

import csv
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .config import SweepConfig
from .detection import detect_fast_greedy, detect_label_propagation, detect_louvain
from .errors import CommbenchError
from .evaluation import nmi
from .generators import BaParams, CmParams, EvParams
from .metrics import TopologyReport, measure_topology
from .planting import PlantingParams, plant
from .rng import RandomSource

SEED_STRIDE = 10007

_REPORT_COLUMNS = (
    "avg_distance",
    "unreachable_pairs",
    "transitivity_global",
    "clustering_local_avg",
    "assortativity",
    "centralization_degree",
    "centralization_closeness",
    "centralization_betweenness",
    "degree_mean",
    "degree_max",
    "fitted_gamma",
)

# fixed child-stream keys so adding or dropping algorithms never shifts draws
_RNG_KEYS = {"plant": 0, "lp": 1, "fastgreedy": 2, "louvain": 3}


@dataclass
class SweepRow:
    model: str
    mu: float
    replicate: int
    seed: int
    error: str = ""
    nodes: int | None = None
    edges: int | None = None
    report: TopologyReport | None = None
    achieved_mu: float | None = None
    mu_limit: float | None = None
    converged: bool | None = None
    nmi: dict = field(default_factory=dict)
    modularity: dict = field(default_factory=dict)
    runtime: dict = field(default_factory=dict)


@dataclass
class SweepResult:
    config: SweepConfig
    rows: list
    results_path: Path
    plot_paths: list

    def row(self, mu: float, replicate: int) -> SweepRow:
        for r in self.rows:
            if r.replicate == replicate and abs(r.mu - mu) < 1e-9:
                return r
        raise KeyError((mu, replicate))


def row_seed(cfg: SweepConfig, mu_index: int, replicate: int) -> int:
    index = mu_index * cfg.replicates + replicate
    return cfg.base_seed * SEED_STRIDE + index


def _seed_params(cfg: SweepConfig):
    if cfg.model == "cm":
        return CmParams(cfg.n, cfg.gamma, cfg.k_max, cfg.avg_k)
    if cfg.model == "ba":
        return BaParams(cfg.n, cfg.m, cfg.m0)
    return EvParams(cfg.n, cfg.m, cfg.m0, cfg.b, cfg.epsilon)


_DETECTORS = {
    "lp": lambda g, rng: detect_label_propagation(g, rng),
    "fastgreedy": lambda g, rng: detect_fast_greedy(g),
    "louvain": lambda g, rng: detect_louvain(g, rng),
}


def run_row(cfg: SweepConfig, mu: float, mu_index: int, replicate: int) -> SweepRow:
    seed = row_seed(cfg, mu_index, replicate)
    row = SweepRow(model=cfg.model, mu=mu, replicate=replicate, seed=seed)
    rng = RandomSource(seed)
    try:
        planting = PlantingParams(
            mu=mu,
            beta=cfg.beta,
            c_min=cfg.c_min,
            c_max=cfg.c_max,
            tolerance=cfg.tolerance,
            max_sweeps=cfg.max_sweeps,
        )
        planted = plant(_seed_params(cfg), planting, rng.child(_RNG_KEYS["plant"]))
        g = planted.graph
        row.nodes = g.n
        row.edges = g.edge_count
        row.report = measure_topology(g)
        row.achieved_mu = planted.achieved_mu_mean
        row.mu_limit = planted.mu_limit
        row.converged = planted.converged
        for alg in cfg.algorithms:
            result = _DETECTORS[alg](g, rng.child(_RNG_KEYS[alg]))
            row.nmi[alg] = nmi(planted.truth, result.partition)
            row.modularity[alg] = result.modularity
            row.runtime[alg] = result.elapsed
    except CommbenchError as exc:
        row.error = f"{type(exc).__name__}: {exc}"
    return row


def _columns(cfg: SweepConfig) -> list[str]:
    cols = ["model", "mu", "replicate", "seed", "error", "nodes", "edges"]
    cols.extend(_REPORT_COLUMNS)
    cols.extend(["achieved_mu", "mu_limit", "converged"])
    for alg in cfg.algorithms:
        cols.append(f"nmi_{alg}")
        cols.append(f"modularity_{alg}")
    return cols


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _row_record(cfg: SweepConfig, row: SweepRow) -> dict:
    rec = {
        "model": row.model,
        "mu": _fmt(row.mu),
        "replicate": str(row.replicate),
        "seed": str(row.seed),
        "error": row.error,
        "nodes": _fmt(row.nodes),
        "edges": _fmt(row.edges),
    }
    for col in _REPORT_COLUMNS:
        rec[col] = _fmt(getattr(row.report, col)) if row.report is not None else ""
    rec["achieved_mu"] = _fmt(row.achieved_mu)
    rec["mu_limit"] = _fmt(row.mu_limit)
    rec["converged"] = _fmt(row.converged)
    for alg in cfg.algorithms:
        rec[f"nmi_{alg}"] = _fmt(row.nmi.get(alg))
        rec[f"modularity_{alg}"] = _fmt(row.modularity.get(alg))
    return rec


def _load_completed(path: Path, cfg: SweepConfig) -> dict:
    """Rows already present in an interrupted results file, keyed by (mu, rep)."""
    done: dict = {}
    if not path.exists():
        return done
    try:
        with path.open(newline="") as fh:
            for rec in csv.DictReader(fh):
                try:
                    mu = float(rec["mu"])
                    rep = int(rec["replicate"])
                except (KeyError, TypeError, ValueError):
                    continue
                if rec.get("model") != cfg.model:
                    continue
                done[(round(mu, 9), rep)] = rec
    except OSError:
        return {}
    return done


def _write_results(path: Path, cfg: SweepConfig, records: list) -> None:
    cols = _columns(cfg)
    tmp = path.with_suffix(".tmp")
    with tmp.open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=cols, extrasaction="ignore", lineterminator="\n")
        writer.writeheader()
        for rec in records:
            writer.writerow({c: rec.get(c, "") for c in cols})
    tmp.replace(path)


def _plot_columns(cfg: SweepConfig) -> list[str]:
    cols = [c for c in _REPORT_COLUMNS if c != "unreachable_pairs"]
    cols.append("achieved_mu")
    cols.extend(f"nmi_{alg}" for alg in cfg.algorithms)
    return cols


def _write_plot_tables(out_dir: Path, cfg: SweepConfig, records: list) -> list:
    paths = []
    for col in _plot_columns(cfg):
        lines = ["mu\tmean\tstd\n"]
        by_mu: dict = {}
        for rec in records:
            if rec.get("error"):
                continue
            cell = rec.get(col, "")
            if cell == "":
                continue
            by_mu.setdefault(float(rec["mu"]), []).append(float(cell))
        for mu in sorted(by_mu):
            vals = np.array(by_mu[mu])
            std = float(vals.std(ddof=1)) if vals.size > 1 else 0.0
            lines.append(f"{mu!r}\t{float(vals.mean())!r}\t{std!r}\n")
        path = out_dir / f"plot_{col}__{cfg.model}.tsv"
        path.write_text("".join(lines), encoding="ascii", newline="")
        paths.append(path)
    return paths


def _write_timings(out_dir: Path, cfg: SweepConfig, rows: list) -> None:
    lines = ["model\tmu\treplicate\talgorithm\tseconds\n"]
    for row in rows:
        for alg in cfg.algorithms:
            if alg in row.runtime:
                lines.append(
                    f"{row.model}\t{row.mu!r}\t{row.replicate}\t{alg}\t{row.runtime[alg]:.6f}\n"
                )
    (out_dir / "timings.tsv").write_text("".join(lines), encoding="ascii", newline="")


def _record_to_row(cfg: SweepConfig, rec: dict) -> SweepRow:
    def opt_float(key):
        cell = rec.get(key, "")
        return float(cell) if cell not in ("", None) else None

    report = None
    if rec.get("avg_distance"):
        vals = {}
        for col in _REPORT_COLUMNS:
            cell = rec.get(col, "")
            if col in ("unreachable_pairs", "degree_max"):
                vals[col] = int(cell) if cell else 0
            else:
                vals[col] = float(cell) if cell else None
        report = TopologyReport(**vals)
    row = SweepRow(
        model=rec["model"],
        mu=float(rec["mu"]),
        replicate=int(rec["replicate"]),
        seed=int(rec["seed"]),
        error=rec.get("error", ""),
        nodes=int(rec["nodes"]) if rec.get("nodes") else None,
        edges=int(rec["edges"]) if rec.get("edges") else None,
        report=report,
        achieved_mu=opt_float("achieved_mu"),
        mu_limit=opt_float("mu_limit"),
        converged=(rec.get("converged") == "true") if rec.get("converged") else None,
    )
    for alg in cfg.algorithms:
        val = opt_float(f"nmi_{alg}")
        if val is not None:
            row.nmi[alg] = val
        mod = opt_float(f"modularity_{alg}")
        if mod is not None:
            row.modularity[alg] = mod
    return row


def run_sweep(cfg: SweepConfig) -> SweepResult:
    """Execute every missing (mu, replicate) row and write the result files.

    Completed rows found in an existing results file are kept as-is, which
    makes interrupted sweeps resumable; the final file is rewritten in
    canonical order either way.
    """
    out_dir = Path(cfg.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    results_path = out_dir / "results.csv"
    completed = _load_completed(results_path, cfg)

    tasks = []
    for mu_index, mu in enumerate(cfg.mu_values):
        for rep in range(cfg.replicates):
            if (round(mu, 9), rep) not in completed:
                tasks.append((mu, mu_index, rep))

    rows: list[SweepRow] = []
    incremental = results_path.open("a", newline="")
    try:
        writer = csv.DictWriter(
            incremental, fieldnames=_columns(cfg), extrasaction="ignore", lineterminator="\n"
        )
        if results_path.stat().st_size == 0:
            writer.writeheader()
            incremental.flush()

        def record(row: SweepRow) -> None:
            rows.append(row)
            rec = _row_record(cfg, row)
            completed[(round(row.mu, 9), row.replicate)] = rec
            writer.writerow(rec)
            incremental.flush()

        if cfg.workers > 1 and len(tasks) > 1:
            with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
                futures = [pool.submit(run_row, cfg, mu, mi, rep) for mu, mi, rep in tasks]
                for fut in futures:
                    record(fut.result())
        else:
            for mu, mi, rep in tasks:
                record(run_row(cfg, mu, mi, rep))
    finally:
        incremental.close()

    # canonical rewrite: rows sorted by (mu order, replicate), stable content
    ordered = []
    all_rows = []
    for mu in cfg.mu_values:
        for rep in range(cfg.replicates):
            rec = completed.get((round(mu, 9), rep))
            if rec is not None:
                ordered.append(rec)
                all_rows.append(_record_to_row(cfg, rec))
    _write_results(results_path, cfg, ordered)
    plot_paths = _write_plot_tables(out_dir, cfg, ordered)
    _write_timings(out_dir, cfg, [r for r in rows if r.runtime])
    return SweepResult(config=cfg, rows=all_rows, results_path=results_path, plot_paths=plot_paths)
