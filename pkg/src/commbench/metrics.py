"""Topology-report suite: distances, transitivity, assortativity, centralization.

The shortest-path kernels run level-synchronous BFS over blocks of sources
as sparse-matrix products, which is what makes whole-sweep measurement
tractable; everything is a pure function of a frozen graph.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateDenominatorError,
    GraphError,
    NoReachablePairsError,
    TooFewObservationsError,
)
from .graph import Graph

_BLOCK = 256


@dataclass(frozen=True)
class TopologyReport:
    """Property vector used to judge how realistic one network looks."""

    avg_distance: float
    unreachable_pairs: int
    transitivity_global: float
    clustering_local_avg: float
    assortativity: float | None
    centralization_degree: float
    centralization_closeness: float
    centralization_betweenness: float
    degree_mean: float
    degree_max: int
    fitted_gamma: float | None


@dataclass(frozen=True)
class _PathSummary:
    closeness: np.ndarray
    betweenness: np.ndarray
    dist_total: int
    reachable_pairs: int


def _path_summary(g: Graph) -> _PathSummary:
    """One pass of Brandes-style BFS from every source, blocked and vectorized.

    Yields closeness (per component), raw betweenness with each unordered
    pair counted once, and the ordered reachable-pair distance total.
    """
    n = g.n
    adj = g.csr()
    closeness = np.zeros(n)
    betweenness = np.zeros(n)
    dist_total = 0
    reachable = 0
    for start in range(0, n, _BLOCK):
        sources = np.arange(start, min(start + _BLOCK, n))
        b = sources.size
        rows = np.arange(b)
        dist = np.full((b, n), -1, dtype=np.int32)
        sigma = np.zeros((b, n))
        dist[rows, sources] = 0
        sigma[rows, sources] = 1.0
        frontier = np.zeros((b, n), dtype=bool)
        frontier[rows, sources] = True
        level = 0
        while frontier.any():
            paths = (adj @ (sigma * frontier).T).T
            new = (paths > 0) & (dist < 0)
            level += 1
            dist[new] = level
            sigma[new] = paths[new]
            frontier = new
        finite = dist > 0
        dist_total += int(dist[finite].sum())
        reachable += int(finite.sum())
        comp_size = (dist >= 0).sum(axis=1)
        sums = np.where(finite, dist, 0).sum(axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            closeness[sources] = np.where(sums > 0, (comp_size - 1) / sums, 0.0)
        # dependency back-propagation, one level at a time
        delta = np.zeros((b, n))
        safe_sigma = np.where(sigma > 0, sigma, 1.0)
        for lev in range(int(dist.max()), 0, -1):
            at_lev = dist == lev
            coef = np.where(at_lev, (1.0 + delta) / safe_sigma, 0.0)
            spread = (adj @ coef.T).T
            below = dist == lev - 1
            delta += np.where(below, sigma * spread, 0.0)
        delta[rows, sources] = 0.0
        betweenness += delta.sum(axis=0)
    betweenness /= 2.0  # undirected: each pair contributed twice
    return _PathSummary(closeness, betweenness, dist_total, reachable)


def average_distance(g: Graph) -> float:
    """Mean BFS distance over ordered reachable pairs u != v."""
    value, _ = distance_stats(g)
    return value


def distance_stats(g: Graph) -> tuple[float, int]:
    """(mean reachable-pair distance, count of unreachable ordered pairs)."""
    if g.n < 2:
        raise NoReachablePairsError("need at least two nodes")
    s = _path_summary(g)
    if s.reachable_pairs == 0:
        raise NoReachablePairsError("no pair of nodes is connected")
    unreachable = g.n * (g.n - 1) - s.reachable_pairs
    return s.dist_total / s.reachable_pairs, unreachable


def triangle_counts(g: Graph) -> np.ndarray:
    """Triangles through each node."""
    if g.edge_count == 0:
        return np.zeros(g.n)
    adj = g.csr()
    common = (adj @ adj).multiply(adj)
    return np.asarray(common.sum(axis=1)).ravel() / 2.0


def transitivity(g: Graph) -> tuple[float, float]:
    """(global, local average) triangle density.

    Global is 3 * triangles / connected triples, 0 when there are no
    triples; the local average runs over nodes of degree >= 2.
    """
    k = g.degrees().astype(np.float64)
    tri = triangle_counts(g)
    triples = k * (k - 1) / 2.0
    total_triples = triples.sum()
    global_t = float(tri.sum() / total_triples) if total_triples > 0 else 0.0
    eligible = k >= 2
    if eligible.any():
        local = float((tri[eligible] / triples[eligible]).mean())
    else:
        local = 0.0
    return global_t, local


def degree_assortativity(g: Graph) -> float | None:
    """Pearson correlation of degrees across edge endpoints (both orientations).

    None when endpoint-degree variance is zero (regular graphs).
    """
    if g.edge_count == 0:
        raise GraphError("assortativity needs at least one edge")
    u, v = g.edge_arrays()
    k = g.degrees().astype(np.float64)
    x = np.concatenate([k[u], k[v]])
    y = np.concatenate([k[v], k[u]])
    mean = x.mean()
    var = (x * x).mean() - mean * mean
    if var <= 0:
        return None
    cov = (x * y).mean() - mean * mean
    return float(cov / var)


def centrality(g: Graph, kind: str) -> np.ndarray:
    """Per-node centrality: degree, closeness (per component), or betweenness."""
    if kind == "degree":
        return g.degrees().astype(np.float64)
    if kind == "closeness":
        return _path_summary(g).closeness
    if kind == "betweenness":
        return _path_summary(g).betweenness
    raise GraphError(f"unknown centrality kind {kind!r}")


def _star_gap_sum(kind: str, n: int) -> float:
    # Freeman denominators: the same gap sum evaluated on the n-node star.
    if kind == "degree":
        return (n - 1) * (n - 2)
    if kind == "closeness":
        return (n - 1) * (n - 2) / (2 * n - 3)
    if kind == "betweenness":
        return (n - 1) ** 2 * (n - 2) / 2
    raise GraphError(f"unknown centrality kind {kind!r}")


def centralization(values, kind: str, n: int) -> float:
    """Freeman centralization: gap sum from the most central node, star-normalized.

    Clipped to [0, 1]; per-component closeness on badly disconnected graphs
    can otherwise nudge past the star bound.
    """
    values = np.asarray(values, dtype=np.float64)
    if values.size != n:
        raise GraphError(f"expected {n} centrality values, got {values.size}")
    if n < 3:
        raise DegenerateDenominatorError("centralization needs n >= 3")
    gaps = float((values.max() - values).sum())
    return min(1.0, gaps / _star_gap_sum(kind, n))


def fit_power_law_exponent(degrees, k_min: int) -> float:
    """Discrete MLE with fixed lower cutoff, continuous approximation.

    Returns inf when the tail is degenerate (all observations at k_min).
    """
    tail = np.asarray([k for k in degrees if k >= k_min], dtype=np.float64)
    if tail.size < 100:
        raise TooFewObservationsError(
            f"need >= 100 observations >= {k_min}, got {tail.size}"
        )
    log_sum = float(np.log(tail / (k_min - 0.5)).sum())
    if log_sum <= 0:
        return math.inf
    return 1.0 + tail.size / log_sum


def measure_topology(g: Graph) -> TopologyReport:
    """Full report in one pass; the BFS summary is shared by three fields."""
    if g.n < 2:
        raise NoReachablePairsError("need at least two nodes")
    k = g.degrees()
    summary = _path_summary(g)
    if summary.reachable_pairs == 0:
        raise NoReachablePairsError("no pair of nodes is connected")
    avg_dist = summary.dist_total / summary.reachable_pairs
    unreachable = g.n * (g.n - 1) - summary.reachable_pairs
    global_t, local_t = transitivity(g)
    assort = degree_assortativity(g) if g.edge_count > 0 else None
    fitted = None
    k_floor = int(k[k > 0].min()) if (k > 0).any() else 0
    if k_floor >= 1:
        try:
            fitted = fit_power_law_exponent(k, k_floor)
        except TooFewObservationsError:
            fitted = None
    return TopologyReport(
        avg_distance=avg_dist,
        unreachable_pairs=unreachable,
        transitivity_global=global_t,
        clustering_local_avg=local_t,
        assortativity=assort,
        centralization_degree=centralization(k.astype(np.float64), "degree", g.n),
        centralization_closeness=centralization(summary.closeness, "closeness", g.n),
        centralization_betweenness=centralization(summary.betweenness, "betweenness", g.n),
        degree_mean=float(k.mean()),
        degree_max=int(k.max()) if g.n else 0,
        fitted_gamma=fitted,
    )
