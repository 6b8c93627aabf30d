"""Built-in community detection: label propagation, greedy modularity
agglomeration, and the two-phase local-move optimizer, plus the modularity
measure they share."""

from __future__ import annotations

import heapq
import time
from dataclasses import dataclass

import numpy as np

from .errors import EmptyGraphError
from .graph import Graph, Partition
from .rng import RandomSource

LP_SWEEP_CAP = 1000


@dataclass
class DetectionResult:
    partition: Partition
    algorithm: str
    modularity: float
    elapsed: float
    rng_seed: int | None = None
    converged: bool = True


def modularity(g: Graph, p: Partition) -> float:
    """Q = sum_c [l_c / M - (d_c / 2M)^2] over communities."""
    m = g.edge_count
    if m == 0:
        raise EmptyGraphError("modularity needs at least one edge")
    labels = p.labels
    u, v = g.edge_arrays()
    internal = labels[u] == labels[v]
    q = p.num_communities
    l_c = np.bincount(labels[u[internal]], minlength=q).astype(np.float64)
    d_c = np.bincount(labels, weights=g.degrees().astype(np.float64), minlength=q)
    return float((l_c / m - (d_c / (2.0 * m)) ** 2).sum())


def _safe_modularity(g: Graph, p: Partition) -> float:
    return modularity(g, p) if g.edge_count else 0.0


# ----------------------------------------------------------------------
# label propagation


def detect_label_propagation(g: Graph, rng: RandomSource) -> DetectionResult:
    """Asynchronous majority-label sweeps in fresh random order.

    A node keeps its label while it is among the most frequent in its
    neighborhood (own label not counted); otherwise it adopts one of the
    winners uniformly at random. Stops at the first sweep with no change.
    """
    start = time.perf_counter()
    labels = list(range(g.n))
    converged = False
    for _ in range(LP_SWEEP_CAP):
        changed = 0
        for v in rng.permutation(g.n):
            v = int(v)
            nbrs = g.neighbors(v)
            if not nbrs:
                continue
            tally: dict[int, int] = {}
            for w in nbrs:
                lab = labels[w]
                tally[lab] = tally.get(lab, 0) + 1
            top = max(tally.values())
            winners = sorted(lab for lab, c in tally.items() if c == top)
            if labels[v] not in winners:
                labels[v] = winners[rng.randint(len(winners))]
                changed += 1
        if changed == 0:
            converged = True
            break
    partition = Partition.from_labels(labels)
    return DetectionResult(
        partition=partition,
        algorithm="lp",
        modularity=_safe_modularity(g, partition),
        elapsed=time.perf_counter() - start,
        rng_seed=rng.seed,
        converged=converged,
    )


# ----------------------------------------------------------------------
# greedy agglomeration (merge whatever raises modularity most, keep best cut)


def detect_fast_greedy(g: Graph) -> DetectionResult:
    """Agglomerative merges from singletons, returning the best-Q dendrogram cut.

    Merge candidates are adjacent community pairs; ties break on the
    smallest community-id pair, so the run is deterministic. Separate
    components never merge (such a merge cannot raise modularity).
    """
    start = time.perf_counter()
    m = g.edge_count
    if m == 0:
        raise EmptyGraphError("fast greedy needs at least one edge")
    n = g.n
    two_m = 2.0 * m
    degsum = g.degrees().astype(np.float64).tolist()
    nbr: list[dict[int, float]] = [{} for _ in range(n)]
    for u, v in g.edge_list():
        nbr[u][v] = nbr[u].get(v, 0.0) + 1.0
        nbr[v][u] = nbr[v].get(u, 0.0) + 1.0
    alive = [True] * n
    version = [0] * n

    def gain(a: int, b: int) -> float:
        return nbr[a][b] / m - degsum[a] * degsum[b] / (2.0 * m * m)

    heap: list[tuple[float, int, int, int, int]] = []
    for a in range(n):
        for b in nbr[a]:
            if a < b:
                heap.append((-gain(a, b), a, b, 0, 0))
    heapq.heapify(heap)

    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    q = -float(np.sum((g.degrees() / two_m) ** 2))
    best_q = q
    merges: list[tuple[int, int]] = []
    best_cut = 0
    while heap:
        neg_dq, a, b, va, vb = heapq.heappop(heap)
        if not (alive[a] and alive[b]) or version[a] != va or version[b] != vb:
            continue
        if b not in nbr[a]:
            continue
        q += -neg_dq
        merges.append((a, b))
        if q > best_q + 1e-12:
            best_q = q
            best_cut = len(merges)
        # fold b into a
        alive[b] = False
        parent[b] = a
        degsum[a] += degsum[b]
        version[a] += 1
        del nbr[a][b]
        del nbr[b][a]
        for c, w in nbr[b].items():
            nbr[c].pop(b)
            nbr[a][c] = nbr[a].get(c, 0.0) + w
            nbr[c][a] = nbr[a][c]
        nbr[b].clear()
        for c in nbr[a]:
            pair = (a, c) if a < c else (c, a)
            heapq.heappush(heap, (-gain(a, c), pair[0], pair[1], version[pair[0]], version[pair[1]]))
    # replay the merge prefix that achieved the best modularity
    parent = list(range(n))
    for i in range(best_cut):
        a, b = merges[i]
        parent[find(b)] = find(a)
    labels = [find(i) for i in range(n)]
    partition = Partition.from_labels(labels)
    return DetectionResult(
        partition=partition,
        algorithm="fastgreedy",
        modularity=modularity(g, partition),
        elapsed=time.perf_counter() - start,
    )


# ----------------------------------------------------------------------
# two-phase local moves with community aggregation


class _LevelGraph:
    """Weighted graph used internally between aggregation rounds.

    Intra-community weight lives in self_w; strengths count self-loops twice.
    The public Graph contract stays simple and unweighted.
    """

    __slots__ = ("n", "adj", "self_w", "strength", "total_w")

    def __init__(self, n, adj, self_w):
        self.n = n
        self.adj = adj
        self.self_w = self_w
        self.strength = [sum(adj[i].values()) + 2.0 * self_w[i] for i in range(n)]
        self.total_w = sum(self.strength) / 2.0

    @classmethod
    def from_graph(cls, g: Graph) -> "_LevelGraph":
        adj: list[dict[int, float]] = [{} for _ in range(g.n)]
        for u, v in g.edge_list():
            adj[u][v] = adj[u].get(v, 0.0) + 1.0
            adj[v][u] = adj[v].get(u, 0.0) + 1.0
        return cls(g.n, adj, [0.0] * g.n)


def _local_moves(lg: _LevelGraph, rng: RandomSource) -> tuple[list[int], bool]:
    comm = list(range(lg.n))
    tot = list(lg.strength)
    m = lg.total_w
    improved = False
    for _ in range(100):
        moves = 0
        for v in rng.permutation(lg.n):
            v = int(v)
            old = comm[v]
            weights: dict[int, float] = {}
            for w, wt in lg.adj[v].items():
                weights[comm[w]] = weights.get(comm[w], 0.0) + wt
            tot[old] -= lg.strength[v]
            best_c = old
            best_gain = weights.get(old, 0.0) - lg.strength[v] * tot[old] / (2.0 * m)
            for c, wt in weights.items():
                if c == old:
                    continue
                g_c = wt - lg.strength[v] * tot[c] / (2.0 * m)
                if g_c > best_gain + 1e-12:
                    best_c, best_gain = c, g_c
            if best_c != old:
                comm[v] = best_c
                moves += 1
                improved = True
            tot[comm[v]] += lg.strength[v]
        if moves == 0:
            break
    return comm, improved


def _aggregate(lg: _LevelGraph, comm: list[int]) -> tuple[_LevelGraph, list[int]]:
    ids = sorted(set(comm))
    remap = {c: i for i, c in enumerate(ids)}
    dense = [remap[c] for c in comm]
    q = len(ids)
    adj: list[dict[int, float]] = [{} for _ in range(q)]
    self_w = [0.0] * q
    for c in range(lg.n):
        self_w[dense[c]] += lg.self_w[c]
    for u in range(lg.n):
        cu = dense[u]
        for v, wt in lg.adj[u].items():
            if u < v:
                cv = dense[v]
                if cu == cv:
                    self_w[cu] += wt
                else:
                    adj[cu][cv] = adj[cu].get(cv, 0.0) + wt
                    adj[cv][cu] = adj[cv].get(cu, 0.0) + wt
    return _LevelGraph(q, adj, self_w), dense


def detect_louvain(g: Graph, rng: RandomSource) -> DetectionResult:
    """Local moves to the best neighboring community, then aggregation; repeat."""
    start = time.perf_counter()
    lg = _LevelGraph.from_graph(g)
    node_comm = list(range(g.n))
    while True:
        if lg.total_w == 0:
            break
        comm, improved = _local_moves(lg, rng)
        if not improved:
            break
        lg, dense = _aggregate(lg, comm)
        node_comm = [dense[c] for c in node_comm]
        if lg.n == 1:
            break
    partition = Partition.from_labels(node_comm)
    return DetectionResult(
        partition=partition,
        algorithm="louvain",
        modularity=_safe_modularity(g, partition),
        elapsed=time.perf_counter() - start,
        rng_seed=rng.seed,
    )


def move_gain(g: Graph, p: Partition, node: int, target_comm: int) -> float:
    """Modularity change of moving one node, via the local-move formula.

    Matches modularity(after) - modularity(before) exactly; exposed so the
    incremental form stays testable against the definition.
    """
    m = g.edge_count
    if m == 0:
        raise EmptyGraphError("move gain needs at least one edge")
    labels = p.labels
    old = int(labels[node])
    if old == target_comm:
        return 0.0
    k = g.degrees().astype(np.float64)
    tot = np.bincount(labels, weights=k, minlength=p.num_communities).astype(float)
    w_old = 0.0
    w_new = 0.0
    for w in g.neighbors(node):
        if labels[w] == old:
            w_old += 1.0
        elif labels[w] == target_comm:
            w_new += 1.0
    k_v = k[node]
    tot_old = tot[old] - k_v
    gain_new = w_new / m - k_v * tot[target_comm] / (2.0 * m * m)
    gain_old = w_old / m - k_v * tot_old / (2.0 * m * m)
    return float(gain_new - gain_old)
