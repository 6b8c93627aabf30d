"""Community planting: assign virtual communities, then rewire the seed graph
degree-preservingly until the target mixing coefficient is approximated.

Non-convergence is data, not failure; the result records how close the
rewiring got so sweeps can show the regime beyond the structural limit.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from bisect import bisect_left

import numpy as np

from .errors import EmptySizesError, InvalidBoundsError, UnassignableError
from .generators import BaParams, CmParams, EvParams, generate_ba, generate_cm, generate_ev
from .graph import Graph, Partition, double_edge_swap
from .rng import RandomSource
from .sampling import build_community_sizes


@dataclass(frozen=True)
class PlantingParams:
    """Mixing target plus the community-size law and rewiring budget."""

    mu: float
    beta: float = 2.0
    c_min: int = 10
    c_max: int | None = None  # defaults to n // 8
    tolerance: float = 0.05
    max_sweeps: int = 200

    def __post_init__(self):
        if not 0.0 < self.mu < 1.0:
            raise InvalidBoundsError(f"mu must lie in (0, 1), got {self.mu}")
        if self.tolerance <= 0:
            raise InvalidBoundsError("tolerance must be positive")


@dataclass
class PlantedNetwork:
    graph: Graph
    truth: Partition
    achieved_mu_mean: float
    achieved_mu_per_node: np.ndarray
    mu_limit: float
    converged: bool


def _round_half_up(x: float) -> int:
    # deterministic tie-breaking; Python's round() would go to even
    return int(np.floor(x + 0.5))


def mu_limit(sizes, n: int) -> float:
    """(n - biggest block) / n: beyond this no strong community structure exists."""
    sizes = list(sizes)
    if not sizes:
        raise EmptySizesError("no community sizes")
    if sum(sizes) != n:
        raise InvalidBoundsError(f"sizes sum to {sum(sizes)}, expected {n}")
    return (n - max(sizes)) / n


def measure_mixing(g: Graph, p: Partition) -> tuple[np.ndarray, float]:
    """Per-node external-link fraction and its mean.

    Degree-0 nodes have no defined mixing; they show up as NaN in the
    per-node vector and are excluded from the mean.
    """
    if len(p) != g.n:
        raise InvalidBoundsError("partition does not cover the node set")
    labels = p.labels
    ext = np.zeros(g.n)
    u, v = g.edge_arrays()
    crossing = labels[u] != labels[v]
    np.add.at(ext, u[crossing], 1.0)
    np.add.at(ext, v[crossing], 1.0)
    k = g.degrees().astype(np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        per_node = np.where(k > 0, ext / np.where(k > 0, k, 1.0), np.nan)
    finite = per_node[~np.isnan(per_node)]
    mean = float(finite.mean()) if finite.size else float("nan")
    return per_node, mean


def assign_communities(
    degrees,
    sizes,
    mu: float,
    rng: RandomSource,
    cap_to_largest: bool = False,
) -> Partition:
    """Place every node in a community big enough for its internal-degree target.

    Randomized iterative fill: nodes in random order pick a uniformly random
    community whose size admits them; a full community evicts a random member
    back into the queue. With cap_to_largest the target of oversized hubs is
    clipped to the largest block instead of raising Unassignable (the planting
    pipeline needs this when seed hubs outgrow every community).
    """
    degrees = np.asarray(degrees, dtype=np.int64)
    sizes = list(sizes)
    if not sizes:
        raise EmptySizesError("no community sizes")
    n = degrees.size
    if sum(sizes) != n:
        raise InvalidBoundsError(f"sizes sum to {sum(sizes)}, expected {n}")
    max_size = max(sizes)
    internal = np.array([_round_half_up((1.0 - mu) * k) for k in degrees])
    if cap_to_largest:
        internal = np.minimum(internal, max_size - 1)
    worst = int(internal.max()) if n else 0
    if worst > max_size - 1:
        node = int(np.argmax(internal))
        raise UnassignableError(
            f"node {node} needs internal degree {worst} but the biggest "
            f"community only admits {max_size - 1}"
        )
    # communities of size <= s can only hold nodes whose target fits size s,
    # so their combined capacity must not exceed the count of such nodes
    need = internal + 1
    for s in sorted(set(sizes)):
        small_capacity = sum(x for x in sizes if x <= s)
        admissible = int((need <= s).sum())
        if small_capacity > admissible:
            raise UnassignableError(
                f"communities of size <= {s} hold {small_capacity} nodes but "
                f"only {admissible} nodes have an internal target that fits"
            )
    # communities sorted by size so the eligible set is a prefix
    order = sorted(range(len(sizes)), key=lambda c: (-sizes[c], c))
    sizes_desc = [sizes[c] for c in order]
    sizes_asc = sizes_desc[::-1]
    members: list[list[int]] = [[] for _ in sizes]
    slot: dict[int, int] = {}
    assigned = [-1] * n
    queue = deque(int(i) for i in rng.permutation(n))
    placements = 0
    cap = 50 * n
    while queue:
        v = queue.popleft()
        placements += 1
        if placements > cap:
            raise UnassignableError(
                f"assignment did not settle within {cap} placements"
            )
        need = int(internal[v]) + 1
        eligible = len(sizes) - bisect_left(sizes_asc, need)
        if eligible == 0:
            raise UnassignableError(
                f"node {v} needs a community of at least {need} nodes"
            )
        c = order[rng.randint(eligible)]
        if len(members[c]) == sizes[c]:
            idx = rng.randint(len(members[c]))
            evicted = members[c][idx]
            last = members[c].pop()
            if idx < len(members[c]):
                members[c][idx] = last
                slot[last] = idx
            assigned[evicted] = -1
            queue.append(evicted)
        slot[v] = len(members[c])
        members[c].append(v)
        assigned[v] = c
    return Partition(assigned)


def _external_targets(labels, sizes, degrees, mu: float) -> np.ndarray:
    """Per-node external-degree quota.

    round(mu * k) half-up, raised where the node's own community is too
    small to absorb the complementary internal degree.
    """
    quota = np.array([_round_half_up(mu * k) for k in degrees], dtype=np.int64)
    own_size = np.asarray(sizes)[labels]
    floor = np.maximum(degrees - (own_size - 1), 0)
    return np.minimum(np.maximum(quota, floor), degrees)


def rewire_to_mixing(
    g: Graph,
    p: Partition,
    params: PlantingParams,
    rng: RandomSource,
    debug_check: bool = False,
) -> PlantedNetwork:
    """Hill-descent on the external-degree deficit via double edge swaps.

    Every accepted swap keeps all degrees bit-identical and never increases
    the objective sum |ext_i - target_i|; sweeps stop once the mean per-node
    gap |mu_i - mu| falls inside the tolerance or the budget runs out.
    """
    n = g.n
    labels = p.labels
    degrees = g.degrees()
    comm_sizes = np.bincount(labels, minlength=int(labels.max()) + 1)
    members = [[] for _ in range(comm_sizes.size)]
    for i, c in enumerate(labels):
        members[int(c)].append(i)
    target = _external_targets(labels, comm_sizes, degrees, params.mu)
    ext = np.zeros(n, dtype=np.int64)
    u_arr, v_arr = g.edge_arrays()
    crossing = labels[u_arr] != labels[v_arr]
    np.add.at(ext, u_arr[crossing], 1)
    np.add.at(ext, v_arr[crossing], 1)
    deficit = int(np.abs(ext - target).sum())
    edge_list = g.edge_list()
    edge_pos = {e: i for i, e in enumerate(edge_list)}

    def swap_delta(a, x, j, y):
        # (a,x),(j,y) -> (a,j),(x,y): change in sum |ext - target|
        delta: dict[int, int] = {}

        def bump(p1, p2, amount):
            if labels[p1] != labels[p2]:
                delta[p1] = delta.get(p1, 0) + amount
                delta[p2] = delta.get(p2, 0) + amount

        bump(a, x, -1)
        bump(j, y, -1)
        bump(a, j, +1)
        bump(x, y, +1)
        change = 0
        for node, d in delta.items():
            e = int(ext[node])
            t = int(target[node])
            change += abs(e + d - t) - abs(e - t)
        return change, delta

    def apply_swap(a, x, j, y, delta):
        nonlocal deficit
        ok = double_edge_swap(g, (a, x), (j, y), mode="ac")
        if not ok:
            return False
        for pair in ((a, x), (j, y)):
            key = (pair[0], pair[1]) if pair[0] < pair[1] else (pair[1], pair[0])
            idx = edge_pos.pop(key)
            last = edge_list.pop()
            if idx < len(edge_list):
                edge_list[idx] = last
                edge_pos[last] = idx
        for pair in ((a, j), (x, y)):
            key = (pair[0], pair[1]) if pair[0] < pair[1] else (pair[1], pair[0])
            edge_pos[key] = len(edge_list)
            edge_list.append(key)
        for node, d in delta.items():
            deficit += abs(int(ext[node]) + d - int(target[node]))
            deficit -= abs(int(ext[node]) - int(target[node]))
            ext[node] += d
        return True

    def mean_gap() -> float:
        k = degrees.astype(np.float64)
        with np.errstate(divide="ignore", invalid="ignore"):
            mu_i = np.where(k > 0, ext / np.where(k > 0, k, 1.0), np.nan)
        finite = mu_i[~np.isnan(mu_i)]
        return float(np.abs(finite - params.mu).mean()) if finite.size else 0.0

    def random_external_neighbor(v):
        opts = [w for w in g.neighbors(v) if labels[w] != labels[v]]
        return opts[rng.randint(len(opts))] if opts else None

    def random_internal_neighbor(v):
        opts = [w for w in g.neighbors(v) if labels[w] == labels[v]]
        return opts[rng.randint(len(opts))] if opts else None

    def try_internalize(v, fails):
        # turn one external edge of v into an internal one
        x = random_external_neighbor(v)
        if x is None:
            return False
        if fails and fails % 10 == 0:
            j, y = edge_list[rng.randint(len(edge_list))]
            if rng.random() < 0.5:
                j, y = y, j
        else:
            comm = members[int(labels[v])]
            if len(comm) < 2:
                return False
            j = comm[rng.randint(len(comm))]
            if j == v or g.has_edge(v, j):
                return False
            ext_nb = random_external_neighbor(j)
            y = ext_nb if ext_nb is not None else g.neighbors(j)[rng.randint(g.degree(j))]
        if len({v, x, j, y}) != 4 or g.has_edge(v, j) or g.has_edge(x, y):
            return False
        change, delta = swap_delta(v, x, j, y)
        limit = 0 if (fails and fails % 10 == 0) else -1
        if change > limit:
            return False
        if debug_check:
            assert change <= 0
        return apply_swap(v, x, j, y, delta)

    def try_externalize(v, fails):
        # break one internal edge of v against a random partner edge
        j = random_internal_neighbor(v)
        if j is None:
            return False
        x, y = edge_list[rng.randint(len(edge_list))]
        if rng.random() < 0.5:
            x, y = y, x
        # (v,j),(x,y) -> (v,x),(j,y)
        if len({v, j, x, y}) != 4 or g.has_edge(v, x) or g.has_edge(j, y):
            return False
        change, delta = swap_delta(v, j, x, y)
        limit = 0 if (fails and fails % 10 == 0) else -1
        if change > limit:
            return False
        if debug_check:
            assert change <= 0
        return apply_swap(v, j, x, y, delta)

    converged = mean_gap() <= params.tolerance
    stagnant = 0
    if not converged:
        for _ in range(params.max_sweeps):
            deficit_before = deficit
            for v in rng.permutation(n):
                v = int(v)
                gap = int(ext[v] - target[v])
                if gap == 0:
                    continue
                fails = 0
                tries = 2 * abs(gap) + 10
                for _ in range(tries):
                    if ext[v] == target[v]:
                        break
                    mover = try_internalize if ext[v] > target[v] else try_externalize
                    if mover(v, fails):
                        fails = 0
                    else:
                        fails += 1
            if mean_gap() <= params.tolerance:
                converged = True
                break
            if deficit == 0:
                break
            stagnant = stagnant + 1 if deficit >= deficit_before else 0
            if stagnant >= 3:
                break
    per_node, mean = measure_mixing(g, p)
    sizes = comm_sizes.tolist()
    return PlantedNetwork(
        graph=g,
        truth=p,
        achieved_mu_mean=mean,
        achieved_mu_per_node=per_node,
        mu_limit=mu_limit(sizes, n),
        converged=converged,
    )


def plant(seed_model, planting: PlantingParams, rng: RandomSource) -> PlantedNetwork:
    """Generate a seed network, draw sizes, assign communities, rewire, freeze.

    Each stage runs on its own child stream, so two models planted with the
    same source draw the same community-size sequence; cross-model property
    comparisons are paired rather than confounded by the size draws.
    """
    gen_rng = rng.child(0)
    if isinstance(seed_model, CmParams):
        g = generate_cm(seed_model, gen_rng)
    elif isinstance(seed_model, EvParams):
        g = generate_ev(seed_model, gen_rng)
    elif isinstance(seed_model, BaParams):
        g = generate_ba(seed_model, gen_rng)
    else:
        raise InvalidBoundsError(f"unknown seed model {type(seed_model).__name__}")
    n = g.n
    c_max = planting.c_max if planting.c_max is not None else max(planting.c_min, n // 8)
    sizes = build_community_sizes(n, planting.beta, planting.c_min, c_max, rng.child(1))
    truth = assign_communities(g.degrees(), sizes, planting.mu, rng.child(2),
                               cap_to_largest=True)
    planted = rewire_to_mixing(g, truth, planting, rng.child(3))
    planted.graph.freeze()
    return planted
