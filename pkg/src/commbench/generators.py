"""Seed-network generators: configuration model, preferential attachment, and
its evolutionary-game variant.

All three produce simple graphs whose degree structure the later rewiring
stage preserves exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidSpecError, RepairFailedError
from .graph import Graph
from .rng import RandomSource
from .sampling import DegreeSequence, build_degree_sequence

COOPERATE = 0
DEFECT = 1


@dataclass(frozen=True)
class CmParams:
    n: int
    gamma: float
    k_max: int
    target_avg: float


@dataclass(frozen=True)
class BaParams:
    n: int
    m: int
    m0: int | None = None

    def __post_init__(self):
        m0 = self.m if self.m0 is None else self.m0
        if not (self.n > m0 >= self.m >= 1):
            raise InvalidSpecError(
                f"need n > m0 >= m >= 1, got n={self.n}, m0={m0}, m={self.m}"
            )

    @property
    def initial(self) -> int:
        return self.m if self.m0 is None else self.m0


@dataclass(frozen=True)
class EvParams:
    n: int
    m: int
    m0: int | None = None
    b: float = 1.5
    epsilon: float = 0.99
    rounds_per_arrival: int = 1  # game cadence; one round per new node by default

    def __post_init__(self):
        m0 = self.m if self.m0 is None else self.m0
        if not (self.n > m0 >= self.m >= 1):
            raise InvalidSpecError(
                f"need n > m0 >= m >= 1, got n={self.n}, m0={m0}, m={self.m}"
            )
        if self.b <= 1.0:
            raise InvalidSpecError(f"defection temptation b must exceed 1, got {self.b}")
        if not 0.0 <= self.epsilon <= 1.0:
            raise InvalidSpecError(f"selection pressure must be in [0, 1], got {self.epsilon}")
        if self.rounds_per_arrival < 1:
            raise InvalidSpecError("need at least one game round per arrival")

    @property
    def initial(self) -> int:
        return self.m if self.m0 is None else self.m0


@dataclass
class EvState:
    """Per-node strategy (0 = cooperate, 1 = defect) and accumulated payoff."""

    strategies: np.ndarray
    scores: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        self.strategies = np.asarray(self.strategies, dtype=np.int8)
        if self.scores is None:
            self.scores = np.zeros(self.strategies.size)
        else:
            self.scores = np.asarray(self.scores, dtype=np.float64)


# ----------------------------------------------------------------------
# configuration model


def generate_cm(p: CmParams, rng: RandomSource) -> Graph:
    """Configuration model realized as a simple graph.

    Uniform stub matching, then self-loops and duplicates are repaired by
    degree-preserving swaps against uniformly chosen good edges.
    """
    seq = build_degree_sequence(p.n, p.gamma, p.k_max, p.target_avg, rng)
    return realize_degree_sequence(seq, rng)


def realize_degree_sequence(seq: DegreeSequence, rng: RandomSource) -> Graph:
    degrees = np.asarray(seq.degrees, dtype=np.int64)
    n = degrees.size
    stubs = np.repeat(np.arange(n), degrees)
    rng.shuffle(stubs)
    adj: list[set[int]] = [set() for _ in range(n)]
    good: list[tuple[int, int]] = []
    good_pos: dict[tuple[int, int], int] = {}
    bad: list[tuple[int, int]] = []

    def add_good(u: int, v: int) -> None:
        key = (u, v) if u < v else (v, u)
        good_pos[key] = len(good)
        good.append(key)
        adj[u].add(v)
        adj[v].add(u)

    def drop_good(key: tuple[int, int]) -> None:
        idx = good_pos.pop(key)
        last = good.pop()
        if idx < len(good):
            good[idx] = last
            good_pos[last] = idx
        adj[key[0]].discard(key[1])
        adj[key[1]].discard(key[0])

    for i in range(0, stubs.size, 2):
        u, v = int(stubs[i]), int(stubs[i + 1])
        if u != v and v not in adj[u]:
            add_good(u, v)
        else:
            bad.append((u, v))

    budget = 100 * (stubs.size // 2)
    attempts = 0
    while bad:
        u, v = bad.pop()
        placed = False
        while attempts < budget:
            attempts += 1
            a, b = good[rng.randint(len(good))]
            if rng.random() < 0.5:
                a, b = b, a
            # replace (u,v),(a,b) with (u,a),(v,b); both ends must stay simple
            if a in (u, v) or b in (u, v):
                continue
            if a in adj[u] or b in adj[v]:
                continue
            drop_good((a, b) if a < b else (b, a))
            add_good(u, a)
            add_good(v, b)
            placed = True
            break
        if not placed:
            raise RepairFailedError(
                f"could not simplify stub matching within {budget} swap attempts"
            )
    g = Graph(n)
    for u, v in good:
        g.add_edge(u, v)
    return g


# ----------------------------------------------------------------------
# preferential attachment


def _clique(n_total: int, size: int) -> Graph:
    g = Graph(n_total)
    for u in range(size):
        for v in range(u + 1, size):
            g.add_edge(u, v)
    return g


def _targets_by_degree(repeated: list[int], m: int, rng: RandomSource) -> list[int]:
    """m distinct nodes drawn with probability proportional to current degree."""
    chosen: set[int] = set()
    while len(chosen) < m:
        chosen.add(repeated[rng.randint(len(repeated))])
    return sorted(chosen)


def generate_ba(p: BaParams, rng: RandomSource) -> Graph:
    """Growth from an m0-clique, each arrival wiring to m degree-weighted targets."""
    m0 = p.initial
    g = _clique(p.n, m0)
    repeated: list[int] = []
    for u in range(m0):
        repeated.extend([u] * (m0 - 1))
    for new in range(m0, p.n):
        targets = _targets_by_degree(repeated, p.m, rng)
        for t in targets:
            g.add_edge(new, t)
        repeated.extend(targets)
        repeated.extend([new] * p.m)
    return g


# ----------------------------------------------------------------------
# evolutionary preferential attachment


def _round_payoffs(u, v, strategies, b: float, n_active: int) -> np.ndarray:
    """Payoff of one full round: cooperators earn 1 per cooperating neighbor,
    defectors earn b per cooperating neighbor, everything else pays 0."""
    coop = (strategies[:n_active] == COOPERATE).astype(np.float64)
    n_coop = np.zeros(n_active)
    if len(u):
        np.add.at(n_coop, u, coop[v])
        np.add.at(n_coop, v, coop[u])
    rate = np.where(coop[:n_active] == 1.0, 1.0, b)
    return n_coop * rate


def _imitation_pass(adj, degrees, payoffs, strategies, b: float, n_active: int,
                    rng: RandomSource) -> None:
    """Each node compares with one uniform neighbor and may copy its strategy.

    Switch probability is the round-payoff gap over b * max degree, the
    pairwise-comparison rule bounded in [0, 1]; updates apply synchronously.
    """
    pick = rng.random_array(n_active)
    accept = rng.random_array(n_active)
    new_strategies = strategies[:n_active].copy()
    for i in range(n_active):
        deg = degrees[i]
        if deg == 0:
            continue
        j = adj[i][int(pick[i] * deg)]
        gap = payoffs[j] - payoffs[i]
        if gap <= 0:
            continue
        prob = gap / (b * max(deg, degrees[j]))
        if accept[i] < prob:
            new_strategies[i] = strategies[j]
    strategies[:n_active] = new_strategies


def play_pd_round(g: Graph, state: EvState, b: float, rng: RandomSource) -> EvState:
    """One prisoner's-dilemma round on a fixed graph.

    Adds the round payoffs to the accumulated scores, then runs the
    imitation pass. Isolated nodes earn nothing and never switch.
    """
    if state.strategies.size != g.n:
        raise InvalidSpecError("state must cover every node")
    u, v = g.edge_arrays()
    payoffs = _round_payoffs(u, v, state.strategies, b, g.n)
    state.scores += payoffs
    degrees = [g.degree(i) for i in range(g.n)]
    _imitation_pass([g.neighbors(i) for i in range(g.n)], degrees, payoffs,
                    state.strategies, b, g.n, rng)
    return state


def _targets_by_score(scores: np.ndarray, epsilon: float, m: int,
                      rng: RandomSource) -> list[int]:
    """m distinct targets with weight 1 - eps + eps * score / max score."""
    top = scores.max()
    if top > 0:
        weights = (1.0 - epsilon) + epsilon * (scores / top)
    else:
        weights = np.ones_like(scores)
    if weights.sum() <= 0:
        weights = np.ones_like(scores)
    weights = weights.copy()
    chosen: list[int] = []
    for _ in range(m):
        cum = np.cumsum(weights)
        pick = int(np.searchsorted(cum, rng.random() * cum[-1], side="right"))
        pick = min(pick, weights.size - 1)
        chosen.append(pick)
        weights[pick] = 0.0
    return sorted(chosen)


def generate_ev(p: EvParams, rng: RandomSource) -> Graph:
    """Evolutionary preferential attachment.

    Starts from an m0-clique with random strategies. Before each arrival the
    existing nodes play the game; the newcomer then wires to m distinct
    targets weighted by the latest round's scores (uniform at epsilon 0) and
    copies the strategy of one of its targets. Using the per-round total as
    the fitness keeps attachment tied to current success; a lifetime sum
    condenses the growth onto a few early nodes and flips the network
    dissortative.
    """
    m0 = p.initial
    n, m = p.n, p.m
    total_edges = m0 * (m0 - 1) // 2 + (n - m0) * m
    eu = np.empty(total_edges, dtype=np.int64)
    ev = np.empty(total_edges, dtype=np.int64)
    adj: list[list[int]] = [[] for _ in range(n)]
    degrees = [0] * n
    cnt = 0
    for a in range(m0):
        for c in range(a + 1, m0):
            eu[cnt], ev[cnt] = a, c
            cnt += 1
            adj[a].append(c)
            adj[c].append(a)
            degrees[a] += 1
            degrees[c] += 1
    strategies = rng.randint_array(2, n).astype(np.int8)
    round_scores = np.zeros(n)
    for new in range(m0, n):
        for _ in range(p.rounds_per_arrival):
            payoffs = _round_payoffs(eu[:cnt], ev[:cnt], strategies, p.b, new)
            round_scores[:new] = payoffs
            _imitation_pass(adj, degrees, payoffs, strategies, p.b, new, rng)
        targets = _targets_by_score(round_scores[:new], p.epsilon, m, rng)
        for t in targets:
            eu[cnt], ev[cnt] = new, t
            cnt += 1
            adj[new].append(t)
            adj[t].append(new)
            degrees[new] += 1
            degrees[t] += 1
        strategies[new] = strategies[targets[rng.randint(len(targets))]]
    g = Graph(n)
    for i in range(total_edges):
        g.add_edge(int(eu[i]), int(ev[i]))
    return g
