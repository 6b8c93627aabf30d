"""Undirected simple graph, node partition, and the traversal/swap primitives.

Node ids are dense integers in [0, n) with n fixed at construction. A graph
stays mutable while a generator or the rewiring stage works on it and is
frozen before measurement; frozen graphs and partitions are safe to share
read-only between workers.
"""

from __future__ import annotations

from bisect import insort
from collections import deque

import numpy as np
from scipy import sparse

from .errors import (
    DuplicateEdgeError,
    FrozenGraphError,
    GraphError,
    IdOutOfRangeError,
    SelfLoopError,
)


class Graph:
    """Simple undirected graph: sorted neighbor lists plus an unordered-pair set.

    The pair set gives O(1) edge tests; the sorted lists give O(deg)
    iteration for BFS and triangle counting, which dominate the workload.
    """

    __slots__ = ("n", "_adj", "_pairs", "_frozen", "_csr")

    def __init__(self, n: int):
        if n < 0:
            raise GraphError("node count must be non-negative")
        self.n = n
        self._adj: list[list[int]] = [[] for _ in range(n)]
        self._pairs: set[tuple[int, int]] = set()
        self._frozen = False
        self._csr = None

    @classmethod
    def from_edge_list(cls, n: int, pairs) -> "Graph":
        """Build a graph from unordered node pairs.

        Rejects self-loops, duplicate pairs (in either orientation) and ids
        outside [0, n); the error names the offending pair.
        """
        g = cls(n)
        for u, v in pairs:
            g.add_edge(u, v)
        return g

    # ------------------------------------------------------------------
    # mutation (single-owner, single-threaded)

    def add_edge(self, u: int, v: int) -> None:
        self._check_mutable()
        u = self._check_id(u)
        v = self._check_id(v)
        if u == v:
            raise SelfLoopError(u)
        key = (u, v) if u < v else (v, u)
        if key in self._pairs:
            raise DuplicateEdgeError(*key)
        self._pairs.add(key)
        insort(self._adj[u], v)
        insort(self._adj[v], u)

    def remove_edge(self, u: int, v: int) -> None:
        self._check_mutable()
        key = (u, v) if u < v else (v, u)
        if key not in self._pairs:
            raise GraphError(f"edge ({u}, {v}) not present")
        self._pairs.remove(key)
        self._adj[u].remove(v)
        self._adj[v].remove(u)

    def freeze(self) -> "Graph":
        self._frozen = True
        return self

    # ------------------------------------------------------------------
    # queries

    @property
    def frozen(self) -> bool:
        return self._frozen

    @property
    def edge_count(self) -> int:
        return len(self._pairs)

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self._pairs

    def neighbors(self, u: int) -> list[int]:
        """Sorted neighbor list of u. Callers must not mutate it."""
        return self._adj[u]

    def degree(self, u: int) -> int:
        return len(self._adj[u])

    def degrees(self) -> np.ndarray:
        return np.array([len(a) for a in self._adj], dtype=np.int64)

    def edge_list(self) -> list[tuple[int, int]]:
        """Edges as (u, v) with u < v, sorted; stable across runs."""
        return sorted(self._pairs)

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        if self._pairs:
            pairs = self.edge_list()
            arr = np.array(pairs, dtype=np.int64)
            return arr[:, 0], arr[:, 1]
        return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)

    def csr(self) -> sparse.csr_matrix:
        """Adjacency as scipy CSR (float64); cached once the graph is frozen."""
        if self._csr is not None:
            return self._csr
        u, v = self.edge_arrays()
        row = np.concatenate([u, v])
        col = np.concatenate([v, u])
        data = np.ones(row.shape[0], dtype=np.float64)
        mat = sparse.csr_matrix((data, (row, col)), shape=(self.n, self.n))
        if self._frozen:
            self._csr = mat
        return mat

    def copy(self) -> "Graph":
        g = Graph(self.n)
        g._adj = [list(a) for a in self._adj]
        g._pairs = set(self._pairs)
        return g

    # ------------------------------------------------------------------

    def _check_id(self, u) -> int:
        u = int(u)
        if not 0 <= u < self.n:
            raise IdOutOfRangeError(u, self.n)
        return u

    def _check_mutable(self) -> None:
        if self._frozen:
            raise FrozenGraphError("graph is frozen; construction and swaps are over")

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edge_count})"


def single_source_distances(g: Graph, s: int) -> dict[int, int]:
    """BFS hop counts from s; nodes missing from the result are unreachable."""
    if not 0 <= s < g.n:
        raise IdOutOfRangeError(s, g.n)
    dist = {s: 0}
    queue = deque([s])
    while queue:
        u = queue.popleft()
        du = dist[u]
        for v in g.neighbors(u):
            if v not in dist:
                dist[v] = du + 1
                queue.append(v)
    return dist


def double_edge_swap(g: Graph, e1, e2, mode: str = "ac") -> bool:
    """Replace edges (a,b),(c,d) by a degree-preserving cross pair.

    mode "ac" installs (a,c),(b,d); mode "ad" installs (a,d),(b,c). Returns
    True when applied. Anything that would break simple-graph invariants --
    missing input edges, shared endpoints, or a cross edge that already
    exists -- is a rejection (False), not an error, and leaves g unchanged.
    """
    a, b = e1
    c, d = e2
    if mode == "ad":
        c, d = d, c
    elif mode != "ac":
        raise GraphError(f"unknown swap mode {mode!r}")
    if len({a, b, c, d}) != 4:
        return False
    if not (g.has_edge(a, b) and g.has_edge(c, d)):
        return False
    if g.has_edge(a, c) or g.has_edge(b, d):
        return False
    g.remove_edge(a, b)
    g.remove_edge(c, d)
    g.add_edge(a, c)
    g.add_edge(b, d)
    return True


class Partition:
    """Assignment of every node to one community, ids dense in [0, q).

    Doubles as planted ground truth and as detection output.
    """

    __slots__ = ("labels",)

    def __init__(self, labels):
        arr = np.asarray(labels, dtype=np.int64).copy()
        if arr.ndim != 1 or arr.size == 0:
            raise GraphError("partition needs at least one node")
        if arr.min() < 0:
            raise GraphError("community ids must be non-negative")
        counts = np.bincount(arr)
        if (counts == 0).any():
            raise GraphError("community ids must be dense with no empty blocks")
        arr.flags.writeable = False
        self.labels = arr

    @classmethod
    def from_labels(cls, labels) -> "Partition":
        """Compact arbitrary labels to dense ids by order of first appearance."""
        mapping: dict = {}
        dense = np.empty(len(labels), dtype=np.int64)
        for i, lab in enumerate(labels):
            if lab not in mapping:
                mapping[lab] = len(mapping)
            dense[i] = mapping[lab]
        return cls(dense)

    def __len__(self) -> int:
        return int(self.labels.size)

    @property
    def num_communities(self) -> int:
        return int(self.labels.max()) + 1

    def sizes(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.num_communities)

    def blocks(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.num_communities)]
        for i, c in enumerate(self.labels):
            out[c].append(i)
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, Partition) and np.array_equal(self.labels, other.labels)

    def __repr__(self) -> str:
        return f"Partition(n={len(self)}, q={self.num_communities})"
