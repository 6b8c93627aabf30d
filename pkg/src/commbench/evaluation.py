"""Score detected partitions against planted truth with normalized mutual
information, natural-log variant."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NodeSetMismatchError
from .graph import Partition


@dataclass(frozen=True)
class ConfusionTable:
    """Block-intersection counts with row/column marginals."""

    counts: np.ndarray
    row_sizes: np.ndarray
    col_sizes: np.ndarray
    n: int


def confusion(truth: Partition, found: Partition) -> ConfusionTable:
    if len(truth) != len(found):
        raise NodeSetMismatchError(
            f"partitions cover {len(truth)} and {len(found)} nodes"
        )
    qt = truth.num_communities
    qf = found.num_communities
    counts = np.zeros((qt, qf), dtype=np.int64)
    np.add.at(counts, (truth.labels, found.labels), 1)
    return ConfusionTable(
        counts=counts,
        row_sizes=counts.sum(axis=1),
        col_sizes=counts.sum(axis=0),
        n=len(truth),
    )


def nmi(truth: Partition, found: Partition) -> float:
    """Normalized mutual information in [0, 1], symmetric in its arguments.

    When both partitions are the trivial one-block partition the normalizer
    vanishes; they are then necessarily identical and the value is 1.
    """
    table = confusion(truth, found)
    n = table.n
    counts = table.counts
    nz = counts > 0
    nij = counts[nz].astype(np.float64)
    ni = table.row_sizes[np.nonzero(nz)[0]].astype(np.float64)
    nj = table.col_sizes[np.nonzero(nz)[1]].astype(np.float64)
    numerator = float((nij * np.log(nij * n / (ni * nj))).sum())
    rs = table.row_sizes.astype(np.float64)
    cs = table.col_sizes.astype(np.float64)
    denominator = float((rs * np.log(rs / n)).sum() + (cs * np.log(cs / n)).sum())
    if denominator == 0.0:
        return 1.0
    value = -2.0 * numerator / denominator
    return min(1.0, max(0.0, value))
