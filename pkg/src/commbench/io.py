"""Flat-file formats: TAB-separated edge lists and membership files.

Both formats are line-oriented, LF-terminated, '#' comments and blank lines
ignored on read; writes are byte-stable across runs.
"""

from __future__ import annotations

from pathlib import Path

from .errors import DuplicateNodeError, MissingNodeError, ParseError
from .graph import Graph, Partition


def write_edge_list(g: Graph, path) -> None:
    lines = [f"{u}\t{v}\n" for u, v in g.edge_list()]
    Path(path).write_text("".join(lines), encoding="ascii", newline="")


def _data_lines(path):
    text = Path(path).read_text(encoding="ascii")
    for number, raw in enumerate(text.split("\n"), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield number, line


def _parse_pair(line: str, number: int) -> tuple[int, int]:
    parts = line.split("\t")
    if len(parts) != 2:
        raise ParseError(f"expected two TAB-separated fields, got {line!r}", number)
    try:
        return int(parts[0]), int(parts[1])
    except ValueError:
        raise ParseError(f"non-integer field in {line!r}", number) from None


def read_edge_list(path, n: int | None = None) -> Graph:
    pairs = []
    top = -1
    for number, line in _data_lines(path):
        u, v = _parse_pair(line, number)
        pairs.append((u, v))
        top = max(top, u, v)
    if n is None:
        n = top + 1
    return Graph.from_edge_list(n, pairs)


def write_membership(p: Partition, path) -> None:
    lines = [f"{i}\t{int(c)}\n" for i, c in enumerate(p.labels)]
    Path(path).write_text("".join(lines), encoding="ascii", newline="")


def ingest_external_partition(path, expected_n: int) -> Partition:
    """Membership file ('node TAB community') over exactly expected_n nodes.

    Community labels may be arbitrary integers; they are compacted to dense
    ids, which leaves every partition-comparison score unchanged.
    """
    seen: dict[int, int] = {}
    for number, line in _data_lines(path):
        node, label = _parse_pair(line, number)
        if not 0 <= node < expected_n:
            raise ParseError(f"node id {node} outside [0, {expected_n})", number)
        if node in seen:
            raise DuplicateNodeError(node)
        seen[node] = label
    for node in range(expected_n):
        if node not in seen:
            raise MissingNodeError(node)
    return Partition.from_labels([seen[i] for i in range(expected_n)])


def edges_path(prefix) -> Path:
    return Path(str(prefix) + ".edges.tsv")


def membership_path(prefix) -> Path:
    return Path(str(prefix) + ".membership.tsv")


def save_network(g: Graph, truth: Partition, prefix) -> tuple[Path, Path]:
    ep, mp = edges_path(prefix), membership_path(prefix)
    write_edge_list(g, ep)
    write_membership(truth, mp)
    return ep, mp


def load_network(prefix) -> tuple[Graph, Partition]:
    mp = membership_path(prefix)
    text = Path(mp).read_text(encoding="ascii")
    n = sum(1 for line in text.split("\n") if line.strip() and not line.startswith("#"))
    truth = ingest_external_partition(mp, n)
    g = read_edge_list(edges_path(prefix), n=n)
    return g, truth


def io_roundtrip(g: Graph, truth: Partition, prefix) -> tuple[Graph, Partition]:
    """Write then re-read; the result carries an identical edge set and assignment."""
    save_network(g, truth, prefix)
    return load_network(prefix)
