"""Immutable directed graphs in CSR form, plus edge-list ingestion."""

from __future__ import annotations

import io
import os
from dataclasses import dataclass, field
from typing import BinaryIO, Iterable

import numpy as np


class ParseError(ValueError):
    """Raised for malformed edge-list or label input."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def _csr(keys: np.ndarray, values: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    # keys must already be sorted
    counts = np.bincount(keys, minlength=n)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    return indptr, values


@dataclass(frozen=True, eq=False)
class DirectedGraph:
    """Binary directed adjacency stored twice: grouped by source and by target.

    ``out_indptr/out_indices`` list the targets of every source node and
    ``in_indptr/in_indices`` the sources of every target node, both sorted.
    Build instances with :meth:`from_edges` rather than directly.
    """

    node_count: int
    out_indptr: np.ndarray
    out_indices: np.ndarray
    in_indptr: np.ndarray
    in_indices: np.ndarray
    labels: dict[int, str] | None = None
    identifiers: tuple[str, ...] | None = field(default=None, repr=False)

    def __post_init__(self):
        for arr in (self.out_indptr, self.out_indices, self.in_indptr, self.in_indices):
            arr.setflags(write=False)

    @classmethod
    def from_edges(cls, sources, targets, node_count: int | None = None,
                   labels=None, identifiers=None) -> DirectedGraph:
        src = np.asarray(sources, dtype=np.int64).ravel()
        dst = np.asarray(targets, dtype=np.int64).ravel()
        if src.shape != dst.shape:
            raise ValueError("sources and targets differ in length")
        if node_count is None:
            node_count = int(max(src.max(initial=-1), dst.max(initial=-1))) + 1
        if src.size and (min(src.min(), dst.min()) < 0
                         or max(src.max(), dst.max()) >= node_count):
            raise ValueError("edge endpoint outside [0, node_count)")

        # collapse duplicates; unique() also sorts by (source, target)
        fwd = np.unique(src * node_count + dst)
        s, t = np.divmod(fwd, node_count)
        out_indptr, out_indices = _csr(s, t, node_count)

        order = np.lexsort((s, t))
        in_indptr, in_indices = _csr(t[order], s[order], node_count)

        idx_type = np.int32 if node_count < 2**31 else np.int64
        return cls(node_count, out_indptr, out_indices.astype(idx_type),
                   in_indptr, in_indices.astype(idx_type),
                   labels=dict(labels) if labels else None,
                   identifiers=tuple(identifiers) if identifiers is not None else None)

    @property
    def edge_count(self) -> int:
        return int(self.out_indices.size)

    def successors(self, node: int) -> np.ndarray:
        return self.out_indices[self.out_indptr[node]:self.out_indptr[node + 1]]

    def predecessors(self, node: int) -> np.ndarray:
        return self.in_indices[self.in_indptr[node]:self.in_indptr[node + 1]]

    def out_degree(self) -> np.ndarray:
        return np.diff(self.out_indptr)

    def in_degree(self) -> np.ndarray:
        return np.diff(self.in_indptr)

    def edges(self) -> tuple[np.ndarray, np.ndarray]:
        """Return ``(sources, targets)`` sorted by source then target."""
        src = np.repeat(np.arange(self.node_count, dtype=np.int64), self.out_degree())
        return src, self.out_indices.astype(np.int64)

    def edge_set(self) -> set[tuple[int, int]]:
        s, t = self.edges()
        return set(zip(s.tolist(), t.tolist()))

    def dangling(self) -> np.ndarray:
        return np.flatnonzero(self.out_degree() == 0)

    def node_name(self, node: int) -> str:
        """External identifier of a node (raw token in string mode, else the index)."""
        if self.identifiers is not None:
            return self.identifiers[node]
        return str(node)

    def find(self, label: str) -> int:
        """Resolve a title or raw identifier to its NodeId."""
        if self.labels:
            for node, title in self.labels.items():
                if title == label:
                    return node
        if self.identifiers is not None and label in self.identifiers:
            return self.identifiers.index(label)
        raise KeyError(label)

    def with_labels(self, labels: dict[int, str]) -> DirectedGraph:
        return DirectedGraph(self.node_count, self.out_indptr, self.out_indices,
                             self.in_indptr, self.in_indices, dict(labels), self.identifiers)


def reverse(g: DirectedGraph) -> DirectedGraph:
    """Invert every link. Shares the underlying arrays, so this is O(1)."""
    return DirectedGraph(g.node_count, g.in_indptr, g.in_indices,
                         g.out_indptr, g.out_indices, g.labels, g.identifiers)


def degrees(g: DirectedGraph) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(in_degree, out_degree)`` vectors of length N."""
    return g.in_degree(), g.out_degree()


def _open_binary(source) -> tuple[BinaryIO, bool]:
    if isinstance(source, (str, os.PathLike)):
        return open(source, "rb"), True
    if isinstance(source, bytes):
        return io.BytesIO(source), True
    return source, False


def _lines(stream) -> Iterable[tuple[int, list[str]]]:
    for lineno, raw in enumerate(stream, start=1):
        if isinstance(raw, bytes):
            try:
                raw = raw.decode("utf-8")
            except UnicodeDecodeError as exc:
                raise ParseError(f"invalid UTF-8 ({exc.reason})", lineno) from None
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line.split()


def parse_edge_list(source, id_mode: str = "dense") -> DirectedGraph:
    """Read a whitespace-separated ``source target`` edge list.

    ``source`` may be a path, raw bytes, or a binary/text stream.  In
    ``"dense"`` mode identifiers are non-negative integers used verbatim as
    NodeIds (so N is the largest id plus one); in ``"string"`` mode arbitrary
    tokens are numbered in order of first appearance.
    """
    if id_mode not in ("dense", "string"):
        raise ValueError(f"unknown id_mode {id_mode!r}")
    stream, owned = _open_binary(source)
    src: list[int] = []
    dst: list[int] = []
    ids: dict[str, int] = {}
    try:
        for lineno, tokens in _lines(stream):
            if len(tokens) != 2:
                raise ParseError(f"expected 2 tokens, got {len(tokens)}", lineno)
            if id_mode == "dense":
                try:
                    a, b = int(tokens[0]), int(tokens[1])
                except ValueError:
                    raise ParseError("node identifier is not an integer", lineno) from None
                if a < 0 or b < 0:
                    raise ParseError("node identifier is negative", lineno)
            else:
                a = ids.setdefault(tokens[0], len(ids))
                b = ids.setdefault(tokens[1], len(ids))
            src.append(a)
            dst.append(b)
    finally:
        if owned:
            stream.close()

    if id_mode == "string":
        return DirectedGraph.from_edges(src, dst, len(ids), identifiers=list(ids))
    return DirectedGraph.from_edges(src, dst)


def parse_labels(source, g: DirectedGraph | None = None) -> dict[int, str]:
    """Read ``node_id<TAB>title`` lines (UTF-8). Ids are resolved through ``g`` in string mode."""
    stream, owned = _open_binary(source)
    labels: dict[int, str] = {}
    lookup = None
    if g is not None and g.identifiers is not None:
        lookup = {name: i for i, name in enumerate(g.identifiers)}
    try:
        for lineno, raw in enumerate(stream, start=1):
            if isinstance(raw, bytes):
                raw = raw.decode("utf-8")
            raw = raw.rstrip("\r\n")
            if not raw.strip() or raw.startswith("#"):
                continue
            key, sep, title = raw.partition("\t")
            if not sep:
                raise ParseError("expected node_id<TAB>title", lineno)
            if lookup is not None:
                if key not in lookup:
                    raise ParseError(f"unknown node {key!r}", lineno)
                node = lookup[key]
            else:
                try:
                    node = int(key)
                except ValueError:
                    raise ParseError("node identifier is not an integer", lineno) from None
            if g is not None and not 0 <= node < g.node_count:
                raise ParseError(f"node {node} outside graph", lineno)
            labels[node] = title
    finally:
        if owned:
            stream.close()
    return labels
