"""Synthetic graphs for tests and benchmarks."""

from __future__ import annotations

import numpy as np

from .graph import DirectedGraph


def random_graph(n: int, m: int, rng: np.random.Generator,
                 self_loops: bool = True) -> DirectedGraph:
    src = rng.integers(0, n, m)
    dst = rng.integers(0, n, m)
    if not self_loops:
        keep = src != dst
        src, dst = src[keep], dst[keep]
    return DirectedGraph.from_edges(src, dst, n)


def preferential_attachment(n: int, m: int, rng: np.random.Generator,
                            copy_prob: float = 0.5) -> DirectedGraph:
    """Copying-model graph: node t links to ``m`` earlier nodes.

    Each link either picks a uniform earlier node or, with ``copy_prob``,
    copies the target of a uniformly chosen earlier link, which yields a
    power-law in-degree distribution.  Built without a Python loop over
    edges: copy chains are resolved by pointer jumping.
    """
    if n < 2:
        raise ValueError("need at least 2 nodes")
    src = np.repeat(np.arange(1, n, dtype=np.int64), m)
    e = src.size
    edge_id = np.arange(e, dtype=np.int64)
    first_edge = (src - 1) * m  # links of node t start here

    target = (rng.random(e) * src).astype(np.int64)  # uniform in [0, t)
    copy = (rng.random(e) < copy_prob) & (first_edge > 0)
    ref = np.where(copy, (rng.random(e) * np.maximum(first_edge, 1)).astype(np.int64), edge_id)

    # follow ref until reaching an edge that does not copy
    while True:
        nxt = ref[ref]
        if np.array_equal(nxt, ref):
            break
        ref = nxt
    target = target[ref]
    return DirectedGraph.from_edges(src, target, n)
