"""Rank indices, the PageRank-CheiRank correlator, 2DRank and the (K, K*) density grid."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .gmatrix import ContractError, RankVector


@dataclass(frozen=True, eq=False)
class RankIndex:
    """``order[k-1]`` is the node with rank k; ``position[node]`` is its 1-based rank."""

    order: np.ndarray
    position: np.ndarray

    @classmethod
    def from_order(cls, order) -> RankIndex:
        order = np.asarray(order, dtype=np.int64)
        position = np.empty_like(order)
        position[order] = np.arange(1, order.size + 1)
        return cls(order, position)

    def __len__(self):
        return self.order.size


def rank_index(v: RankVector | np.ndarray) -> RankIndex:
    """Sort nodes by decreasing probability, ties by ascending NodeId."""
    p = v.probabilities if isinstance(v, RankVector) else np.asarray(v, dtype=np.float64)
    # stable sort on -p keeps ascending node order inside ties
    return RankIndex.from_order(np.argsort(-p, kind="stable"))


_SPLIT = float(2**27 + 1)


def _two_product(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Dekker product: ``a * b == p + err`` exactly (barring underflow)."""
    p = a * b
    c = _SPLIT * a
    ah = c - (c - a)
    al = a - ah
    c = _SPLIT * b
    bh = c - (c - b)
    bl = b - bh
    err = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, err


def exact_sum(values) -> Fraction:
    """Exact rational sum of float64 values.

    Mantissas are split into 27- and 26-bit limbs so that per-exponent
    sums fit in int64 for up to ~10^8 terms.
    """
    v = np.asarray(values, dtype=np.float64).ravel()
    v = v[v != 0]
    if v.size == 0:
        return Fraction(0)
    if not np.isfinite(v).all():
        raise ContractError("non-finite value")
    m, e = np.frexp(v)
    mant = np.ldexp(m, 53).astype(np.int64)
    sign = np.sign(mant)
    mag = np.abs(mant)
    hi = (mag >> 26) * sign
    lo = (mag & ((1 << 26) - 1)) * sign
    order = np.argsort(e, kind="stable")
    e, hi, lo = e[order], hi[order], lo[order]
    starts = np.flatnonzero(np.r_[True, e[1:] != e[:-1]])
    hi_sums = np.add.reduceat(hi, starts).tolist()
    lo_sums = np.add.reduceat(lo, starts).tolist()
    emin = int(e[0]) - 53
    total = 0
    for ex, h, l in zip(e[starts].tolist(), hi_sums, lo_sums):
        total += ((h << 26) + l) << (ex - 53 - emin)
    return Fraction(total) * Fraction(2) ** emin


def correlator(p, pstar) -> float:
    """kappa = N * sum_i P(i) P*(i) - 1, correctly rounded.

    Evaluated in exact arithmetic as ``N * sum(P P*) / (sum(P) sum(P*)) - 1``,
    which equals the plain form for probability vectors and removes the
    representation error of the stored entries (so uniform vectors give
    exactly 0 for every N).
    """
    a = p.probabilities if isinstance(p, RankVector) else np.asarray(p, dtype=np.float64)
    b = pstar.probabilities if isinstance(pstar, RankVector) else np.asarray(pstar, dtype=np.float64)
    if a.shape != b.shape:
        raise ContractError(f"vectors differ in length: {a.size} vs {b.size}")
    sa, sb = exact_sum(a), exact_sum(b)
    if sa == 0 or sb == 0:
        raise ContractError("zero vector is not a probability vector")
    prod, err = _two_product(a.astype(np.float64), b.astype(np.float64))
    dot = exact_sum(np.concatenate([prod, err]))
    return float(a.size * dot / (sa * sb) - 1)


def two_d_rank(pagerank_index: RankIndex, cheirank_index: RankIndex) -> RankIndex:
    """Order nodes by the ribs of growing squares in the (K, K*) plane.

    Rib r holds the nodes with max(K, K*) = r.  Since K and K* are both
    permutations, a rib has at most two nodes: the one with K = r (visited
    first, unless it is the corner) and the one with K* = r.
    """
    k = pagerank_index.position
    ks = cheirank_index.position
    if k.shape != ks.shape:
        raise ContractError("rank indices cover different node sets")
    rib = np.maximum(k, ks)
    # 0: K side (K = r, K* < r); 1: corner; 2: K* side (K* = r, K < r)
    side = np.where(k == ks, 1, np.where(k > ks, 0, 2))
    within = np.where(side == 0, ks, np.where(side == 2, -k, 0))
    return RankIndex.from_order(np.lexsort((within, side, rib)))


@dataclass(frozen=True, eq=False)
class DensityGrid:
    """Node counts on a bins x bins log grid; rows follow K, columns K*."""

    cells: np.ndarray
    k_edges: np.ndarray
    kstar_edges: np.ndarray


def log_edges(n: int, bins: int) -> np.ndarray:
    edges = np.exp(np.linspace(0.0, np.log(n), bins + 1))
    edges[0], edges[-1] = 1.0, float(n)
    return edges


def _bin(ranks: np.ndarray, edges: np.ndarray) -> np.ndarray:
    cell = np.searchsorted(edges, ranks, side="right") - 1
    # last interval is closed on the right so K = N lands in the final cell
    return np.clip(cell, 0, edges.size - 2)


def density_grid(pagerank_index: RankIndex, cheirank_index: RankIndex,
                 bins: int = 100) -> DensityGrid:
    n = len(pagerank_index)
    if n < 2:
        raise ContractError("density grid needs at least 2 nodes")
    if bins < 2:
        raise ContractError("bins must be at least 2")
    if len(cheirank_index) != n:
        raise ContractError("rank indices cover different node sets")
    edges = log_edges(n, bins)
    rows = _bin(pagerank_index.position.astype(np.float64), edges)
    cols = _bin(cheirank_index.position.astype(np.float64), edges)
    cells = np.zeros((bins, bins), dtype=np.int64)
    np.add.at(cells, (rows, cols), 1)
    return DensityGrid(cells, edges, edges.copy())


def write_density_grid(grid: DensityGrid, stream, header: str | None = None):
    if header:
        stream.write(f"# {header}\n")
    stream.write("# edges\t" + "\t".join(f"{e:.15g}" for e in grid.k_edges) + "\n")
    for row in grid.cells:
        stream.write("\t".join(str(c) for c in row.tolist()) + "\n")
