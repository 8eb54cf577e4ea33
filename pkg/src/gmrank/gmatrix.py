"""Google matrix operator and power iteration for PageRank and CheiRank.

The matrix ``G = alpha * S + (1 - alpha) / N`` is never formed.  Link
following is a sparse product over the in-adjacency, and dangling columns
are folded in as a rank-one correction.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .graph import DirectedGraph, reverse

log = logging.getLogger(__name__)

DEFAULT_ALPHA = 0.85
DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 1000

PAGERANK = "PageRank"
CHEIRANK = "CheiRank"


class ContractError(ValueError):
    """An input violated an operation's preconditions."""


class ConvergenceError(RuntimeError):
    """Power iteration hit ``max_iter``; ``result`` holds the last iterate."""

    def __init__(self, result: RankVector):
        self.result = result
        super().__init__(
            f"{result.kind} did not converge in {result.iterations_used} iterations "
            f"(residual {result.residual:.3e})"
        )


@dataclass(eq=False)
class RankVector:
    probabilities: np.ndarray
    kind: str
    iterations_used: int
    residual: float
    converged: bool = True
    residuals: list[float] = field(default_factory=list, repr=False)

    def __len__(self):
        return self.probabilities.size


class GoogleOperator:
    """Matrix-free ``v -> G v`` for the Google matrix of ``graph``.

    With ``workers > 1`` the sparse product is split into row blocks
    computed on a thread pool.  Each output entry is still reduced
    sequentially, so both modes give identical vectors; ``deterministic``
    simply forces the single-block path.
    """

    def __init__(self, graph: DirectedGraph, alpha: float = DEFAULT_ALPHA,
                 workers: int = 1, deterministic: bool = False):
        if not 0.0 < alpha < 1.0:
            raise ContractError(f"alpha must lie in (0, 1), got {alpha}")
        self.graph = graph
        self.alpha = float(alpha)
        self.n = graph.node_count
        if self.n == 0:
            raise ContractError("graph has no nodes")

        k_out = graph.out_degree().astype(np.float64)
        self.dangling = np.flatnonzero(k_out == 0)
        # x = v * inv_out gives v(j)/k_out(j), zero on dangling nodes
        with np.errstate(divide="ignore"):
            self._inv_out = np.where(k_out > 0, 1.0 / k_out, 0.0)

        data = np.ones(graph.in_indices.size, dtype=np.float64)
        self._links = sp.csr_matrix((data, graph.in_indices, graph.in_indptr),
                                    shape=(self.n, self.n))

        self.workers = 1 if deterministic else max(1, int(workers))
        self._blocks = None
        if self.workers > 1 and self.n >= self.workers:
            bounds = np.linspace(0, self.n, self.workers + 1).astype(int)
            self._blocks = [(a, self._links[a:b]) for a, b in zip(bounds, bounds[1:])]
            self._pool = ThreadPoolExecutor(self.workers)

    def _follow(self, x: np.ndarray) -> np.ndarray:
        if self._blocks is None:
            return self._links @ x
        out = np.empty(self.n)
        def run(block):
            start, mat = block
            out[start:start + mat.shape[0]] = mat @ x
        list(self._pool.map(run, self._blocks))
        return out

    def apply(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=np.float64)
        if v.shape != (self.n,):
            raise ContractError(f"vector has shape {v.shape}, operator needs ({self.n},)")
        y = self._follow(v * self._inv_out)
        spread = v[self.dangling].sum() / self.n
        y += spread
        y *= self.alpha
        y += (1.0 - self.alpha) / self.n
        return y

    def dense(self) -> np.ndarray:
        """Materialize G. Only for small graphs."""
        s = self._links.toarray() * self._inv_out[None, :]
        s[:, self.dangling] = 1.0 / self.n
        return self.alpha * s + (1.0 - self.alpha) / self.n

    def close(self):
        if self._blocks is not None:
            self._pool.shutdown()


class DenseGoogleOperator:
    """Google matrix over a small weighted network given as column-stochastic ``S``."""

    def __init__(self, stochastic: np.ndarray, alpha: float = DEFAULT_ALPHA):
        if not 0.0 < alpha < 1.0:
            raise ContractError(f"alpha must lie in (0, 1), got {alpha}")
        s = np.asarray(stochastic, dtype=np.float64)
        self.n = s.shape[0]
        self.alpha = float(alpha)
        self.matrix = self.alpha * s + (1.0 - self.alpha) / self.n

    def apply(self, v):
        v = np.asarray(v, dtype=np.float64)
        if v.shape != (self.n,):
            raise ContractError(f"vector has shape {v.shape}, operator needs ({self.n},)")
        return self.matrix @ v

    def dense(self):
        return self.matrix.copy()


def power_iterate(op, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER,
                  kind: str = PAGERANK) -> RankVector:
    """Iterate ``op`` from the uniform vector until the L1 step drops below ``tol``.

    Raises :class:`ConvergenceError` (carrying the last iterate) when
    ``max_iter`` applications are not enough.
    """
    if tol <= 0:
        raise ContractError("tol must be positive")
    if max_iter < 1:
        raise ContractError("max_iter must be at least 1")
    n = op.n
    v = np.full(n, 1.0 / n)
    residuals = []
    for it in range(1, max_iter + 1):
        nxt = op.apply(v)
        residual = float(np.abs(nxt - v).sum())
        residuals.append(residual)
        v = nxt
        if residual < tol:
            break
    converged = residuals[-1] < tol
    v /= v.sum()
    result = RankVector(v, kind, it, residuals[-1], converged, residuals)
    log.debug("%s: %d iterations, residual %.3e", kind, it, residuals[-1])
    if not converged:
        raise ConvergenceError(result)
    return result


def pagerank(g: DirectedGraph, alpha: float = DEFAULT_ALPHA, tol: float = DEFAULT_TOL,
             max_iter: int = DEFAULT_MAX_ITER, workers: int = 1,
             deterministic: bool = False, kind: str = PAGERANK) -> RankVector:
    op = GoogleOperator(g, alpha, workers=workers, deterministic=deterministic)
    try:
        return power_iterate(op, tol, max_iter, kind=kind)
    finally:
        op.close()


def cheirank(g: DirectedGraph, alpha: float = DEFAULT_ALPHA, tol: float = DEFAULT_TOL,
             max_iter: int = DEFAULT_MAX_ITER, workers: int = 1,
             deterministic: bool = False) -> RankVector:
    """PageRank of the graph with every link inverted."""
    return pagerank(reverse(g), alpha, tol, max_iter, workers, deterministic, kind=CHEIRANK)


def write_rank_vector(rv: RankVector, stream, g: DirectedGraph | None = None, header: str | None = None):
    """Write ``rank<TAB>node<TAB>probability`` lines, highest probability first."""
    from .ranking import rank_index

    if header:
        stream.write(f"# {header}\n")
    idx = rank_index(rv)
    p = rv.probabilities
    for k, node in enumerate(idx.order.tolist(), start=1):
        name = g.node_name(node) if g is not None else str(node)
        stream.write(f"{k}\t{name}\t{p[node]:.15g}\n")


def read_probabilities(stream) -> np.ndarray:
    """Read probabilities from a rank-vector file or a one-column list.

    Rank-vector files are returned indexed by rank position (K = 1 first),
    which is all the exponent fitting needs.
    """
    values = []
    for lineno, raw in enumerate(stream, start=1):
        if isinstance(raw, bytes):
            raw = raw.decode("utf-8")
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split("\t") if "\t" in line else line.split()
        try:
            values.append(float(fields[-1]))
        except ValueError:
            raise ContractError(f"line {lineno}: not a probability: {fields[-1]!r}") from None
    return np.array(values)
