"""Time PageRank/CheiRank on a synthetic preferential-attachment graph.

    python scripts/benchmark.py --nodes 1000000 --links 10 --workers 4
"""

import argparse
import time

import numpy as np

from gmrank.gmatrix import cheirank, pagerank
from gmrank.synthetic import preferential_attachment


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--nodes", type=int, default=1_000_000)
    ap.add_argument("--links", type=int, default=10, help="links per new node")
    ap.add_argument("--workers", type=int, default=4)
    ap.add_argument("--tol", type=float, default=1e-10)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    t0 = time.perf_counter()
    g = preferential_attachment(args.nodes, args.links, np.random.default_rng(args.seed))
    print(f"graph: {g.node_count} nodes, {g.edge_count} links ({time.perf_counter() - t0:.1f}s)")

    for name, fn in (("pagerank", pagerank), ("cheirank", cheirank)):
        t0 = time.perf_counter()
        seq = fn(g, tol=args.tol, deterministic=True)
        t_seq = time.perf_counter() - t0
        t0 = time.perf_counter()
        par = fn(g, tol=args.tol, workers=args.workers)
        t_par = time.perf_counter() - t0
        diff = np.abs(seq.probabilities - par.probabilities).sum()
        print(f"{name}: {seq.iterations_used} iterations, sequential {t_seq:.1f}s, "
              f"{args.workers} workers {t_par:.1f}s, L1 difference {diff:.1e}")


if __name__ == "__main__":
    main()
