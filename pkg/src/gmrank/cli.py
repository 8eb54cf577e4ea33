"""Command-line entry point: ``gmrank <command> ...``.

Every command writes tab-separated files into ``--output`` (a directory),
each starting with a ``#`` line that names the command and its
parameters, plus a ``manifest.tsv``.  Exit codes: 0 ok, 2 bad input,
3 non-convergence.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import culture as cu
from .fit import InsufficientDataError, fit_power_law
from .gmatrix import (ContractError, ConvergenceError, cheirank, pagerank,
                      read_probabilities, write_rank_vector)
from .graph import ParseError, parse_edge_list, parse_labels
from .ranking import correlator, density_grid, rank_index, two_d_rank, write_density_grid

log = logging.getLogger("gmrank")

COMMANDS = ("rank", "twodrank", "density", "correlator", "fit", "culture")
EXIT_INPUT = 2
EXIT_CONVERGENCE = 3


@dataclass
class RunConfig:
    command: str
    graph_path: str | None = None
    alpha: float = 0.85
    tol: float = 1e-10
    max_iter: int = 1000
    top: int = 30
    bins: int = 100
    k_min: int = 1
    k_max: int = 10
    annotation_path: str | None = None
    output_path: str = "."
    deterministic: bool = False
    id_mode: str = "dense"
    labels_path: str | None = None
    workers: int = 0
    algorithms: tuple[str, ...] = ("PageRank", "2DRank")

    def validate(self):
        if self.command not in COMMANDS:
            raise ContractError(f"unknown command {self.command!r}")
        if not 0.0 < self.alpha < 1.0:
            raise ContractError("alpha must lie in (0, 1)")
        if self.tol <= 0:
            raise ContractError("tol must be positive")
        if self.max_iter < 1:
            raise ContractError("max-iter must be at least 1")
        if self.top < 1:
            raise ContractError("top must be at least 1")
        if self.bins < 2:
            raise ContractError("bins must be at least 2")

    def describe(self) -> str:
        skip = {"command", "output_path", "workers"}
        parts = [f"{k}={v}" for k, v in asdict(self).items()
                 if k not in skip and v is not None]
        return f"gmrank {self.command} " + " ".join(parts)


class Run:
    def __init__(self, config: RunConfig):
        self.config = config
        self.out = Path(config.output_path)
        self.manifest: list[tuple[str, object]] = []

    def open(self, name: str):
        self.manifest.append(("output", name))
        fh = open(self.out / name, "w", encoding="utf-8", newline="\n")
        fh.write(f"# {self.config.describe()}\n")
        return fh

    def record(self, key, value):
        self.manifest.append((key, value))

    def write_manifest(self):
        with open(self.out / "manifest.tsv", "w", encoding="utf-8", newline="\n") as fh:
            fh.write(f"# {self.config.describe()}\n")
            for key, value in asdict(self.config).items():
                if key not in ("output_path", "workers"):
                    fh.write(f"param\t{key}\t{value}\n")
            for key, value in self.manifest:
                fh.write(f"{key}\t{value}\n")

    # --- helpers -------------------------------------------------------

    def graph(self):
        c = self.config
        if c.graph_path is None:
            raise ContractError(f"{c.command} needs a graph file")
        g = parse_edge_list(c.graph_path, c.id_mode)
        if c.labels_path:
            g = g.with_labels(parse_labels(c.labels_path, g))
        self.record("nodes", g.node_count)
        self.record("edges", g.edge_count)
        return g

    def ranks(self, g):
        c = self.config
        workers = 1 if c.deterministic else (c.workers or os.cpu_count() or 1)
        kw = dict(alpha=c.alpha, tol=c.tol, max_iter=c.max_iter,
                  workers=workers, deterministic=c.deterministic)
        p = pagerank(g, **kw)
        self.record("pagerank_iterations", p.iterations_used)
        self.record("pagerank_residual", f"{p.residual:.6e}")
        ps = cheirank(g, **kw)
        self.record("cheirank_iterations", ps.iterations_used)
        self.record("cheirank_residual", f"{ps.residual:.6e}")
        return p, ps

    # --- commands ------------------------------------------------------

    def rank(self):
        g = self.graph()
        p, ps = self.ranks(g)
        for rv, name in ((p, "pagerank.tsv"), (ps, "cheirank.tsv")):
            with self.open(name) as fh:
                write_rank_vector(rv, fh, g)
        kappa = correlator(p, ps)
        self.record("kappa", f"{kappa:.15g}")
        print(f"kappa\t{kappa:.15g}")
        self._print_top(g, p, ps)

    def _print_top(self, g, p, ps):
        n = min(self.config.top, g.node_count)
        for rv in (p, ps):
            idx = rank_index(rv)
            names = [g.labels.get(i, g.node_name(i)) if g.labels else g.node_name(i)
                     for i in idx.order[:n].tolist()]
            log.info("top %s: %s", rv.kind, ", ".join(names))

    def correlator(self):
        g = self.graph()
        p, ps = self.ranks(g)
        kappa = correlator(p, ps)
        self.record("kappa", f"{kappa:.15g}")
        with self.open("correlator.tsv") as fh:
            fh.write(f"kappa\t{kappa:.15g}\n")
        print(f"kappa\t{kappa:.15g}")

    def twodrank(self):
        g = self.graph()
        p, ps = self.ranks(g)
        ki, ksi = rank_index(p), rank_index(ps)
        k2 = two_d_rank(ki, ksi)
        with self.open("twodrank.tsv") as fh:
            fh.write("# K2\tnode\tK\tK*\n")
            for r, node in enumerate(k2.order.tolist(), start=1):
                fh.write(f"{r}\t{g.node_name(node)}\t{ki.position[node]}\t{ksi.position[node]}\n")

    def density(self):
        g = self.graph()
        p, ps = self.ranks(g)
        grid = density_grid(rank_index(p), rank_index(ps), self.config.bins)
        with self.open("density.tsv") as fh:
            write_density_grid(grid, fh)

    def fit(self):
        c = self.config
        if c.graph_path is None:
            raise ContractError("fit needs a probability file")
        with open(c.graph_path, "rb") as fh:
            probs = read_probabilities(fh)
        result = fit_power_law(probs, rank_index(probs), c.k_min, c.k_max)
        line = (f"exponent\t{result.exponent:.12g}\tstderr\t{result.stderr_exponent:.6g}"
                f"\tamplitude\t{result.amplitude:.12g}\tk_min\t{c.k_min}\tk_max\t{c.k_max}")
        with self.open("fit.tsv") as fh:
            fh.write(line + "\n")
        self.record("exponent", f"{result.exponent:.12g}")
        print(line)

    def culture(self):
        c = self.config
        if c.annotation_path is None:
            raise ContractError("culture needs an annotation file")
        lists = cu.load_annotations(c.annotation_path)
        present = sorted({a for _, a in lists}, key=cu.ALGORITHMS.index)
        for alg in [a for a in c.algorithms if a in present]:
            self._culture_tables(lists, alg)

    def _culture_tables(self, lists, alg):
        c = self.config
        tag = alg.lower()
        editions = sorted({e for e, a in lists if a == alg}, key=cu.CULTURES.index)

        with self.open(f"heroes_{tag}.tsv") as fh:
            fh.write("# edition\t1st\t2nd\t3rd\tshortfall\n")
            for e in editions:
                h = cu.local_heroes(lists, e, alg)
                cells = list(h.names) + [""] * (3 - len(h.names))
                fh.write("\t".join([e, *cells, str(h.shortfall).lower()]) + "\n")

        with self.open(f"theta_{tag}.tsv") as fh:
            fh.write("# rank\tname\ttheta\tappearances\n")
            for r, hero in enumerate(cu.global_hero_score(lists, alg, c.top), start=1):
                fh.write(f"{r}\t{hero.name}\t{hero.theta}\t{hero.appearances}\n")

        table = cu.activity_distribution(lists, alg, editions)
        with self.open(f"activity_{tag}.tsv") as fh:
            fh.write("# edition\t" + "\t".join(cu.ACTIVITIES) + "\n")
            for e, row in table.percentages.items():
                fh.write(e + "\t" + "\t".join(f"{row[a]:.6g}" for a in cu.ACTIVITIES) + "\n")

        if len(editions) >= 2:
            self.record(f"overlap_{tag}", f"{cu.overlap_fraction(lists, alg):.6g}")

        net = cu.build_culture_network(lists, alg)
        ranks = cu.culture_rank(net, c.alpha, tol=min(c.tol, 1e-12), max_iter=c.max_iter)
        order = ranks.pagerank_index.order
        names = [net.cultures[i] for i in order]
        with self.open(f"culture_weights_{tag}.tsv") as fh:
            fh.write("# rows: edition A, columns: culture B, ordered by K\n")
            fh.write("\t" + "\t".join(names) + "\n")
            w = net.weights[np.ix_(order, order)]
            for name, row in zip(names, w):
                fh.write(name + "\t" + "\t".join(str(x) for x in row.tolist()) + "\n")
        with self.open(f"culture_google_{tag}.tsv") as fh:
            fh.write("# G[i][j], i and j ordered by K\n")
            fh.write("\t" + "\t".join(names) + "\n")
            gm = ranks.google[np.ix_(order, order)]
            for name, row in zip(names, gm):
                fh.write(name + "\t" + "\t".join(f"{x:.15g}" for x in row.tolist()) + "\n")
        with self.open(f"culture_rank_{tag}.tsv") as fh:
            fh.write("# culture\tK\tK*\tP\tP*\n")
            pos = ranks.positions()
            for i in order.tolist():
                cname = net.cultures[i]
                k, ks = pos[cname]
                fh.write(f"{cname}\t{k}\t{ks}\t{ranks.pagerank.probabilities[i]:.15g}"
                         f"\t{ranks.cheirank.probabilities[i]:.15g}\n")


def run(config: RunConfig) -> int:
    """Execute one command; returns the process exit status."""
    try:
        config.validate()
        Path(config.output_path).mkdir(parents=True, exist_ok=True)
        r = Run(config)
        getattr(r, config.command)()
        r.write_manifest()
    except ConvergenceError as exc:
        print(f"error\tconvergence\t{exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except (ParseError, cu.ValidationError, ContractError, InsufficientDataError,
            ValueError, KeyError, OSError) as exc:
        kind = "parse" if isinstance(exc, ParseError) else "validation"
        msg = str(exc).replace("\n", " ")
        print(f"error\t{kind}\t{msg}", file=sys.stderr)
        return EXIT_INPUT
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--alpha", type=float, default=0.85)
    common.add_argument("--tol", type=float, default=1e-10)
    common.add_argument("--max-iter", type=int, default=1000)
    common.add_argument("--top", type=int, default=30)
    common.add_argument("--bins", type=int, default=100)
    common.add_argument("--output", default=".", help="output directory")
    common.add_argument("--deterministic", action="store_true",
                        help="sequential reductions; byte-identical outputs")
    common.add_argument("--workers", type=int, default=0, help="threads (0: all cores)")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="gmrank", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("rank", "twodrank", "density", "correlator"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("graph", help="edge list: one 'source target' pair per line")
        p.add_argument("--id-mode", choices=("dense", "string"), default="dense")
        p.add_argument("--labels", help="node_id<TAB>title file")
    p = sub.add_parser("fit", parents=[common])
    p.add_argument("probabilities", help="rank-vector file or one probability per line")
    p.add_argument("--k-min", "--kmin", dest="k_min", type=int, default=1)
    p.add_argument("--k-max", "--kmax", dest="k_max", type=int, default=10)
    p = sub.add_parser("culture", parents=[common])
    p.add_argument("annotations", help="TSV: edition, algorithm, local_rank, name, activity, culture")
    p.add_argument("--algorithm", action="append", choices=cu.ALGORITHMS,
                   help="repeatable; default PageRank and 2DRank")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(
        command=args.command, alpha=args.alpha, tol=args.tol, max_iter=args.max_iter,
        top=args.top, bins=args.bins, output_path=args.output,
        deterministic=args.deterministic, workers=args.workers,
    )
    if args.command == "fit":
        cfg.graph_path = args.probabilities
        cfg.k_min, cfg.k_max = args.k_min, args.k_max
    elif args.command == "culture":
        cfg.annotation_path = args.annotations
        if args.algorithm:
            cfg.algorithms = tuple(args.algorithm)
    else:
        cfg.graph_path = args.graph
        cfg.id_mode = args.id_mode
        cfg.labels_path = args.labels
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return run(config_from_args(args))


if __name__ == "__main__":
    sys.exit(main())
