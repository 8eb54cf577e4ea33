"""Top-person lists from several editions and the network of cultures built from them."""

from __future__ import annotations

import io
import os
from collections import Counter, defaultdict
from dataclasses import dataclass

import numpy as np

from .gmatrix import (CHEIRANK, DEFAULT_ALPHA, PAGERANK, DenseGoogleOperator,
                      RankVector, power_iterate)
from .graph import DirectedGraph
from .ranking import RankIndex, rank_index

ACTIVITIES = ("politics", "science", "art", "religion", "sport", "etc")
EDITIONS = ("EN", "FR", "DE", "IT", "ES", "NL", "RU", "HU", "KO")
CULTURES = EDITIONS + ("WR",)
ALGORITHMS = ("PageRank", "CheiRank", "2DRank")
LIST_LENGTH = 30

HEADER = ("edition", "algorithm", "local_rank", "name", "activity", "culture")


class ValidationError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class PersonAnnotation:
    name: str
    activity: str
    culture: str
    node: int | None = None


@dataclass(frozen=True)
class TopPersonList:
    edition: str
    algorithm: str
    entries: tuple[tuple[int, PersonAnnotation], ...]

    def __len__(self):
        return len(self.entries)

    def persons(self):
        return [p for _, p in self.entries]

    def is_local(self, person: PersonAnnotation) -> bool:
        return person.culture == self.edition


Lists = dict[tuple[str, str], TopPersonList]


def _canonical_algorithm(token: str) -> str:
    for alg in ALGORITHMS:
        if token.lower() == alg.lower():
            return alg
    raise KeyError(token)


def load_annotations(source) -> Lists:
    """Parse the annotation TSV into lists keyed by ``(edition, algorithm)``.

    Columns: edition, algorithm, local_rank, name, activity, culture.  The
    first non-comment line is the header.  Ranks in every list must run
    1..L without gaps.
    """
    if isinstance(source, (str, os.PathLike)):
        with open(source, "rb") as fh:
            return load_annotations(fh)
    if isinstance(source, bytes):
        source = io.BytesIO(source)

    rows: dict[tuple[str, str], dict[int, PersonAnnotation]] = defaultdict(dict)
    seen_header = False
    for lineno, raw in enumerate(source, start=1):
        if isinstance(raw, bytes):
            raw = raw.decode("utf-8")
        raw = raw.rstrip("\r\n")
        if not raw.strip() or raw.startswith("#"):
            continue
        fields = [f.strip() for f in raw.split("\t")]
        if not seen_header:
            if tuple(f.lower() for f in fields) != HEADER:
                raise ValidationError("missing header " + "\\t".join(HEADER), lineno)
            seen_header = True
            continue
        if len(fields) != len(HEADER):
            raise ValidationError(f"expected {len(HEADER)} fields, got {len(fields)}", lineno)
        edition, algorithm, rank, name, activity, culture = fields
        edition, culture, activity = edition.upper(), culture.upper(), activity.lower()
        if edition not in CULTURES:
            raise ValidationError(f"unknown edition {edition!r}", lineno)
        try:
            algorithm = _canonical_algorithm(algorithm)
        except KeyError:
            raise ValidationError(f"unknown algorithm {algorithm!r}", lineno) from None
        if activity not in ACTIVITIES:
            raise ValidationError(f"unknown activity {activity!r}", lineno)
        if culture not in CULTURES:
            raise ValidationError(f"unknown culture {culture!r}", lineno)
        try:
            r = int(rank)
        except ValueError:
            raise ValidationError(f"rank {rank!r} is not an integer", lineno) from None
        if r < 1:
            raise ValidationError(f"rank {r} is below 1", lineno)
        if not name:
            raise ValidationError("empty name", lineno)
        bucket = rows[(edition, algorithm)]
        if r in bucket:
            raise ValidationError(f"duplicate rank {r} for {edition}/{algorithm}", lineno)
        bucket[r] = PersonAnnotation(name, activity, culture)

    if not seen_header:
        raise ValidationError("empty annotation file")

    lists: Lists = {}
    for (edition, algorithm), bucket in rows.items():
        ranks = sorted(bucket)
        if ranks != list(range(1, len(ranks) + 1)):
            missing = sorted(set(range(1, ranks[-1] + 1)) - set(ranks))
            raise ValidationError(f"{edition}/{algorithm}: ranks have gaps at {missing}")
        lists[(edition, algorithm)] = TopPersonList(
            edition, algorithm, tuple((r, bucket[r]) for r in ranks))
    return lists


def _lists_for(lists: Lists, algorithm: str) -> dict[str, TopPersonList]:
    return {e: tl for (e, a), tl in sorted(lists.items()) if a == algorithm}


@dataclass(frozen=True)
class ActivityTable:
    percentages: dict[str, dict[str, float]]
    missing: tuple[str, ...]


def activity_distribution(lists: Lists, algorithm: str,
                          editions=EDITIONS) -> ActivityTable:
    """Percentage of each edition's list falling in each activity field."""
    by_edition = _lists_for(lists, algorithm)
    table, missing = {}, []
    for e in editions:
        tl = by_edition.get(e)
        if tl is None or not len(tl):
            missing.append(e)
            continue
        counts = Counter(p.activity for p in tl.persons())
        table[e] = {a: 100.0 * counts[a] / len(tl) for a in ACTIVITIES}
    return ActivityTable(table, tuple(missing))


def overlap_fraction(lists: Lists, algorithm: str) -> float:
    """Percent of distinct persons that appear in at least two editions' lists."""
    by_edition = _lists_for(lists, algorithm)
    if len(by_edition) < 2:
        raise ValueError("overlap needs lists from at least two editions")
    appearances = Counter()
    for tl in by_edition.values():
        appearances.update({p.name for p in tl.persons()})
    shared = sum(1 for c in appearances.values() if c >= 2)
    return 100.0 * shared / len(appearances)


@dataclass(frozen=True)
class LocalHeroes:
    edition: str
    names: tuple[str, ...]
    shortfall: bool


def local_heroes(lists: Lists, edition: str, algorithm: str, top_n: int = 3) -> LocalHeroes:
    tl = lists.get((edition, algorithm))
    if tl is None:
        raise KeyError(f"no {algorithm} list for {edition}")
    names = tuple(p.name for _, p in tl.entries if tl.is_local(p))[:top_n]
    return LocalHeroes(edition, names, len(names) < top_n)


@dataclass(frozen=True)
class GlobalHero:
    name: str
    theta: int
    appearances: int


def global_hero_score(lists: Lists, algorithm: str,
                      list_length: int = LIST_LENGTH) -> list[GlobalHero]:
    """Score each person by sum over editions of (list_length + 1 - R)."""
    theta: Counter = Counter()
    count: Counter = Counter()
    for tl in _lists_for(lists, algorithm).values():
        for r, p in tl.entries:
            if r > list_length:
                raise ValueError(f"rank {r} in {tl.edition} exceeds list length {list_length}")
            theta[p.name] += list_length + 1 - r
            count[p.name] += 1
    rows = [GlobalHero(name, theta[name], count[name]) for name in theta]
    rows.sort(key=lambda h: (-h.theta, -h.appearances, h.name))
    return rows


@dataclass(frozen=True, eq=False)
class CultureNetwork:
    """``weights[a, b]``: persons of culture b in edition a's list (diagonal zero)."""

    cultures: tuple[str, ...]
    weights: np.ndarray


def build_culture_network(lists: Lists, algorithm: str, cultures=CULTURES) -> CultureNetwork:
    pos = {c: i for i, c in enumerate(cultures)}
    w = np.zeros((len(cultures), len(cultures)), dtype=np.int64)
    for edition, tl in _lists_for(lists, algorithm).items():
        if edition not in pos:
            continue
        for p in tl.persons():
            if p.culture != edition and p.culture in pos:
                w[pos[edition], pos[p.culture]] += 1
    return CultureNetwork(tuple(cultures), w)


def column_stochastic(weights: np.ndarray) -> np.ndarray:
    """Column j holds the outgoing weights of node j, normalized; empty columns become uniform.

    ``weights[a, b]`` is a link a -> b, so the transition matrix is built
    from the transpose.
    """
    s = np.asarray(weights, dtype=np.float64).T.copy()
    n = s.shape[0]
    totals = s.sum(axis=0)
    empty = totals == 0
    s[:, ~empty] /= totals[~empty]
    s[:, empty] = 1.0 / n
    return s


@dataclass(eq=False)
class CultureRanks:
    network: CultureNetwork
    pagerank: RankVector
    cheirank: RankVector
    pagerank_index: RankIndex
    cheirank_index: RankIndex
    google: np.ndarray
    google_star: np.ndarray

    def positions(self) -> dict[str, tuple[int, int]]:
        """Culture -> (K, K*)."""
        return {c: (int(self.pagerank_index.position[i]), int(self.cheirank_index.position[i]))
                for i, c in enumerate(self.network.cultures)}


def culture_rank(net: CultureNetwork, alpha: float = DEFAULT_ALPHA,
                 tol: float = 1e-13, max_iter: int = 10000) -> CultureRanks:
    """PageRank and CheiRank of the culture network and of its reversal."""
    w = net.weights
    if not w.any():
        raise ValueError("culture network has no links")
    op = DenseGoogleOperator(column_stochastic(w), alpha)
    op_star = DenseGoogleOperator(column_stochastic(w.T), alpha)
    p = power_iterate(op, tol, max_iter, kind=PAGERANK)
    ps = power_iterate(op_star, tol, max_iter, kind=CHEIRANK)
    return CultureRanks(net, p, ps, rank_index(p), rank_index(ps), op.dense(), op_star.dense())


@dataclass(frozen=True)
class ContributionStats:
    median_contribution: float
    median_in_degree: float
    links: int
    uncited_targets: tuple[int, ...]


def contribution_stats(g: DirectedGraph, p, targets) -> ContributionStats:
    """Median of P(j)/k_out(j) over every link j -> i into a target, and median in-degree.

    Contributions are pooled over all targets before the median is taken.
    Targets without incoming links add nothing and are reported back.
    """
    targets = sorted(set(int(t) for t in targets))
    if not targets:
        raise ValueError("no target nodes")
    prob = getattr(p, "probabilities", p)
    prob = np.asarray(prob, dtype=np.float64)
    k_out = g.out_degree()
    k_in = g.in_degree()
    parts = [g.predecessors(t) for t in targets]
    sources = np.concatenate(parts) if parts else np.empty(0, dtype=np.int64)
    uncited = tuple(t for t, src in zip(targets, parts) if src.size == 0)
    contrib = prob[sources] / k_out[sources]
    median_contribution = float(np.median(contrib)) if contrib.size else float("nan")
    return ContributionStats(median_contribution, float(np.median(k_in[targets])),
                             int(contrib.size), uncited)
