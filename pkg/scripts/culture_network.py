"""Network of cultures from an annotation TSV: heroes, scores, culture ranks and Zipf fits.

    python scripts/culture_network.py tests/data/table2_en_pagerank.tsv
"""

import argparse

from gmrank import culture as cu
from gmrank.fit import InsufficientDataError, fit_power_law


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("annotations")
    ap.add_argument("--algorithm", default="PageRank", choices=cu.ALGORITHMS)
    args = ap.parse_args()

    lists = cu.load_annotations(args.annotations)
    alg = args.algorithm
    editions = [e for e in cu.EDITIONS if (e, alg) in lists]

    print("local heroes")
    for e in editions:
        h = cu.local_heroes(lists, e, alg)
        print(f"  {e}: {', '.join(h.names)}{' (short)' if h.shortfall else ''}")

    print("global heroes")
    for hero in cu.global_hero_score(lists, alg)[:10]:
        print(f"  {hero.name}: theta={hero.theta} N_A={hero.appearances}")

    if len(editions) > 1:
        print(f"overlap: {cu.overlap_fraction(lists, alg):.1f}%")

    ranks = cu.culture_rank(cu.build_culture_network(lists, alg))
    print("culture (K, K*)")
    for c, (k, ks) in sorted(ranks.positions().items(), key=lambda kv: kv[1]):
        print(f"  {c}: K={k} K*={ks}")
    for rv, idx, label in ((ranks.pagerank, ranks.pagerank_index, "z"),
                           (ranks.cheirank, ranks.cheirank_index, "z*")):
        try:
            fit = fit_power_law(rv, idx, 1, 10)
            print(f"{label} = {fit.exponent:.2f} +- {fit.stderr_exponent:.2f}")
        except InsufficientDataError as exc:
            print(f"{label}: {exc}")


if __name__ == "__main__":
    main()
