"""Falsification campaign for the triple-bracket identity over monic cubics
x^3 - a x^2 - b x - c with 0 <= a, b, c <= A.  Survivors, if any, are only
reported; nothing here proves a characterization."""

import argparse
import json

from floorlab.cli import search_triple

if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--A", type=int, default=3)
    p.add_argument("--n-max", type=int, default=10_000)
    p.add_argument("--out", default="triple_campaign.json")
    args = p.parse_args()
    rep = search_triple(args.A, args.n_max)
    with open(args.out, "w") as fh:
        json.dump(rep, fh, indent=2)
    for r in rep["violated"]:
        print(f"{r['approx']:>18}  cubics {r['cubics']}  first violation n={r['first_violation']}  oracle ok={r['oracle_confirmed']}")
    for r in rep["survivors"]:
        print(f"{r['approx']:>18}  survivor up to {r['rescanned_to']}")
    print(rep["claim"])
