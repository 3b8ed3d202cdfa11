"""Failure counts of the star-product stability bound per (s, t, k) cell.

Run: python3 scripts/bk_table.py [--type A2] [--samples 50]
"""

import argparse

from toroidal_yangian.cartan import build_cartan
from toroidal_yangian.degeneration import verify_bk_stability


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--type", default="A2")
    ap.add_argument("--samples", type=int, default=50)
    ap.add_argument("--seed", type=int, default=0)
    ns = ap.parse_args()
    d = build_cartan(ns.type)
    print(" s t k  fail/total")
    for s in range(3):
        for t in range(3):
            for k in range(3):
                rep = verify_bk_stability(s, t, k, ns.samples, d, seed=ns.seed)
                print(f" {s} {t} {k}  {rep.count('fail')}/{len(rep.entries)}")


if __name__ == "__main__":
    main()
