"""Run every verification suite at default caps and write one JSON report per group.

Run: python3 scripts/run_all.py [--type A2] [--out reports/] [--jobs 4]
"""

import argparse
import json
import os
import time

from toroidal_yangian.cli import SUITES, Config, run_suites


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--type", default="A2")
    ap.add_argument("--out", default="reports")
    ap.add_argument("--jobs", type=int, default=1)
    ns = ap.parse_args()
    os.makedirs(ns.out, exist_ok=True)
    cfg = Config(type=ns.type, jobs=ns.jobs)
    for group, suites in SUITES.items():
        t0 = time.time()
        rep = run_suites(group, list(suites), cfg)
        path = os.path.join(ns.out, f"{group}-{ns.type}.json")
        with open(path, "w") as fh:
            json.dump(rep.to_json(), fh, indent=2, sort_keys=True)
        counts = ", ".join(f"{s}={rep.count(s)}" for s in ("pass", "fail", "at_cap", "inconclusive"))
        print(f"{group:9s} {counts}  {time.time() - t0:.1f}s -> {path}")


if __name__ == "__main__":
    main()
