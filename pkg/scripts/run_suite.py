#!/usr/bin/env python3
"""Run the desk-scale verification suite and print one line per check."""

import argparse
import sys
import time

from conjlab.verify import default_suite_config, run_suite


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    t0 = time.monotonic()
    reports = run_suite(default_suite_config(), seed=args.seed)
    for r in reports:
        print(f"{r.verdict:18s} {r.lemma:20s} {r.ms:6d} ms  {r.params}")
    bad = [r for r in reports if not r.ok]
    print(f"-- {len(reports)} checks, {len(bad)} failures, "
          f"{time.monotonic() - t0:.1f}s total")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
