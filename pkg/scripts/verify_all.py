"""Run every registered identity check and print the summary table."""

from __future__ import annotations

import argparse
import time

from nablalaplace.verify import summary_table, verify_all


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--trials", type=int, default=None)
    args = ap.parse_args()

    t0 = time.perf_counter()
    reports = verify_all(args.seed, args.trials)
    print(summary_table(reports))
    passed = sum(r.passed for r in reports)
    print(f"{passed}/{len(reports)} passed in {time.perf_counter() - t0:.1f} s")
    for r in reports:
        if not r.passed:
            print(r.property_id, r.notes)


if __name__ == "__main__":
    main()
