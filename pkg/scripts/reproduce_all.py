"""Run every reference check and print a comparison table with timings.

Exit status is 0 when all criteria pass, 1 otherwise.
"""

import argparse
import json
import sys

from somos_sigma.reproduce import run_all


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--only", type=lambda s: {int(v) for v in s.split(",")}, help="comma separated criterion numbers")
    ap.add_argument("--json", action="store_true", help="emit JSON instead of a table")
    args = ap.parse_args()
    sys.set_int_max_str_digits(0)
    results = run_all(args.only)
    if args.json:
        print(json.dumps([r.to_json(timings=True) for r in results], indent=2))
    else:
        for r in results:
            print(r.summary())
            for row in r.rows:
                mark = "ok " if row.passed else "BAD"
                print(f"    {mark} {row.quantity:<42} ref {row.reference:<28} got {row.computed:<28} tol {row.tolerance}")
    return 0 if all(r.passed for r in results) else 1


if __name__ == "__main__":
    raise SystemExit(main())
