"""Iterate the Henon-Heiles Backlund map and write a CSV of the orbit.

Columns: step, q1, q2, p1, p2, h1, h2, rel_dh1, rel_dh2, lax_residual.
"""

import argparse
import csv
import sys

from somos_sigma import henon_heiles as H


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--params", default="0,-0.9,0", help="a,c,m")
    ap.add_argument("--state", default="0.53,0.4,0.4,0.1", help="q1,q2,p1,p2")
    ap.add_argument("--lam", type=float, default=0.85)
    ap.add_argument("--mu-sign", type=int, choices=[1, -1], default=-1)
    ap.add_argument("--steps", type=int, default=100)
    ap.add_argument("--out", help="CSV path (default stdout)")
    args = ap.parse_args()

    params = H.HHParams(*(float(v) for v in args.params.split(",")))
    cur = H.HHState(*(float(v) for v in args.state.split(",")))
    h10, h20 = H.h1(cur, params), H.h2(cur, params)
    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["step", "q1", "q2", "p1", "p2", "h1", "h2", "rel_dh1", "rel_dh2", "lax_residual"])
    try:
        for k in range(args.steps + 1):
            e1, e2 = H.h1(cur, params), H.h2(cur, params)
            lax = ""
            nxt = None
            if k < args.steps:
                res = H.bt_step_reduced(cur.reduced(), params, args.lam, args.mu_sign)
                lax = f"{res.lax_residual:.3e}"
                nxt = H.canonical_state(res.state, 1 if cur.q1 >= 0 else -1)
            w.writerow([k, *cur.as_tuple(), e1, e2, f"{abs(e1 - h10) / abs(h10):.3e}", f"{abs(e2 - h20) / abs(h20):.3e}", lax])
            if nxt is None:
                break
            cur = nxt
    finally:
        if args.out:
            fh.close()
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
