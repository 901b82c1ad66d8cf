"""Fit the order-8 recurrence on a genus-2 divisor orbit and check it.

Example: python3 scripts/genus2_fit.py --curve 1,-4,0,0,0 --d0 "0,1;1,1" --point=-1,1
"""

import argparse
import sys

from somos_sigma import genus2 as G
from somos_sigma.recurrence import gauge


def _pair(s):
    x, y = s.split(",")
    return x.strip(), y.strip()


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--curve", default="1,-4,0,0,0", help="c0,c1,c2,c3,c4")
    ap.add_argument("--d0", default="0,1;1,1", help="two curve points 'x1,y1;x2,y2'")
    ap.add_argument("--point", default="-1,1", help="step point 'x,y'")
    ap.add_argument("--radius", type=int, default=30)
    args = ap.parse_args()
    sys.set_int_max_str_digits(0)

    curve = G.curve_validate(*args.curve.split(","))
    p1, p2 = (G.curve_point(curve, *_pair(s)) for s in args.d0.split(";"))
    P = G.curve_point(curve, *_pair(args.point))
    D0 = G.two_point_divisor(curve, p1, p2)
    bs = G.bolza_seq(curve, D0, P, -args.radius - 5, args.radius + 6)
    print(f"lambda = {bs.lam}; theta crossings: {bs.gaps or 'none'}")
    a, b = max(bs.gap_free_runs(), key=lambda r: r[1] - r[0])
    f = bs.window.slice(a, b)
    tau = G.tau_from_f(f)
    alpha = G.fit_somos8(tau)
    for j, v in enumerate(alpha):
        print(f"alpha_{j} = {v}")
    rows = G.usable_rows(tau)
    print("refit on last rows equal:", G.fit_somos8(tau, rows[-4:]) == alpha)
    print("refit after gauge equal: ", G.fit_somos8(gauge(tau, 3, -2)) == alpha)
    r8 = G.verify_somos8(tau, alpha)
    r6 = G.verify_sixth_order(f, alpha)
    print(f"order-8 residuals zero: {r8.passed} ({len(r8.entries)} rows)")
    print(f"order-6 residuals zero: {r6.passed} ({len(r6.entries)} rows)")
    return 0 if r8.passed and r6.passed else 1


if __name__ == "__main__":
    raise SystemExit(main())
