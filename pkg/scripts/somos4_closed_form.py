"""Solve a Somos-4 problem and compare the sigma closed form with exact terms.

Example: python3 scripts/somos4_closed_form.py --alpha 1 --beta 1 --seeds 1,1,1,1
"""

import argparse

import mpmath

from somos_sigma.recurrence import Somos4Problem, somos4_run
from somos_sigma.solver import closed_form, solve


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--alpha", default="1")
    ap.add_argument("--beta", default="1")
    ap.add_argument("--seeds", default="1,1,1,1")
    ap.add_argument("--digits", type=int, default=25)
    ap.add_argument("--start", type=int, default=-5)
    ap.add_argument("--stop", type=int, default=16)
    args = ap.parse_args()

    prob = Somos4Problem(args.alpha, args.beta, tuple(args.seeds.split(",")))
    sol = solve(prob, args.digits)
    print(f"g2 = {sol.g2}, g3 = {sol.g3}, lambda = {sol.lam}, mu = {sol.mu}")
    print(f"kappa = {mpmath.nstr(sol.kappa.z, 15)}, z0 = {mpmath.nstr(sol.z0.z, 15)}")
    print(f"A = {mpmath.nstr(sol.A, 15)}, B = {mpmath.nstr(sol.B, 15)}")
    exact = somos4_run(prob, args.start, args.stop)
    worst = 0
    for n in range(args.start, args.stop):
        v, _ = closed_form(sol, n)
        t = exact[n]
        err = abs(v - t) / max(1, abs(t))
        worst = max(worst, err)
        print(f"{n:4d} {str(t):>16} {mpmath.nstr(v.real, 18):>26} rel_err {mpmath.nstr(err, 3)}")
    print(f"max relative error {mpmath.nstr(worst, 3)}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
