"""Command line entry point: ``somos-sigma <group> <command> [options]``.

Every run resolves its configuration (flags override an optional ``--input``
JSON payload), validates it against the published schema, and echoes it in
the output.  Exit codes: 0 success, 1 invalid input, 2 computation error
(JSON record on stderr), 3 a reference check failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

import mpmath

from . import config as C
from . import genus2 as G
from . import henon_heiles as H
from . import reproduce as R
from . import schur
from . import solver as S
from .algebra import UPoly, rational_str, to_rational
from .errors import SomosSigmaError, ValidationError
from .recurrence import (
    Somos4Problem,
    antisymmetry_check,
    divisibility_check,
    eds_generate,
    hankel_check,
    laurent_check,
    somos4_run,
)

EXIT_OK, EXIT_INVALID, EXIT_COMPUTE, EXIT_ACCEPTANCE = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ValidationError(f"{self.prog}: {message}")


# ---------------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------------


def _csv_list(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def _points(text: str) -> list[list[str]]:
    return [_csv_list(p) for p in text.split(";") if p.strip()]


def _common() -> argparse.ArgumentParser:
    # SUPPRESS so that flags given before and after the subcommand both work
    p = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    p.add_argument("--digits", type=int, help=f"working precision (default ${C.ENV_DIGITS} or 25)")
    p.add_argument("--format", dest="fmt", choices=["json", "csv", "text"])
    p.add_argument("--seed", type=int, help="seed for randomised checks")
    p.add_argument("--input", help="JSON payload; explicit flags take precedence")
    p.add_argument("--output", help="write to this file instead of stdout")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    top = _Parser(prog="somos-sigma", description=__doc__.splitlines()[0], parents=[common])
    groups = top.add_subparsers(dest="group", required=True, parser_class=_Parser)

    def cmd(sub, name, help_):
        return sub.add_parser(name, help=help_, parents=[common])

    def somos_args(p):
        p.add_argument("--alpha")
        p.add_argument("--beta")
        p.add_argument("--seeds", type=_csv_list, help="four rationals, comma separated")
        p.add_argument("--offset", type=int)

    g = groups.add_parser("somos4", help="Somos-4 sequences and their sigma closed form")
    sub = g.add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = cmd(sub, "run", "iterate the recurrence exactly")
    somos_args(p)
    p.add_argument("--n", type=int, help="number of terms from the offset (default 10)")
    p.add_argument("--start", type=int)
    p.add_argument("--stop", type=int)
    p = cmd(sub, "solve", "curve, Abel-map images and prefactors")
    somos_args(p)
    p = cmd(sub, "closed-form", "compare the closed form with exact terms")
    somos_args(p)
    p.add_argument("--start", type=int)
    p.add_argument("--stop", type=int)
    p = cmd(sub, "laurent", "symbolic Laurent check of tau_4..tau_n")
    p.add_argument("--n-max", dest="n_max", type=int)
    p.add_argument("--cap", type=int)

    g = groups.add_parser("eds", help="elliptic divisibility sequences")
    sub = g.add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = cmd(sub, "gen", "generate tau_start..tau_stop-1")
    p.add_argument("--seeds", type=_csv_list, help="tau_1..tau_4")
    p.add_argument("--start", type=int)
    p.add_argument("--stop", type=int)
    p = cmd(sub, "check", "antisymmetry, divisibility and Hankel identities")
    p.add_argument("--seeds", type=_csv_list)
    p.add_argument("--through", type=int)
    p.add_argument("--hankel-max", dest="hankel_max", type=int)

    g = groups.add_parser("g2", help="genus-2 divisor sequences and the order-8 recurrence")
    sub = g.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, help_ in (
        ("validate", "check the quintic is squarefree"),
        ("seq", "divisors D0 + n(P - inf) and Bolza values"),
        ("fit", "fit the four recurrence coefficients exactly"),
        ("verify", "verify the order-8 and order-6 recurrences"),
    ):
        p = cmd(sub, name, help_)
        p.add_argument("--curve", type=_csv_list, help="c0,c1,c2,c3,c4")
        if name == "validate":
            continue
        p.add_argument("--d0", type=_points, help="'x1,y1;x2,y2'")
        p.add_argument("--point", type=_csv_list, help="step point 'x,y' (use --point=-1,1 for negatives)")
        p.add_argument("--start", type=int)
        p.add_argument("--stop", type=int)
        if name == "fit":
            p.add_argument("--rows", type=lambda s: [int(v) for v in _csv_list(s)])
        if name == "verify":
            p.add_argument("--alpha", type=_csv_list, help="coefficients to verify (default: fitted)")

    g = groups.add_parser("schur", help="symbolic identities in the cusp limit")
    sub = g.add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = cmd(sub, "verify", "run the symbolic checks")
    p.add_argument("--all", action="store_true", default=None, help="list every identity instead of group summaries")
    p.add_argument("--cap", type=int)

    g = groups.add_parser("hh", help="Henon-Heiles Backlund map")
    sub = g.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, help_ in (("simulate", "iterate the map in double precision"), ("crosscheck", "exact comparison with Cantor arithmetic")):
        p = cmd(sub, name, help_)
        p.add_argument("--a")
        p.add_argument("--c")
        p.add_argument("--m")
        p.add_argument("--state", type=_csv_list, help="q1,q2,p1,p2")
        p.add_argument("--lambda", dest="lambda_")
        p.add_argument("--steps", type=int)
        p.add_argument("--mu-sign", dest="mu_sign", type=int, choices=[1, -1])

    g = groups.add_parser("paper", help="reference reproduction")
    sub = g.add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = cmd(sub, "reproduce", "run every reference check and print a table")
    p.add_argument("--only", type=lambda s: [int(v) for v in _csv_list(s)])
    p.add_argument("--timings", action="store_true", default=None)
    return top


_NOT_PAYLOAD = {"group", "command", "digits", "fmt", "seed", "input", "output"}


def _number_literal(v: str):
    try:
        return int(v)
    except ValueError:
        pass
    if "/" in v:
        return v
    try:
        return float(v)
    except ValueError:
        return v


def _payload_from_args(ns: argparse.Namespace) -> dict:
    payload = {}
    if getattr(ns, "input", None):
        try:
            with open(ns.input) as fh:
                payload = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ValidationError(f"cannot read input: {exc}") from None
        if not isinstance(payload, dict):
            raise ValidationError("input JSON must be an object")
    for k, v in vars(ns).items():
        if k in _NOT_PAYLOAD or v is None:
            continue
        key = "lambda" if k == "lambda_" else k
        payload[key] = v
    # string flags for rationals and reals keep the JSON types the schema expects
    group = ns.group
    if group == "hh":
        for k in ("a", "c", "m", "lambda"):
            if isinstance(payload.get(k), str):
                payload[k] = _number_literal(payload[k])
        if "state" in payload:
            payload["state"] = [_number_literal(v) if isinstance(v, str) else v for v in payload["state"]]
    else:
        for k in ("alpha", "beta"):
            if isinstance(payload.get(k), str):
                payload[k] = _int_or_str(payload[k])
        for k in ("seeds", "curve", "point", "alpha"):
            if isinstance(payload.get(k), list):
                payload[k] = [_int_or_str(v) for v in payload[k]]
        if isinstance(payload.get("d0"), list):
            payload["d0"] = [[_int_or_str(v) for v in pt] for pt in payload["d0"]]
    return payload


def _int_or_str(v):
    if isinstance(v, str):
        try:
            return int(v)
        except ValueError:
            return v
    return v


def resolve(argv) -> tuple[C.RunSpec, str | None]:
    ns = build_parser().parse_args(argv)
    for k in ("digits", "fmt", "seed", "input", "output"):
        if not hasattr(ns, k):
            setattr(ns, k, None)
    payload = C.validate_payload(ns.group, _payload_from_args(ns))
    digits = ns.digits if ns.digits is not None else C.default_digits()
    if digits < 10 or digits > 2000:
        raise ValidationError("--digits must be between 10 and 2000", digits=digits)
    fmt = ns.fmt or ("text" if ns.group == "paper" else "json")
    return C.RunSpec(f"{ns.group} {ns.command}", payload, digits, fmt, ns.seed if ns.seed is not None else 0), ns.output


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _problem(p: dict) -> Somos4Problem:
    missing = [k for k in ("alpha", "beta", "seeds") if k not in p]
    if missing:
        raise ValidationError(f"missing {', '.join(missing)}")
    return Somos4Problem(to_rational(p["alpha"]), to_rational(p["beta"]), tuple(p["seeds"]), p.get("offset", 0))


def _window_rows(window):
    return [{"n": n, "value": rational_str(t)} for n, t in window.items()]


def _somos4_run(spec):
    p = spec.payload
    prob = _problem(p)
    start = p.get("start", prob.offset)
    stop = p.get("stop", start + p.get("n", 10))
    w = somos4_run(prob, start, stop)
    return {"terms": w.to_json()}, w.to_csv()


def _somos4_solve(spec):
    sol = S.solve(_problem(spec.payload), spec.digits)
    return sol.to_json(), None


def _somos4_closed_form(spec):
    p = spec.payload
    prob = _problem(p)
    sol = S.solve(prob, spec.digits)
    mp = sol.ctx.mp
    start, stop = p.get("start", prob.offset - 5), p.get("stop", prob.offset + 16)
    exact = somos4_run(prob, start, stop)
    rows = []
    for n, t in exact.items():
        val, logabs = S.closed_form(sol, n)
        ref = mp.mpf(t.numerator) / t.denominator
        rel = abs(val - ref) / abs(ref) if ref != 0 else abs(val)
        rows.append(
            {
                "n": n,
                "exact": rational_str(t),
                "closed_form": {"re": mpmath.nstr(val.real, 15), "im": mpmath.nstr(val.imag, 5)},
                "log_abs": mpmath.nstr(logabs, 15),
                "rel_err": mpmath.nstr(rel, 3),
            }
        )
    out = {"precision": spec.digits, "residuals": sol.to_json()["residuals"], "rows": rows}
    return out, _rows_csv(rows, ["n", "exact", "closed_form_re", "closed_form_im", "log_abs", "rel_err"], lambda r: [
        r["n"], r["exact"], r["closed_form"]["re"], r["closed_form"]["im"], r["log_abs"], r["rel_err"]])


def _somos4_laurent(spec):
    p = spec.payload
    rep = laurent_check(p.get("n_max", 8), p.get("cap", 8))
    return rep.to_json(), None


def _eds_seeds(p):
    return p.get("seeds", [1, -1, -1, -1])


def _eds_gen(spec):
    p = spec.payload
    w = eds_generate(*_eds_seeds(p), p.get("start", 0), p.get("stop", 31))
    return {"terms": w.to_json()}, w.to_csv()


def _eds_check(spec):
    p = spec.payload
    top = p.get("through", 30)
    hm = p.get("hankel_max", 15)
    lo = -max(top, 2 * hm)
    w = eds_generate(*_eds_seeds(p), lo, max(top, 2 * hm) + 1)
    pairs = [(m, n) for n in range(3, hm + 1) for m in range(2, n)]
    reports = [antisymmetry_check(w.slice(-top, top + 1)), divisibility_check(w.slice(1, top + 1)), hankel_check(w, pairs)]
    out = {"pass": all(r.passed for r in reports), "checks": [r.to_json() for r in reports]}
    return out, None


def _curve(p):
    if "curve" not in p:
        raise ValidationError("missing curve")
    return G.curve_validate(*(to_rational(c) for c in p["curve"]))


def _g2_inputs(p):
    curve = _curve(p)
    for k in ("d0", "point"):
        if k not in p:
            raise ValidationError(f"missing {k}")
    d0 = p["d0"]
    if isinstance(d0, dict):
        D0 = G.check_divisor(curve, G.MumfordDivisor(UPoly(d0["U"]), UPoly(d0["V"])))
    elif len(d0) == 1:
        D0 = G.point_divisor(G.curve_point(curve, *d0[0]))
    else:
        D0 = G.two_point_divisor(curve, G.curve_point(curve, *d0[0]), G.curve_point(curve, *d0[1]))
    P = G.curve_point(curve, *p["point"])
    return curve, D0, P


def _g2_validate(spec):
    curve = _curve(spec.payload)
    return {"curve": curve.to_json(), "f": curve.f.to_str(), "squarefree": True}, None


def _g2_seq(spec):
    p = spec.payload
    curve, D0, P = _g2_inputs(p)
    start, stop = p.get("start", -10), p.get("stop", 11)
    divs = G.divisor_sequence(curve, D0, P, start, stop)
    bs = G.bolza_values(divs, P.x)
    rows = [
        {"n": n, "U": [rational_str(c) for c in D.U.coeffs], "V": [rational_str(c) for c in D.V.coeffs],
         "f": None if bs.window[n] is None else rational_str(bs.window[n])}
        for n, D in divs.items()
    ]
    out = {"lambda": rational_str(P.x), "theta_crossings": bs.gaps, "rows": rows}
    csv_text = _rows_csv(rows, ["n", "U", "V", "f"], lambda r: [r["n"], " ".join(r["U"]), " ".join(r["V"]), r["f"] or ""])
    return out, csv_text


def _g2_tau(p):
    curve, D0, P = _g2_inputs(p)
    start, stop = p.get("start", -20), p.get("stop", 21)
    bs = G.bolza_seq(curve, D0, P, start, stop)
    runs = bs.gap_free_runs()
    if not runs:
        raise ValidationError("no gap-free Bolza values in the window")
    a, b = max(runs, key=lambda r: r[1] - r[0])
    f = bs.window.slice(a, b)
    return bs, f, G.tau_from_f(f)


def _g2_fit(spec):
    p = spec.payload
    bs, f, tau = _g2_tau(p)
    alpha = G.fit_somos8(tau, p.get("rows"))
    return {"gaps": bs.gaps, "fit_window": [f.start, f.stop], "alpha": [rational_str(a) for a in alpha]}, None


def _g2_verify(spec):
    p = spec.payload
    bs, f, tau = _g2_tau(p)
    alpha = tuple(to_rational(a) for a in p["alpha"]) if "alpha" in p else G.fit_somos8(tau)
    r8, r6 = G.verify_somos8(tau, alpha), G.verify_sixth_order(f, alpha)
    out = {
        "alpha": [rational_str(a) for a in alpha],
        "gaps": bs.gaps,
        "pass": r8.passed and r6.passed,
        "somos8": _summary(r8),
        "sixth_order": _summary(r6),
    }
    return out, None


def _summary(rep):
    return {
        "pass": rep.passed,
        "checked": len(rep.entries),
        "nonzero": [e.indices[0] for e in rep.failures()],
        "range": [rep.entries[0].indices[0], rep.entries[-1].indices[0]] if rep.entries else None,
    }


def _schur_verify(spec):
    p = spec.payload
    checks = schur.verify_all(p.get("cap", schur.DEFAULT_CAP))
    ok = all(c.passed for c in checks)
    if p.get("all"):
        return {"pass": ok, "identities": [c.to_json() for c in checks]}, None
    groups: dict[str, dict] = {}
    for c in checks:
        g = groups.setdefault(c.identity, {"identity": c.identity, "count": 0, "pass": True, "residual": "0"})
        g["count"] += 1
        if not c.passed:
            g["pass"] = False
            g["residual"] = c.residual
    return {"pass": ok, "identities": list(groups.values())}, None


def _hh_params(p, exact: bool):
    conv = to_rational if exact else float
    return H.HHParams(*(conv(p.get(k, 0)) for k in ("a", "c", "m")))


def _hh_simulate(spec):
    p = spec.payload
    if "state" not in p or "lambda" not in p:
        raise ValidationError("missing state or lambda")
    params = _hh_params(p, exact=False)
    st = H.HHState(*(float(v) if not isinstance(v, str) else float(Fraction(v)) for v in p["state"]))
    lam = float(Fraction(p["lambda"])) if isinstance(p["lambda"], str) else float(p["lambda"])
    recs = H.orbit(st, params, lam, p.get("steps", 10), p.get("mu_sign", 1))
    out = {"precision": "double", "curve": {k: float(v) for k, v in H.spectral_curve(st, params).items()}, "steps": recs}
    cols = ["step", "q1", "q2", "p1", "p2", "h1", "h2", "lax_residual"]
    return out, _rows_csv(recs, cols, lambda r: [r["step"], *r["state"].values(), r["h1"], r["h2"], r.get("lax_residual", "")])


def _hh_crosscheck(spec):
    p = spec.payload
    if "state" not in p or "lambda" not in p:
        raise ValidationError("missing state or lambda")
    params = _hh_params(p, exact=True)
    q1, q2, p1, p2 = (to_rational(v) for v in p["state"])
    st = H.ReducedState(q1 * q1, q1 * p1, q2, p2)
    rep = H.cross_check_jacobian(st, params, to_rational(p["lambda"]), p.get("mu_sign", 1), p.get("steps", 5))
    return rep.to_json(), None


def _paper_reproduce(spec):
    p = spec.payload
    results = R.run_all(set(p["only"]) if "only" in p else None)
    timings = bool(p.get("timings"))
    out = {"pass": all(r.passed for r in results), "criteria": [r.to_json(timings) for r in results]}
    lines = []
    for r in results:
        lines.append(r.summary() if timings else r.summary().replace(f" ({r.elapsed:.2f}s)", ""))
        for row in r.rows:
            mark = "ok " if row.passed else "BAD"
            lines.append(f"    {mark} {row.quantity:<42} ref {row.reference:<28} got {row.computed:<28} tol {row.tolerance}")
    return out, None, "\n".join(lines) + "\n"


DISPATCH = {
    "somos4 run": _somos4_run,
    "somos4 solve": _somos4_solve,
    "somos4 closed-form": _somos4_closed_form,
    "somos4 laurent": _somos4_laurent,
    "eds gen": _eds_gen,
    "eds check": _eds_check,
    "g2 validate": _g2_validate,
    "g2 seq": _g2_seq,
    "g2 fit": _g2_fit,
    "g2 verify": _g2_verify,
    "schur verify": _schur_verify,
    "hh simulate": _hh_simulate,
    "hh crosscheck": _hh_crosscheck,
    "paper reproduce": _paper_reproduce,
}


def _rows_csv(rows, header, fn) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow(fn(r))
    return buf.getvalue()


def _failed(result: dict) -> bool:
    return result.get("pass") is False


def dispatch(spec: C.RunSpec) -> tuple[int, str]:
    """Run a resolved spec; returns (exit code, text for stdout)."""
    outcome = DISPATCH[spec.command](spec)
    result, csv_text = outcome[0], outcome[1]
    text_form = outcome[2] if len(outcome) > 2 else None
    code = EXIT_ACCEPTANCE if _failed(result) else EXIT_OK
    if spec.fmt == "csv":
        if csv_text is None:
            raise ValidationError(f"'{spec.command}' has no CSV form; use --format json")
        return code, f"# config: {json.dumps(spec.to_json(), sort_keys=True)}\n" + csv_text
    if spec.fmt == "text" and text_form is not None:
        return code, text_form
    doc = {"config": spec.to_json(), "result": result}
    return code, json.dumps(doc, indent=2) + "\n"


def main(argv=None) -> int:
    # exact integers in the genus-2 and symbolic outputs run to thousands of digits
    sys.set_int_max_str_digits(0)
    out_path = None
    try:
        spec, out_path = resolve(argv)
        code, text = dispatch(spec)
    except SomosSigmaError as exc:
        print(json.dumps(exc.to_json()), file=sys.stderr)
        return EXIT_INVALID if isinstance(exc, ValidationError) else EXIT_COMPUTE
    except (ArithmeticError, ValueError) as exc:
        print(json.dumps({"error": "computation", "message": f"{type(exc).__name__}: {exc}"}), file=sys.stderr)
        return EXIT_COMPUTE
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
