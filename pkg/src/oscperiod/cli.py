"""Command-line interface.

Exit codes: 0 success, 1 bad arguments, 2 numerical failure, 3 failed
verification.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

from . import __version__, checks, ode, period, series, singularity
from .errors import NumericalFailure, OscPeriodError

EXIT_OK, EXIT_ARGS, EXIT_NUMERIC, EXIT_VERIFY = 0, 1, 2, 3

DLOG_NOTE = (
    "d-log analysis uses T'(rho)/T(rho); T^-1 dT/dA = 2 sqrt(rho) T'/T has the same poles"
)
IPT_NOTE = "rows are (period, amplitude); A_N = sqrt(rho_N), left empty and flagged when rho_N < 0"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_ARGS)


def fmt(x) -> str:
    """Fixed float formatting: 17 significant digits, lowercase exponent."""
    if x is None:
        return ""
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def _int_list(text: str) -> list[int]:
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not values or values != sorted(values) or len(set(values)) != len(values):
        raise argparse.ArgumentTypeError("orders must be nonempty and strictly ascending")
    return values


def _positive(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not (v > 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError(f"must be positive and finite: {text!r}")
    return v


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def _json_value(v):
    if isinstance(v, float):
        if not math.isfinite(v):
            return None
        return float(fmt(v))
    if isinstance(v, dict):
        return {str(k): _json_value(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_json_value(x) for x in v]
    return v


def _json_text(obj) -> str:
    return json.dumps(_json_value(obj), indent=2, ensure_ascii=False) + "\n"


def _emit(args, text: str):
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _table(args, header, rows, meta: dict):
    if args.format == "json":
        body = dict(meta)
        body.setdefault("tolerance", 0.0)
        body.setdefault("tool_version", __version__)
        body["columns"] = list(header)
        body["rows"] = [dict(zip(header, r)) for r in rows]
        _emit(args, _json_text(body))
    else:
        _emit(args, _csv_text(header, rows))


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _approx_result(A, value, method, tol):
    ref = period.period_quad(A, tol=tol).period
    return period.PeriodResult.make(A, value, abs(value - ref), method)


def cmd_period(args) -> int:
    A, tol, method = args.amplitude, args.tol, args.method
    if method == "quad":
        res = period.period_quad(A, tol=tol)
    elif method == "quad-u":
        res = period.period_integral_u(A, tol=tol)
    elif method == "ode":
        tol = tol if args.tol_given else ode.DEFAULT_TOL
        res = ode.ode_period(A, tol=tol)
    elif method.startswith("series"):
        _, _, n = method.partition(":")
        try:
            N = int(n) if n else 10
        except ValueError:
            raise UsageError(f"bad series order in {method!r}")
        if N < 0:
            raise UsageError("series order must be non-negative")
        S = series.period_series(N)
        value = 2 * math.pi * series.evaluate_partial_sum(S, A * A, N)
        if not value > 0:
            raise NumericalFailure(f"series partial sum of order {N} is non-positive at A={A}")
        res = _approx_result(A, value, "series", tol)
    elif method == "hb":
        res = _approx_result(A, period.hb_period(A), "hb", tol)
    elif method.startswith("asymptotic"):
        _, _, regime = method.partition(":")
        regime = regime or ("small" if A < 1 else "large")
        if regime not in ("small", "large"):
            raise UsageError(f"asymptotic regime must be small or large, got {regime!r}")
        value = period.asymptotic_period(A, regime)
        if not value > 0:
            raise NumericalFailure(f"small-A asymptote is non-positive at A={A}")
        res = _approx_result(A, value, f"asymptotic-{regime}", tol)
    else:
        raise UsageError(f"unknown method {method!r}")
    record = res.as_dict()
    record["tolerance"] = tol
    record["tool_version"] = __version__
    if args.format == "json":
        _emit(args, _json_text(record))
    else:
        header = ["amplitude", "rho", "period", "error_estimate", "method", "tolerance"]
        _emit(args, _csv_text(header, [[record[h] for h in header]]))
    return EXIT_OK


def cmd_series(args) -> int:
    N = args.order if args.order is not None else 10
    if N < 0:
        raise UsageError("order must be non-negative")
    if args.what == "csq":
        S = series.inv_sqrt_series(series.taylor_F(N), N)
        rows = [(j, c.numerator, c.denominator, 1, 0) for j, c in enumerate(S)]
        quantity = "c_j, coefficients of 1/sqrt(F(z)) in z"
    elif args.what == "period":
        S = series.period_series(N)
        rows = [(j, c.numerator, c.denominator, 2, 1) for j, c in enumerate(S)]
        quantity = "T/(2 pi) in rho; true T_j = prefactor * value * pi^pi_power"
    else:
        if N < 1:
            raise UsageError("inverted series needs order >= 1")
        S = series.inverted_period_series(N)
        rows = [(k, c.numerator, c.denominator, 1, -k) for k, c in enumerate(S)]
        quantity = "q_k in tau = DeltaT/pi; coefficient of DeltaT^k is q_k * pi^pi_power"
    header = ["j", "numerator", "denominator", "prefactor", "pi_power"]
    meta = {"what": args.what, "order": N, "quantity": quantity, "method": "exact-series",
            "tolerance": 0.0}
    if args.format == "json":
        rows = [(j, str(n), str(d), f, p) for j, n, d, f, p in rows]
    _table(args, header, rows, meta)
    return EXIT_OK


def cmd_pade(args) -> int:
    N = args.max_order
    if N < 2:
        raise UsageError("--max-order must be at least 2")
    scan = singularity.dlog_singularity_scan(N) if args.dlog else singularity.singularity_scan(N)
    if not scan.estimates:
        raise NumericalFailure("every Pade order was defective")
    header = ["N", "re", "im", "residual"] + (["exponent"] if args.dlog else [])
    rows = []
    for e in scan:
        row = [e.pade_order[1], e.location.real, e.location.imag, e.residual]
        if args.dlog:
            row.append(e.exponent)
        rows.append(row)
    meta = {"method": "dlog-pade" if args.dlog else "pade", "max_order": N,
            "skipped_orders": scan.skipped, "variable": "rho",
            "tolerance": singularity.CONJUGATE_TOL}
    if args.dlog:
        meta["note"] = DLOG_NOTE
    _table(args, header, rows, meta)
    return EXIT_OK


def cmd_radius(args) -> int:
    n = (args.order if args.order is not None else 40) - 1
    if n < 5:
        raise UsageError("need at least 6 coefficients")
    if args.what == "csq":
        coeffs = singularity.c_coefficients(n).coeffs
    elif args.what == "period":
        coeffs = series.period_series(n).coeffs
    else:
        raise UsageError("radius supports --what csq or period")
    est = singularity.radius_estimate(coeffs, args.estimator)
    if args.format == "json":
        body = {
            "method": f"radius-{est.estimator}",
            "tolerance": 0.0,
            "what": args.what,
            "coefficients": n + 1,
            "extrapolated": est.extrapolated,
            "tail_median": est.tail_median,
            "flagged": list(est.flagged),
            "per_order": [{"j": j, "estimate": v} for j, v in est.per_order],
            "tool_version": __version__,
        }
        if args.what == "period":
            body["R_A"] = math.sqrt(est.extrapolated)
        _emit(args, _json_text(body))
    else:
        rows = [[str(j), v] for j, v in est.per_order]
        rows.append(["extrapolated", est.extrapolated])
        rows.append(["tail_median", est.tail_median])
        _emit(args, _csv_text(["j", "estimate"], rows))
    return EXIT_OK


def cmd_figure_pt(args) -> int:
    orders = args.orders or [2, 4, 6, 8]
    a_max = args.amax if args.amax is not None else 3.5
    step = args.step if args.step is not None else 0.05
    n_steps = int(math.floor(a_max / step + 1e-9))
    if n_steps < 1:
        raise UsageError("grid must satisfy 0 < step <= amax")
    S = series.period_series(max(orders))
    rows = []
    for i in range(1, n_steps + 1):
        A = round(i * step, 12)
        exact = period.period_quad(A, tol=args.tol).period
        rows.append([A, exact] + [2 * math.pi * series.evaluate_partial_sum(S, A * A, N) for N in orders])
    header = ["A", "T_exact"] + [f"T_N{N}" for N in orders]
    meta = {"method": "figure-pt", "tolerance": args.tol, "orders": orders}
    _table(args, header, rows, meta)
    return EXIT_OK


def cmd_figure_ipt(args) -> int:
    orders = args.orders or [1, 2, 3, 4, 5, 6]
    a_max = args.amax if args.amax is not None else 3.0
    rows = []
    for T, A_exact, rhos in checks.ipt_rows(tuple(orders), points=args.points, a_max=a_max):
        row = [T, A_exact]
        for r in rhos:
            row += [r, math.sqrt(r) if r >= 0 else None, "" if r >= 0 else "negative"]
        rows.append(row)
    header = ["T", "A_exact"]
    for N in orders:
        header += [f"rho_N{N}", f"A_N{N}", f"flag_N{N}"]
    meta = {"method": "figure-ipt", "tolerance": period.DEFAULT_TOL, "orders": orders,
            "note": IPT_NOTE}
    _table(args, header, rows, meta)
    return EXIT_OK


def cmd_verify(args) -> int:
    results = checks.run_all()
    if args.json or args.format == "json":
        records = []
        for r in results:
            rec = r.as_dict()
            rec.update(method="verify", tolerance=None, tool_version=__version__)
            records.append(rec)
        _emit(args, _json_text(records))
    else:
        lines = [r.line() for r in results]
        passed = sum(r.passed for r in results)
        lines.append(f"{passed}/{len(results)} checks passed")
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default=None)
    common.add_argument("-o", "--output", help="write to this file instead of stdout")
    common.add_argument("--tol", type=_positive, default=None)

    p = _Parser(prog="oscperiod", description="Period of x'' + (1 + x'^2) x = 0 and its series.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("period", parents=[common], help="period at one amplitude")
    sp.add_argument("--amplitude", type=_positive, required=True)
    sp.add_argument("--method", default="quad",
                    help="quad | quad-u | ode | series:N | hb | asymptotic[:small|large]")
    sp.set_defaults(func=cmd_period)

    ss = sub.add_parser("series", parents=[common], help="exact series coefficients")
    ss.add_argument("--what", choices=("csq", "period", "inverted"), default="period")
    ss.add_argument("--order", type=int)
    ss.set_defaults(func=cmd_series, format_default="csv")

    spd = sub.add_parser("pade", parents=[common], help="Pade singularity scan")
    spd.add_argument("--max-order", type=int, default=10)
    spd.add_argument("--dlog", action="store_true")
    spd.set_defaults(func=cmd_pade, format_default="csv")

    sr = sub.add_parser("radius", parents=[common], help="radius of convergence")
    sr.add_argument("--what", choices=("csq", "period"), default="period")
    sr.add_argument("--order", type=int, help="number of coefficients (default 40)")
    sr.add_argument("--estimator", choices=singularity.ESTIMATORS, default="two-step")
    sr.set_defaults(func=cmd_radius, format_default="csv")

    sf = sub.add_parser("figure", help="data behind the partial-sum figures")
    fsub = sf.add_subparsers(dest="figure", required=True, parser_class=_Parser)
    fpt = fsub.add_parser("pt", parents=[common], help="small-amplitude partial sums vs A")
    fpt.add_argument("--orders", "--order", type=_int_list, dest="orders")
    fpt.add_argument("--amax", type=_positive)
    fpt.add_argument("--step", type=_positive)
    fpt.set_defaults(func=cmd_figure_pt, format_default="csv")
    fipt = fsub.add_parser("ipt", parents=[common], help="inverted-series partial sums vs T")
    fipt.add_argument("--orders", "--order", type=_int_list, dest="orders")
    fipt.add_argument("--amax", type=_positive, help="lowest period on the grid is T(amax)")
    fipt.add_argument("--points", type=int, default=50)
    fipt.set_defaults(func=cmd_figure_ipt, format_default="csv")

    sv = sub.add_parser("verify", parents=[common], help="run the acceptance checks")
    sv.add_argument("--json", action="store_true")
    sv.set_defaults(func=cmd_verify, format_default="text")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_ARGS
    if args.format is None:
        args.format = getattr(args, "format_default", "json")
    args.tol_given = args.tol is not None
    if args.tol is None:
        args.tol = period.DEFAULT_TOL
    if getattr(args, "points", 2) < 2:
        print("oscperiod: error: --points must be at least 2", file=sys.stderr)
        return EXIT_ARGS
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        if isinstance(exc, NumericalFailure):
            print(f"oscperiod: numerical failure: {exc}", file=sys.stderr)
            return EXIT_NUMERIC
        print(f"oscperiod: error: {exc}", file=sys.stderr)
        return EXIT_ARGS
    except (NumericalFailure, OscPeriodError, ArithmeticError) as exc:
        print(f"oscperiod: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
