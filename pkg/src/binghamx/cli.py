"""Command-line interface.

Subcommands
-----------
psi       truncated normalizing constant (plus tail bound with a regime)
grad      materialized truncated gradient (plus tail bound with a regime)
cov       covariance product with its remainder-order descriptor
zonal     one zonal polynomial value and its gradient coefficients
bounds    tail-bound tables over a (d, m) grid
choose-m  smallest order meeting a tolerance
verify    Monte-Carlo cross-check of the series values

Exit codes: 0 success, 1 inadmissible dimension / regime violation /
failed verification (the computed threshold or margin is printed),
2 usage or input errors with a one-line diagnosis.

Output formats: ``text`` (key = value lines, matrices in the ingestion
text format, 17 significant digits), ``md`` (tables, 5 decimals rounded
half-up), ``csv`` (comma-separated, 17 significant digits).  Output is
byte-stable across runs for identical inputs.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

import numpy as np

from . import bounds as bounds_mod
from . import oracle, series, symmat, zonal
from .bounds import GrowthRegime
from .errors import (
    BinghamxError,
    InadmissibleDimensionError,
    OrderSelectionError,
    RegimeViolationError,
)

USAGE_ERROR = 2
ADMISSIBILITY_ERROR = 1


def _fmt(x, fmt: str) -> str:
    if isinstance(x, float):
        return bounds_mod.round_half_up(x) if fmt == "md" else f"{x:.17g}"
    return str(x)


def _emit_record(rows: list[tuple[str, object]], fmt: str, out) -> None:
    if fmt == "csv":
        out.write(",".join(key for key, _ in rows) + "\n")
        out.write(",".join(_fmt(v, fmt) for _, v in rows) + "\n")
    elif fmt == "md":
        out.write("| quantity | value |\n|---|---|\n")
        for key, v in rows:
            out.write(f"| {key} | {_fmt(v, fmt)} |\n")
    else:
        for key, v in rows:
            out.write(f"{key} = {_fmt(v, fmt)}\n")


def _emit_matrix(a: np.ndarray, fmt: str, out) -> None:
    if fmt == "csv":
        for row in a:
            out.write(",".join(f"{x:.17g}" for x in row) + "\n")
    elif fmt == "md":
        d = a.shape[0]
        out.write("|" + "---|" * d + "\n")
        for row in a:
            out.write("| " + " | ".join(bounds_mod.round_half_up(x) for x in row) + " |\n")
    else:
        out.write(symmat.format_matrix(a))


def _load_matrix(path: str) -> np.ndarray:
    with open(path, "r", encoding="utf-8") as fh:
        return symmat.load_matrix(fh.read())


def _regime_from(args) -> GrowthRegime | None:
    has_scale = args.gamma0 is not None
    has_exp = args.r is not None
    if has_scale != has_exp:
        raise argparse.ArgumentTypeError("--gamma0 and --r must be given together")
    if not has_scale:
        return None
    return GrowthRegime(scale=args.gamma0, exponent=args.r)


def _require_regime_fit(sigma: np.ndarray, regime: GrowthRegime, d: int) -> None:
    norm = symmat.frobenius_norm(sigma)
    cap = regime.cap(d)
    if norm > cap:
        raise RegimeViolationError(
            f"||Sigma||_F = {norm:.17g} exceeds the regime cap "
            f"{cap:.17g} = {regime.scale:g} * d^({regime.exponent:g}/2)",
            norm=norm,
            cap=cap,
        )


def _int_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _add_regime_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--gamma0", type=float, default=None,
                   help="growth-regime scale (requires --r)")
    p.add_argument("--r", type=float, default=None,
                   help="growth-regime exponent in [0, 1) (requires --gamma0)")


def _add_format_flag(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("text", "md", "csv"), default="text",
                   help="output format (default text)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="binghamx",
        description="Truncated expansions, with certified tail bounds, for the "
                    "Bingham normalizing constant, its gradient, and the "
                    "covariance on the unit sphere.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("psi", help="truncated normalizing constant")
    p.add_argument("--matrix", required=True, help="matrix file")
    p.add_argument("--m", type=int, required=True, help="number of series terms, 1..40")
    _add_regime_flags(p)
    _add_format_flag(p)

    p = sub.add_parser("grad", help="materialized truncated gradient")
    p.add_argument("--matrix", required=True, help="matrix file")
    p.add_argument("--m", type=int, required=True, help="number of series terms, 2..40")
    _add_regime_flags(p)
    _add_format_flag(p)

    p = sub.add_parser("cov", help="covariance product")
    p.add_argument("--matrix", required=True, help="matrix file")
    p.add_argument("--l", type=int, required=True, help="inverse truncation order, 2..40")
    p.add_argument("--m", type=int, required=True, help="gradient truncation order, 2..40")
    _add_regime_flags(p)
    _add_format_flag(p)

    p = sub.add_parser("zonal", help="zonal polynomial value and gradient")
    p.add_argument("--matrix", required=True, help="matrix file")
    p.add_argument("--k", type=int, required=True, help="zonal order, 0..40")
    _add_format_flag(p)

    p = sub.add_parser("bounds", help="tail-bound tables over a (d, m) grid")
    p.add_argument("--gamma0", type=float, required=True, help="growth-regime scale")
    p.add_argument("--r", type=float, required=True, help="growth-regime exponent in [0, 1)")
    p.add_argument("--d", type=_int_list, required=True,
                   help="comma-separated dimensions, each >= 2")
    p.add_argument("--m", type=_int_list, required=True,
                   help="comma-separated orders, each 2..40")
    p.add_argument("--out", default=None, metavar="PREFIX",
                   help="write PREFIX_psi.csv and PREFIX_grad.csv instead of stdout")
    _add_format_flag(p)

    p = sub.add_parser("choose-m", help="smallest order meeting a tolerance")
    p.add_argument("--gamma0", type=float, required=True, help="growth-regime scale")
    p.add_argument("--r", type=float, required=True, help="growth-regime exponent in [0, 1)")
    p.add_argument("--d", type=int, required=True, help="dimension, >= 2")
    p.add_argument("--eps", type=float, required=True, help="target bound")
    _add_format_flag(p)

    p = sub.add_parser("verify", help="Monte-Carlo cross-check of the series values")
    p.add_argument("--matrix", required=True, help="matrix file")
    p.add_argument("--samples", type=int, required=True, help="sample count, >= 1000")
    p.add_argument("--seed", type=int, required=True, help="nonnegative RNG seed")
    p.add_argument("--l", type=int, default=3, help="inverse truncation order (default 3)")
    p.add_argument("--m", type=int, default=12, help="series truncation order (default 12)")
    _add_format_flag(p)

    return parser


def _cmd_psi(args, out) -> int:
    sigma = _load_matrix(args.matrix)
    d = sigma.shape[0]
    regime = _regime_from(args)
    ps = symmat.power_sums(sigma, max(args.m - 1, 1))
    value = series.norm_const_truncated(ps, args.m, d)
    rows: list[tuple[str, object]] = [("psi", value), ("m", args.m), ("d", d)]
    if regime is not None:
        _require_regime_fit(sigma, regime, d)
        bound = bounds_mod.norm_const_tail_bound(args.m, float(d), regime)
        rows += [("bound", bound), ("gamma0", regime.scale), ("r", regime.exponent)]
    _emit_record(rows, args.format, out)
    return 0


def _cmd_grad(args, out) -> int:
    sigma = _load_matrix(args.matrix)
    d = sigma.shape[0]
    regime = _regime_from(args)
    ps = symmat.power_sums(sigma, max(args.m - 1, 1))
    grad = series.norm_const_gradient_truncated(ps, args.m, d)
    rows: list[tuple[str, object]] = [("m", args.m), ("d", d)]
    if regime is not None:
        _require_regime_fit(sigma, regime, d)
        bound = bounds_mod.gradient_tail_bound(args.m, float(d), regime)
        rows += [("bound", bound), ("gamma0", regime.scale), ("r", regime.exponent)]
    _emit_record(rows, args.format, out)
    _emit_matrix(symmat.materialize(grad, sigma), args.format, out)
    return 0


def _cmd_cov(args, out) -> int:
    sigma = _load_matrix(args.matrix)
    d = sigma.shape[0]
    regime = _regime_from(args)
    k_max = max(args.l, args.m) - 1
    ps = symmat.power_sums(sigma, max(k_max, 1))
    cov = series.covariance_expansion(ps, sigma, args.l, args.m, d)
    rows: list[tuple[str, object]] = [
        ("l", args.l),
        ("m", args.m),
        ("d", d),
        ("alpha", series.alpha_descriptor(args.m, regime)),
    ]
    if regime is not None:
        _require_regime_fit(sigma, regime, d)
        derived = series.covariance_derived_bound(ps, sigma, args.l, args.m, d, regime)
        rows += [
            ("derived_bound", derived),
            ("gamma0", regime.scale),
            ("r", regime.exponent),
        ]
    _emit_record(rows, args.format, out)
    _emit_matrix(cov, args.format, out)
    return 0


def _cmd_zonal(args, out) -> int:
    sigma = _load_matrix(args.matrix)
    d = sigma.shape[0]
    ps = symmat.power_sums(sigma, max(args.k, 1))
    value = zonal.zonal_value(args.k, ps)
    rows: list[tuple[str, object]] = [("k", args.k), ("d", d), ("zonal", value)]
    if args.k >= 1:
        coeffs = zonal.zonal_gradient(args.k, ps).coeffs
        rows += [(f"grad_coeff_{l}", float(c)) for l, c in enumerate(coeffs)]
    _emit_record(rows, args.format, out)
    return 0


def _cmd_bounds(args, out) -> int:
    regime = GrowthRegime(scale=args.gamma0, exponent=args.r)
    for d in args.d:
        if d < 2:
            raise argparse.ArgumentTypeError(f"dimensions must be >= 2, got {d}")
    table = bounds_mod.tail_bound_table(regime, [float(d) for d in args.d], args.m)
    if args.out is not None:
        norm_path = f"{args.out}_psi.csv"
        grad_path = f"{args.out}_grad.csv"
        bounds_mod.write_csv_tables(table, norm_path, grad_path)
        out.write(f"{norm_path}\n{grad_path}\n")
        return 0
    if args.format == "csv":
        out.write("# psi\n")
        out.write(bounds_mod.table_to_csv(table, "norm_const"))
        out.write("# grad\n")
        out.write(bounds_mod.table_to_csv(table, "gradient"))
    else:
        out.write(bounds_mod.table_to_markdown(table))
    return 0


def _cmd_choose_m(args, out) -> int:
    regime = GrowthRegime(scale=args.gamma0, exponent=args.r)
    if args.d < 2:
        raise argparse.ArgumentTypeError(f"dimension must be >= 2, got {args.d}")
    m = bounds_mod.select_order(regime, float(args.d), args.eps)
    rows = [
        ("m", m),
        ("psi_bound", bounds_mod.norm_const_tail_bound(m, float(args.d), regime)),
        ("grad_bound", bounds_mod.gradient_tail_bound(m, float(args.d), regime)),
        ("eps", args.eps),
        ("d", args.d),
    ]
    _emit_record(rows, args.format, out)
    return 0


def _cmd_verify(args, out) -> int:
    sigma = _load_matrix(args.matrix)
    d = sigma.shape[0]
    if args.samples < 1000:
        raise argparse.ArgumentTypeError(
            f"--samples must be >= 1000, got {args.samples}"
        )
    if args.seed < 0:
        raise argparse.ArgumentTypeError(f"--seed must be >= 0, got {args.seed}")
    k_max = max(args.l, args.m) - 1
    ps = symmat.power_sums(sigma, max(k_max, 1))

    checks: list[tuple[str, float, float, object, float, bool]] = []

    psi_series = series.norm_const_truncated(ps, args.m, d)
    psi_mc = oracle.mc_norm_const(sigma, args.samples, args.seed)
    # When x' Sigma x is constant on the sphere (e.g. Sigma = theta * I) the
    # sampling variance is exactly zero, so the statistical tolerance alone
    # would reject the series over pure float roundoff.  Keep an absolute
    # floor of a few dozen ulps so a float-converged series can still pass.
    float_noise = 64.0 * np.finfo(float).eps * max(1.0, abs(psi_series))
    tol = 4.0 * psi_mc.std_error + float_noise
    checks.append(
        ("psi", psi_series, psi_mc.value, psi_mc.std_error, tol,
         abs(psi_mc.value - psi_series) <= tol)
    )

    cov_series = series.covariance_expansion(ps, sigma, args.l, args.m, d)
    cov_mc = oracle.mc_covariance(sigma, args.samples, args.seed)
    gap = np.abs(cov_mc.value - cov_series) - 4.0 * cov_mc.std_error
    worst = np.unravel_index(int(np.argmax(gap)), gap.shape)
    i, j = int(worst[0]), int(worst[1])
    checks.append(
        (f"cov[{i},{j}]", float(cov_series[i, j]), float(cov_mc.value[i, j]),
         float(cov_mc.std_error[i, j]), 4.0 * float(cov_mc.std_error[i, j]),
         bool(gap[i, j] <= 0.0))
    )

    trace = float(np.trace(cov_mc.value))
    checks.append(("cov_trace", 1.0, trace, 0.0, 1e-12, abs(trace - 1.0) <= 1e-12))

    header = ("check", "series", "estimate", "std_error", "bound", "status")
    if args.format == "csv":
        out.write(",".join(header) + "\n")
        for name, s, e, se, b, ok in checks:
            out.write(
                f"{name},{s:.17g},{e:.17g},{se:.17g},{b:.17g},"
                f"{'pass' if ok else 'FAIL'}\n"
            )
    elif args.format == "md":
        out.write("| " + " | ".join(header) + " |\n")
        out.write("|---" * len(header) + "|\n")
        for name, s, e, se, b, ok in checks:
            cells = [name] + [bounds_mod.round_half_up(v) for v in (s, e, se, b)]
            cells.append("pass" if ok else "FAIL")
            out.write("| " + " | ".join(cells) + " |\n")
    else:
        out.write(f"{'check':<12} {'series':>24} {'estimate':>24} "
                  f"{'std_error':>12} {'bound':>12} status\n")
        for name, s, e, se, b, ok in checks:
            out.write(f"{name:<12} {s:>24.17g} {e:>24.17g} {se:>12.5g} "
                      f"{b:>12.5g} {'pass' if ok else 'FAIL'}\n")
    return 0 if all(ok for *_, ok in checks) else 1


_COMMANDS = {
    "psi": _cmd_psi,
    "grad": _cmd_grad,
    "cov": _cmd_cov,
    "zonal": _cmd_zonal,
    "bounds": _cmd_bounds,
    "choose-m": _cmd_choose_m,
    "verify": _cmd_verify,
}


def run(argv: Sequence[str] | None = None, out=None) -> int:
    """Parse arguments, dispatch, and map errors to exit codes."""
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args, out)
    except (InadmissibleDimensionError, RegimeViolationError, OrderSelectionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ADMISSIBILITY_ERROR
    except (argparse.ArgumentTypeError, BinghamxError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
