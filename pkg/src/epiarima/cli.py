"""Command-line interface: fit, auto, forecast, diagnose, evaluate, report.

Every run writes a machine-readable manifest (inputs, window, options,
package version, seed) sufficient to re-run bit-identically. Output is
deterministic for fixed inputs and seed. Exit codes: 0 success, 2 validation
error, 3 convergence/search failure, 4 data-integrity error.
"""

from __future__ import annotations

import argparse
import datetime as dt
import hashlib
import json
import sys
from importlib import metadata

import numpy as np

from . import report as report_mod
from .accuracy import accuracy_report, deviation_report
from .core import TimeSeries, acf, pacf
from .diagnostics import ARCH_LAG_SET, arch_lm, lag_schedule, ljung_box, whiteness_verdict
from .errors import (
    ConvergenceError,
    DataIntegrityError,
    EpiArimaError,
    SearchFailureError,
    ValidationError,
)
from .estimation import ArimaModel, ArimaOrder, fit
from .forecast import (
    final_size_estimate,
    fitted_values,
    forecast as run_forecast,
    near_zero_crossing,
)
from .ingest import (
    BUNDLED,
    DatasetWindow,
    bundled_actuals,
    bundled_series,
    cumulative_to_daily,
    load_csv,
    make_window,
)
from .selection import CandidateRow, SearchConfig, grid_search, stepwise_search

_EXIT_VALIDATION = 2
_EXIT_CONVERGENCE = 3
_EXIT_DATA = 4


def _package_version() -> str:
    try:
        return metadata.version("epiarima")
    except metadata.PackageNotFoundError:  # pragma: no cover - editable corner case
        return "unknown"


def _add_source_options(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("data source")
    group.add_argument("--country", choices=sorted(BUNDLED), help="use a bundled dataset")
    group.add_argument("--input", help="CSV file of a daily series")
    group.add_argument("--date-column", default="date")
    group.add_argument("--value-column", default="value")
    group.add_argument("--date-format", default="%Y-%m-%d")
    group.add_argument(
        "--cumulative",
        action="store_true",
        help="input holds cumulative totals; convert to daily new values",
    )
    group.add_argument("--start", type=dt.date.fromisoformat, help="window start (YYYY-MM-DD)")
    group.add_argument("--end", type=dt.date.fromisoformat, help="window end (YYYY-MM-DD)")
    group.add_argument("--label", default=None, help="label for reports")


def _add_model_options(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("model")
    group.add_argument("--order", type=ArimaOrder.parse, help="explicit order p,d,q")
    group.add_argument(
        "--grid", action="store_true", help="exhaustive order search instead of stepwise"
    )
    group.add_argument(
        "--orders",
        help="explicit semicolon-separated candidate list, e.g. '4,2,4;4,2,2'",
    )
    group.add_argument("--max-p", type=int, default=8)
    group.add_argument("--max-q", type=int, default=8)
    group.add_argument("--max-d", type=int, default=2)
    group.add_argument("--fixed-d", type=int, default=None)
    group.add_argument(
        "--constant",
        choices=["auto", "on", "off"],
        default="auto",
        help="mean term: auto includes it only at d=0",
    )


def _add_common_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=0, help="seed for all randomness")
    parser.add_argument("--output", help="write primary output to this file instead of stdout")
    parser.add_argument(
        "--manifest",
        default="epiarima_manifest.json",
        help="where to write the run manifest",
    )
    parser.add_argument("--no-manifest", action="store_true", help="skip the manifest")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="epiarima",
        description="Nonseasonal ARIMA forecasting of daily epidemic incidence",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    specs = {
        "fit": "fit one order and print the coefficient table",
        "auto": "search orders by AICc and print the ranked candidate table",
        "forecast": "h-step forecast fan as CSV, plus near-zero and final-size readings",
        "diagnose": "Ljung-Box and ARCH LM tables plus the residual whiteness verdict",
        "evaluate": "compare forecasts against actuals at day checkpoints",
        "report": "full machine-readable run report",
    }
    parsers = {}
    for name, help_text in specs.items():
        sp = sub.add_parser(name, help=help_text)
        _add_source_options(sp)
        _add_model_options(sp)
        _add_common_options(sp)
        parsers[name] = sp

    parsers["forecast"].add_argument("--horizon", type=int, default=30)
    parsers["forecast"].add_argument("--levels", default="80,95", help="e.g. '80,95'")
    parsers["forecast"].add_argument("--clamp-zero", action="store_true")
    parsers["forecast"].add_argument("--near-zero-threshold", type=float, default=1.0)

    parsers["diagnose"].add_argument(
        "--no-fitdf-adjust",
        action="store_true",
        help="keep full H degrees of freedom instead of subtracting p+q",
    )
    parsers["diagnose"].add_argument("--max-lag", type=int, default=20)
    parsers["diagnose"].add_argument("--correlogram-out", help="residual ACF/PACF CSV path")

    parsers["evaluate"].add_argument("--actuals", help="CSV of actual values after the window")
    parsers["evaluate"].add_argument("--checkpoints", default="10,20,30")
    parsers["evaluate"].add_argument("--overlay-out", help="actual-vs-predicted CSV path")

    parsers["report"].add_argument("--format", choices=["json", "csv"], default="json")
    parsers["report"].add_argument("--horizon", type=int, default=30)
    parsers["report"].add_argument("--levels", default="80,95")
    parsers["report"].add_argument("--clamp-zero", action="store_true")
    parsers["report"].add_argument("--near-zero-threshold", type=float, default=1.0)
    parsers["report"].add_argument("--no-fitdf-adjust", action="store_true")
    parsers["report"].add_argument("--max-lag", type=int, default=20)
    parsers["report"].add_argument("--actuals", help="CSV of actual values after the window")
    parsers["report"].add_argument("--checkpoints", default="10,20,30")
    return parser


def _parse_levels(text: str) -> tuple[float, ...]:
    levels = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        value = float(part)
        if value >= 1.0:  # percentage form
            value /= 100.0
        levels.append(value)
    if not levels:
        raise ValidationError(f"no confidence levels in {text!r}")
    return tuple(levels)


def _parse_checkpoints(text: str) -> list[int]:
    try:
        points = sorted({int(part) for part in text.split(",") if part.strip()})
    except ValueError as exc:
        raise ValidationError(f"checkpoints must be integers, got {text!r}") from exc
    if not points or points[0] < 1:
        raise ValidationError(f"checkpoints must be positive days, got {text!r}")
    return points


def _resolve_window(args) -> DatasetWindow:
    if args.country and args.input:
        raise ValidationError("give either --country or --input, not both")
    if args.country:
        series = bundled_series(args.country)
        spec = BUNDLED[args.country]
        start = args.start or spec.window_start
        end = args.end or spec.window_end
        label = args.label or args.country
        return make_window(series, start, end, country=label, source=f"bundled:{args.country}")
    if not args.input:
        raise ValidationError("a data source is required: --country or --input")
    series = load_csv(
        args.input,
        date_column=args.date_column,
        value_column=args.value_column,
        date_format=args.date_format,
        label=args.label or args.input,
    )
    if args.cumulative:
        series, _ = cumulative_to_daily(series)
    start = args.start or series.start
    end = args.end or series.end
    return make_window(series, start, end, country=args.label or series.label, source=args.input)


def _constant_choice(args) -> bool | None:
    return {"auto": None, "on": True, "off": False}[args.constant]


def _resolve_model(args, window: DatasetWindow) -> tuple[ArimaModel, list[CandidateRow] | None]:
    series = window.series
    constant = _constant_choice(args)
    if args.order is not None:
        model = fit(series, args.order, include_constant=constant, seed=args.seed)
        return model, None
    config = SearchConfig(
        max_p=args.max_p,
        max_q=args.max_q,
        max_d=args.max_d,
        stepwise=not args.grid,
        allow_constant=constant is not False,
        fixed_d=args.fixed_d,
    )
    if args.orders:
        orders = [ArimaOrder.parse(part) for part in args.orders.split(";") if part.strip()]
        result = grid_search(series, config, orders=orders, seed=args.seed)
        return result.rows[0].model, result.rows
    if args.grid:
        result = grid_search(series, config, seed=args.seed)
        return result.rows[0].model, result.rows
    step = stepwise_search(series, config, seed=args.seed)
    return step.best.model, step.visited


def _sha256(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _write_manifest(args, window: DatasetWindow) -> None:
    if args.no_manifest:
        return
    options = {
        key: (value if not isinstance(value, (dt.date, ArimaOrder)) else str(value))
        for key, value in sorted(vars(args).items())
        if key not in {"command"}
    }
    manifest = {
        "tool": "epiarima",
        "version": _package_version(),
        "command": args.command,
        "options": options,
        "input": {"path": args.input, "sha256": _sha256(args.input)}
        if args.input
        else {"bundled": args.country},
        "window": {
            "start": window.start.isoformat(),
            "end": window.end.isoformat(),
            "n": len(window.series),
        },
        "seed": args.seed,
    }
    with open(args.manifest, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _emit(args, text: str) -> None:
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _significance(estimate: float, se: float) -> str:
    if not np.isfinite(se) or se <= 0:
        return ""
    z = abs(estimate) / se
    if z > 2.5758293035489004:
        return "***"
    if z > 1.959963984540054:
        return "**"
    if z > 1.6448536269514722:
        return "*"
    return ""


def _model_text(window: DatasetWindow, model: ArimaModel) -> str:
    lines = [
        f"series: {window.country}  window {window.start} .. {window.end}  n={len(window.series)}",
        f"model: ARIMA{model.order}"
        + (f" with constant {model.constant:.6g}" if model.has_constant else ""),
        "",
        f"{'term':<10}{'estimate':>12}{'std.err':>12}  sig",
    ]
    for name, est, se in zip(model.coefficient_names, model.coefficient_values(), model.stderr):
        se_text = f"{se:12.4f}" if np.isfinite(se) else f"{'--':>12}"
        lines.append(f"{name:<10}{est:12.4f}{se_text}  {_significance(est, se)}")
    lines += [
        "",
        f"sigma2 = {model.sigma2:.6g}   loglik = {model.loglik:.4f}",
        f"AIC = {model.aic:.4f}   AICc = {model.aicc:.4f}   n_eff = {model.n_effective}",
        "",
    ]
    return "\n".join(lines)


def _candidates_text(rows: list[CandidateRow]) -> str:
    lines = [
        f"{'order':<10}{'AICc':>10}{'MAE':>10}{'MAPE':>9}{'MASE':>8}{'RMSE':>10}{'adjR2':>8}  flags"
    ]
    for row in rows:
        lines.append(
            f"{str(row.order):<10}{row.aicc:>10.2f}{row.mae:>10.2f}{row.mape:>9.3f}"
            f"{row.mase:>8.3f}{row.rmse:>10.2f}{row.adj_r2:>8.3f}"
            f"  {'near-unit-root' if row.flagged else ''}"
        )
    return "\n".join(lines) + "\n"


def _diagnostics_rows(model: ArimaModel, fitdf_adjust: bool):
    residuals = model.residuals
    fitdf = model.order.p + model.order.q if fitdf_adjust else 0
    ljung_rows = []
    for spec in lag_schedule(len(residuals)):
        if spec.lag <= fitdf or spec.lag >= len(residuals):
            continue
        ljung_rows.append((spec, ljung_box(residuals, spec.lag, fitdf=fitdf)))
    arch_rows = [
        arch_lm(residuals, m) for m in ARCH_LAG_SET if len(residuals) > 2 * m + 1
    ]
    return ljung_rows, arch_rows, fitdf


def cmd_fit(args) -> int:
    window = _resolve_window(args)
    model, _ = _resolve_model(args, window)
    _write_manifest(args, window)
    _emit(args, _model_text(window, model))
    return 0


def cmd_auto(args) -> int:
    window = _resolve_window(args)
    model, rows = _resolve_model(args, window)
    if rows is None:
        rows = []
    _write_manifest(args, window)
    header = f"order search on {window.country} (d resolved to {model.order.d})\n"
    _emit(args, header + _candidates_text(rows))
    return 0


def cmd_forecast(args) -> int:
    window = _resolve_window(args)
    model, _ = _resolve_model(args, window)
    levels = _parse_levels(args.levels)
    fc = run_forecast(model, args.horizon, levels=levels, clamp_zero=args.clamp_zero)
    crossing = near_zero_crossing(fc, args.near_zero_threshold)
    final = final_size_estimate(model, threshold=args.near_zero_threshold)
    _write_manifest(args, window)

    header = ["date", "mean"]
    for level in sorted(fc.intervals):
        header += [f"lower{level * 100:g}", f"upper{level * 100:g}"]
    lines = [",".join(header)]
    for i, date in enumerate(fc.dates):
        row = [date.isoformat(), f"{fc.mean[i]:.6f}"]
        for level in sorted(fc.intervals):
            lower, upper = fc.intervals[level]
            row += [f"{lower[i]:.6f}", f"{upper[i]:.6f}"]
        lines.append(",".join(row))
    _emit(args, "\n".join(lines) + "\n")

    summary = sys.stderr if not args.output else sys.stdout
    crossing_text = crossing.isoformat() if crossing else "not within horizon"
    final_text = final.crossing_date.isoformat() if final.crossing_date else "horizon cap"
    print(
        f"near-zero (<{args.near_zero_threshold:g}/day) crossing: {crossing_text}",
        file=summary,
    )
    print(
        f"estimated final size: {final.total:.0f} cumulative cases (through {final_text})",
        file=summary,
    )
    return 0


def cmd_diagnose(args) -> int:
    window = _resolve_window(args)
    model, _ = _resolve_model(args, window)
    ljung_rows, arch_rows, fitdf = _diagnostics_rows(model, not args.no_fitdf_adjust)
    max_lag = min(args.max_lag, len(model.residuals) - 1)
    verdict = whiteness_verdict(model.residuals, max_lag)
    _write_manifest(args, window)

    lines = [
        f"residual diagnostics for ARIMA{model.order} on {window.country}"
        f" (fitdf={fitdf})",
        "",
        "Ljung-Box test for autocorrelation",
        f"{'lags':<22}{'Q':>10}{'df':>5}{'p-value':>10}  decision",
    ]
    for spec, result in ljung_rows:
        label = f"{spec.rule} = {spec.display:g}" if spec.rule not in {"10", "12", "20"} else spec.rule
        lines.append(
            f"{label:<22}{result.statistic:>10.4f}{result.df:>5}{result.p_value:>10.4f}"
            f"  {result.decision}"
        )
    lines += ["", "Engle LM test for ARCH effects", f"{'lag':<22}{'stat':>10}{'p-value':>15}  decision"]
    for result in arch_rows:
        lines.append(
            f"{result.lag:<22}{result.statistic:>10.4f}{result.p_value:>15.4f}  {result.decision}"
        )
    lines += [
        "",
        f"whiteness (lags 1..{verdict.max_lag}, band +/-{verdict.band_halfwidth:.4f}): "
        + ("PASS - no spike beyond the 95% band" if verdict.passed else "FAIL"),
    ]
    if not verdict.passed:
        lines.append(f"  offending ACF lags: {list(verdict.offending_acf)}")
        lines.append(f"  offending PACF lags: {list(verdict.offending_pacf)}")
    _emit(args, "\n".join(lines) + "\n")

    if args.correlogram_out:
        sample_acf = acf(model.residuals, max_lag)
        sample_pacf = pacf(model.residuals, max_lag)
        rows = ["lag,acf,pacf,band"]
        for i, lag in enumerate(sample_acf.lags):
            rows.append(
                f"{lag},{sample_acf.coefficients[i]:.6f},"
                f"{sample_pacf.coefficients[i]:.6f},{sample_acf.band_halfwidth:.6f}"
            )
        with open(args.correlogram_out, "w", encoding="utf-8") as fh:
            fh.write("\n".join(rows) + "\n")
    return 0


def _resolve_actuals(args, window: DatasetWindow) -> TimeSeries:
    if args.actuals:
        actuals = load_csv(
            args.actuals,
            date_column=args.date_column,
            value_column=args.value_column,
            date_format=args.date_format,
            label="actuals",
        )
    elif args.country:
        actuals = bundled_actuals(args.country)
    else:
        raise ValidationError("evaluation needs --actuals (or a bundled --country)")
    expected_start = window.end + dt.timedelta(days=1)
    if actuals.start > expected_start:
        raise ValidationError(
            f"actuals must start on {expected_start} (day after the window), "
            f"got {actuals.start}"
        )
    if actuals.end < expected_start:
        raise ValidationError("actuals end before the forecast period begins")
    return actuals.slice_dates(expected_start, actuals.end)


def _evaluation_blocks(model: ArimaModel, window: DatasetWindow, actuals: TimeSeries, checkpoints):
    horizon = min(max(checkpoints), len(actuals))
    fc = run_forecast(model, horizon, levels=())
    reports = []
    for days in checkpoints:
        if days > horizon:
            break
        until = (window.end + dt.timedelta(days=days)).isoformat()
        reports.append(
            deviation_report(actuals.values[:days], fc.mean[:days], label=f"until {until}")
        )
    return fc, reports


def cmd_evaluate(args) -> int:
    window = _resolve_window(args)
    model, _ = _resolve_model(args, window)
    checkpoints = _parse_checkpoints(args.checkpoints)
    actuals = _resolve_actuals(args, window)
    fc, reports = _evaluation_blocks(model, window, actuals, checkpoints)
    _write_manifest(args, window)

    lines = [
        f"forecast evaluation for ARIMA{model.order} on {window.country}"
        f" (forecast origin {window.end}, first day {window.end + dt.timedelta(days=1)})",
        "",
        f"{'window':<20}{'deviation':>12}{'pct dev':>10}{'MAPE':>9}{'MAE':>10}{'days':>6}",
    ]
    for rep in reports:
        lines.append(
            f"{rep.label:<20}{rep.overall_deviation:>+12.0f}{rep.overall_pct_deviation:>+10.2f}"
            f"{rep.mape_pct:>9.2f}{rep.mae:>10.2f}{rep.n_days:>6}"
        )
    _emit(args, "\n".join(lines) + "\n")

    if args.overlay_out:
        fitted = fitted_values(model)
        rows = ["date,actual,predicted,kind"]
        for i, date in enumerate(window.series.dates):
            pred = "" if np.isnan(fitted[i]) else f"{fitted[i]:.6f}"
            rows.append(f"{date.isoformat()},{window.series.values[i]:g},{pred},in-sample")
        for i in range(len(fc.mean)):
            rows.append(
                f"{actuals.dates[i].isoformat()},{actuals.values[i]:g},{fc.mean[i]:.6f},forecast"
            )
        with open(args.overlay_out, "w", encoding="utf-8") as fh:
            fh.write("\n".join(rows) + "\n")
    return 0


def cmd_report(args) -> int:
    window = _resolve_window(args)
    model, candidate_rows = _resolve_model(args, window)
    levels = _parse_levels(args.levels)

    ljung_rows, arch_rows, fitdf = _diagnostics_rows(model, not args.no_fitdf_adjust)
    max_lag = min(args.max_lag, len(model.residuals) - 1)
    verdict = whiteness_verdict(model.residuals, max_lag)
    diagnostics = report_mod.diagnostics_block(ljung_rows, arch_rows, verdict, fitdf)

    fc = run_forecast(model, args.horizon, levels=levels, clamp_zero=args.clamp_zero)
    crossing = near_zero_crossing(fc, args.near_zero_threshold)
    final = final_size_estimate(model, threshold=args.near_zero_threshold)
    forecast_doc = report_mod.forecast_block(fc, args.near_zero_threshold, crossing, final)

    d = model.order.d
    actual = window.series.values[d:]
    predicted = fitted_values(model)[d:]
    k_model = max(1, model.order.p + model.order.q + (1 if model.has_constant else 0))
    accuracy_doc = report_mod.accuracy_block(
        accuracy_report(actual, predicted, window.series.values, k=k_model)
    )

    evaluation_doc = None
    if args.actuals or args.country:
        try:
            actuals = _resolve_actuals(args, window)
        except ValidationError:
            actuals = None
        if actuals is not None and len(actuals) > 0:
            _, reports = _evaluation_blocks(
                model, window, actuals, _parse_checkpoints(args.checkpoints)
            )
            evaluation_doc = report_mod.deviation_block(reports)

    config_echo = {
        "order": str(args.order) if args.order else None,
        "search": "explicit" if args.order else ("grid" if args.grid else "stepwise"),
        "constant": args.constant,
        "horizon": args.horizon,
        "levels": list(levels),
        "clamp_zero": args.clamp_zero,
        "near_zero_threshold": args.near_zero_threshold,
        "fitdf_adjust": not args.no_fitdf_adjust,
        "max_lag": max_lag,
        "checkpoints": args.checkpoints,
    }
    doc = report_mod.build_report(
        window,
        model,
        seed=args.seed,
        config=config_echo,
        candidates=candidate_rows,
        diagnostics=diagnostics,
        forecast=forecast_doc,
        accuracy=accuracy_doc,
        evaluation=evaluation_doc,
    )
    _write_manifest(args, window)
    if args.format == "json":
        _emit(args, report_mod.to_json(doc))
    else:
        _emit(args, report_mod.to_flat_csv(doc))
    return 0


_COMMANDS = {
    "fit": cmd_fit,
    "auto": cmd_auto,
    "forecast": cmd_forecast,
    "diagnose": cmd_diagnose,
    "evaluate": cmd_evaluate,
    "report": cmd_report,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ValidationError, FileNotFoundError, IsADirectoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_VALIDATION
    except (ConvergenceError, SearchFailureError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_CONVERGENCE
    except DataIntegrityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_DATA
    except EpiArimaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
