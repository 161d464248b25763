"""Assembly of the machine-readable run report.

Every numeric field traces to one module operation; the document shape is
frozen by ``schemas/report.schema.json`` so downstream consumers can rely on
it. Serialization is deterministic for fixed inputs: keys are sorted and no
wall-clock data enters the document.
"""

from __future__ import annotations

import datetime as dt
import json
import math
from importlib import resources

import numpy as np

from .accuracy import AccuracyReport, DeviationReport
from .diagnostics import ArchLmResult, LagSpec, PortmanteauResult, WhitenessReport
from .estimation import ArimaModel
from .forecast import FinalSizeEstimate, Forecast
from .ingest import DatasetWindow
from .selection import CandidateRow

SCHEMA_VERSION = 1


def _clean(value):
    """Make a value JSON-safe: numpy scalars to Python, non-finite to None."""
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, (np.integer, int)):
        return int(value)
    if isinstance(value, np.ndarray):
        return [_clean(v) for v in value]
    if isinstance(value, dt.date):
        return value.isoformat()
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    return value


def model_block(model: ArimaModel) -> dict:
    names = model.coefficient_names
    estimates = model.coefficient_values()
    return _clean(
        {
            "order": [model.order.p, model.order.d, model.order.q],
            "constant_included": model.has_constant,
            "coefficients": [
                {"name": name, "estimate": est, "stderr": se}
                for name, est, se in zip(names, estimates, model.stderr)
            ],
            "sigma2": model.sigma2,
            "loglik": model.loglik,
            "aic": model.aic,
            "aicc": model.aicc,
            "n_effective": model.n_effective,
        }
    )


def candidate_block(rows: list[CandidateRow]) -> list[dict]:
    return [
        _clean(
            {
                "order": [row.order.p, row.order.d, row.order.q],
                "aicc": row.aicc,
                "mae": row.mae,
                "mape": row.mape,
                "mase": row.mase,
                "rmse": row.rmse,
                "adj_r2": row.adj_r2,
                "flagged": row.flagged,
            }
        )
        for row in rows
    ]


def diagnostics_block(
    ljung_rows: list[tuple[LagSpec, PortmanteauResult]],
    arch_rows: list[ArchLmResult],
    whiteness: WhitenessReport,
    fitdf: int,
) -> dict:
    return _clean(
        {
            "fitdf": fitdf,
            "ljung_box": [
                {
                    "rule": spec.rule,
                    "display": spec.display,
                    "lag": result.lag,
                    "statistic": result.statistic,
                    "df": result.df,
                    "p_value": result.p_value,
                    "decision": result.decision,
                }
                for spec, result in ljung_rows
            ],
            "arch_lm": [
                {
                    "lag": result.lag,
                    "statistic": result.statistic,
                    "p_value": result.p_value,
                    "decision": result.decision,
                }
                for result in arch_rows
            ],
            "whiteness": {
                "passed": whiteness.passed,
                "offending_acf": list(whiteness.offending_acf),
                "offending_pacf": list(whiteness.offending_pacf),
                "band_halfwidth": whiteness.band_halfwidth,
                "max_lag": whiteness.max_lag,
            },
        }
    )


def forecast_block(
    fc: Forecast,
    near_zero_threshold: float,
    crossing: dt.date | None,
    final_size: FinalSizeEstimate | None,
) -> dict:
    rows = []
    for i, date in enumerate(fc.dates):
        intervals = {
            f"{level:g}": {
                "lower": fc.intervals[level][0][i],
                "upper": fc.intervals[level][1][i],
            }
            for level in sorted(fc.intervals)
        }
        rows.append({"date": date, "mean": fc.mean[i], "intervals": intervals})
    return _clean(
        {
            "horizon": fc.horizon,
            "levels": sorted(fc.intervals),
            "sigma2": fc.sigma2,
            "psi_weights": fc.psi_weights,
            "rows": rows,
            "near_zero_threshold": near_zero_threshold,
            "near_zero_crossing": crossing,
            "final_size": None
            if final_size is None
            else {
                "total": final_size.total,
                "crossing_date": final_size.crossing_date,
                "threshold": final_size.threshold,
                "horizon": final_size.horizon,
            },
        }
    )


def accuracy_block(report: AccuracyReport) -> dict:
    return _clean(
        {
            "mae": report.mae,
            "mape_pct": report.mape_pct,
            "mase": report.mase,
            "rmse": report.rmse,
            "forecast_accuracy_pct": report.forecast_accuracy_pct,
            "lewis_class": report.lewis_class,
            "adj_r2": report.adj_r2,
            "n": report.n,
        }
    )


def deviation_block(reports: list[DeviationReport]) -> list[dict]:
    return [
        _clean(
            {
                "label": rep.label,
                "overall_deviation": rep.overall_deviation,
                "overall_pct_deviation": rep.overall_pct_deviation,
                "mape_pct": rep.mape_pct,
                "mae": rep.mae,
                "n_days": rep.n_days,
            }
        )
        for rep in reports
    ]


def build_report(
    window: DatasetWindow,
    model: ArimaModel,
    *,
    seed: int,
    config: dict,
    candidates: list[CandidateRow] | None = None,
    diagnostics: dict | None = None,
    forecast: dict | None = None,
    accuracy: dict | None = None,
    evaluation: list[dict] | None = None,
) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "label": window.country,
        "window": {
            "start": window.start.isoformat(),
            "end": window.end.isoformat(),
            "n": len(window.series),
            "source": window.source,
        },
        "seed": int(seed),
        "config": _clean(config),
        "model": model_block(model),
        "candidates": candidates if candidates is None else candidate_block(candidates),
        "diagnostics": diagnostics,
        "forecast": forecast,
        "accuracy": accuracy,
        "evaluation": evaluation,
    }


def to_json(report: dict) -> str:
    """Deterministic JSON rendering (sorted keys, no NaN tokens)."""
    return json.dumps(report, sort_keys=True, indent=2, allow_nan=False) + "\n"


def to_flat_csv(report: dict) -> str:
    """Flatten the report into sorted ``key,value`` rows."""
    flat: dict[str, str] = {}

    def walk(prefix: str, node):
        if isinstance(node, dict):
            for key in node:
                walk(f"{prefix}.{key}" if prefix else str(key), node[key])
        elif isinstance(node, list):
            for i, item in enumerate(node):
                walk(f"{prefix}[{i}]", item)
        else:
            flat[prefix] = "" if node is None else str(node)

    walk("", report)
    lines = ["key,value"]
    for key in sorted(flat):
        value = flat[key]
        if "," in value or '"' in value:
            value = '"' + value.replace('"', '""') + '"'
        lines.append(f"{key},{value}")
    return "\n".join(lines) + "\n"


def load_schema() -> dict:
    with resources.as_file(resources.files(__package__) / "schemas" / "report.schema.json") as p:
        return json.loads(p.read_text(encoding="utf-8"))
