"""End-to-end pipeline (ingest, select, diagnose, forecast) and its report."""

from __future__ import annotations

import json
import math
from contextlib import contextmanager
from dataclasses import dataclass, field

from .arima import FittedModel, ModelOrder, fit, intercept
from .diagnostics import (
    CLIP_NONE,
    TestResult,
    default_lb_lags,
    kpss,
    ljung_box,
    shapiro_wilk,
)
from .errors import ArimaKitError, DegenerateInput, UnsupportedSampleSize
from .forecast import DEFAULT_HORIZON, DEFAULT_LEVELS, ForecastResult, forecast
from .ingest import IngestSpec, ingest_csv
from .selection import SearchConfig, SelectionReport, select
from .series import TimeSeries

DIAGNOSTIC_NAMES = ("ljung_box", "shapiro_wilk", "kpss")


@contextmanager
def stage(name: str):
    """Tag any toolkit error raised inside the block with the pipeline stage."""
    try:
        yield
    except ArimaKitError as exc:
        if not hasattr(exc, "stage"):
            exc.stage = name
        raise


@dataclass(frozen=True)
class DiagnosticOptions:
    lags: int | None = None
    fitdf: int | None = None
    kpss_on: str = "residuals"
    kpss_bandwidth: str = "short"


@dataclass
class AnalysisReport:
    input_summary: dict
    selection: dict
    model: dict
    diagnostics: dict
    forecast: ForecastResult | None
    warnings: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "input": self.input_summary,
            "selection": self.selection,
            "model": self.model,
            "diagnostics": {
                k: (v.to_dict() if v is not None else None) for k, v in self.diagnostics.items()
            },
            "forecast": self.forecast.to_dict() if self.forecast else None,
            "warnings": list(self.warnings),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "AnalysisReport":
        return cls(
            input_summary=d["input"],
            selection=d["selection"],
            model=d["model"],
            diagnostics={
                k: (TestResult.from_dict(v) if v is not None else None)
                for k, v in d["diagnostics"].items()
            },
            forecast=ForecastResult.from_dict(d["forecast"]) if d["forecast"] else None,
            warnings=list(d["warnings"]),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, allow_nan=False)

    @classmethod
    def from_json(cls, text: str) -> "AnalysisReport":
        return cls.from_dict(json.loads(text))


def _order_dict(order: ModelOrder) -> dict:
    return {"p": order.p, "d": order.d, "q": order.q, "include_mean": order.include_mean}


def _finite_or_none(x: float):
    return x if math.isfinite(x) else None


def model_summary(model: FittedModel) -> dict:
    params = model.params
    return {
        "order": _order_dict(model.order),
        "name": str(model.order),
        "phi": list(params.phi),
        "theta": list(params.theta),
        "mu": params.mu,
        "intercept": intercept(params) if params.mu is not None else None,
        "sigma2": params.sigma2,
        "loglik": model.loglik,
        "aic": model.aic,
        "aicc": _finite_or_none(model.aicc),
        "bic": model.bic,
        "nobs": model.nobs,
        "k": model.n_params,
        "converged": model.converged,
    }


def selection_summary(rep: SelectionReport) -> dict:
    out = {
        "kind": rep.kind,
        "d_chosen": rep.d_chosen,
        "agreement": rep.agreement,
        "chosen": _order_dict(rep.chosen.order),
        "aicc": rep.chosen.aicc,
        "trace": [
            {"order": _order_dict(e.order), "aicc": _finite_or_none(e.aicc), "error": e.error}
            for e in rep.trace
        ],
    }
    if rep.other is not None:
        out["stepwise"] = {
            "chosen": _order_dict(rep.other.chosen.order),
            "aicc": rep.other.chosen.aicc,
            "evaluated": len(rep.other.trace),
        }
    return out


def run_diagnostics(model: FittedModel, series: TimeSeries, opts=DiagnosticOptions()):
    """Run the three residual tests. A test whose preconditions fail is
    reported as ``None`` plus a warning instead of aborting the report."""
    resid = model.residuals
    n = len(resid)
    lags = opts.lags if opts.lags is not None else default_lb_lags(n)
    fitdf = opts.fitdf if opts.fitdf is not None else model.order.p + model.order.q
    kpss_input = resid if opts.kpss_on == "residuals" else series
    runs = {
        "ljung_box": lambda: ljung_box(resid, lags, fitdf),
        "shapiro_wilk": lambda: shapiro_wilk(resid),
        "kpss": lambda: kpss(kpss_input, bandwidth=opts.kpss_bandwidth),
    }
    results, warnings = {}, []
    for name in DIAGNOSTIC_NAMES:
        try:
            results[name] = runs[name]()
        except (DegenerateInput, UnsupportedSampleSize) as exc:
            results[name] = None
            warnings.append(f"{name} skipped: {exc}")
    kp = results["kpss"]
    if kp is not None and kp.clipped != CLIP_NONE:
        bound = "upper" if kp.clipped == "at_upper" else "lower"
        warnings.append(
            f"kpss p-value {kp.p_value:g} is clipped at the {bound} end of the critical table"
        )
    return results, warnings


def _fixed_selection(model: FittedModel) -> dict:
    return {
        "kind": "fixed",
        "d_chosen": model.order.d,
        "agreement": None,
        "chosen": _order_dict(model.order),
        "aicc": _finite_or_none(model.aicc),
        "trace": [],
    }


def analyze(
    series: TimeSeries,
    search: SearchConfig = SearchConfig(),
    horizon: int = DEFAULT_HORIZON,
    levels=DEFAULT_LEVELS,
    order: ModelOrder | None = None,
    diag: DiagnosticOptions = DiagnosticOptions(),
) -> AnalysisReport:
    warnings = []
    if order is None:
        with stage("select"):
            if len(series) < 10:
                warnings.append(
                    f"series has {len(series)} points, too few for KPSS; d fixed at 0"
                )
            rep = select(series, search)
        model = rep.chosen
        sel = selection_summary(rep)
        if rep.agreement is False:
            warnings.append(
                f"stepwise chose {rep.other.chosen.order}, exhaustive chose {rep.chosen.order}"
            )
        failed = sum(1 for e in rep.trace if e.error)
        if failed:
            warnings.append(f"{failed} candidate fits failed or were rejected and were skipped")
    else:
        with stage("fit"):
            model = fit(series, order)
        sel = _fixed_selection(model)

    with stage("diagnose"):
        tests, diag_warnings = run_diagnostics(model, series, diag)
    warnings.extend(diag_warnings)

    with stage("forecast"):
        fc = forecast(model, series, horizon, levels)
    for lv in sorted(fc.intervals):
        lower = fc.intervals[lv][0]
        neg = [y for y, v in zip(fc.years, lower) if v < 0]
        if neg:
            warnings.append(
                f"{lv:.0%} lower bound is negative for {neg[0]}-{neg[-1]}"
            )

    summary = {
        "label": series.label,
        "n": len(series),
        "start_year": series.start_year,
        "end_year": series.end_year,
        "values": [float(v) for v in series.values],
    }
    return AnalysisReport(summary, sel, model_summary(model), tests, fc, warnings)


def run_pipeline(
    spec: IngestSpec,
    search: SearchConfig = SearchConfig(),
    horizon: int = DEFAULT_HORIZON,
    levels=DEFAULT_LEVELS,
    order: ModelOrder | None = None,
    diag: DiagnosticOptions = DiagnosticOptions(),
) -> AnalysisReport:
    with stage("ingest"):
        series = ingest_csv(spec)
    return analyze(series, search, horizon, levels, order, diag)


def _fmt(x) -> str:
    if x is None:
        return "n/a"
    return f"{x:.4f}"


def _order_name(o: dict) -> str:
    return str(ModelOrder(o["p"], o["d"], o["q"], o["include_mean"]))


def format_input(report: AnalysisReport) -> list:
    s = report.input_summary
    return [f"Series: {s['label']} ({s['start_year']}-{s['end_year']}, n={s['n']})"]


def format_selection(report: AnalysisReport) -> list:
    sel = report.selection
    lines = [f"Selection ({sel['kind']}): d={sel['d_chosen']}, chosen {_order_name(sel['chosen'])}, AICc {_fmt(sel['aicc'])}"]
    if "stepwise" in sel:
        sw = sel["stepwise"]
        agree = "yes" if sel["agreement"] else "no"
        lines.append(
            f"  stepwise: {_order_name(sw['chosen'])}, AICc {_fmt(sw['aicc'])} "
            f"({sw['evaluated']} models); agreement: {agree}"
        )
    return lines


def format_model(report: AnalysisReport) -> list:
    m = report.model
    lines = [f"Model: {m['name']}"]
    for i, v in enumerate(m["phi"], 1):
        lines.append(f"  ar{i:<9}{_fmt(v)}")
    for i, v in enumerate(m["theta"], 1):
        lines.append(f"  ma{i:<9}{_fmt(v)}")
    if m["mu"] is not None:
        lines.append(f"  {'mean':<11}{_fmt(m['mu'])}")
        lines.append(f"  {'intercept':<11}{_fmt(m['intercept'])}")
    lines.append(f"  {'sigma^2':<11}{_fmt(m['sigma2'])}")
    lines.append(
        f"  loglik {_fmt(m['loglik'])}  AIC {_fmt(m['aic'])}  "
        f"AICc {_fmt(m['aicc'])}  BIC {_fmt(m['bic'])}"
    )
    return lines


def format_diagnostics(report: AnalysisReport) -> list:
    lines = ["Residual diagnostics:"]
    labels = {"ljung_box": "Ljung-Box", "shapiro_wilk": "Shapiro-Wilk", "kpss": "KPSS"}
    for name in DIAGNOSTIC_NAMES:
        t = report.diagnostics.get(name)
        if t is None:
            lines.append(f"  {labels[name]:<13}skipped")
            continue
        extra = ""
        if name == "ljung_box":
            extra = f"  (lags={t.lags}, df={t.df_or_n})"
        elif name == "kpss":
            extra = f"  (lags={t.lags}, clipped={t.clipped})"
        lines.append(f"  {labels[name]:<13}stat {_fmt(t.statistic)}  p {_fmt(t.p_value)}{extra}")
    return lines


def format_forecast(report: AnalysisReport) -> list:
    fc = report.forecast
    levels = fc.levels
    head = "  year        point" + "".join(
        f"   lo{lv:.0%}".rjust(12) + f"   hi{lv:.0%}".rjust(12) for lv in levels
    )
    lines = [f"Forecast (h={fc.horizon}):", head]
    for i, year in enumerate(fc.years):
        row = f"  {year:<6}{fc.point[i]:>11.4f}"
        for lv in levels:
            lo, hi = fc.intervals[lv]
            row += f"{lo[i]:>12.4f}{hi[i]:>12.4f}"
        lines.append(row)
    return lines


def format_text(report: AnalysisReport, sections=("input", "selection", "model", "diagnostics", "forecast")) -> str:
    makers = {
        "input": format_input,
        "selection": format_selection,
        "model": format_model,
        "diagnostics": format_diagnostics,
        "forecast": format_forecast,
    }
    lines = []
    for name in sections:
        lines.extend(makers[name](report))
    for w in report.warnings:
        lines.append(f"warning: {w}")
    return "\n".join(lines) + "\n"
