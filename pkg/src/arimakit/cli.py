"""Command-line entry point: ``arimakit {fit,select,diagnose,forecast,report,simulate}``."""

from __future__ import annotations

import argparse
import csv
import json
import sys

from .arima import ArimaParams, ModelOrder, simulate
from .errors import ArimaKitError, IoError, SchemaError
from .forecast import DEFAULT_HORIZON
from .ingest import IngestSpec, ingest_csv, parse_year_range
from .report import (
    AnalysisReport,
    DiagnosticOptions,
    analyze,
    format_text,
    stage,
)
from .selection import SearchConfig, SearchKind
from .svg import render_svg

EXIT_INTERNAL = 1


def _parse_order(text: str) -> tuple:
    try:
        p, d, q = (int(v) for v in text.split(","))
    except ValueError:
        raise SchemaError(f"--order must look like p,d,q, got {text!r}") from None
    return p, d, q


def _floats(text: str) -> list:
    if not text:
        return []
    try:
        return [float(v) for v in text.split(",")]
    except ValueError:
        raise SchemaError(f"expected comma-separated numbers, got {text!r}") from None


def _add_input(p: argparse.ArgumentParser):
    g = p.add_argument_group("input")
    g.add_argument("--input", required=True, help="long-format CSV with a header row")
    g.add_argument("--entity", help="keep only rows whose entity column equals this")
    g.add_argument("--entity-column", default="Entity")
    g.add_argument("--year-column", default="Year")
    g.add_argument("--column", help="value column name or zero-based index (default: last)")
    g.add_argument("--years", help="inclusive year window START:END")
    p.add_argument("--format", choices=("text", "json"), default="text")


def _add_search(p: argparse.ArgumentParser):
    g = p.add_argument_group("order search")
    kind = g.add_mutually_exclusive_group()
    kind.add_argument("--stepwise", dest="kind", action="store_const", const="stepwise")
    kind.add_argument("--exhaustive", dest="kind", action="store_const", const="exhaustive")
    kind.add_argument("--both", dest="kind", action="store_const", const="both")
    g.add_argument("--max-p", type=int, default=5)
    g.add_argument("--max-q", type=int, default=5)
    g.add_argument("--max-d", type=int, default=2)
    g.add_argument("--alpha", type=float, default=0.05, help="KPSS level used to choose d")
    g.add_argument("--workers", type=int, default=1, help="threads for the exhaustive grid")


def _add_order(p: argparse.ArgumentParser, required=False):
    p.add_argument("--order", required=required, help="p,d,q (omit to select automatically)")
    p.add_argument("--no-mean", action="store_true", help="fit without a mean term")


def _add_diag(p: argparse.ArgumentParser):
    p.add_argument("--lags", type=int, help="Ljung-Box lags (default min(10, n/5))")
    p.add_argument("--fitdf", type=int, help="Ljung-Box fitted-parameter adjustment (default p+q)")
    p.add_argument("--kpss-on", choices=("residuals", "series"), default="residuals")
    p.add_argument("--kpss-bandwidth", choices=("short", "long", "none"), default="short")


def _add_forecast(p: argparse.ArgumentParser):
    p.add_argument("--horizon", type=int, default=DEFAULT_HORIZON)
    p.add_argument("--level", type=float, action="append", help="interval level, repeatable")
    p.add_argument("--svg", help="write a fan chart to this path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="arimakit",
        description="Fit, select, diagnose and forecast ARIMA models for annual series.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", help="fit one explicit order")
    _add_input(p)
    _add_order(p, required=True)

    p = sub.add_parser("select", help="choose the order by AICc")
    _add_input(p)
    _add_search(p)

    p = sub.add_parser("diagnose", help="residual tests for a fitted or selected model")
    _add_input(p)
    _add_order(p)
    _add_search(p)
    _add_diag(p)

    p = sub.add_parser("forecast", help="point forecasts and prediction intervals")
    _add_input(p)
    _add_order(p)
    _add_search(p)
    _add_forecast(p)

    p = sub.add_parser("report", help="full pipeline: select, diagnose, forecast")
    _add_input(p)
    _add_order(p)
    _add_search(p)
    _add_diag(p)
    _add_forecast(p)

    p = sub.add_parser("simulate", help="write a simulated series as CSV")
    p.add_argument("--order", default="1,0,0")
    p.add_argument("--phi", default="")
    p.add_argument("--theta", default="")
    p.add_argument("--mu", type=float, default=0.0)
    p.add_argument("--no-mean", action="store_true")
    p.add_argument("--sigma2", type=float, default=1.0)
    p.add_argument("--n", type=int, default=30)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--start-year", type=int, default=1990)
    p.add_argument("--entity", default="Simulated")
    p.add_argument("--output", help="CSV path (default stdout)")
    return parser


SECTIONS = {
    "fit": ("input", "model"),
    "select": ("input", "selection", "model"),
    "diagnose": ("input", "model", "diagnostics"),
    "forecast": ("input", "model", "forecast"),
    "report": ("input", "selection", "model", "diagnostics", "forecast"),
}


def _json_sections(report: AnalysisReport, sections) -> str:
    full = report.to_dict()
    out = {s: full[s] for s in sections}
    out["warnings"] = full["warnings"]
    return json.dumps(out, indent=2, allow_nan=False)


def _run_simulate(args) -> int:
    p, d, q = _parse_order(args.order)
    include_mean = d == 0 and not args.no_mean
    order = ModelOrder(p, d, q, include_mean)
    params = ArimaParams(
        _floats(args.phi), _floats(args.theta), args.mu if include_mean else None, args.sigma2
    )
    ts = simulate(order, params, args.n, args.seed, args.start_year, args.entity)
    try:
        fh = open(args.output, "w", newline="") if args.output else sys.stdout
    except OSError as exc:
        raise IoError(f"cannot write {args.output}: {exc.strerror or exc}") from exc
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["Entity", "Year", "Value"])
        for year, value in zip(ts.years, ts.values):
            writer.writerow([args.entity, int(year), repr(float(value))])
    finally:
        if args.output:
            fh.close()
    return 0


def _run(args) -> int:
    if args.command == "simulate":
        with stage("simulate"):
            return _run_simulate(args)

    # flags are validated before any file is read
    order = None
    if getattr(args, "order", None):
        with stage("fit"):
            p, d, q = _parse_order(args.order)
            order = ModelOrder(p, d, q, d == 0 and not args.no_mean)
    with stage("select"):
        search = SearchConfig(
            max_p=getattr(args, "max_p", 5),
            max_q=getattr(args, "max_q", 5),
            max_d=getattr(args, "max_d", 2),
            stationarity_alpha=getattr(args, "alpha", 0.05),
            search_kind=SearchKind(getattr(args, "kind", None) or "both"),
            workers=getattr(args, "workers", 1),
        )
    diag = DiagnosticOptions(
        lags=getattr(args, "lags", None),
        fitdf=getattr(args, "fitdf", None),
        kpss_on=getattr(args, "kpss_on", "residuals"),
        kpss_bandwidth=getattr(args, "kpss_bandwidth", "short"),
    )
    levels = tuple(getattr(args, "level", None) or (0.80, 0.95))
    horizon = getattr(args, "horizon", DEFAULT_HORIZON)
    with stage("ingest"):
        spec = IngestSpec(
            path=args.input,
            value_column=args.column,
            year_column=args.year_column,
            entity_column=args.entity_column,
            entity_filter=args.entity,
            year_range=parse_year_range(args.years) if args.years else None,
        )
        series = ingest_csv(spec)

    report = analyze(series, search, horizon, levels, order, diag)

    sections = SECTIONS[args.command]
    if args.format == "json":
        sys.stdout.write(_json_sections(report, sections) + "\n")
    else:
        sys.stdout.write(format_text(report, sections))
    if getattr(args, "svg", None):
        with stage("render"):
            render_svg(report, args.svg)
    return 0


def error_line(exc: BaseException, code: int) -> str:
    payload = {
        "error": type(exc).__name__,
        "stage": getattr(exc, "stage", None),
        "exit_code": code,
        "message": " ".join(str(exc).split()),
    }
    if getattr(exc, "years", None):
        payload["years"] = list(exc.years)
    if getattr(exc, "row", None) is not None:
        payload["row"] = exc.row
    return json.dumps(payload)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _run(args)
    except ArimaKitError as exc:
        code = exc.exit_code
        print(error_line(exc, code), file=sys.stderr)
        return code
    except Exception as exc:  # noqa: BLE001 - last-resort single-line report
        print(error_line(exc, EXIT_INTERNAL), file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
