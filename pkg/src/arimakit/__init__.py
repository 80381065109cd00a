"""ARIMA fitting, order selection, residual diagnostics and forecasting for
short annual series."""

from .arima import (
    ArimaParams,
    FittedModel,
    ModelOrder,
    evaluate,
    fit,
    intercept,
    log_likelihood,
    simulate,
)
from .diagnostics import TestResult, kpss, ljung_box, shapiro_wilk
from .errors import (
    ArimaKitError,
    ConvergenceFailure,
    DegenerateInput,
    GapError,
    IoError,
    MissingMean,
    NonStationaryParams,
    ParseError,
    SchemaError,
    SelectionFailure,
    UnsupportedSampleSize,
)
from .forecast import ForecastResult, forecast, psi_weights
from .ingest import IngestSpec, ingest_csv
from .report import AnalysisReport, analyze, run_pipeline
from .selection import (
    SearchConfig,
    SelectionReport,
    aicc,
    choose_d,
    exhaustive_search,
    select,
    stepwise_search,
)
from .series import (
    DifferencedSeries,
    TimeSeries,
    acf,
    difference,
    integrate,
    pacf,
    sample_mean,
)
from .svg import render_svg

__version__ = "0.1.0"
