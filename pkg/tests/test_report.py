import json
import math

import numpy as np
import pytest

from arimakit import (
    AnalysisReport,
    ArimaParams,
    DegenerateInput,
    IngestSpec,
    ModelOrder,
    SearchConfig,
    TimeSeries,
    analyze,
    run_pipeline,
    simulate,
)
from arimakit.report import DiagnosticOptions, format_text, stage

SMALL = SearchConfig(max_p=2, max_q=2)


@pytest.fixture(scope="module")
def report(tmp_path_factory):
    path = tmp_path_factory.mktemp("rep") / "series.csv"
    ts = simulate(ModelOrder(1, 0, 0), ArimaParams((0.6,), (), 300.0, 4900.0), 30, 11, 1990, "Synthetica")
    path.write_text("Entity,Year,Deaths\n" + "".join(f"Synthetica,{y},{float(v)!r}\n" for y, v in zip(ts.years, ts.values)))
    return run_pipeline(IngestSpec(path, entity_filter="Synthetica"), SMALL)


def test_sections_present(report):
    d = report.to_dict()
    assert set(d) == {"input", "selection", "model", "diagnostics", "forecast", "warnings"}
    assert d["input"]["n"] == 30 and d["input"]["start_year"] == 1990
    assert set(d["diagnostics"]) == {"ljung_box", "shapiro_wilk", "kpss"}
    assert d["forecast"]["years"] == list(range(2020, 2031))
    assert [b["level"] for b in d["forecast"]["intervals"]] == [0.8, 0.95]


def test_model_summary_intercept(report):
    m = report.model
    if m["mu"] is not None:
        assert m["intercept"] == pytest.approx(m["mu"] * (1 - sum(m["phi"])))
    assert m["k"] == m["order"]["p"] + m["order"]["q"] + int(m["order"]["include_mean"]) + 1


def test_json_round_trip(report):
    text = report.to_json()
    back = AnalysisReport.from_json(text)
    assert back == report
    assert back.to_json() == text


def test_json_numbers_keep_precision(report):
    back = json.loads(report.to_json())
    assert back["model"]["loglik"] == report.model["loglik"]
    assert back["forecast"]["point"] == list(report.forecast.point)


def test_text_four_decimals(report):
    text = format_text(report)
    assert f"{report.model['aicc']:.4f}" in text
    assert "Shapiro-Wilk" in text and "Ljung-Box" in text and "KPSS" in text
    assert text.count("\n") > 15


def test_deterministic(report, tmp_path):
    ts = TimeSeries(report.input_summary["values"], 1990, "Synthetica")
    again = analyze(ts, SMALL)
    assert again.to_json() == report.to_json()


def test_fixed_order():
    ts = simulate(ModelOrder(1, 0, 0), ArimaParams((0.5,), (), 10.0, 1.0), 40, 2)
    rep = analyze(ts, order=ModelOrder(1, 0, 0))
    assert rep.selection["kind"] == "fixed"
    assert rep.model["name"] == "ARIMA(1,0,0) with mean"


def test_diagnostic_options():
    ts = simulate(ModelOrder(1, 0, 0), ArimaParams((0.5,), (), 10.0, 1.0), 40, 2)
    rep = analyze(ts, order=ModelOrder(1, 0, 0), diag=DiagnosticOptions(lags=10, fitdf=0, kpss_on="series"))
    lb = rep.diagnostics["ljung_box"]
    assert lb.lags == 10 and lb.df_or_n == 10


def test_negative_lower_bound_warning():
    x = np.array([1.0, 30.0, 2.0, 25.0, 0.5, 40.0, 3.0, 28.0, 1.0, 35.0, 2.0, 30.0])
    rep = analyze(TimeSeries(x, 2000), order=ModelOrder(0, 0, 0))
    assert any("lower bound is negative" in w for w in rep.warnings)


def test_five_points_never_crashes():
    rep = analyze(TimeSeries([12.0, 15.0, 11.0, 14.0, 13.0], 2015))
    assert rep.model["order"]["p"] + rep.model["order"]["q"] <= 1
    assert len(rep.forecast.point) == 11
    assert any("too few" in w for w in rep.warnings)
    assert any("kpss skipped" in w for w in rep.warnings)


def test_five_points_large_order_is_degenerate():
    with pytest.raises(DegenerateInput) as info:
        analyze(TimeSeries([12.0, 15.0, 11.0, 14.0, 13.0]), order=ModelOrder(2, 0, 2))
    assert info.value.stage == "fit"


def test_stage_label():
    with pytest.raises(DegenerateInput) as info:
        with stage("forecast"):
            raise DegenerateInput("x")
    assert info.value.stage == "forecast"


@pytest.mark.slow
def test_white_noise_reports():
    good = 0
    for seed in range(20):
        ts = simulate(ModelOrder(0, 0, 0), ArimaParams((), (), 50.0, 4.0), 100, seed)
        rep = analyze(ts)
        ok = rep.model["order"] == {"p": 0, "d": 0, "q": 0, "include_mean": True}
        ok = ok and all(t is not None and t.p_value > 0.05 for t in rep.diagnostics.values())
        good += ok
    # the default 6x6 grid picks white noise for roughly half of all seeds
    assert good >= 16


def test_report_has_finite_numbers(report):
    for v in (report.model["loglik"], report.model["aicc"], *report.forecast.se):
        assert math.isfinite(v)
