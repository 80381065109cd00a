import xml.etree.ElementTree as ET

import pytest

from arimakit import IoError, ModelOrder, TimeSeries, analyze, render_svg
from arimakit.svg import HEIGHT, svg_string

NS = {"s": "http://www.w3.org/2000/svg"}


def _points(poly):
    return [tuple(map(float, p.split(","))) for p in poly.get("points").split()]


@pytest.fixture(scope="module")
def small_report():
    x = [210.0, 190.0, 250.0, 230.0, 260.0, 240.0, 220.0, 270.0, 255.0, 245.0, 235.0, 265.0]
    return analyze(TimeSeries(x, 2008, "Fixture"), order=ModelOrder(1, 0, 0))


@pytest.fixture(scope="module")
def noisy_report():
    x = [1.0, 30.0, 2.0, 25.0, 0.5, 40.0, 3.0, 28.0, 1.0, 35.0, 2.0, 30.0]
    return analyze(TimeSeries(x, 2000, "Noisy"), order=ModelOrder(0, 0, 0))


def test_byte_identical(small_report, tmp_path):
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    render_svg(small_report, a)
    render_svg(small_report, b)
    assert a.read_bytes() == b.read_bytes()


def test_two_nested_bands(small_report):
    root = ET.fromstring(svg_string(small_report))
    bands = root.findall("s:polygon[@class='band']", NS)
    assert [b.get("data-level") for b in bands] == ["0.95", "0.8"]
    outer, inner = (_points(b) for b in bands)
    h = len(outer) // 2
    # screen y grows downward: the inner upper edge sits below the outer one
    for (xo, yo), (xi, yi) in zip(outer[:h], inner[:h]):
        assert xo == xi and yi >= yo
    for (xo, yo), (xi, yi) in zip(outer[h:], inner[h:]):
        assert xo == xi and yi <= yo


def test_structure(small_report):
    root = ET.fromstring(svg_string(small_report))
    assert root.get("version") == "1.1"
    assert root.find("s:polyline[@class='history']", NS) is not None
    fc_line = root.find("s:polyline[@class='forecast']", NS)
    assert len(_points(fc_line)) == 12
    years = [t.text for t in root.findall("s:text[@class='xlabel']", NS)]
    assert "2008" in years
    assert root.find("s:text[@class='warning']", NS) is None


def test_negative_bound_clipped(noisy_report):
    assert any(v < 0 for v in noisy_report.forecast.intervals[0.95][0])
    root = ET.fromstring(svg_string(noisy_report))
    axis_y = max(float(line.get("y1")) for line in root.findall("s:line[@class='axis']", NS))
    for band in root.findall("s:polygon[@class='band']", NS):
        for _, y in _points(band):
            assert y <= axis_y + 1e-9
    warning = root.find("s:text[@class='warning']", NS)
    assert warning is not None and "clipped" in warning.text
    assert axis_y <= HEIGHT


def test_unwritable(small_report, tmp_path):
    with pytest.raises(IoError):
        render_svg(small_report, tmp_path / "missing" / "x.svg")
