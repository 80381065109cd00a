import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from arimakit import GapError, IngestSpec, IoError, ParseError, SchemaError, TimeSeries, ingest_csv
from arimakit.ingest import parse_year_range

HEADER = ["Entity", "Code", "Year", "Deaths"]
ROWS = [["Comoros", "COM", 1990, 10], ["Comoros", "COM", 1991, 20], ["Comoros", "COM", 1992, 30]]


def test_three_rows(write_csv):
    ts = ingest_csv(IngestSpec(write_csv([HEADER] + ROWS), entity_filter="Comoros"))
    assert ts == TimeSeries([10, 20, 30], 1990, "Comoros")


def test_every_permutation_same(write_csv):
    expected = ingest_csv(IngestSpec(write_csv([HEADER] + ROWS)))
    for i, perm in enumerate(itertools.permutations(ROWS)):
        path = write_csv([HEADER] + list(perm), f"p{i}.csv")
        assert ingest_csv(IngestSpec(path)) == expected


@settings(max_examples=30, deadline=None)
@given(st.permutations(list(range(12))))
def test_shuffle_invariance(tmp_path_factory, perm):
    rows = [["X", "XX", 2000 + i, i * 1.5] for i in range(12)]
    d = tmp_path_factory.mktemp("shuf")
    a, b = d / "a.csv", d / "b.csv"
    a.write_text("\n".join(",".join(map(str, r)) for r in [HEADER] + rows))
    b.write_text("\n".join(",".join(map(str, r)) for r in [HEADER] + [rows[i] for i in perm]))
    assert ingest_csv(IngestSpec(a)) == ingest_csv(IngestSpec(b))


def test_gap_names_year(write_csv):
    rows = [ROWS[0], ROWS[2]]
    with pytest.raises(GapError) as info:
        ingest_csv(IngestSpec(write_csv([HEADER] + rows)))
    assert list(info.value.years) == [1991]
    assert "1991" in str(info.value)
    assert info.value.exit_code == 2


def test_duplicate_year(write_csv):
    with pytest.raises(GapError) as info:
        ingest_csv(IngestSpec(write_csv([HEADER] + ROWS + [ROWS[1]])))
    assert list(info.value.years) == [1991]


def test_entity_filter_and_years(data_dir):
    spec = IngestSpec(data_dir / "synthetic_annual.csv", entity_filter="Otherland", year_range=(2000, 2009))
    ts = ingest_csv(spec)
    assert len(ts) == 10
    assert ts.start_year == 2000
    assert ts.label == "Otherland"


def test_value_column_by_name_and_index(write_csv):
    path = write_csv([HEADER + ["Other"]] + [r + [r[3] * 2] for r in ROWS])
    assert list(ingest_csv(IngestSpec(path)).values) == [20, 40, 60]
    assert list(ingest_csv(IngestSpec(path, value_column="Deaths")).values) == [10, 20, 30]
    assert list(ingest_csv(IngestSpec(path, value_column=3)).values) == [10, 20, 30]
    assert list(ingest_csv(IngestSpec(path, value_column="3")).values) == [10, 20, 30]


def test_missing_column(write_csv):
    path = write_csv([HEADER] + ROWS)
    with pytest.raises(SchemaError):
        ingest_csv(IngestSpec(path, value_column="Cases"))
    with pytest.raises(SchemaError):
        ingest_csv(IngestSpec(path, year_column="year"))
    with pytest.raises(SchemaError):
        ingest_csv(IngestSpec(path, value_column=9))


def test_unknown_entity(write_csv):
    with pytest.raises(SchemaError):
        ingest_csv(IngestSpec(write_csv([HEADER] + ROWS), entity_filter="Atlantis"))


def test_unparsable_value_reports_row(write_csv):
    rows = [ROWS[0], ["Comoros", "COM", 1991, "n/a"], ROWS[2]]
    with pytest.raises(ParseError) as info:
        ingest_csv(IngestSpec(write_csv([HEADER] + rows)))
    assert info.value.row == 3


@pytest.mark.parametrize("bad", ["19x1", "1991.5"])
def test_unparsable_year(write_csv, bad):
    rows = [ROWS[0], ["Comoros", "COM", bad, 20]]
    with pytest.raises(ParseError):
        ingest_csv(IngestSpec(write_csv([HEADER] + rows)))


def test_non_finite_value(write_csv):
    with pytest.raises(ParseError):
        ingest_csv(IngestSpec(write_csv([HEADER, ["Comoros", "COM", 1990, "nan"]])))


def test_short_row(write_csv):
    with pytest.raises(ParseError):
        ingest_csv(IngestSpec(write_csv([HEADER, ["Comoros", "COM", 1990]])))


def test_empty_file(tmp_path):
    path = tmp_path / "empty.csv"
    path.write_text("")
    with pytest.raises(SchemaError):
        ingest_csv(IngestSpec(path))


def test_missing_file(tmp_path):
    with pytest.raises(IoError) as info:
        ingest_csv(IngestSpec(tmp_path / "nope.csv"))
    assert info.value.exit_code == 4


def test_bom_and_blank_lines(tmp_path):
    path = tmp_path / "bom.csv"
    path.write_text("﻿Entity,Year,Deaths\nA,2001,1\n\nA,2002,2\n", encoding="utf-8")
    ts = ingest_csv(IngestSpec(path))
    assert list(ts.values) == [1, 2]


def test_year_range_parsing():
    assert parse_year_range("1990:2019") == (1990, 2019)
    assert parse_year_range(":2000")[1] == 2000
    with pytest.raises(SchemaError):
        parse_year_range("1990-2019")
    with pytest.raises(SchemaError):
        IngestSpec("x.csv", year_range=(2000, 1990))
