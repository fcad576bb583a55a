"""Table engine unit checks: rate renderers, errata annotations, CSV shape."""

from fractions import Fraction

from eaqldpc.tables import (
    ERRATA,
    compute_table,
    diff_report,
    round4,
    rows_to_csv,
    trunc4,
)


def test_trunc4():
    assert trunc4(Fraction(53, 130)) == "0.4076"  # rounds to 0.4077; source truncates
    assert trunc4(Fraction(2053, 2850)) == "0.7203"
    assert trunc4(Fraction(110, 256)) == "0.4296"


def test_round4():
    assert round4(Fraction(238, 256)) == "0.9297"  # 0.9296875 rounds up
    assert round4(Fraction(539, 644)) == "0.8370"
    assert round4(Fraction(1, 3)) == "0.3333"


def test_errata_rows_annotated(cache):
    rows = compute_table("IX", cache)
    row = next(r for r in rows if r.computed["m"] == 5 and r.computed["q"] == 2)
    assert row.status == "ok"
    assert "erratum" in row.notes
    assert ("IX", 5, 2) in ERRATA


def test_csv_and_report_shapes(cache):
    rows = compute_table("XIII", cache)
    csv = rows_to_csv(rows)
    lines = csv.strip().splitlines()
    assert lines[0].startswith("table,row,")
    assert len(lines) == 1 + len(rows)
    assert diff_report(rows) == ""  # no mismatches, nothing to report


def test_unknown_table_raises(cache):
    import pytest

    with pytest.raises(ValueError):
        compute_table("XL", cache)
