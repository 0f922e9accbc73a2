import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dsrisk.errors import DataError, DomainError
from dsrisk.ingest import BlockStamp, elapsed_for_confirmations, parse_stamps
from dsrisk.risk import catchup_timed, timing_from


def stamps_at(times, start=1000):
    return [BlockStamp(start + i, t) for i, t in enumerate(times)]


def test_parse_csv_minimal():
    stamps = parse_stamps("100,1700000000\n101,1700000600\n")
    assert stamps == [BlockStamp(100, 1700000000), BlockStamp(101, 1700000600)]


def test_parse_csv_header_blank_lines_and_order():
    text = "height,timestamp\n\n12,1300\n11,1000\n"
    assert [s.height for s in parse_stamps(text)] == [11, 12]


def test_parse_json_lines():
    text = "\n".join(json.dumps({"height": h, "time": 600 * h}) for h in (7, 8, 9))
    stamps = parse_stamps(text, "json_lines")
    assert [s.timestamp for s in stamps] == [4200, 4800, 5400]


def test_json_lines_gap_names_missing_height():
    text = '{"height": 5, "time": 1}\n{"height": 7, "time": 2}\n'
    with pytest.raises(DataError, match="height 6"):
        parse_stamps(text, "json_lines")


@pytest.mark.parametrize(
    "text,fmt,match",
    [
        ("abc,12", "csv", "line 1"),
        ("1,2\n2,x", "csv", "line 2"),
        ("1,2,3", "csv", "line 1"),
        ("1,-5", "csv", "line 1"),
        ("{not json}", "json_lines", "line 1"),
        ('{"height": 1}', "json_lines", "line 1"),
        ('{"height": 1, "time": 2.5}', "json_lines", "line 1"),
        ("", "csv", "no block stamps"),
        ("4,10\n4,20\n", "csv", "duplicate height 4"),
    ],
)
def test_parse_errors(text, fmt, match):
    with pytest.raises(DataError, match=match):
        parse_stamps(text, fmt)


def test_unknown_format():
    with pytest.raises(ValueError):
        parse_stamps("1,2", "xml")


def test_elapsed_examples():
    window = elapsed_for_confirmations(stamps_at([1000, 1600, 2200]), 3)
    assert window.t == 1200 and window.first_height == 1000 and window.last_height == 1002
    assert not window.clamped
    assert elapsed_for_confirmations(stamps_at([1000, 1600]), 1).t == 0
    window = elapsed_for_confirmations(stamps_at([1000, 900]), 2)
    assert window.t == 0 and window.clamped


def test_elapsed_needs_enough_stamps():
    with pytest.raises(DataError):
        elapsed_for_confirmations(stamps_at([1000, 1600]), 3)
    with pytest.raises(DomainError):
        elapsed_for_confirmations(stamps_at([1000]), 0)


@given(
    gaps=st.lists(st.integers(-3600, 7200), min_size=1, max_size=12),
    shift=st.integers(0, 10**9),
)
def test_elapsed_translation_invariant(gaps, shift):
    times = [10**9]
    for g in gaps:
        times.append(times[-1] + g)
    z = len(times)
    base = elapsed_for_confirmations(stamps_at(times), z)
    moved = elapsed_for_confirmations(stamps_at([t + shift for t in times]), z)
    assert base.t == moved.t and base.clamped == moved.clamped


def test_single_confirmation_reduces_to_ruin_term():
    window = elapsed_for_confirmations(stamps_at([5000, 9000]), 1)
    timing = timing_from(window.t, 1, 0.2)
    assert timing.r == 0.0 and timing.kappa == 0.0
    assert catchup_timed(1, 0.2, timing.kappa) == pytest.approx(0.25, abs=1e-16)
