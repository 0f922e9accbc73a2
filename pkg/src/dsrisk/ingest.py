"""Read block timestamps and measure how long ``z`` confirmations took.

Two plain-text formats are accepted:

* CSV rows ``height,timestamp`` with an optional ``height,timestamp`` header;
* JSON lines, one object per line with integer fields ``height`` and ``time``.

The clock starts at the block that includes the transaction (the first
stamp) and stops at the ``z``-th confirmation, so one confirmation spans
no time at all.
"""

import json
from dataclasses import dataclass

from dsrisk.errors import DataError
from dsrisk.risk import check_confirmations

__all__ = ["BlockStamp", "ConfirmationWindow", "parse_stamps", "elapsed_for_confirmations"]


@dataclass(frozen=True)
class BlockStamp:
    height: int
    timestamp: int


@dataclass(frozen=True)
class ConfirmationWindow:
    z: int
    t: float
    first_height: int
    last_height: int
    clamped: bool = False  # the last stamp was earlier than the first


def _int_field(value, what, lineno):
    if isinstance(value, bool) or not isinstance(value, int):
        raise DataError(f"line {lineno}: {what} must be an integer, got {value!r}")
    if value < 0:
        raise DataError(f"line {lineno}: {what} must be non-negative, got {value}")
    return value


def _parse_csv(text):
    stamps = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        fields = [f.strip() for f in line.split(",")]
        if not stamps and [f.lower() for f in fields] == ["height", "timestamp"]:
            continue
        if len(fields) != 2:
            raise DataError(f"line {lineno}: expected 'height,timestamp', got {line!r}")
        try:
            height, timestamp = int(fields[0]), int(fields[1])
        except ValueError:
            raise DataError(f"line {lineno}: non-integer field in {line!r}") from None
        stamps.append(
            (lineno, _int_field(height, "height", lineno), _int_field(timestamp, "timestamp", lineno))
        )
    return stamps


def _parse_json_lines(text):
    stamps = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise DataError(f"line {lineno}: invalid JSON ({exc.msg})") from None
        if not isinstance(obj, dict) or "height" not in obj or "time" not in obj:
            raise DataError(f"line {lineno}: expected an object with 'height' and 'time'")
        stamps.append(
            (lineno, _int_field(obj["height"], "height", lineno), _int_field(obj["time"], "time", lineno))
        )
    return stamps


def parse_stamps(text, fmt="csv"):
    """Parse block stamps and check that heights are consecutive.

    >>> parse_stamps("100,1700000000\\n101,1700000600\\n")[1]
    BlockStamp(height=101, timestamp=1700000600)
    """
    if fmt == "csv":
        rows = _parse_csv(text)
    elif fmt == "json_lines":
        rows = _parse_json_lines(text)
    else:
        raise ValueError(f"unknown stamp format {fmt!r}; use 'csv' or 'json_lines'")
    if not rows:
        raise DataError("no block stamps in input")
    rows.sort(key=lambda row: row[1])
    for (_, prev, _), (lineno, height, _) in zip(rows, rows[1:]):
        if height == prev:
            raise DataError(f"line {lineno}: duplicate height {height}")
        if height != prev + 1:
            missing = prev + 1
            raise DataError(f"heights jump from {prev} to {height}; height {missing} is missing")
    return [BlockStamp(height, timestamp) for _, height, timestamp in rows]


def elapsed_for_confirmations(stamps, z):
    """Time from the including block to its ``z``-th confirmation.

    Block timestamps are not monotone; a negative span is reported as 0
    with ``clamped`` set, since an underestimated time understates the risk.
    """
    z = check_confirmations(z)
    if len(stamps) < z:
        raise DataError(f"need {z} block stamps for z={z}, have {len(stamps)}")
    first, last = stamps[0], stamps[z - 1]
    span = last.timestamp - first.timestamp
    return ConfirmationWindow(
        z=z,
        t=float(max(span, 0)),
        first_height=first.height,
        last_height=last.height,
        clamped=span < 0,
    )
