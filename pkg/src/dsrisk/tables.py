"""Risk tables: catch-up probabilities in percent over a (r, q) grid.

The default grid has pace ratios r = 0.1 .. 3.5 (35 rows) and attacker
shares q = 0.02 .. 0.26 (13 columns). Published reference tables for
z = 1..9 ship as fixtures in ``dsrisk/fixtures/fixture_z{N}.txt``: 35 lines
of 13 space-separated cells, stored exactly as printed.
"""

import csv
import io
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from importlib import resources

import numpy as np

from dsrisk.errors import DataError, StructureError
from dsrisk.risk import as_share, check_confirmations, table_probability

__all__ = [
    "R_AXIS",
    "Q_AXIS",
    "FIXTURE_Z",
    "DEFAULT_TOLERANCE",
    "TableGrid",
    "ReferenceFixture",
    "ComparisonReport",
    "generate_table",
    "format_cell",
    "format_axis",
    "load_fixture",
    "parse_fixture",
    "compare_fixture",
    "emit",
    "parse_csv",
]

R_AXIS = tuple(round(0.1 * k, 10) for k in range(1, 36))
Q_AXIS = tuple(round(0.02 * k, 10) for k in range(1, 14))
FIXTURE_Z = tuple(range(1, 10))
# half a printed unit, plus slack for binary rounding of the printed value
DEFAULT_TOLERANCE = 0.005 + 1e-9
FORMATS = ("csv", "markdown", "latex")


@dataclass(frozen=True)
class TableGrid:
    z: int
    r_axis: tuple
    q_axis: tuple
    cells: np.ndarray  # percent, shape (len(r_axis), len(q_axis))

    def cell(self, r, q):
        return float(self.cells[self.r_axis.index(r), self.q_axis.index(q)])


@dataclass(frozen=True)
class ReferenceFixture:
    z: int
    cells: tuple  # rows of printed strings, same layout as TableGrid.cells
    r_axis: tuple = R_AXIS
    q_axis: tuple = Q_AXIS

    def values(self):
        return np.array([[float(s) for s in row] for row in self.cells])


@dataclass
class ComparisonReport:
    z: int
    tolerance: float
    compared: int
    max_abs_delta: float
    mismatches: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.mismatches


def _check_axis(name, axis):
    axis = tuple(float(v) for v in axis)
    if not axis:
        raise ValueError(f"{name} axis is empty")
    if any(b <= a for a, b in zip(axis, axis[1:])):
        raise ValueError(f"{name} axis must be strictly increasing")
    return axis


def generate_table(z, q_axis=Q_AXIS, r_axis=R_AXIS):
    """Percent catch-up probability for every (r, q) on the grid."""
    z = check_confirmations(z)
    q_axis = _check_axis("q", q_axis)
    r_axis = _check_axis("r", r_axis)
    shares = [as_share(q) for q in q_axis]
    cells = np.empty((len(r_axis), len(q_axis)))
    for i, r in enumerate(r_axis):
        for j, share in enumerate(shares):
            cells[i, j] = 100.0 * table_probability(z, share, r)
    return TableGrid(z=z, r_axis=r_axis, q_axis=q_axis, cells=cells)


def _strip(text):
    if "." in text:
        text = text.rstrip("0").rstrip(".")
    return "0" if text in ("-0", "") else text


def format_cell(value):
    """Two decimals, half away from zero, trailing zeros dropped.

    >>> format_cell(11.996), format_cell(19.5701), format_cell(0.004)
    ('12', '19.57', '0')
    """
    # repr() gives the shortest decimal that round-trips, so 0.125 stays 0.125
    rounded = Decimal(repr(float(value))).quantize(Decimal("0.01"), rounding=ROUND_HALF_UP)
    return _strip(format(rounded, "f"))


def format_axis(value):
    return _strip(format(Decimal(repr(float(value))).normalize(), "f"))


def parse_fixture(z, text):
    rows = []
    for lineno, line in enumerate(text.splitlines(), 1):
        cells = line.split()
        if len(cells) != len(Q_AXIS):
            raise DataError(f"fixture z={z} line {lineno}: expected {len(Q_AXIS)} cells, got {len(cells)}")
        for cell in cells:
            try:
                Decimal(cell)
            except ArithmeticError:
                raise DataError(f"fixture z={z} line {lineno}: bad cell {cell!r}") from None
            if "." in cell and len(cell.split(".")[1]) > 2:
                raise DataError(f"fixture z={z} line {lineno}: more than 2 decimals in {cell!r}")
        rows.append(tuple(cells))
    if len(rows) != len(R_AXIS):
        raise DataError(f"fixture z={z}: expected {len(R_AXIS)} rows, got {len(rows)}")
    return ReferenceFixture(z=z, cells=tuple(rows))


def fixture_text(z):
    return resources.files("dsrisk.fixtures").joinpath(f"fixture_z{z}.txt").read_text()


def load_fixture(z):
    """Reference table for ``z`` in 1..9."""
    if z not in FIXTURE_Z:
        raise DataError(f"no reference table for z={z}; fixtures cover z=1..9")
    return parse_fixture(z, fixture_text(z))


def compare_fixture(grid, fixture, tolerance=DEFAULT_TOLERANCE):
    """List every cell where the computed percent and the printed value differ by more than ``tolerance``."""
    if grid.z != fixture.z:
        raise StructureError(f"table z={grid.z} compared with fixture z={fixture.z}")
    if not (np.allclose(grid.r_axis, fixture.r_axis) and np.allclose(grid.q_axis, fixture.q_axis)):
        raise StructureError("table axes differ from the fixture axes")
    printed = fixture.values()
    delta = grid.cells - printed
    report = ComparisonReport(
        z=grid.z,
        tolerance=tolerance,
        compared=delta.size,
        max_abs_delta=float(np.max(np.abs(delta))),
    )
    for i, j in zip(*np.nonzero(np.abs(delta) > tolerance)):
        report.mismatches.append(
            (grid.r_axis[i], grid.q_axis[j], float(grid.cells[i, j]), fixture.cells[i][j], float(delta[i, j]))
        )
    return report


def _rows(grid):
    header = ["r\\q"] + [format_axis(q) for q in grid.q_axis]
    body = [
        [format_axis(r)] + [format_cell(v) for v in grid.cells[i]]
        for i, r in enumerate(grid.r_axis)
    ]
    return header, body


def emit(grid, fmt="csv"):
    """Serialize a table as ``csv``, ``markdown`` or ``latex`` text."""
    header, body = _rows(grid)
    if fmt == "csv":
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(body)
        return out.getvalue()
    if fmt == "markdown":
        lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
        lines += ["| " + " | ".join(row) + " |" for row in body]
        return "\n".join(lines) + "\n"
    if fmt == "latex":
        cols = "|c||" + "c|" * len(grid.q_axis)
        lines = [
            "\\begin{array}{%s}" % cols,
            "\\hline",
            " & ".join(["r \\backslash q"] + header[1:]) + "\\\\ \\hline \\hline",
        ]
        for k, row in enumerate(body):
            end = "\\\\" if k == len(body) - 1 else "\\\\ \\hline"
            lines.append(" & ".join(row) + end)
        lines += ["\\hline", "\\end{array}"]
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown table format {fmt!r}; choose from {', '.join(FORMATS)}")


def parse_csv(text):
    """Read back ``emit(grid, 'csv')``; returns (r_axis, q_axis, cells)."""
    rows = list(csv.reader(io.StringIO(text)))
    q_axis = tuple(float(v) for v in rows[0][1:])
    r_axis = tuple(float(row[0]) for row in rows[1:])
    cells = np.array([[float(v) for v in row[1:]] for row in rows[1:]])
    return r_axis, q_axis, cells
