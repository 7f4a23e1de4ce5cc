"""Labeled contingency tables and their CSV readers/writers.

Two layouts are understood:

* long: one ``(row, column, value)`` record per line, with named fields;
* matrix: a header of column labels followed by one labeled line per row.

Parsing only checks structure. :func:`validate` certifies the numeric
invariants (non-negative cells, positive margins, at least 2x2).
"""

from __future__ import annotations

import csv
import io
import math
import re
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    BadValue,
    DuplicateLabel,
    EmptyInput,
    InputError,
    MissingField,
    NegativeEntry,
    RaggedRow,
    TooSmall,
    ZeroMargin,
)

__all__ = [
    "ContingencyTable",
    "parse_long_csv",
    "parse_matrix_csv",
    "validate",
    "to_long_csv",
    "to_matrix_csv",
    "format_value",
]

# plain or scientific notation; no thousands separators, underscores, inf or nan
_NUMBER = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")


@dataclass(frozen=True, eq=False)
class ContingencyTable:
    """Immutable labeled two-way table of non-negative reals.

    ``counts`` is stored as a read-only float64 array of shape
    ``(len(row_labels), len(col_labels))``.
    """

    row_labels: tuple[str, ...]
    col_labels: tuple[str, ...]
    counts: np.ndarray

    def __init__(self, row_labels: Sequence[str], col_labels: Sequence[str], counts):
        counts = np.array(counts, dtype=np.float64)
        row_labels = tuple(str(s) for s in row_labels)
        col_labels = tuple(str(s) for s in col_labels)
        if counts.ndim != 2 or counts.shape != (len(row_labels), len(col_labels)):
            raise InputError(
                f"counts shape {counts.shape} does not match "
                f"{len(row_labels)} row and {len(col_labels)} column labels")
        _check_labels(row_labels, "row")
        _check_labels(col_labels, "column")
        counts.setflags(write=False)
        object.__setattr__(self, "row_labels", row_labels)
        object.__setattr__(self, "col_labels", col_labels)
        object.__setattr__(self, "counts", counts)

    @property
    def shape(self) -> tuple[int, int]:
        return self.counts.shape

    @property
    def grand_total(self) -> float:
        return math.fsum(self.counts.ravel())

    @property
    def row_totals(self) -> np.ndarray:
        return np.array([math.fsum(row) for row in self.counts])

    @property
    def col_totals(self) -> np.ndarray:
        return np.array([math.fsum(col) for col in self.counts.T])

    def transpose(self) -> "ContingencyTable":
        return ContingencyTable(self.col_labels, self.row_labels, self.counts.T)

    def scaled(self, factor: float) -> "ContingencyTable":
        return ContingencyTable(self.row_labels, self.col_labels, self.counts * factor)

    def __eq__(self, other):
        if not isinstance(other, ContingencyTable):
            return NotImplemented
        return (self.row_labels == other.row_labels
                and self.col_labels == other.col_labels
                and np.array_equal(self.counts, other.counts))

    def __hash__(self):
        return hash((self.row_labels, self.col_labels, self.counts.tobytes()))

    def __repr__(self):
        a, b = self.shape
        return f"ContingencyTable({a}x{b}, total={self.grand_total:g})"


def _check_labels(labels, axis):
    seen = set()
    for label in labels:
        if not label:
            raise InputError(f"empty {axis} label")
        if label in seen:
            raise DuplicateLabel(label, axis)
        seen.add(label)


def _parse_number(text: str, line: int) -> float:
    s = text.strip()
    if not _NUMBER.fullmatch(s):
        raise BadValue(text, line)
    return float(s)


def _reader(text: str):
    if text.startswith("\ufeff"):
        text = text[1:]
    return csv.reader(io.StringIO(text, newline=""))


def _rows(reader):
    """Yield ``(line_number, cells)``, skipping blank lines."""
    for cells in reader:
        if not cells or all(not c.strip() for c in cells):
            continue
        yield reader.line_num, cells


def parse_long_csv(text: str, row_field: str, col_field: str, value_field: str) -> ContingencyTable:
    """Build a table from long-format CSV.

    Duplicate ``(row, col)`` pairs are summed and absent pairs are zero.
    Labels keep their order of first appearance.
    """
    rows = _rows(_reader(text))
    try:
        _, header = next(rows)
    except StopIteration:
        raise EmptyInput() from None
    header = [h.strip() for h in header]
    idx = []
    for field in (row_field, col_field, value_field):
        if field not in header:
            raise MissingField(field)
        idx.append(header.index(field))
    need = max(idx) + 1

    row_index: dict[str, int] = {}
    col_index: dict[str, int] = {}
    cells: dict[tuple[int, int], list[float]] = {}
    for line, rec in rows:
        if len(rec) < need:
            raise RaggedRow(line, len(header), len(rec))
        r, c, v = (rec[i] for i in idx)
        r, c = r.strip(), c.strip()
        if not r or not c:
            raise BadValue(r if not r else c, line, "empty label")
        value = _parse_number(v, line)
        if value < 0:
            raise BadValue(v, line, "negative")
        i = row_index.setdefault(r, len(row_index))
        j = col_index.setdefault(c, len(col_index))
        cells.setdefault((i, j), []).append(value)
    if not cells:
        raise EmptyInput()

    counts = np.zeros((len(row_index), len(col_index)))
    for (i, j), values in cells.items():
        counts[i, j] = math.fsum(values)
    return ContingencyTable(list(row_index), list(col_index), counts)


def parse_matrix_csv(text: str) -> ContingencyTable:
    """Build a table from matrix-layout CSV.

    The header's first cell is blank (or ``rows``); the remaining header cells
    are column labels. Each following line is a row label and one value per
    column.
    """
    rows = _rows(_reader(text))
    try:
        _, header = next(rows)
    except StopIteration:
        raise EmptyInput() from None
    corner = header[0].strip()
    if corner not in ("", "rows"):
        raise InputError(f"header must start with an empty cell or 'rows', got {corner!r}")
    col_labels = [h.strip() for h in header[1:]]
    _check_labels(col_labels, "column")

    row_labels: list[str] = []
    data: list[list[float]] = []
    seen: set[str] = set()
    for line, rec in rows:
        if len(rec) != len(header):
            raise RaggedRow(line, len(header), len(rec))
        label = rec[0].strip()
        if not label:
            raise BadValue(rec[0], line, "empty label")
        if label in seen:
            raise DuplicateLabel(label, "row")
        seen.add(label)
        row_labels.append(label)
        data.append([_parse_number(v, line) for v in rec[1:]])
    if not data:
        raise EmptyInput()
    return ContingencyTable(row_labels, col_labels, np.array(data).reshape(len(data), len(col_labels)))


def validate(table: ContingencyTable) -> ContingencyTable:
    """Return ``table`` unchanged if it is a usable contingency table.

    Raises
    ------
    TooSmall
        Fewer than two rows or two columns.
    NegativeEntry
        Some cell is negative (or not finite).
    ZeroMargin
        Some row or column sums to zero.
    """
    a, b = table.shape
    if a < 2 or b < 2:
        raise TooSmall((a, b))
    k = table.counts
    bad = ~np.isfinite(k) | (k < 0)
    if bad.any():
        i, j = map(int, np.argwhere(bad)[0])
        raise NegativeEntry(table.row_labels[i], table.col_labels[j], float(k[i, j]))
    for label, total in zip(table.row_labels, table.row_totals):
        if total <= 0:
            raise ZeroMargin(label, "row")
    for label, total in zip(table.col_labels, table.col_totals):
        if total <= 0:
            raise ZeroMargin(label, "column")
    return table


def format_value(x: float) -> str:
    """Decimal text with 12 significant digits."""
    return format(float(x), ".12g")


def _csv_text(records) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerows(records)
    return out.getvalue()


def to_matrix_csv(table: ContingencyTable) -> str:
    records = [[""] + list(table.col_labels)]
    for label, row in zip(table.row_labels, table.counts):
        records.append([label] + [format_value(v) for v in row])
    return _csv_text(records)


def to_long_csv(table: ContingencyTable, row_field="row", col_field="column",
                value_field="value") -> str:
    records = [[row_field, col_field, value_field]]
    for i, r in enumerate(table.row_labels):
        for j, c in enumerate(table.col_labels):
            records.append([r, c, format_value(table.counts[i, j])])
    return _csv_text(records)
