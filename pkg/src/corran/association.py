"""Per-row strongest and weakest associations from signed chi-square cells.

For each row the column(s) holding the largest signed value are its strongest
association and those holding the smallest its weakest. Ties are kept in full,
in column order.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .residuals import ResidualTable

__all__ = [
    "RowAssociation",
    "AssociationReport",
    "extract",
    "extract_cells",
    "flag_positive_only",
    "to_csv",
    "parse_csv",
    "cause_table",
    "NO_POSITIVE",
    "NO_NEGATIVE",
]

NO_POSITIVE = "no positive association"
NO_NEGATIVE = "no negative association"
_SEP = ";"
CSV_HEADER = ["row_label", "strongest_cols", "strongest_value", "weakest_cols", "weakest_value"]


@dataclass(frozen=True)
class RowAssociation:
    """Extremes of one row.

    Tied columns share one value, so a single value is stored per side. An
    empty column tuple means the side was suppressed by
    :func:`flag_positive_only`.
    """

    row_label: str
    strongest: tuple[str, ...]
    strongest_value: float
    weakest: tuple[str, ...]
    weakest_value: float

    @property
    def has_positive(self) -> bool:
        return bool(self.strongest)

    @property
    def has_negative(self) -> bool:
        return bool(self.weakest)


@dataclass(frozen=True)
class AssociationReport:
    col_labels: tuple[str, ...] = field(compare=False)
    rows: tuple[RowAssociation, ...]

    def strongest_by_column(self) -> dict[str, list[str]]:
        """Column label -> rows whose strongest cell lies in that column."""
        return self._index("strongest")

    def weakest_by_column(self) -> dict[str, list[str]]:
        return self._index("weakest")

    def _index(self, side):
        index: dict[str, list[str]] = {c: [] for c in self.col_labels}
        for rec in self.rows:
            for col in getattr(rec, side):
                index[col].append(rec.row_label)
        return index


def extract_cells(row_labels: Sequence[str], col_labels: Sequence[str], cells) -> AssociationReport:
    """Report built directly from a matrix of signed values."""
    cells = np.asarray(cells, dtype=np.float64)
    col_labels = tuple(col_labels)
    rows = []
    for label, values in zip(row_labels, cells):
        hi = values.max()
        lo = values.min()
        rows.append(RowAssociation(
            row_label=label,
            strongest=tuple(col_labels[j] for j in np.flatnonzero(values == hi)),
            strongest_value=float(hi),
            weakest=tuple(col_labels[j] for j in np.flatnonzero(values == lo)),
            weakest_value=float(lo),
        ))
    return AssociationReport(col_labels, tuple(rows))


def extract(res: ResidualTable) -> AssociationReport:
    return extract_cells(res.row_labels, res.col_labels, res.signed_cells)


def flag_positive_only(report: AssociationReport) -> AssociationReport:
    """Suppress strongest entries that are not positive and weakest entries
    that are not negative."""
    rows = []
    for rec in report.rows:
        if rec.strongest_value <= 0:
            rec = replace(rec, strongest=())
        if rec.weakest_value >= 0:
            rec = replace(rec, weakest=())
        rows.append(rec)
    return AssociationReport(report.col_labels, tuple(rows))


def to_csv(report: AssociationReport) -> str:
    """One line per row; tied columns are joined with ``;``.

    Values use ``repr`` so that :func:`parse_csv` restores them exactly.
    """
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for rec in report.rows:
        w.writerow([
            rec.row_label,
            _SEP.join(rec.strongest),
            repr(rec.strongest_value),
            _SEP.join(rec.weakest),
            repr(rec.weakest_value),
        ])
    return out.getvalue()


def parse_csv(text: str, col_labels: Sequence[str] | None = None) -> AssociationReport:
    """Inverse of :func:`to_csv`.

    Without ``col_labels`` the column order is taken from first appearance,
    so columns never selected by any row are absent from the indexes.
    """
    reader = csv.reader(io.StringIO(text, newline=""))
    header = next(reader)
    if header != CSV_HEADER:
        raise ValueError(f"unexpected association header {header!r}")
    rows = []
    for rec in reader:
        if not rec:
            continue
        label, s_cols, s_val, w_cols, w_val = rec
        rows.append(RowAssociation(
            row_label=label,
            strongest=tuple(s_cols.split(_SEP)) if s_cols else (),
            strongest_value=float(s_val),
            weakest=tuple(w_cols.split(_SEP)) if w_cols else (),
            weakest_value=float(w_val),
        ))
    if col_labels is None:
        seen = dict.fromkeys(c for r in rows for c in r.strongest + r.weakest)
        col_labels = tuple(seen)
    return AssociationReport(tuple(col_labels), tuple(rows))


def cause_table(report: AssociationReport, side: str = "strongest") -> list[tuple[str, str]]:
    """``(column label, comma-joined row labels)`` pairs for columns with at
    least one row, in column order."""
    index = report.strongest_by_column() if side == "strongest" else report.weakest_by_column()
    return [(col, ", ".join(rows)) for col, rows in index.items() if rows]
