"""Biplot construction and the text outputs: SVG, CSV and a markdown report.

Every emitter is a pure function of its inputs and produces identical bytes
for identical inputs.
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass
from xml.sax.saxutils import escape

import numpy as np

from .association import NO_NEGATIVE, NO_POSITIVE, AssociationReport, flag_positive_only
from .ca import CorrespondenceModel, Normalization, coordinates, inertia_summary
from .errors import BadDims, InputMismatch
from .residuals import ResidualTable, format_p
from .table import format_value

__all__ = [
    "BiplotDocument",
    "biplot",
    "emit_svg",
    "coordinates_csv",
    "parse_coordinates_csv",
    "summary_csv",
    "residuals_csv",
    "emit_report",
]

Point = tuple[str, float, float]


@dataclass(frozen=True)
class BiplotDocument:
    normalization: Normalization
    dims: tuple[int, int]
    row_points: tuple[Point, ...]
    col_points: tuple[Point, ...]
    axis_captions: tuple[str, str]


def biplot(model: CorrespondenceModel, normalization="symmetric", dims=(1, 2)) -> BiplotDocument:
    """Row and column points on two axes (1-based), with captions giving each
    axis's share of inertia."""
    norm = Normalization.parse(normalization)
    dims = tuple(int(d) for d in dims)
    k = model.n_axes
    if len(dims) != 2 or dims[0] == dims[1] or not all(1 <= d <= k for d in dims):
        raise BadDims(dims, k)
    rows, cols = coordinates(model, norm)
    i, j = dims[0] - 1, dims[1] - 1
    summary = inertia_summary(model)
    captions = tuple(f"Dimension {d} ({100 * summary[d - 1].proportion:.1f}%)" for d in dims)
    return BiplotDocument(
        normalization=norm,
        dims=dims,
        row_points=tuple((lab, float(x), float(y)) for lab, x, y in zip(model.row_labels, rows[:, i], rows[:, j])),
        col_points=tuple((lab, float(x), float(y)) for lab, x, y in zip(model.col_labels, cols[:, i], cols[:, j])),
        axis_captions=captions,
    )


# SVG layout, in pixels
_PLOT = 600.0
_PAD = 60.0
_ROW_COLOR = "#1f4e9c"
_COL_COLOR = "#c0392b"


# characters XML 1.0 cannot carry, even escaped
_XML_ILLEGAL = re.compile("[\x00-\x08\x0b\x0c\x0e-\x1f\ud800-\udfff\ufffe\uffff]")


def _text(s: str) -> str:
    return escape(_XML_ILLEGAL.sub("\ufffd", s))


def _num(v: float) -> str:
    s = f"{v:.2f}"
    return "0.00" if s == "-0.00" else s


def emit_svg(doc: BiplotDocument) -> str:
    """Render the biplot as a standalone SVG 1.1 document.

    Rows are circles and columns are triangles. Both axes share one scale so
    that distances on the page are undistorted; the view covers the data
    extent and the origin, widened by 10% on each side.
    """
    pts = doc.row_points + doc.col_points
    xs = [p[1] for p in pts] + [0.0]
    ys = [p[2] for p in pts] + [0.0]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    xspan = (x1 - x0) or 1.0
    yspan = (y1 - y0) or 1.0
    x0, x1 = x0 - 0.1 * xspan, x1 + 0.1 * xspan
    y0, y1 = y0 - 0.1 * yspan, y1 + 0.1 * yspan
    scale = _PLOT / max(x1 - x0, y1 - y0)
    width = (x1 - x0) * scale + 2 * _PAD
    height = (y1 - y0) * scale + 2 * _PAD

    def px(x):
        return _PAD + (x - x0) * scale

    def py(y):
        return _PAD + (y1 - y) * scale

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_num(width)}" height="{_num(height)}" viewBox="0 0 {_num(width)} {_num(height)}">',
        f"<title>Row and column points ({_text(doc.normalization.value)} normalization)</title>",
        f'<rect x="0" y="0" width="{_num(width)}" height="{_num(height)}" fill="white"/>',
        f'<g class="axes" stroke="#888888" stroke-width="1" stroke-dasharray="4 3">',
        f'<line x1="{_num(px(x0))}" y1="{_num(py(0))}" x2="{_num(px(x1))}" y2="{_num(py(0))}"/>',
        f'<line x1="{_num(px(0))}" y1="{_num(py(y0))}" x2="{_num(px(0))}" y2="{_num(py(y1))}"/>',
        "</g>",
        f'<text class="caption" x="{_num(width / 2)}" y="{_num(height - _PAD / 3)}" '
        f'text-anchor="middle" font-family="sans-serif" font-size="13">{_text(doc.axis_captions[0])}</text>',
        f'<text class="caption" x="{_num(_PAD / 3)}" y="{_num(height / 2)}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13" transform="rotate(-90 {_num(_PAD / 3)} {_num(height / 2)})">'
        f"{_text(doc.axis_captions[1])}</text>",
        f'<g class="rows" fill="{_ROW_COLOR}">',
    ]
    for label, x, y in doc.row_points:
        out.append(f'<circle cx="{_num(px(x))}" cy="{_num(py(y))}" r="3.5"/>')
    out.append("</g>")
    out.append(f'<g class="columns" fill="{_COL_COLOR}">')
    for label, x, y in doc.col_points:
        cx, cy = px(x), py(y)
        out.append(
            f'<path d="M {_num(cx)} {_num(cy - 5)} L {_num(cx + 4.5)} {_num(cy + 3.5)} '
            f'L {_num(cx - 4.5)} {_num(cy + 3.5)} Z"/>')
    out.append("</g>")
    out.append('<g class="labels" font-family="sans-serif" font-size="10">')
    for color, group in ((_ROW_COLOR, doc.row_points), (_COL_COLOR, doc.col_points)):
        for label, x, y in group:
            out.append(
                f'<text class="label" x="{_num(px(x) + 6)}" y="{_num(py(y) - 4)}" '
                f'fill="{color}">{_text(label)}</text>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _csv(records) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(records)
    return buf.getvalue()


def coordinates_csv(model: CorrespondenceModel, normalization="symmetric") -> str:
    """Coordinates on every axis, rows first then columns."""
    rows, cols = coordinates(model, normalization)
    header = ["kind", "label", "mass"] + [f"dim{k}" for k in range(1, model.n_axes + 1)]
    records = [header]
    for kind, labels, mass, coords in (("row", model.row_labels, model.row_masses, rows),
                                      ("column", model.col_labels, model.col_masses, cols)):
        for label, m, xs in zip(labels, mass, coords):
            records.append([kind, label, format_value(m)] + [format_value(v) for v in xs])
    return _csv(records)


def parse_coordinates_csv(text: str) -> dict[str, tuple[list[str], np.ndarray]]:
    """Inverse of :func:`coordinates_csv`: ``{"row": (labels, coords), "column": ...}``."""
    reader = csv.reader(io.StringIO(text, newline=""))
    header = next(reader)
    n_axes = len(header) - 3
    groups: dict[str, tuple[list[str], list[list[float]]]] = {"row": ([], []), "column": ([], [])}
    for rec in reader:
        if not rec:
            continue
        labels, values = groups[rec[0]]
        labels.append(rec[1])
        values.append([float(v) for v in rec[3:]])
    return {kind: (labels, np.array(values, dtype=float).reshape(len(labels), n_axes))
            for kind, (labels, values) in groups.items()}


def summary_csv(model: CorrespondenceModel) -> str:
    records = [["dimension", "singular_value", "inertia", "proportion", "cumulative"]]
    for rec in inertia_summary(model):
        records.append([rec.dimension] + [format_value(v) for v in
                                          (rec.singular_value, rec.inertia, rec.proportion, rec.cumulative)])
    return _csv(records)


def residuals_csv(res: ResidualTable) -> str:
    records = [["row", "column", "observed", "expected", "signed_chi_square"]]
    for i, r in enumerate(res.row_labels):
        for j, c in enumerate(res.col_labels):
            records.append([r, c, format_value(res.observed[i, j]), format_value(res.expected[i, j]),
                            format_value(res.signed_cells[i, j])])
    return _csv(records)


def _fixed(x: float, places: int) -> str:
    s = f"{x:.{places}f}"
    return s[1:] if s.startswith("-") and float(s) == 0 else s


def _md_cell(text: str) -> str:
    return text.replace("|", "\\|")


def emit_report(model: CorrespondenceModel, res: ResidualTable, assoc: AssociationReport,
                display_dims: int | None = None) -> str:
    """Markdown report: inertia summary, chi-square test, associations and the
    signed residual matrix.

    ``display_dims`` truncates the summary table; the shares are still relative
    to the total over all axes.
    """
    if (model.row_labels != res.row_labels or model.col_labels != res.col_labels
            or tuple(r.row_label for r in assoc.rows) != res.row_labels):
        raise InputMismatch("model, residuals and associations come from different tables")
    assoc = flag_positive_only(assoc)
    a, b = len(res.row_labels), len(res.col_labels)
    summary = inertia_summary(model)
    shown = summary if display_dims is None else summary[:max(0, display_dims)]

    lines = [
        "# Correspondence analysis",
        "",
        f"Table: {a} rows x {b} columns, grand total {_fixed(model.grand_total, 3)}",
        f"Total inertia: {_fixed(model.total_inertia, 6)} over {model.n_axes} "
        f"dimension{'s' if model.n_axes != 1 else ''}",
        "",
        "## Summary",
        "",
        "```",
        "Dim  SV     Inert  Prop   Cum",
    ]
    for rec in shown:
        lines.append("  ".join([
            f"{rec.dimension:>3d}",
            _fixed(rec.singular_value, 3),
            _fixed(rec.inertia, 3),
            _fixed(rec.proportion, 3),
            _fixed(rec.cumulative, 3),
        ]))
    lines += [
        "```",
        "",
        "SV: singular value. Inert: principal inertia. Prop: proportion of inertia. "
        "Cum: cumulative proportion.",
        "",
        f"Chi-square = {_fixed(res.statistic, 3)} ; p-value = {format_p(res.p_value)}",
        f"Degrees of freedom = {res.df}",
        "",
        "## Associations",
        "",
        "| Row | Strongest | Signed chi-square | Weakest | Signed chi-square |",
        "| --- | --- | ---: | --- | ---: |",
    ]
    for rec in assoc.rows:
        strong = ", ".join(rec.strongest) if rec.strongest else NO_POSITIVE
        weak = ", ".join(rec.weakest) if rec.weakest else NO_NEGATIVE
        lines.append(f"| {_md_cell(rec.row_label)} | {_md_cell(strong)} | {_fixed(rec.strongest_value, 2)} "
                     f"| {_md_cell(weak)} | {_fixed(rec.weakest_value, 2)} |")

    for title, index in (("Highly associated rows by column", assoc.strongest_by_column()),
                         ("Less associated rows by column", assoc.weakest_by_column())):
        lines += ["", f"### {title}", ""]
        filled = [(col, rows) for col, rows in index.items() if rows]
        if not filled:
            lines.append("None.")
            continue
        lines += ["| Column | Rows |", "| --- | --- |"]
        for col, rows in filled:
            lines.append(f"| {_md_cell(col)} | {_md_cell(', '.join(rows))} |")

    lines += [
        "",
        "## Signed chi-square residuals",
        "",
        "| | " + " | ".join(_md_cell(c) for c in res.col_labels) + " |",
        "| --- |" + " ---: |" * b,
    ]
    for label, row in zip(res.row_labels, res.signed_cells):
        lines.append(f"| {_md_cell(label)} | " + " | ".join(_fixed(v, 2) for v in row) + " |")
    return "\n".join(lines) + "\n"
