"""Pearson chi-square statistic and signed per-cell contributions."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NonFinite
from .table import ContingencyTable, validate

__all__ = [
    "ResidualTable",
    "residuals",
    "chi_square_upper_tail",
    "regularized_gamma_q",
    "format_p",
]

_EPS = 1e-16
_MAX_ITER = 100_000
_FPMIN = 1e-300


@dataclass(frozen=True, eq=False)
class ResidualTable:
    """Expected counts and signed chi-square contributions of a table.

    ``signed_cells[i, j]`` is ``(n_ij - E_ij)**2 / E_ij`` carrying the sign of
    ``n_ij - E_ij``.
    """

    row_labels: tuple[str, ...]
    col_labels: tuple[str, ...]
    observed: np.ndarray
    expected: np.ndarray
    signed_cells: np.ndarray
    statistic: float
    df: int
    p_value: float


def residuals(table: ContingencyTable) -> ResidualTable:
    validate(table)
    n = table.counts
    total = table.grand_total
    expected = np.outer(table.row_totals, table.col_totals) / total
    diff = n - expected
    cells = np.sign(diff) * diff ** 2 / expected
    statistic = math.fsum(np.abs(cells).ravel())
    a, b = table.shape
    df = (a - 1) * (b - 1)
    for arr in (expected, cells):
        arr.setflags(write=False)
    return ResidualTable(
        row_labels=table.row_labels,
        col_labels=table.col_labels,
        observed=table.counts,
        expected=expected,
        signed_cells=cells,
        statistic=statistic,
        df=df,
        p_value=chi_square_upper_tail(statistic, df),
    )


def chi_square_upper_tail(x: float, df: int) -> float:
    """P(X >= x) for X chi-square distributed with ``df`` degrees of freedom."""
    if not (math.isfinite(x) and math.isfinite(df)):
        raise NonFinite("chi-square argument")
    if df < 1:
        raise ValueError(f"degrees of freedom must be >= 1, got {df}")
    if x < 0:
        raise ValueError(f"chi-square value must be >= 0, got {x}")
    return regularized_gamma_q(df / 2.0, x / 2.0)


def _log_prefactor(a, x):
    return a * math.log(x) - x - math.lgamma(a)


def _series_p(a, x):
    # P(a, x) = x^a e^-x / Gamma(a+1) * sum_n x^n / ((a+1)...(a+n))
    term = 1.0 / a
    total = term
    ap = a
    for _ in range(_MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    lp = _log_prefactor(a, x)
    return 0.0 if lp < -745 else total * math.exp(lp)


def _continued_fraction_q(a, x):
    # modified Lentz evaluation of the Legendre continued fraction for Q(a, x)
    b = x + 1.0 - a
    c = 1.0 / _FPMIN
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = b + an / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    lp = _log_prefactor(a, x)
    return 0.0 if lp < -745 else math.exp(lp) * h


def regularized_gamma_q(a: float, x: float) -> float:
    """Regularized upper incomplete gamma function Q(a, x); underflow gives 0."""
    if x <= 0:
        return 1.0
    if x < a + 1.0:
        return min(1.0, max(0.0, 1.0 - _series_p(a, x)))
    return min(1.0, max(0.0, _continued_fraction_q(a, x)))


def format_p(p: float) -> str:
    return "<0.001" if p < 0.001 else f"{p:.3f}"
