"""Correspondence analysis of a validated contingency table.

The scaled matrix is built uncentered, ``A = D_r^-1/2 P D_c^-1/2``, so its
leading singular triple is the trivial axis: singular value 1 with vectors
``sqrt(r)`` and ``sqrt(c)``. :func:`fit` checks for that axis, removes it, and
keeps the remaining ``min(a, b) - 1`` axes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import TrivialAxisMissing, UnknownNormalization
from .svd import svd
from .table import ContingencyTable, validate

__all__ = [
    "Normalization",
    "CorrespondenceModel",
    "InertiaRecord",
    "proportion_matrix",
    "masses",
    "scaled_matrix",
    "fit",
    "inertia_summary",
    "coordinates",
]

TRIVIAL_TOL = 1e-8
# axes at or below this singular value carry no inertia; their directions are
# arbitrary, so their standard coordinates are reported as zero
NULL_AXIS_TOL = 1e-12


class Normalization(str, Enum):
    PRINCIPAL = "principal"
    STANDARD = "standard"
    SYMMETRIC = "symmetric"

    @classmethod
    def parse(cls, value) -> "Normalization":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise UnknownNormalization(value) from None


@dataclass(frozen=True, eq=False)
class CorrespondenceModel:
    """Fitted correspondence analysis.

    Arrays are indexed ``[point, axis]`` with axes in descending order of
    singular value; ``row_distances``/``col_distances`` are chi-square
    distances of each profile from the average profile.
    """

    row_labels: tuple[str, ...]
    col_labels: tuple[str, ...]
    grand_total: float
    row_masses: np.ndarray
    col_masses: np.ndarray
    singular_values: np.ndarray
    row_std: np.ndarray
    col_std: np.ndarray
    row_distances: np.ndarray
    col_distances: np.ndarray

    @property
    def n_axes(self) -> int:
        return len(self.singular_values)

    @property
    def principal_inertias(self) -> np.ndarray:
        return self.singular_values ** 2

    @property
    def total_inertia(self) -> float:
        return math.fsum(self.principal_inertias)

    @property
    def row_principal(self) -> np.ndarray:
        return self.row_std * self.singular_values

    @property
    def col_principal(self) -> np.ndarray:
        return self.col_std * self.singular_values


@dataclass(frozen=True)
class InertiaRecord:
    dimension: int
    singular_value: float
    inertia: float
    proportion: float
    cumulative: float


def proportion_matrix(table: ContingencyTable) -> np.ndarray:
    """Cells divided by the grand total."""
    return table.counts / table.grand_total


def masses(p: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Row and column sums of the proportion matrix."""
    p = np.asarray(p, dtype=np.float64)
    r = np.array([math.fsum(row) for row in p])
    c = np.array([math.fsum(col) for col in p.T])
    return r, c


def scaled_matrix(p, r, c) -> np.ndarray:
    """``p_ij / sqrt(r_i c_j)``."""
    p = np.asarray(p, dtype=np.float64)
    return p / np.sqrt(np.asarray(r))[:, None] / np.sqrt(np.asarray(c))[None, :]


def _profile_distances(p, r, c) -> np.ndarray:
    """Chi-square distance of each row profile from the column masses."""
    profiles = p / r[:, None]
    return np.sqrt(np.sum((profiles - c[None, :]) ** 2 / c[None, :], axis=1))


def fit(table: ContingencyTable) -> CorrespondenceModel:
    """Run correspondence analysis on ``table``.

    Raises
    ------
    TrivialAxisMissing
        The scaled matrix's leading singular value is not 1 (within 1e-8).
    ConvergenceFailure, NonFinite
        Propagated from the SVD.
    """
    validate(table)
    p = proportion_matrix(table)
    r, c = masses(p)
    a = scaled_matrix(p, r, c)
    dec = svd(a)
    sv = dec.singular_values
    if abs(sv[0] - 1.0) > TRIVIAL_TOL:
        raise TrivialAxisMissing(float(sv[0]))

    left, sigma, right = _drop_trivial(a, dec.left, sv, dec.right, np.sqrt(r), np.sqrt(c))
    row_std = left / np.sqrt(r)[:, None]
    col_std = right / np.sqrt(c)[:, None]
    null = sigma <= NULL_AXIS_TOL
    row_std[:, null] = 0.0
    col_std[:, null] = 0.0

    arrays = dict(
        row_masses=r,
        col_masses=c,
        singular_values=sigma,
        row_std=row_std,
        col_std=col_std,
        row_distances=_profile_distances(p, r, c),
        col_distances=_profile_distances(p.T, c, r),
    )
    for arr in arrays.values():
        arr.setflags(write=False)
    return CorrespondenceModel(
        row_labels=table.row_labels,
        col_labels=table.col_labels,
        grand_total=table.grand_total,
        **arrays,
    )


def _drop_trivial(a, left, sv, right, sqrt_r, sqrt_c):
    """Remove the trivial axis from a thin SVD of the uncentered matrix.

    When several singular values equal 1 (a block-diagonal table) the trivial
    direction is not an individual singular vector. It is then projected out
    of the degenerate left subspace and the remaining directions rebuilt.
    """
    cluster = int(np.sum(np.abs(sv - 1.0) <= TRIVIAL_TOL))
    if cluster == 1:
        b0 = left[:, 0]
        sign = 1.0 if b0 @ sqrt_r >= 0 else -1.0
        if np.max(np.abs(sign * b0 - sqrt_r)) > 1e-7:
            raise TrivialAxisMissing(float(sv[0]))
        return left[:, 1:], sv[1:], right[:, 1:]

    sub = left[:, :cluster]
    resid = sub - np.outer(sqrt_r, sqrt_r @ sub)
    basis = svd(resid).left[:, :cluster - 1]
    image = a.T @ basis
    sigma_c = np.linalg.norm(image, axis=0)
    new_left = np.hstack([basis, left[:, cluster:]])
    new_right = np.hstack([image / sigma_c, right[:, cluster:]])
    sigma = np.concatenate([sigma_c, sv[cluster:]])
    for k in range(cluster - 1):
        pivot = int(np.argmax(np.abs(new_left[:, k])))
        if new_left[pivot, k] < 0:
            new_left[:, k] *= -1
            new_right[:, k] *= -1
    return new_left, sigma, new_right


def inertia_summary(model: CorrespondenceModel) -> list[InertiaRecord]:
    """Per-axis singular value, inertia, share of total inertia and running share.

    A table with zero total inertia (exact independence) reports zero shares.
    """
    total = model.total_inertia
    records = []
    running = 0.0
    for k, (sv, inertia) in enumerate(zip(model.singular_values, model.principal_inertias), 1):
        share = float(inertia / total) if total > 0 else 0.0
        running += share
        records.append(InertiaRecord(k, float(sv), float(inertia), share, running))
    return records


def coordinates(model: CorrespondenceModel, normalization="symmetric") -> tuple[np.ndarray, np.ndarray]:
    """Row and column coordinates under ``normalization``.

    ``principal`` scales standard coordinates by the singular value per axis,
    ``symmetric`` by its square root, ``standard`` leaves them unscaled.
    """
    norm = Normalization.parse(normalization)
    if norm is Normalization.PRINCIPAL:
        return model.row_principal, model.col_principal
    if norm is Normalization.STANDARD:
        return model.row_std.copy(), model.col_std.copy()
    root = np.sqrt(model.singular_values)
    return model.row_std * root, model.col_std * root
