"""Thin singular value decomposition by one-sided (Hestenes) Jacobi rotations.

Columns of a working copy of the matrix are rotated pairwise in a fixed
cyclic order until every pair is numerically orthogonal. The column norms are
then the singular values, the normalized columns the left vectors, and the
accumulated rotations the right vectors. The fixed sweep order makes the result
a deterministic function of the input bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceFailure, NonFinite

__all__ = ["SvdResult", "svd", "MAX_SWEEPS"]

MAX_SWEEPS = 60
# pairs whose cosine is below this are treated as orthogonal
_ORTH_TOL = 1e-15


@dataclass(frozen=True)
class SvdResult:
    """``matrix == left @ diag(singular_values) @ right.T``.

    ``left`` is a x q and ``right`` is b x q with q = min(a, b); both have
    orthonormal columns. Singular values are non-negative and descending.
    """

    left: np.ndarray
    singular_values: np.ndarray
    right: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.left * self.singular_values) @ self.right.T


def svd(matrix, max_sweeps: int = MAX_SWEEPS) -> SvdResult:
    """Thin SVD of a real a x b matrix.

    Within each singular pair the largest-magnitude entry of the left vector
    (lowest index on ties) is made non-negative; the right vector follows.

    Raises
    ------
    NonFinite
        The matrix holds NaN or infinity.
    ConvergenceFailure
        Columns were still not orthogonal after ``max_sweeps`` sweeps.
    """
    a = np.array(matrix, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise ValueError(f"expected a non-empty 2-D matrix, got shape {a.shape}")
    if not np.isfinite(a).all():
        raise NonFinite("matrix")

    if a.shape[0] < a.shape[1]:
        res = _jacobi(a.T.copy(), max_sweeps)
        left, right = res.right, res.left
    else:
        res = _jacobi(a, max_sweeps)
        left, right = res.left, res.right
    return _fix_signs(left, res.singular_values, right)


def _jacobi(m: np.ndarray, max_sweeps: int) -> SvdResult:
    """One-sided Jacobi on a tall (rows >= cols) matrix."""
    rows, n = m.shape
    v = np.eye(n)
    norm_f = math.sqrt(float(np.sum(m * m)))
    # absolute floor: cross products this small are at roundoff level of A itself
    floor = (1e-14 * norm_f) ** 2

    converged = n == 1 or norm_f == 0.0
    sweep = 0
    worst = 0.0
    while not converged and sweep < max_sweeps:
        sweep += 1
        worst = 0.0
        rotated = False
        for i in range(n - 1):
            for j in range(i + 1, n):
                mi = m[:, i]
                mj = m[:, j]
                alpha = float(mi @ mi)
                beta = float(mj @ mj)
                gamma = float(mi @ mj)
                scale = math.sqrt(alpha * beta)
                if scale == 0.0 or abs(gamma) <= floor:
                    continue
                cosine = abs(gamma) / scale
                worst = max(worst, cosine)
                if cosine <= _ORTH_TOL:
                    continue
                zeta = (beta - alpha) / (2.0 * gamma)
                t = math.copysign(1.0, zeta) / (abs(zeta) + math.sqrt(1.0 + zeta * zeta))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = c * t
                new_i = c * mi - s * mj
                new_j = s * mi + c * mj
                m[:, i] = new_i
                m[:, j] = new_j
                vi = v[:, i].copy()
                v[:, i] = c * vi - s * v[:, j]
                v[:, j] = s * vi + c * v[:, j]
                rotated = True
        converged = not rotated
    if not converged:
        raise ConvergenceFailure(sweep, worst)

    sigma = np.sqrt(np.einsum("ij,ij->j", m, m))
    order = np.argsort(-sigma, kind="stable")
    sigma = sigma[order]
    m = m[:, order]
    v = v[:, order]
    u = _left_vectors(m, sigma)
    return SvdResult(u, sigma, v)


def _left_vectors(m: np.ndarray, sigma: np.ndarray) -> np.ndarray:
    """Normalize the rotated columns, completing an orthonormal set where a
    column is numerically null."""
    rows, n = m.shape
    u = np.zeros((rows, n))
    tiny = max(rows, n) * np.finfo(float).eps * (sigma[0] if n else 0.0)
    basis = iter(np.eye(rows))
    for k in range(n):
        if sigma[k] > tiny:
            cand = m[:, k] / sigma[k]
        else:
            cand = next(basis)
        while True:
            q = cand.copy()
            for _ in range(2):
                q -= u[:, :k] @ (u[:, :k].T @ q)
            norm = np.linalg.norm(q)
            if norm > 0.5:
                break
            cand = next(basis)
        u[:, k] = q / norm
    return u


def _fix_signs(left, sigma, right) -> SvdResult:
    left = left.copy()
    right = right.copy()
    for k in range(left.shape[1]):
        pivot = int(np.argmax(np.abs(left[:, k])))
        if left[pivot, k] < 0:
            left[:, k] = -left[:, k]
            right[:, k] = -right[:, k]
    for arr in (left, sigma, right):
        arr.setflags(write=False)
    return SvdResult(left, sigma, right)
