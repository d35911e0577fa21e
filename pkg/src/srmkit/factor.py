"""Small dense factorization kernel: SVD with a rank decision, functions of
Hermitian PSD matrices, and range projectors.

Everything goes through full decompositions. Matrices here are tiny and the
null-space handling has to be exact, so there is no iterative path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError, ValidationError

RANK_RTOL = 1e-10
HERMITIAN_ATOL = 1e-10


@dataclass(frozen=True, eq=False)
class SvdFactors:
    """``a = U @ diag(sigma) @ V^*`` with full unitary ``U`` (n x n), ``V`` (m x m).

    ``sigma`` holds ``min(n, m)`` values in nonincreasing order; exactly ``r``
    of them exceed ``rel_tol * sigma[0]``.
    """

    U: np.ndarray
    sigma: np.ndarray
    V: np.ndarray
    r: int
    rel_tol: float = RANK_RTOL

    @property
    def shape(self) -> tuple[int, int]:
        return self.U.shape[0], self.V.shape[0]

    @property
    def Ur(self) -> np.ndarray:
        return self.U[:, : self.r]

    @property
    def Vr(self) -> np.ndarray:
        return self.V[:, : self.r]

    @property
    def sigma_r(self) -> np.ndarray:
        return self.sigma[: self.r]

    def sigma_matrix(self) -> np.ndarray:
        n, m = self.shape
        out = np.zeros((n, m))
        k = len(self.sigma)
        out[np.arange(k), np.arange(k)] = self.sigma
        return out

    def reconstruct(self) -> np.ndarray:
        return self.U @ self.sigma_matrix() @ self.V.conj().T


def _check_rtol(rel_tol: float) -> float:
    rel_tol = float(rel_tol)
    if not 0.0 < rel_tol < 1.0:
        raise PreconditionError(f"rel_tol must lie in (0, 1), got {rel_tol}")
    return rel_tol


def rank_from_sigma(sigma: np.ndarray, rel_tol: float = RANK_RTOL) -> int:
    sigma = np.asarray(sigma, dtype=float)
    if sigma.size == 0 or sigma[0] <= 0.0:
        return 0
    return int(np.count_nonzero(sigma > rel_tol * sigma[0]))


def svd(a, rel_tol: float = RANK_RTOL) -> SvdFactors:
    """Full SVD of a complex matrix with a numerical rank decision."""
    rel_tol = _check_rtol(rel_tol)
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.size == 0:
        raise ValidationError(f"svd needs a nonempty 2-D matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValidationError("svd: matrix has non-finite entries")
    U, s, Vh = np.linalg.svd(a, full_matrices=True)
    return SvdFactors(U=U, sigma=s, V=Vh.conj().T, r=rank_from_sigma(s, rel_tol), rel_tol=rel_tol)


def _hermitian_eig(h, what: str) -> tuple[np.ndarray, np.ndarray]:
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValidationError(f"{what}: expected a square matrix, got shape {h.shape}")
    scale = max(1.0, float(np.max(np.abs(h)))) if h.size else 1.0
    asym = float(np.max(np.abs(h - h.conj().T))) if h.size else 0.0
    if asym > HERMITIAN_ATOL * scale:
        raise ValidationError(f"{what}: matrix is not Hermitian (deviation {asym:.3g})")
    lam, vec = np.linalg.eigh(0.5 * (h + h.conj().T))
    lam_max = float(lam.max()) if lam.size else 0.0
    if lam.size and lam.min() < -HERMITIAN_ATOL * max(lam_max, 1.0):
        raise PreconditionError(
            f"{what}: matrix is not positive semidefinite (min eigenvalue {lam.min():.3g})"
        )
    return np.clip(lam, 0.0, None), vec


def _psd_function(h, fn, rel_tol: float, what: str) -> np.ndarray:
    lam, vec = _hermitian_eig(h, what)
    keep = lam > rel_tol * lam.max() if lam.size and lam.max() > 0 else np.zeros(lam.shape, bool)
    vals = np.zeros_like(lam)
    vals[keep] = fn(lam[keep])
    return (vec * vals) @ vec.conj().T


def pinv_sqrt(h, rel_tol: float = RANK_RTOL) -> np.ndarray:
    """Moore-Penrose pseudo-inverse of the PSD square root, ``((h)^{1/2})^+``.

    Eigenvalues above ``rel_tol * lambda_max`` map to ``1/sqrt(lambda)``, the
    rest (including negative round-off) to zero.
    """
    rel_tol = _check_rtol(rel_tol)
    return _psd_function(h, lambda x: 1.0 / np.sqrt(x), rel_tol, "pinv_sqrt")


def psd_sqrt(h, rel_tol: float = RANK_RTOL) -> np.ndarray:
    """Principal square root of a Hermitian PSD matrix (round-off negatives clamped)."""
    rel_tol = _check_rtol(rel_tol)
    return _psd_function(h, np.sqrt, rel_tol, "psd_sqrt")


def projector(f: SvdFactors) -> np.ndarray:
    """Orthogonal projector onto the column space, ``sum_{i<=r} |u_i><u_i|``."""
    Ur = f.Ur
    return Ur @ Ur.conj().T
