"""Least-squares, orthogonal least-squares, weighted and square-root measurements.

A rank-one measurement is stored as an ``n x m`` matrix ``M`` whose column
``i`` is the measurement vector ``|mu_i>``; the POVM elements are
``|mu_i><mu_i|``. All constructors go through the SVD of the state matrix,
``M = U Z_r V^*``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import _io
from .errors import PreconditionError, ValidationError
from .factor import RANK_RTOL, SvdFactors, projector, psd_sqrt, svd
from .stateset import StateSet, apply_weights, gram

KINDS = (
    "lsm",
    "orthogonal_lsm",
    "wlsm",
    "srm",
    "gu_srm",
    "binary_srm",
    "cyclic_srm",
    "custom",
)


@dataclass(frozen=True, eq=False)
class Measurement:
    matrix: np.ndarray
    kind: str = "custom"
    rank_used: int = 0
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValidationError(f"unknown measurement kind {self.kind!r}")
        mat = np.array(self.matrix, dtype=complex, copy=True)
        if mat.ndim != 2:
            raise ValidationError(f"measurement matrix must be 2-D, got shape {mat.shape}")
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape

    def povm(self) -> np.ndarray:
        """Stack of rank-one operators ``|mu_i><mu_i|``, shape (m, n, n)."""
        M = self.matrix
        return np.einsum("ai,bi->iab", M, M.conj())

    def to_dict(self, digits: int | None = _io.SIG_DIGITS) -> dict:
        return {
            "dim": self.matrix.shape[0],
            "states": _io.matrix_to_columns(self.matrix, digits),
            "kind": self.kind,
            "rank_used": int(self.rank_used),
            "metadata": _jsonable(self.metadata, digits),
        }


def _jsonable(obj: Any, digits: int | None):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v, digits) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist(), digits)
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return _io.complex_to_pair(obj, digits)
    if isinstance(obj, (float, np.floating)):
        return float(obj) if digits is None else _io.round_sig(obj, digits)
    return obj


def load_measurement(document: Any) -> Measurement:
    doc = _io.parse_document(document, "measurement")
    for key in ("dim", "states"):
        if key not in doc:
            raise ValidationError(f"measurement: {key!r} is required")
    dim = doc["dim"]
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise ValidationError(f"measurement: 'dim' must be a positive integer, got {dim!r}")
    mat = _io.columns_to_matrix(doc["states"], dim, "states")
    kind = doc.get("kind", "custom")
    rank_used = doc.get("rank_used", 0)
    if not isinstance(rank_used, int) or isinstance(rank_used, bool):
        raise ValidationError("measurement: 'rank_used' must be an integer")
    meta = doc.get("metadata", {})
    if not isinstance(meta, dict):
        raise ValidationError("measurement: 'metadata' must be an object")
    return Measurement(mat, kind, rank_used, meta)


def _check_dims(s: StateSet, meas: Measurement) -> None:
    if meas.matrix.shape != s.states.shape:
        raise ValidationError(
            f"measurement shape {meas.matrix.shape} does not match states {s.states.shape}"
        )


def completeness_residual(s: StateSet, meas: Measurement, rel_tol: float = RANK_RTOL) -> float:
    """How far the measurement is from resolving the identity on the state span.

    Returns ``max|P_U M M^* P_U - P_U|`` combined with any excess of the
    largest eigenvalue of ``M M^*`` over 1. Zero for the LSM (``MM^* = P_U``)
    and for orthogonal realizations that act as the LSM on the span.
    """
    _check_dims(s, meas)
    P = projector(svd(s.states, rel_tol))
    MM = meas.matrix @ meas.matrix.conj().T
    res = float(np.max(np.abs(P @ MM @ P - P)))
    excess = max(float(np.linalg.eigvalsh(0.5 * (MM + MM.conj().T)).max()) - 1.0, 0.0)
    return max(res, excess)


def _from_factors(f: SvdFactors, k: int) -> np.ndarray:
    return f.U[:, :k] @ f.V[:, :k].conj().T


def lsm(s: StateSet, rel_tol: float = RANK_RTOL) -> Measurement:
    """Least-squares measurement ``M = sum_{i<=r} |u_i><v_i|``."""
    f = svd(s.states, rel_tol)
    return Measurement(_from_factors(f, f.r), "lsm", f.r, {"rel_tol": rel_tol})


def orthogonal_lsm(s: StateSet, rel_tol: float = RANK_RTOL) -> Measurement:
    """Best orthonormal-column measurement, ``U Z_m V^*``.

    The columns beyond the rank use ``|u_i>`` for the free vectors, so the
    result is deterministic given the SVD.
    """
    if s.m > s.dim:
        raise PreconditionError(
            f"orthogonal LSM needs m <= n (m={s.m}, n={s.dim}): "
            "an n-dimensional space holds at most n orthonormal vectors"
        )
    f = svd(s.states, rel_tol)
    return Measurement(_from_factors(f, s.m), "orthogonal_lsm", f.r, {"rel_tol": rel_tol})


def _check_weighted_pre(s: StateSet, w, rel_tol: float) -> np.ndarray:
    if not s.normalized:
        raise PreconditionError("weighted LSM needs normalized states")
    w = np.asarray(w, dtype=float).ravel()
    r = svd(s.states, rel_tol).r
    if r < s.m:
        raise PreconditionError(
            f"weighted LSM needs linearly independent states (rank {r} < m={s.m})"
        )
    return w


def wlsm(s: StateSet, w, rel_tol: float = RANK_RTOL) -> Measurement:
    """Weighted LSM: the LSM of ``Phi W``, i.e. ``Phi W (W Phi^* Phi W)^{-1/2}``."""
    w = _check_weighted_pre(s, w, rel_tol)
    sw = apply_weights(s, w)
    f = svd(sw.states, rel_tol)
    return Measurement(_from_factors(f, f.r), "wlsm", f.r, {"weights": w.tolist(), "rel_tol": rel_tol})


def srm(s: StateSet, rel_tol: float = RANK_RTOL) -> Measurement:
    """Square-root measurement ``((Phi Phi^*)^{1/2})^+ Phi``; same matrix as the LSM.

    Priors are ignored. For the prior-weighted variant call ``wlsm`` with
    weights ``sqrt(priors)``.
    """
    f = svd(s.states, rel_tol)
    return Measurement(_from_factors(f, f.r), "srm", f.r, {"rel_tol": rel_tol})


def residual_error(s: StateSet, meas: Measurement) -> float:
    """Squared error ``tr((Phi - M)^* (Phi - M))`` computed directly."""
    _check_dims(s, meas)
    e = s.states - meas.matrix
    return float(np.real(np.vdot(e, e)))


def weighted_error(s: StateSet, meas: Measurement, w) -> float:
    """``sum_i w_i <e_i|e_i>`` with ``e_i = phi_i - mu_i``."""
    _check_dims(s, meas)
    w = np.asarray(w, dtype=float).ravel()
    e = s.states - meas.matrix
    return float(np.sum(w * np.sum(np.abs(e) ** 2, axis=0)))


def _closed_form(sigma: np.ndarray, r: int, m: int) -> float:
    return float(r + m - 2.0 * np.sum(sigma[:r]))


def residual_error_closed_form(f: SvdFactors, m: int) -> float:
    """``E_min = r + m - 2 sum_{i<=r} sigma_i``; valid for normalized states only.

    Normalization is checked through ``sum sigma_i^2 = tr(S) = m``.
    """
    trace = float(np.sum(f.sigma ** 2))
    if abs(trace - m) > 1e-9 * max(m, 1):
        raise PreconditionError(
            f"closed-form error assumes normalized states (tr S = {trace:.12g}, m = {m})"
        )
    return _closed_form(f.sigma, f.r, m)


def orthogonal_residual(s: StateSet, rel_tol: float = RANK_RTOL) -> float:
    """``E_min + m - r``: the price of forcing orthonormal measurement vectors."""
    if s.m > s.dim:
        raise PreconditionError(f"orthogonal LSM needs m <= n (m={s.m}, n={s.dim})")
    if not s.normalized:
        raise PreconditionError("orthogonal residual needs normalized states")
    f = svd(s.states, rel_tol)
    return residual_error_closed_form(f, s.m) + s.m - f.r


def weighted_residual(s: StateSet, w, rel_tol: float = RANK_RTOL) -> float:
    """Minimal weighted error ``2 sum_i (w_i - sigma_i^w)``, ``sigma^w`` from ``Phi W``."""
    w = _check_weighted_pre(s, w, rel_tol)
    sigma_w = np.linalg.svd(apply_weights(s, w).states, compute_uv=False)
    return float(2.0 * (np.sum(w) - np.sum(sigma_w[: s.m])))


def verify_srm_implicit(s: StateSet, meas: Measurement, rel_tol: float = RANK_RTOL) -> float:
    """Frobenius distance between ``M^* Phi`` and ``S^{1/2}``.

    Zero exactly when the columns of ``M`` satisfy the implicit square-root
    definition ``<mu_j|phi_k> = (S^{1/2})_{jk}``.
    """
    _check_dims(s, meas)
    return float(np.linalg.norm(meas.matrix.conj().T @ s.states - psd_sqrt(gram(s), rel_tol)))


def neumark_check(s: StateSet, rel_tol: float = RANK_RTOL) -> float:
    """Largest ``||Pi_hat_i - P_U Pi_tilde_i P_U||_F`` between the LSM POVM and its
    orthogonal realization compressed to the state span."""
    Mhat = lsm(s, rel_tol)
    Mtil = orthogonal_lsm(s, rel_tol)
    P = projector(svd(s.states, rel_tol))
    compressed = P[None] @ Mtil.povm() @ P[None]
    diff = Mhat.povm() - compressed
    return float(np.max(np.linalg.norm(diff, axis=(1, 2))))
