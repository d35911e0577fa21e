"""Sensitivity of the minimal squared error: singular-value perturbation,
linear mixing of the states, and the prior-weight sweep."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _io
from .errors import PreconditionError, ValidationError
from .factor import RANK_RTOL, svd
from .measurement import _closed_form, weighted_residual
from .stateset import StateSet, gram

MAX_COND = 1e12


@dataclass(frozen=True)
class MixingBoundsResult:
    lower: float
    upper: float
    actual: float
    lambda_min: float
    lambda_max: float

    def holds(self, tol: float = 1e-8) -> bool:
        return self.lower - tol <= self.actual <= self.upper + tol


def _emin(phi: np.ndarray, rel_tol: float) -> tuple[float, np.ndarray]:
    f = svd(phi, rel_tol)
    return _closed_form(f.sigma, f.r, phi.shape[1]), f.sigma_r


def sv_perturbation_bound(s: StateSet) -> tuple[float, float]:
    """Return ``(sqrt(tr(D^* D)), max_i |sigma_i^2 - 1|)`` with ``D = S - I``.

    The second never exceeds the first: the eigenvalues of ``S = I + D`` stay
    within the Frobenius norm of ``D`` of 1. All ``m`` eigenvalues of ``S``
    count, including zeros of a dependent set.
    """
    if not s.normalized:
        raise PreconditionError("perturbation bound needs normalized states")
    S = gram(s)
    D = S - np.eye(s.m)
    bound = float(np.sqrt(np.real(np.trace(D.conj().T @ D))))
    lam = np.linalg.eigvalsh(0.5 * (S + S.conj().T))
    return bound, float(np.max(np.abs(lam - 1.0)))


def mixing_bounds(s: StateSet, a, rel_tol: float = RANK_RTOL) -> MixingBoundsResult:
    """Change of the minimal error when the states are mixed, ``Phi' = Phi A^*``.

    Both errors use ``r + m - 2 sum sigma_i``. The change is bracketed by
    ``2 (1 - sqrt(lambda)) sum sigma_i`` at the extreme eigenvalues of ``A A^*``.
    """
    a = np.asarray(a, dtype=complex)
    if a.shape != (s.m, s.m):
        raise ValidationError(f"mixing matrix must be {s.m} x {s.m}, got {a.shape}")
    sv_a = np.linalg.svd(a, compute_uv=False)
    if sv_a[-1] == 0 or sv_a[0] / sv_a[-1] > MAX_COND:
        raise PreconditionError("mixing matrix is singular (condition number above 1e12)")
    e0, sig = _emin(s.states, rel_tol)
    e1, _ = _emin(s.states @ a.conj().T, rel_tol)
    lam_max, lam_min = float(sv_a[0] ** 2), float(sv_a[-1] ** 2)
    total = float(np.sum(sig))
    return MixingBoundsResult(
        lower=2.0 * (1.0 - np.sqrt(lam_max)) * total,
        upper=2.0 * (1.0 - np.sqrt(lam_min)) * total,
        actual=e1 - e0,
        lambda_min=lam_min,
        lambda_max=lam_max,
    )


def unitary_mixing_check(s: StateSet, q, rel_tol: float = RANK_RTOL) -> float:
    """``|E_min(Phi Q^*) - E_min(Phi)|`` for a unitary ``Q``; zero up to round-off."""
    q = np.asarray(q, dtype=complex)
    if q.shape != (s.m, s.m):
        raise ValidationError(f"mixing matrix must be {s.m} x {s.m}, got {q.shape}")
    dev = float(np.max(np.abs(q.conj().T @ q - np.eye(s.m))))
    if dev > 1e-9:
        raise PreconditionError(f"mixing matrix is not unitary (deviation {dev:.3g})")
    return abs(_emin(s.states @ q.conj().T, rel_tol)[0] - _emin(s.states, rel_tol)[0])


def weighted_comparison_bounds(s: StateSet, w, rel_tol: float = RANK_RTOL) -> tuple[float, float, float]:
    """Bracket ``E^w_min - E_min`` for weights rescaled to ``sum w = m``.

    Returns ``(lower, actual, upper)`` with bounds
    ``2 (1 - max w) sum sigma`` and ``2 (1 - min w) sum sigma``.
    """
    w = np.asarray(w, dtype=float).ravel()
    w = w * (s.m / w.sum())
    e0, sig = _emin(s.states, rel_tol)
    total = float(np.sum(sig))
    actual = weighted_residual(s, w, rel_tol) - e0
    return 2.0 * (1.0 - w.max()) * total, actual, 2.0 * (1.0 - w.min()) * total


def weight_sweep(s: StateSet, grid, rel_tol: float = RANK_RTOL) -> list[tuple[float, float]]:
    """Minimal weighted error for weights ``(sqrt(p), sqrt(1 - p))`` at each grid ``p``."""
    if s.m != 2:
        raise PreconditionError(f"weight sweep needs exactly 2 states, got {s.m}")
    grid = [float(p) for p in grid]
    bad = [p for p in grid if not 0.0 < p < 1.0]
    if bad:
        raise PreconditionError(f"sweep grid values must lie in (0, 1), got {bad}")
    return [(p, weighted_residual(s, [np.sqrt(p), np.sqrt(1.0 - p)], rel_tol)) for p in grid]


def sweep_csv(rows) -> str:
    lines = ["p,E_w_min"]
    lines += [f"{_io.fmt(p)},{_io.fmt(e)}" for p, e in rows]
    return "\n".join(lines) + "\n"


def parse_grid(spec: str) -> list[float]:
    """``"start:stop:step"`` to an inclusive list of values, rounded to 12 digits."""
    try:
        start, stop, step = (float(x) for x in spec.split(":"))
    except ValueError:
        raise ValidationError(f"grid must look like start:stop:step, got {spec!r}") from None
    if step <= 0 or stop < start:
        raise ValidationError(f"grid needs step > 0 and stop >= start, got {spec!r}")
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    return [_io.round_sig(start + k * step) for k in range(count)]
