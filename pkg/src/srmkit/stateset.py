"""Pure-state ensembles: the matrix of state columns plus prior probabilities."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import _io
from .errors import PreconditionError, ValidationError
from .factor import RANK_RTOL, svd

NORM_TOL = 1e-9
PRIOR_TOL = 1e-12


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex if np.iscomplexobj(a) else float, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class StateSet:
    """``m`` pure states in dimension ``n``, stored as the columns of ``states``.

    Parameters
    ----------
    states : array_like, shape (n, m)
        Column ``g`` is the state vector ``|phi_g>``. Real input is promoted
        to complex.
    priors : array_like, optional
        Prior probabilities; uniform when omitted.
    normalized : bool
        When true every column must have unit norm within ``norm_tol``.
        Weighted sets carry ``normalized=False``.
    """

    states: np.ndarray
    priors: np.ndarray | None = None
    normalized: bool = True
    norm_tol: float = field(default=NORM_TOL, repr=False)

    def __post_init__(self):
        phi = np.asarray(self.states)
        if phi.ndim == 1:
            phi = phi[:, None]
        if phi.ndim != 2 or phi.shape[0] < 1 or phi.shape[1] < 1:
            raise ValidationError(f"states must be an n x m matrix with n, m >= 1, got {phi.shape}")
        phi = phi.astype(complex)
        if not np.all(np.isfinite(phi)):
            raise ValidationError("states contain non-finite entries")
        m = phi.shape[1]

        if self.priors is None:
            p = np.full(m, 1.0 / m)
        else:
            p = np.asarray(self.priors, dtype=float).ravel()
            if p.shape != (m,):
                raise ValidationError(f"expected {m} priors, got {p.size}")
            if np.any(p < 0):
                bad = int(np.flatnonzero(p < 0)[0])
                raise ValidationError(f"prior {bad} is negative ({p[bad]})")
            if abs(p.sum() - 1.0) > PRIOR_TOL:
                raise ValidationError(f"priors sum to {p.sum():.12g}, not 1")

        if self.normalized:
            norms = np.linalg.norm(phi, axis=0)
            dev = np.abs(norms - 1.0)
            if np.any(dev > self.norm_tol):
                g = int(np.argmax(dev))
                raise ValidationError(
                    f"state column {g} has norm {norms[g]:.12g}; "
                    "pass normalized=False for unnormalized sets"
                )

        object.__setattr__(self, "states", _frozen(phi))
        object.__setattr__(self, "priors", _frozen(p))
        object.__setattr__(self, "normalized", bool(self.normalized))

    @property
    def dim(self) -> int:
        return self.states.shape[0]

    @property
    def m(self) -> int:
        return self.states.shape[1]

    @property
    def uniform_priors(self) -> bool:
        return bool(np.allclose(self.priors, 1.0 / self.m, rtol=0, atol=PRIOR_TOL))

    def with_priors(self, priors) -> "StateSet":
        return StateSet(self.states, priors, self.normalized, self.norm_tol)

    def to_dict(self, digits: int | None = _io.SIG_DIGITS) -> dict:
        return {
            "dim": self.dim,
            "states": _io.matrix_to_columns(self.states, digits),
            "priors": [p if digits is None else _io.round_sig(p, digits) for p in self.priors],
            "normalized": self.normalized,
        }


def load_state_set(document: Any, norm_tol: float = NORM_TOL) -> StateSet:
    """Build a validated StateSet from a JSON document (text, bytes or parsed dict).

    Schema: ``{"dim": n, "states": [[[re, im], ...n], ...m], "priors": [...]?,
    "normalized": bool?}``.
    """
    doc = _io.parse_document(document, "state set")
    if "dim" not in doc or "states" not in doc:
        raise ValidationError("state set: 'dim' and 'states' are required")
    dim = doc["dim"]
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise ValidationError(f"state set: 'dim' must be a positive integer, got {dim!r}")
    phi = _io.columns_to_matrix(doc["states"], dim, "states")
    priors = doc.get("priors")
    if priors is not None:
        if not isinstance(priors, list) or not all(
            isinstance(p, (int, float)) and not isinstance(p, bool) for p in priors
        ):
            raise ValidationError("state set: 'priors' must be a list of numbers")
    normalized = doc.get("normalized", True)
    if not isinstance(normalized, bool):
        raise ValidationError("state set: 'normalized' must be a boolean")
    return StateSet(phi, priors, normalized, norm_tol)


def gram(s: StateSet) -> np.ndarray:
    """Gram matrix ``S = Phi^* Phi``, entries ``<phi_i|phi_j>``."""
    return s.states.conj().T @ s.states


def numerical_rank(s: StateSet, rel_tol: float = RANK_RTOL) -> int:
    """Number of singular values of ``Phi`` above ``rel_tol * sigma_max``."""
    return svd(s.states, rel_tol).r


def phase_align_binary(s: StateSet) -> StateSet:
    """Rephase the second state so that ``<phi_1|phi_2>`` becomes ``|<phi_1|phi_2>|``.

    Orthogonal pairs are returned unchanged.
    """
    if s.m != 2:
        raise PreconditionError(f"phase alignment needs exactly 2 states, got {s.m}")
    a = np.vdot(s.states[:, 0], s.states[:, 1])
    if a == 0:
        return s
    phi = np.array(s.states)
    phi[:, 1] *= np.exp(-1j * np.angle(a))
    return StateSet(phi, s.priors, s.normalized, s.norm_tol)


def apply_weights(s: StateSet, w) -> StateSet:
    """Scale column ``g`` by ``w[g] > 0``. The result is flagged unnormalized."""
    w = np.asarray(w, dtype=float).ravel()
    if w.shape != (s.m,):
        raise ValidationError(f"expected {s.m} weights, got {w.size}")
    if np.any(~np.isfinite(w)) or np.any(w <= 0):
        raise PreconditionError(f"weights must be positive, got {w.tolist()}")
    return StateSet(s.states * w[None, :], s.priors, normalized=False)
