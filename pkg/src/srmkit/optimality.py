"""Detection performance and minimum-error optimality checks.

The Holevo/Yuen conditions certify that a rank-one measurement minimizes the
probability of error. Two brute-force oracles, independent of the SVD
construction, serve as ground truth in tests.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np
import scipy.linalg

from . import _io
from .errors import PreconditionError
from .factor import RANK_RTOL, psd_sqrt
from .measurement import Measurement, _check_dims, completeness_residual
from .stateset import StateSet, gram

HOLEVO_TOL = 1e-8
SASAKI_TOL = 1e-8
COMPLETENESS_TOL = 1e-6
# a check counts as violated (rather than inconclusive) beyond this multiple of tol
VIOLATION_FACTOR = 1e3


@dataclass(frozen=True)
class OptimalityReport:
    holevo_eq_residual: float
    holevo_psd_margin: float
    gamma_hermiticity: float
    p_error: float
    sasaki_spread: float | None
    verdict: str
    tol: float = HOLEVO_TOL

    def to_dict(self, digits: int | None = _io.SIG_DIGITS) -> dict:
        out = asdict(self)
        if digits is not None:
            out = {k: _io.round_sig(v, digits) if isinstance(v, float) else v for k, v in out.items()}
        return out


def error_probability(s: StateSet, meas: Measurement, completeness_tol: float = COMPLETENESS_TOL) -> float:
    """``P_e = 1 - sum_i p_i |<mu_i|phi_i>|^2``."""
    _check_dims(s, meas)
    res = completeness_residual(s, meas)
    if res > completeness_tol:
        raise PreconditionError(f"measurement is not a complete POVM on the state span (residual {res:.3g})")
    overlaps = np.einsum("ai,ai->i", meas.matrix.conj(), s.states)
    return float(1.0 - np.sum(s.priors * np.abs(overlaps) ** 2))


def holevo_residuals(s: StateSet, meas: Measurement) -> tuple[float, float, float, np.ndarray]:
    """Return (equality residual, PSD margin, Gamma hermiticity, Gamma).

    With ``W_i = p_i |phi_i><phi_i|`` and ``Pi_i = |mu_i><mu_i|``,
    ``Pi_i (W_j - W_i) Pi_j = c_ij |mu_i><mu_j|`` with the scalar
    ``c_ij = p_j G_ij conj(G_jj) - p_i G_ii conj(G_ji)``, ``G = M^* Phi``,
    so its Frobenius norm is ``|c_ij| ||mu_i|| ||mu_j||``.
    """
    _check_dims(s, meas)
    M, Phi, p = meas.matrix, s.states, s.priors
    G = M.conj().T @ Phi
    d = np.diag(G)
    c = p[None, :] * G * d.conj()[None, :] - (p * d)[:, None] * G.T.conj()
    norms = np.linalg.norm(M, axis=0)
    eq = float(np.max(np.abs(c) * norms[:, None] * norms[None, :]))

    # Gamma = sum_j Pi_j W_j = sum_j p_j <mu_j|phi_j> |mu_j><phi_j|
    Gamma = (M * (p * d)[None, :]) @ Phi.conj().T
    herm = float(np.max(np.abs(Gamma - Gamma.conj().T)))
    Gh = 0.5 * (Gamma + Gamma.conj().T)
    margin = np.inf
    for i in range(s.m):
        Wi = p[i] * np.outer(Phi[:, i], Phi[:, i].conj())
        margin = min(margin, float(np.linalg.eigvalsh(Gh - Wi).min()))
    return eq, float(margin), herm, Gamma


def sasaki_criterion(s: StateSet, priors_as_weights: bool = True, rel_tol: float = RANK_RTOL, tol: float = SASAKI_TOL) -> tuple[bool, float]:
    """Constant-diagonal test on ``(Phi_w^* Phi_w)^{1/2}``, ``w_i = sqrt(p_i)``.

    For linearly independent states a constant diagonal means the
    (prior-weighted) square-root measurement is minimum-error.
    """
    sv = np.linalg.svd(s.states, compute_uv=False)
    r = int(np.count_nonzero(sv > rel_tol * sv[0])) if sv[0] > 0 else 0
    if r < s.m:
        raise PreconditionError(f"Sasaki criterion needs linearly independent states (rank {r} < {s.m})")
    w = np.sqrt(s.priors) if priors_as_weights else np.ones(s.m)
    Sw = w[:, None] * gram(s) * w[None, :]
    diag = np.real(np.diag(psd_sqrt(Sw, rel_tol)))
    spread = float(diag.max() - diag.min())
    return spread <= tol, spread


def holevo_conditions(s: StateSet, meas: Measurement, tol: float = HOLEVO_TOL) -> OptimalityReport:
    """Evaluate the minimum-error conditions and summarize them in a report.

    Violations are reported as data. ``verdict`` is ``verified_mpem`` when
    every residual is within ``tol`` (the PSD margin against
    ``-tol * max(1, tr Gamma)``), ``violated`` when a residual exceeds
    ``1e3 * tol``, and ``inconclusive`` otherwise.
    """
    eq, margin, herm, Gamma = holevo_residuals(s, meas)
    psd_tol = tol * max(1.0, float(abs(np.trace(Gamma))))
    if eq <= tol and margin >= -psd_tol and herm <= tol:
        verdict = "verified_mpem"
    elif eq > VIOLATION_FACTOR * tol or margin < -VIOLATION_FACTOR * psd_tol or herm > VIOLATION_FACTOR * tol:
        verdict = "violated"
    else:
        verdict = "inconclusive"
    try:
        p_err = error_probability(s, meas)
    except PreconditionError:
        p_err = float("nan")
    try:
        spread = sasaki_criterion(s)[1]
    except PreconditionError:
        spread = None
    return OptimalityReport(eq, margin, herm, p_err, spread, verdict, tol)


def gram_schmidt_measurement(s: StateSet) -> Measurement:
    """Naive baseline: orthonormalize the states in their given order.

    Dependent columns get a zero measurement vector.
    """
    basis = []
    cols = []
    for i in range(s.m):
        v = s.states[:, i].copy()
        for b in basis:
            v = v - b * np.vdot(b, v)
        nv = np.linalg.norm(v)
        if nv > 1e-10:
            v = v / nv
            basis.append(v)
        else:
            v = np.zeros_like(v)
        cols.append(v)
    return Measurement(np.column_stack(cols), "custom", len(basis), {"construction": "gram_schmidt"})


def _binary_coordinates(s: StateSet) -> np.ndarray:
    """Coordinates of the two states in an orthonormal basis of (a 2-D space containing) their span."""
    basis = scipy.linalg.orth(s.states, rcond=RANK_RTOL)
    coords = np.zeros((2, 2), dtype=complex)
    if basis.shape[1]:
        coords[: basis.shape[1]] = basis.conj().T @ s.states
    return coords


_INVPHI = (np.sqrt(5.0) - 1.0) / 2.0


def _golden(fn, a: float, b: float, xtol: float = 1e-11) -> float:
    """Golden-section search for a minimizer of ``fn`` on ``[a, b]``."""
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = fn(c), fn(d)
    while b - a > xtol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = fn(d)
    return 0.5 * (a + b)


def helstrom_oracle(s: StateSet, grid: int = 256, tol: float = 1e-12, sweeps: int = 60) -> float:
    """Minimum error probability over orthogonal measurements of two states, by search.

    Measurement bases of the 2-D span are ``mu_1 = (cos t, e^{i f} sin t)``,
    ``mu_2 = (-e^{-i f} sin t, cos t)``. A coarse grid over ``(t, f)`` seeds
    alternating golden-section refinements in each angle. Deliberately
    avoids the closed-form Helstrom expression so it can check it.
    """
    if s.m != 2:
        raise PreconditionError(f"Helstrom oracle needs exactly 2 states, got {s.m}")
    c = _binary_coordinates(s)
    p1, p2 = s.priors

    def p_err(t, f):
        ct, st = np.cos(t), np.sin(t)
        e = np.exp(1j * f)
        ov1 = ct * c[0, 0] + np.conj(e) * st * c[1, 0]
        ov2 = -e * st * c[0, 1] + ct * c[1, 1]
        return 1.0 - p1 * np.abs(ov1) ** 2 - p2 * np.abs(ov2) ** 2

    ts = np.linspace(0.0, np.pi, grid, endpoint=False)
    fs = np.linspace(0.0, 2 * np.pi, grid, endpoint=False)
    vals = p_err(ts[:, None], fs[None, :])
    i, j = np.unravel_index(int(np.argmin(vals)), vals.shape)
    t, f = ts[i], fs[j]
    dt, df = np.pi / grid, 2 * np.pi / grid
    best = float(vals[i, j])
    for _ in range(sweeps):
        t = _golden(lambda x: p_err(x, f), t - dt, t + dt)
        f = _golden(lambda x: p_err(t, x), f - df, f + df)
        new = float(p_err(t, f))
        done = best - new < tol
        best = min(best, new)
        if done:
            break
    return max(best, 0.0)


def _skew(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a - a.conj().T)


def brute_force_lsm_oracle(s: StateSet, trials: int = 10_000, seed: int = 0, restarts: int = 8) -> float:
    """Minimize ``||Phi - M||_F^2`` over feasible ``M = B P W`` by random-restart descent.

    ``B`` is an orthonormal basis of the state span (rank ``r``), ``P = [I_r 0]``
    and ``W`` ranges over ``U(m)``; every such ``M`` has ``M M^* = P_U``.
    Steps follow the Riemannian gradient on ``U(m)`` through the matrix
    exponential with Armijo backtracking. ``trials`` is the total step budget
    shared by the restarts.
    """
    if s.m > 6 or s.dim > 6:
        raise PreconditionError(f"oracle is limited to 6 x 6 problems, got {s.dim} x {s.m}")
    if trials < 10_000:
        raise PreconditionError(f"oracle needs at least 1e4 trials, got {trials}")
    m = s.m
    Phi = s.states
    B = scipy.linalg.orth(Phi, rcond=RANK_RTOL)
    r = B.shape[1]
    C = B.conj().T @ Phi  # r x m; Phi lies in span(B)
    off_span = float(np.linalg.norm(Phi - B @ C) ** 2)
    rng = np.random.default_rng(seed)
    steps = max(1, trials // restarts)

    def loss(W):
        return float(np.linalg.norm(C - W[:r]) ** 2) + off_span

    best = np.inf
    for _ in range(restarts):
        Z = rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m))
        W, _ = np.linalg.qr(Z)
        f = loss(W)
        eta = 1.0
        for _ in range(steps):
            X = np.zeros((m, m), dtype=complex)
            X[:r] = W[:r] - C  # gradient of the loss w.r.t. W (up to a factor 2)
            K = -_skew(W.conj().T @ X)
            gnorm = float(np.linalg.norm(K))
            if gnorm < 1e-12:
                break
            eta = min(eta * 2.0, 4.0)
            while eta > 1e-14:
                W_new = W @ scipy.linalg.expm(eta * K)
                f_new = loss(W_new)
                # the slope is -2 gnorm^2; demanding a quarter of it rejects overshoot past the optimum
                if f_new <= f - 0.5 * eta * gnorm ** 2:
                    break
                eta *= 0.5
            else:
                break
            W, f = W_new, f_new
        best = min(best, f)
    return best


