"""Geometrically uniform state sets over finite abelian groups.

A group ``G = Z_{m_1} x ... x Z_{m_p}`` is described by its factor list and
an explicit ``order``: ``order[i]`` is the group element labeling state
column ``i``. Nothing assumes lexicographic layout. Generators, when given,
are the unitaries ``U_i`` with ``U_i <-> order[i]``.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from . import _io
from .errors import GUStructureError, PreconditionError, ValidationError
from .factor import RANK_RTOL
from .measurement import Measurement
from .stateset import StateSet, gram, phase_align_binary

GU_TOL = 1e-9
UNITARY_TOL = 1e-9
NEG_FT_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class GroupSpec:
    factors: tuple[int, ...]
    order: tuple[tuple[int, ...], ...]
    generators: np.ndarray | None = None

    def __post_init__(self):
        factors = tuple(int(k) for k in self.factors)
        # an empty factor list is the trivial group {0}
        if any(k < 2 for k in factors):
            raise ValidationError(f"group factors must be integers >= 2, got {list(self.factors)}")
        m = int(np.prod(factors))
        order = tuple(tuple(int(c) for c in g) for g in self.order)
        if len(order) != m:
            raise ValidationError(f"order lists {len(order)} elements, group has {m}")
        for g in order:
            if len(g) != len(factors) or any(not 0 <= c < k for c, k in zip(g, factors)):
                raise ValidationError(f"{list(g)} is not an element of Z_{factors}")
        if len(set(order)) != m:
            raise ValidationError("order is not a bijection onto the group (repeated element)")
        object.__setattr__(self, "factors", factors)
        object.__setattr__(self, "order", order)

        if self.generators is not None:
            gens = np.array(self.generators, dtype=complex, copy=True)
            if gens.ndim != 3 or gens.shape[0] != m or gens.shape[1] != gens.shape[2]:
                raise ValidationError(f"expected {m} square generator matrices, got shape {gens.shape}")
            gens.setflags(write=False)
            object.__setattr__(self, "generators", gens)
            self._check_generators()

    @property
    def m(self) -> int:
        return len(self.order)

    @property
    def zero_index(self) -> int:
        return self.index((0,) * len(self.factors))

    def index(self, g: Sequence[int]) -> int:
        return self._lookup[tuple(int(c) % k for c, k in zip(g, self.factors))]

    @property
    def _lookup(self) -> dict:
        cached = self.__dict__.get("_lookup_cache")
        if cached is None:
            cached = {g: i for i, g in enumerate(self.order)}
            object.__setattr__(self, "_lookup_cache", cached)
        return cached

    def add(self, g, h) -> tuple[int, ...]:
        return tuple((a + b) % k for a, b, k in zip(g, h, self.factors))

    def sub(self, g, h) -> tuple[int, ...]:
        return tuple((a - b) % k for a, b, k in zip(g, h, self.factors))

    def difference_table(self) -> np.ndarray:
        """``D[a, b]`` = index of ``order[b] - order[a]``."""
        return np.array(
            [[self.index(self.sub(gb, ga)) for gb in self.order] for ga in self.order], dtype=int
        )

    def _check_generators(self):
        gens = self.generators
        n = gens.shape[1]
        eye = np.eye(n)
        for i, U in enumerate(gens):
            dev = np.max(np.abs(U.conj().T @ U - eye))
            if dev > UNITARY_TOL:
                raise ValidationError(f"generator {i} is not unitary (deviation {dev:.3g})")
        if np.max(np.abs(gens[self.zero_index] - eye)) > UNITARY_TOL:
            raise ValidationError("generator of the zero element is not the identity")
        for i, j in itertools.combinations_with_replacement(range(self.m), 2):
            prod = gens[i] @ gens[j]
            k = self.index(self.add(self.order[i], self.order[j]))
            if np.max(np.abs(prod - gens[k])) > UNITARY_TOL or np.max(
                np.abs(prod - gens[j] @ gens[i])
            ) > UNITARY_TOL:
                raise ValidationError(
                    f"generators {i} and {j} do not compose like {self.order[i]} + {self.order[j]}"
                )

    @classmethod
    def cyclic(cls, m: int, generators=None) -> "GroupSpec":
        return cls((m,), tuple((i,) for i in range(m)), generators)

    @classmethod
    def lexicographic(cls, factors: Sequence[int], generators=None) -> "GroupSpec":
        order = tuple(itertools.product(*(range(k) for k in factors)))
        return cls(tuple(factors), order, generators)

    def to_dict(self, digits: int | None = _io.SIG_DIGITS) -> dict:
        doc: dict[str, Any] = {"factors": list(self.factors), "order": [list(g) for g in self.order]}
        if self.generators is not None:
            doc["generators"] = [_io.matrix_to_columns(U, digits) for U in self.generators]
        return doc


def load_group_spec(document: Any) -> GroupSpec:
    """Parse ``{"factors": [...], "order": [[...], ...], "generators": [...]?}``.

    Generator matrices use the same column-list ``[re, im]`` layout as states.
    """
    doc = _io.parse_document(document, "group spec")
    factors = doc.get("factors")
    if not isinstance(factors, list) or not all(isinstance(k, int) and not isinstance(k, bool) for k in factors):
        raise ValidationError("group spec: 'factors' must be a list of integers")
    order = doc.get("order")
    if order is None:
        order = list(itertools.product(*(range(k) for k in factors)))
    if not isinstance(order, (list, tuple)) or not all(
        isinstance(g, (list, tuple)) and all(isinstance(c, int) and not isinstance(c, bool) for c in g)
        for g in order
    ):
        raise ValidationError("group spec: 'order' must be a list of integer tuples")
    gens = doc.get("generators")
    if gens is not None:
        if not isinstance(gens, list):
            raise ValidationError("group spec: 'generators' must be a list of matrices")
        gens = np.array([_io.square_matrix_from_doc(U, f"generators[{i}]") for i, U in enumerate(gens)])
    return GroupSpec(tuple(factors), tuple(tuple(g) for g in order), gens)


@dataclass(frozen=True, eq=False)
class GroupFunction:
    """A function on the group, ``values[i]`` belonging to ``group.order[i]``."""

    values: np.ndarray
    group: GroupSpec

    def __getitem__(self, g) -> complex:
        return self.values[self.group.index(g)]


def ft_matrix(g: GroupSpec) -> np.ndarray:
    """Unitary Fourier matrix ``F[h, g] = m^{-1/2} prod_k exp(-2 pi i h_k g_k / m_k)``,
    rows and columns in ``g.order``."""
    els = np.array(g.order, dtype=np.int64).reshape(g.m, len(g.factors))
    mk = np.array(g.factors, dtype=np.int64)
    prods = (els[:, None, :] * els[None, :, :]) % mk
    phase = np.sum(prods / mk, axis=-1)
    return np.exp(-2j * np.pi * phase) / np.sqrt(g.m)


def check_gu(s: StateSet, g: GroupSpec, tol: float = GU_TOL) -> GroupFunction:
    """Verify ``S[g', g] = s(g - g')`` and return ``s(g) = <phi(0)|phi(g)>``.

    With generators, also checks ``|phi_i> = U_i |phi_0>``.
    """
    if s.m != g.m:
        raise ValidationError(f"state set has {s.m} states, group has {g.m} elements")
    if not s.uniform_priors:
        raise PreconditionError("GU construction assumes equal priors")
    S = gram(s)
    z = g.zero_index
    sfun = S[z]
    D = g.difference_table()
    dev = np.abs(S - sfun[D])
    worst = np.unravel_index(int(np.argmax(dev)), dev.shape)
    if dev[worst] > tol:
        a, b = (int(i) for i in worst)
        raise GUStructureError(
            f"Gram entry ({a}, {b}) = {S[a, b]:.6g} differs from s({list(g.sub(g.order[b], g.order[a]))})"
            f" = {sfun[D[a, b]]:.6g} by {dev[worst]:.3g}",
            pair=(a, b),
            deviation=float(dev[worst]),
        )
    if g.generators is not None:
        if g.generators.shape[1] != s.dim:
            raise ValidationError(f"generators act on dimension {g.generators.shape[1]}, states on {s.dim}")
        orbit = np.einsum("iab,b->ai", g.generators, s.states[:, z])
        gdev = np.linalg.norm(orbit - s.states, axis=0)
        i = int(np.argmax(gdev))
        if gdev[i] > tol:
            raise GUStructureError(
                f"state {i} differs from U_{i}|phi_0> by {gdev[i]:.3g}", pair=(z, i), deviation=float(gdev[i])
            )
    return GroupFunction(np.array(sfun), g)


def fourier_transform(fn: GroupFunction) -> GroupFunction:
    return GroupFunction(ft_matrix(fn.group) @ fn.values, fn.group)


def gu_singular_values(sfun: GroupFunction, g: GroupSpec | None = None) -> GroupFunction:
    """Singular values ``sigma(h) = m^{1/4} sqrt(s_hat(h))`` of a GU state matrix."""
    g = sfun.group if g is None else g
    s_hat = ft_matrix(g) @ np.asarray(sfun.values, dtype=complex)
    scale = max(1.0, float(np.max(np.abs(s_hat))))
    if np.max(np.abs(s_hat.imag)) > NEG_FT_TOL * scale:
        raise PreconditionError(
            f"Fourier transform of s(g) is not real (max imag {np.max(np.abs(s_hat.imag)):.3g}): "
            "Gram matrix is not Hermitian PSD"
        )
    re = s_hat.real
    if re.min() < -NEG_FT_TOL * scale:
        raise PreconditionError(f"Fourier transform of s(g) has negative value {re.min():.3g}: not PSD")
    # |s_hat| at round-off level is zero; its square root (~1e-8) would pass a rank test
    re = np.where(np.abs(re) <= NEG_FT_TOL * scale, 0.0, re)
    return GroupFunction(g.m ** 0.25 * np.sqrt(np.clip(re, 0.0, None)), g)


def _sigma_pinv(sigma: np.ndarray, rel_tol: float) -> np.ndarray:
    smax = float(sigma.max())
    out = np.zeros_like(sigma)
    keep = sigma > rel_tol * smax if smax > 0 else np.zeros(sigma.shape, bool)
    out[keep] = 1.0 / sigma[keep]
    return out


def gu_srm(
    s: StateSet, g: GroupSpec, tol: float = GU_TOL, rel_tol: float = RANK_RTOL, kind: str = "gu_srm"
) -> Measurement:
    """Square-root measurement of a GU set via the group Fourier transform,
    ``M = Phi F diag(sigma^+) F^*``."""
    sfun = check_gu(s, g, tol)
    sigma = gu_singular_values(sfun, g).values
    F = ft_matrix(g)
    M = s.states @ F @ np.diag(_sigma_pinv(sigma, rel_tol)) @ F.conj().T
    r = int(np.count_nonzero(_sigma_pinv(sigma, rel_tol)))
    meta = {
        "factors": list(g.factors),
        "order": [list(e) for e in g.order],
        "sigma": sigma.tolist(),
        "w0": float(np.sum(sigma) / g.m),
        "s": sfun.values,
    }
    return Measurement(M, kind, r, meta)


def binary_srm(s: StateSet, rel_tol: float = RANK_RTOL) -> Measurement:
    """Closed-form SRM for two states.

    The pair is rephased so that ``a = <phi_1|phi_2>`` is real and nonnegative,
    the two-point transform gives ``sigma(0)^2 = 1 + a`` and
    ``sigma(1)^2 = 1 - a``, and the phase is restored on the second
    measurement vector afterwards. ``metadata["coefficients"]`` holds ``C``
    with ``M = Phi C`` in the caller's phase convention.
    """
    if s.m != 2:
        raise PreconditionError(f"binary SRM needs exactly 2 states, got {s.m}")
    if not s.normalized:
        raise PreconditionError("binary SRM needs normalized states")
    aligned = phase_align_binary(s)
    a_raw = complex(np.vdot(s.states[:, 0], s.states[:, 1]))
    a = float(np.real(np.vdot(aligned.states[:, 0], aligned.states[:, 1])))
    if a >= 1.0 - 1e-15:
        raise PreconditionError("binary SRM: the two states are identical (|a| = 1)")
    s0, s1 = np.sqrt(1.0 + a), np.sqrt(1.0 - a)
    if s1 < 1e-6:
        warnings.warn(f"binary SRM is ill-conditioned: sigma(1) = {s1:.3g}", RuntimeWarning, stacklevel=2)
    c_plus = 0.5 * (1.0 / s0 + 1.0 / s1)
    c_minus = 0.5 * (1.0 / s0 - 1.0 / s1)
    C_aligned = np.array([[c_plus, c_minus], [c_minus, c_plus]])
    # undo the rephasing: Phi_aligned = Phi D with D = diag(1, e^{-i theta})
    D = np.diag([1.0, np.exp(-1j * np.angle(a_raw)) if a_raw != 0 else 1.0])
    C = D @ C_aligned @ D.conj().T
    M = s.states @ C
    meta = {"a": a, "sigma": [float(s0), float(s1)], "coefficients": C}
    return Measurement(M, "binary_srm", 2, meta)


def is_circulant(S: np.ndarray, tol: float = GU_TOL) -> bool:
    m = S.shape[0]
    idx = (np.arange(m)[None, :] - np.arange(m)[:, None]) % m
    return bool(np.max(np.abs(S - S[0][idx])) <= tol)


def cyclic_srm(s: StateSet, q_order: int | None = None, tol: float = GU_TOL, rel_tol: float = RANK_RTOL) -> Measurement:
    """SRM of a cyclic state set ``phi_i = Q^{i} phi_0`` (circulant Gram matrix), over ``Z_m``."""
    m = s.m if q_order is None else int(q_order)
    if m != s.m:
        raise ValidationError(f"group order {m} does not match the {s.m} states")
    try:
        return gu_srm(s, GroupSpec.cyclic(m), tol, rel_tol, kind="cyclic_srm")
    except GUStructureError as exc:
        raise GUStructureError(f"Gram matrix is not circulant: {exc}", exc.pair, exc.deviation) from None


def binary_reflection(s: StateSet) -> np.ndarray:
    """Reflection ``R = I - 2|w><w|/<w|w>``, ``w = phi_2 - phi_1``, swapping the two states.

    Needs a real inner product; rephase first with ``phase_align_binary``.
    """
    if s.m != 2:
        raise PreconditionError(f"binary reflection needs 2 states, got {s.m}")
    a = np.vdot(s.states[:, 0], s.states[:, 1])
    if abs(a.imag) > GU_TOL:
        raise PreconditionError("inner product is not real; apply phase_align_binary first")
    w = s.states[:, 1] - s.states[:, 0]
    ww = float(np.real(np.vdot(w, w)))
    if ww == 0:
        raise PreconditionError("states are identical; no reflection")
    return np.eye(s.dim) - 2.0 * np.outer(w, w.conj()) / ww


def symmetry_check(meas: Measurement, g: GroupSpec) -> float:
    """``max ||U_{g'} |mu(g)> - |mu(g + g')>||`` over all pairs."""
    if g.generators is None:
        raise PreconditionError("symmetry check needs generator matrices")
    M = meas.matrix
    if M.shape[1] != g.m or g.generators.shape[1] != M.shape[0]:
        raise ValidationError("measurement and group dimensions disagree")
    worst = 0.0
    for j, gp in enumerate(g.order):
        moved = g.generators[j] @ M
        target = [g.index(g.add(el, gp)) for el in g.order]
        worst = max(worst, float(np.max(np.linalg.norm(moved - M[:, target], axis=0))))
    return worst
