"""Closed-form s-parameterized quasiprobability functions of the three
analyzed state families, plus their two- and one-mode marginals.

The families are:

* :class:`SinglePhotonW` -- a single photon delocalized over three modes,
  with weight ``p`` on the first mode (``p = 1`` is the symmetric W state,
  ``p = 0`` leaves only two-mode entanglement).
* :class:`SqueezedVacuum3` -- the symmetric three-mode squeezed vacuum,
  a zero-mean Gaussian state with squeezing degree ``r``.
* :class:`GhzEcs` -- the odd superposition of two three-mode coherent
  branches with amplitudes ``+zeta`` and ``-zeta``.

All functions are pure; the hot-path evaluation is delegated to the active
kernel backend. Ordering parameters ``s > 0`` are rejected everywhere (the
observable spectrum is unbounded there).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from . import _kernels


@dataclass(frozen=True)
class SinglePhotonW:
    """Single photon shared over three modes; ``0 <= p <= 1``."""

    p: float

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p must lie in [0, 1], got {self.p}")


@dataclass(frozen=True)
class SqueezedVacuum3:
    """Symmetric three-mode squeezed vacuum; ``r >= 0``."""

    r: float

    def __post_init__(self):
        if self.r < 0.0:
            raise ValueError(f"r must be non-negative, got {self.r}")


@dataclass(frozen=True)
class GhzEcs:
    """Odd three-mode entangled coherent state; ``zeta > 0``.

    ``zeta = 0`` is rejected: the normalization diverges there, and the
    limit is exactly ``SinglePhotonW(p=1)``.
    """

    zeta: float

    def __post_init__(self):
        if self.zeta <= 0.0:
            raise ValueError(
                f"zeta must be positive, got {self.zeta}; "
                "use SinglePhotonW(p=1) for the zero-amplitude limit"
            )


StateSpec = Union[SinglePhotonW, SqueezedVacuum3, GhzEcs]


@dataclass(frozen=True)
class PhasePoint3:
    """Three complex displacement amplitudes (one per mode)."""

    alpha: complex
    beta: complex
    gamma: complex

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma"):
            z = complex(getattr(self, name))
            if not (math.isfinite(z.real) and math.isfinite(z.imag)):
                raise ValueError(f"{name} must be finite, got {z}")

    def coords(self) -> tuple[float, ...]:
        a, b, c = complex(self.alpha), complex(self.beta), complex(self.gamma)
        return (a.real, a.imag, b.real, b.imag, c.real, c.imag)


def check_s(s: float) -> float:
    s = float(s)
    if not math.isfinite(s):
        raise ValueError("s must be finite")
    if s > 0.0:
        raise ValueError(f"s must be <= 0 (got {s}): the observable spectrum is unbounded for s > 0")
    return s


def family_id(state: StateSpec) -> tuple[int, float]:
    """Map a state spec onto the kernel's (family id, parameter) pair."""
    if isinstance(state, SinglePhotonW):
        return _kernels.FAMILY_SINGLE_PHOTON, state.p
    if isinstance(state, SqueezedVacuum3):
        return _kernels.FAMILY_SQUEEZED_VACUUM, state.r
    if isinstance(state, GhzEcs):
        return _kernels.FAMILY_GHZ_ECS, state.zeta
    raise TypeError(f"not a state spec: {state!r}")


def ecs_normalization(zeta: float) -> float:
    """Normalization constant N of the odd cat state, N^2 = 1/(2 - 2 e^{-6 zeta^2})."""
    if zeta <= 0.0:
        raise ValueError("zeta must be positive; the normalization diverges at 0")
    return math.sqrt(_kernels.ecs_norm_sq(zeta))


def w3(state: StateSpec, point: PhasePoint3, s: float) -> float:
    """Three-mode quasiprobability W3 at ordering parameter ``s``."""
    fam, param = family_id(state)
    s = check_s(s)
    if isinstance(point, PhasePoint3):
        coords = point.coords()
    else:
        coords = PhasePoint3(*point).coords()
    return float(_kernels.w3(fam, param, s, np.array(coords)))


def w2_marginal(
    state: StateSpec, mode_pair: tuple[int, int], a: complex, b: complex, s: float
) -> float:
    """Two-mode marginal of W3 over the mode not listed in ``mode_pair``."""
    fam, param = family_id(state)
    s = check_s(s)
    i, j = mode_pair
    if i == j or not {i, j} <= {0, 1, 2}:
        raise ValueError(f"mode_pair must be two distinct indices in 0..2, got {mode_pair}")
    if i > j:
        i, j = j, i
        a, b = b, a
    a, b = complex(a), complex(b)
    pts = np.array([a.real, a.imag, b.real, b.imag])
    return float(_kernels.w2(fam, param, s, i, j, pts))


def w1_marginal(state: StateSpec, mode: int, a: complex, s: float) -> float:
    """One-mode marginal of W3; integrates to 1 over the complex plane."""
    fam, param = family_id(state)
    s = check_s(s)
    if mode not in (0, 1, 2):
        raise ValueError(f"mode must be in 0..2, got {mode}")
    a = complex(a)
    return float(_kernels.w1(fam, param, s, mode, np.array([a.real, a.imag])))


def w3_batch(state: StateSpec, pts: np.ndarray, s: float) -> np.ndarray:
    """Vectorized W3 over ``pts[..., :6]`` (quadrature helper)."""
    fam, param = family_id(state)
    return np.asarray(_kernels.w3(fam, param, check_s(s), pts))


def w2_batch(
    state: StateSpec, mode_pair: tuple[int, int], pts: np.ndarray, s: float
) -> np.ndarray:
    fam, param = family_id(state)
    i, j = sorted(mode_pair)
    return np.asarray(_kernels.w2(fam, param, check_s(s), i, j, pts))


def w1_batch(state: StateSpec, mode: int, pts: np.ndarray, s: float) -> np.ndarray:
    fam, param = family_id(state)
    return np.asarray(_kernels.w1(fam, param, check_s(s), mode, pts))


# ---------------------------------------------------------------------------
# Per-mode ordering parameters.
#
# Detector inefficiency shifts s independently per mode, so the noisy
# evaluation needs W computed at a triple (s_a, s_b, s_c). These variants
# are only called on slow paths (asymmetric efficiencies); the uniform-s
# kernels remain the hot path.
# ---------------------------------------------------------------------------


def _modal_u(s_modes):
    return np.array([2.0 / (1.0 - float(check_s(s))) for s in s_modes])


def w3_modal(state: StateSpec, point: PhasePoint3, s_modes) -> float:
    """W3 with an individual ordering parameter per mode."""
    fam, param = family_id(state)
    coords = point.coords() if isinstance(point, PhasePoint3) else PhasePoint3(*point).coords()
    x = np.asarray(coords, dtype=float).reshape(3, 2)
    return _w_modal(fam, param, x, list(s_modes), modes=(0, 1, 2))


def w2_modal(state: StateSpec, mode_pair, a: complex, b: complex, s_pair) -> float:
    fam, param = family_id(state)
    i, j = mode_pair
    if i > j:
        i, j = j, i
        a, b = b, a
        s_pair = (s_pair[1], s_pair[0])
    a, b = complex(a), complex(b)
    x = np.array([[a.real, a.imag], [b.real, b.imag]])
    return _w_modal(fam, param, x, list(s_pair), modes=(i, j))


def w1_modal(state: StateSpec, mode: int, a: complex, s: float) -> float:
    return float(w1_marginal(state, mode, a, s))


def _w_modal(fam, param, x, s_modes, modes):
    u = _modal_u(s_modes)
    k = len(modes)
    t_each = x[:, 0] ** 2 + x[:, 1] ** 2
    pref = float(np.prod(u / math.pi))

    if fam == _kernels.FAMILY_SINGLE_PHOTON:
        cs = _kernels.photon_amplitudes(param)
        c = np.array([cs[m] for m in modes])
        g = math.exp(-float(np.dot(u, t_each)))
        lin_re = float(np.dot(c * u, x[:, 0]))
        lin_im = float(np.dot(c * u, x[:, 1]))
        bracket = 1.0 - float(np.dot(c * c, u)) + lin_re**2 + lin_im**2
        return pref * g * bracket

    if fam == _kernels.FAMILY_GHZ_ECS:
        z = param
        n2 = _kernels.ecs_norm_sq(z)
        g = np.exp(-u * t_each)
        plus = float(np.prod(g * np.exp(u * (2.0 * z * x[:, 0] - z * z))))
        minus = float(np.prod(g * np.exp(u * (-2.0 * z * x[:, 0] - z * z))))
        mag = float(np.prod(g * np.exp(u * s_modes_arr(s_modes) * z * z)))
        phase = 2.0 * z * float(np.dot(u, x[:, 1]))
        cross = 2.0 * math.exp(-2.0 * (3 - k) * z * z) * mag * math.cos(phase)
        return pref * n2 * (plus + minus - cross)

    if fam == _kernels.FAMILY_SQUEEZED_VACUUM:
        # Zero-mean Gaussian: covariance for ordering s is the Wigner
        # covariance plus -s/4 per quadrature of each mode.
        sig_re, sig_im = _squeezed_cov_blocks(param)
        idx = list(modes)
        sig_re = sig_re[np.ix_(idx, idx)].copy()
        sig_im = sig_im[np.ix_(idx, idx)].copy()
        for a_loc, s_m in enumerate(s_modes):
            sig_re[a_loc, a_loc] += -s_m / 4.0
            sig_im[a_loc, a_loc] += -s_m / 4.0
        det = np.linalg.det(sig_re) * np.linalg.det(sig_im)
        q = x[:, 0] @ np.linalg.solve(sig_re, x[:, 0]) + x[:, 1] @ np.linalg.solve(
            sig_im, x[:, 1]
        )
        return float(np.exp(-0.5 * q) / ((2.0 * math.pi) ** k * math.sqrt(det)))

    raise ValueError(f"unknown family id {fam}")


def s_modes_arr(s_modes):
    return np.asarray([float(s) for s in s_modes])


def _squeezed_cov_blocks(r: float) -> tuple[np.ndarray, np.ndarray]:
    """Wigner (s = 0) covariance of the symmetric squeezed vacuum, split into
    the real- and imaginary-quadrature 3x3 blocks (no cross correlations)."""
    s2 = math.sinh(2.0 * r)
    eye = np.eye(3)
    ones = np.ones((3, 3))
    sig_re = (math.exp(-2.0 * r) * eye + (2.0 * s2 / 3.0) * ones) / 4.0
    sig_im = (math.exp(2.0 * r) * eye - (2.0 * s2 / 3.0) * ones) / 4.0
    return sig_re, sig_im
