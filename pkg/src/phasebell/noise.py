"""Detector inefficiency and thermal damping as ordering-parameter shifts.

Both imperfections act on the measured quasiprobability functions rather
than on the state families:

* a detector of efficiency eta measures W(.; s')/eta with
  s' = -(1 - s - eta)/eta (loss after the local displacement);
* amplitude damping into a bath of mean occupation nbar for a scaled time
  gamma_tau rescales phase space by t = exp(-gamma_tau/2) and shifts
  s -> (s - (1 - t^2)(1 + 2 nbar)) / t^2 (loss before the displacement,
  hence the argument rescaling).

When both act, damping is applied first and detection second, chaining the
shifted parameters; this is the physical channel-then-detector order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import states
from ._quad import hermite_nodes


@dataclass(frozen=True)
class DetectionEfficiency:
    """Per-mode detector efficiencies, each in (0, 1]."""

    eta_a: float
    eta_b: float
    eta_c: float

    def __post_init__(self):
        for name in ("eta_a", "eta_b", "eta_c"):
            eta = getattr(self, name)
            if not 0.0 < eta <= 1.0:
                raise ValueError(f"{name} must lie in (0, 1], got {eta}")

    @classmethod
    def symmetric(cls, eta: float) -> "DetectionEfficiency":
        return cls(eta, eta, eta)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.eta_a, self.eta_b, self.eta_c)

    def is_symmetric(self) -> bool:
        return self.eta_a == self.eta_b == self.eta_c


@dataclass(frozen=True)
class ThermalChannel:
    """Amplitude damping for dimensionless time gamma_tau into local baths
    of mean thermal occupation nbar (identical for all three modes)."""

    gamma_tau: float
    nbar: float = 0.0

    def __post_init__(self):
        if self.gamma_tau < 0.0:
            raise ValueError(f"gamma_tau must be >= 0, got {self.gamma_tau}")
        if self.nbar < 0.0:
            raise ValueError(f"nbar must be >= 0, got {self.nbar}")


@dataclass(frozen=True)
class NoiseChannel:
    """Optional damping followed by optional inefficient detection."""

    efficiency: DetectionEfficiency | None = None
    thermal: ThermalChannel | None = None

    def is_trivial(self) -> bool:
        eff_triv = self.efficiency is None or self.efficiency.as_tuple() == (1.0, 1.0, 1.0)
        th_triv = self.thermal is None or self.thermal.gamma_tau == 0.0
        return eff_triv and th_triv


def effective_s_detection(s: float, eta: float) -> float:
    """Shifted ordering parameter seen by a detector of efficiency eta."""
    s = states.check_s(s)
    if not 0.0 < eta <= 1.0:
        raise ValueError(f"eta must lie in (0, 1], got {eta}")
    return -(1.0 - s - eta) / eta


def effective_s_damping(s: float, ch: ThermalChannel) -> tuple[float, float]:
    """(shifted ordering parameter, phase-space scale t) after damping."""
    s = states.check_s(s)
    t_sq = math.exp(-ch.gamma_tau)
    r_sq = 1.0 - t_sq
    s_prime = (s - r_sq * (1.0 + 2.0 * ch.nbar)) / t_sq
    return s_prime, math.sqrt(t_sq)


def effective_parameters(
    s: float, noise: NoiseChannel
) -> tuple[tuple[float, float, float], tuple[float, float, float], float]:
    """Resolve a noise channel into (per-mode s, per-mode prefactor, 1/t).

    The measured k-mode quasiprobability is the ideal one evaluated at the
    per-mode shifted parameters and at coordinates scaled by 1/t, times the
    product of the per-mode prefactors.
    """
    s = states.check_s(s)
    inv_scale = 1.0
    scale_pref = 1.0
    if noise.thermal is not None and noise.thermal.gamma_tau > 0.0:
        s_damped, t = effective_s_damping(s, noise.thermal)
        inv_scale = 1.0 / t
        scale_pref = 1.0 / (t * t)
    else:
        s_damped = s
    if noise.efficiency is not None:
        etas = noise.efficiency.as_tuple()
    else:
        etas = (1.0, 1.0, 1.0)
    s_modes = tuple(-(1.0 - s_damped - eta) / eta for eta in etas)
    prefs = tuple(scale_pref / eta for eta in etas)
    return s_modes, prefs, inv_scale


def measured_w3_detection(
    state: states.StateSpec,
    point: states.PhasePoint3,
    s: float,
    eff: DetectionEfficiency,
) -> float:
    """Joint quasiprobability recorded by three inefficient detectors."""
    s = states.check_s(s)
    s_modes = tuple(effective_s_detection(s, eta) for eta in eff.as_tuple())
    value = states.w3_modal(state, point, s_modes)
    return value / (eff.eta_a * eff.eta_b * eff.eta_c)


def damped_w3(
    state: states.StateSpec,
    point: states.PhasePoint3,
    s: float,
    ch: ThermalChannel,
) -> float:
    """Quasiprobability of the state after local thermal damping."""
    s_prime, t = effective_s_damping(s, ch)
    if not isinstance(point, states.PhasePoint3):
        point = states.PhasePoint3(*point)
    scaled = states.PhasePoint3(point.alpha / t, point.beta / t, point.gamma / t)
    return states.w3(state, scaled, s_prime) / t**6


def thermal_w1(a: complex, nbar: float, s: float) -> float:
    """Single-mode quasiprobability of a thermal state."""
    s = states.check_s(s)
    if nbar < 0.0:
        raise ValueError(f"nbar must be >= 0, got {nbar}")
    a = complex(a)
    theta = 2.0 * nbar + 1.0 - s
    return 2.0 / (math.pi * theta) * math.exp(-2.0 * abs(a) ** 2 / theta)


def convolution_check(
    state: states.StateSpec,
    point: states.PhasePoint3,
    s: float,
    ch: ThermalChannel,
    nodes: int = 10,
) -> float:
    """Damped quasiprobability by explicit convolution with thermal kernels.

    Six-dimensional Gauss-Hermite quadrature against the product of
    single-mode thermal distributions; validation-only companion of
    :func:`damped_w3` (the nodes are matched to the thermal Gaussian, so
    the prefactors reduce to 1/pi^3).
    """
    if nodes**6 > 2 * 10**7:
        raise MemoryError(f"{nodes} nodes per axis exceeds the desk-scale grid cap")
    s = states.check_s(s)
    if not isinstance(point, states.PhasePoint3):
        point = states.PhasePoint3(*point)
    t_sq = math.exp(-ch.gamma_tau)
    t = math.sqrt(t_sq)
    r = math.sqrt(1.0 - t_sq)
    if r == 0.0:
        return states.w3(state, point, s)

    theta = 2.0 * ch.nbar + 1.0 - s
    y, wts = hermite_nodes(nodes)
    y = y * math.sqrt(theta / 2.0)

    target = np.array(point.coords())
    total = 0.0
    grid_inner = np.stack(
        np.meshgrid(y, y, y, y, indexing="ij"), axis=-1
    ).reshape(-1, 4)
    w_inner = np.prod(
        np.stack(np.meshgrid(wts, wts, wts, wts, indexing="ij"), axis=-1).reshape(-1, 4),
        axis=1,
    )
    for i1 in range(nodes):
        for i2 in range(nodes):
            pts = np.empty((grid_inner.shape[0], 6))
            pts[:, 0] = (target[0] - r * y[i1]) / t
            pts[:, 1] = (target[1] - r * y[i2]) / t
            pts[:, 2:] = (target[2:] - r * grid_inner) / t
            vals = states.w3_batch(state, pts, s)
            total += wts[i1] * wts[i2] * float(np.dot(w_inner, vals))
    return total / (math.pi**3 * t**6)
