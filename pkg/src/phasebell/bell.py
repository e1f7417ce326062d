"""MK and Svetlichny functionals assembled from quasiprobability values.

Every local observable is the bounded displaced operator O(delta; s); its
expectation decomposes into three-, two- and one-mode quasiprobability
values with branch-dependent coefficients:

* for -1 < s <= 0: O = (1 - s) Pi + s * 1
* for s <= -1:     O = 2 Pi - 1

The runtime default assembles MK parameters by summing four three-party
correlations. A grouped evaluation (``mk_pair``) shares marginal terms
between the plain and primed combinations; its coefficients, including the
sign of the two-mode terms in the s <= -1 branch, were fixed by matching
the dense operator oracle (see docs/NOTES.md) and the two paths are held
equal by tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels, states
from .noise import NoiseChannel, effective_parameters


@dataclass(frozen=True)
class MeasurementSettings:
    """Six local displacement amplitudes, one plain/primed pair per mode."""

    alpha: complex
    alpha_p: complex
    beta: complex
    beta_p: complex
    gamma: complex
    gamma_p: complex

    def __post_init__(self):
        for name in ("alpha", "alpha_p", "beta", "beta_p", "gamma", "gamma_p"):
            z = complex(getattr(self, name))
            if not (math.isfinite(z.real) and math.isfinite(z.imag)):
                raise ValueError(f"{name} must be finite, got {z}")

    def to_array(self) -> np.ndarray:
        vals = []
        for name in ("alpha", "alpha_p", "beta", "beta_p", "gamma", "gamma_p"):
            z = complex(getattr(self, name))
            vals.extend((z.real, z.imag))
        return np.array(vals)

    @classmethod
    def from_array(cls, x) -> "MeasurementSettings":
        x = np.asarray(x, dtype=float).reshape(12)
        zs = [complex(x[2 * i], x[2 * i + 1]) for i in range(6)]
        return cls(*zs)

    def swap_primes(self) -> "MeasurementSettings":
        return MeasurementSettings(
            self.alpha_p, self.alpha, self.beta_p, self.beta, self.gamma_p, self.gamma
        )


@dataclass(frozen=True)
class BellResult:
    """One full evaluation: both MK combinations and the Svetlichny value."""

    mk: float
    mk_prime: float
    svetlichny: float
    settings: MeasurementSettings
    s: float
    sign: int


def branch_coefficients(s: float) -> tuple[float, float, float, float]:
    """Per-correlation weights (c3, c2, c1, c0) of the W3/W2/W1/constant terms."""
    one = 1.0 - s
    if s > -1.0:
        return (
            math.pi**3 * one**6 / 8.0,
            math.pi**2 * one**4 * s / 4.0,
            math.pi * one**2 * s**2 / 2.0,
            s**3,
        )
    return (math.pi**3 * one**3, -(math.pi**2) * one**2, math.pi * one, -1.0)


def prepared(state: states.StateSpec, s: float, noise: NoiseChannel | None = None):
    """Kernel evaluator for the uniform-noise case, or None when the noise
    is mode-asymmetric and the generic per-mode path must be used."""
    fam, param = states.family_id(state)
    s = states.check_s(s)
    if noise is None or noise.is_trivial():
        return _kernels.PreparedBell(fam, param, s)
    s_modes, prefs, inv_scale = effective_parameters(s, noise)
    if len(set(s_modes)) == 1 and len(set(prefs)) == 1:
        return _kernels.PreparedBell(
            fam, param, s, s_modes[0], prefs[0], inv_scale
        )
    return None


def _correlation_modal(
    state: states.StateSpec,
    a: complex,
    b: complex,
    c: complex,
    s: float,
    noise: NoiseChannel,
) -> float:
    s_modes, prefs, inv_scale = effective_parameters(s, noise)
    c3, c2, c1, c0 = branch_coefficients(s)
    a, b, cc = complex(a) * inv_scale, complex(b) * inv_scale, complex(c) * inv_scale
    pt = states.PhasePoint3(a, b, cc)
    pa, pb, pc = prefs
    w3v = states.w3_modal(state, pt, s_modes) * pa * pb * pc
    w2v = (
        states.w2_modal(state, (0, 1), a, b, (s_modes[0], s_modes[1])) * pa * pb
        + states.w2_modal(state, (1, 2), b, cc, (s_modes[1], s_modes[2])) * pb * pc
        + states.w2_modal(state, (0, 2), a, cc, (s_modes[0], s_modes[2])) * pa * pc
    )
    w1v = (
        states.w1_marginal(state, 0, a, s_modes[0]) * pa
        + states.w1_marginal(state, 1, b, s_modes[1]) * pb
        + states.w1_marginal(state, 2, cc, s_modes[2]) * pc
    )
    return c3 * w3v + c2 * w2v + c1 * w1v + c0


def correlation(
    state: states.StateSpec,
    a: complex,
    b: complex,
    c: complex,
    s: float,
    noise: NoiseChannel | None = None,
) -> float:
    """Three-party correlation <O(a; s) O(b; s) O(c; s)>, |value| <= 1."""
    prep = prepared(state, s, noise)
    if prep is None:
        return _correlation_modal(state, a, b, c, s, noise)
    a, b, c = complex(a), complex(b), complex(c)
    return prep.correlation(a.real, a.imag, b.real, b.imag, c.real, c.imag)


def mk_parameter(
    state: states.StateSpec,
    settings: MeasurementSettings,
    s: float,
    noise: NoiseChannel | None = None,
) -> float:
    """MK combination C(a,b,c') + C(a,b',c) + C(a',b,c) - C(a',b',c')."""
    m = settings
    return (
        correlation(state, m.alpha, m.beta, m.gamma_p, s, noise)
        + correlation(state, m.alpha, m.beta_p, m.gamma, s, noise)
        + correlation(state, m.alpha_p, m.beta, m.gamma, s, noise)
        - correlation(state, m.alpha_p, m.beta_p, m.gamma_p, s, noise)
    )


def mk_prime(
    state: states.StateSpec,
    settings: MeasurementSettings,
    s: float,
    noise: NoiseChannel | None = None,
) -> float:
    """MK combination with every plain/primed pair exchanged."""
    return mk_parameter(state, settings.swap_primes(), s, noise)


def mk_pair(
    state: states.StateSpec,
    settings: MeasurementSettings,
    s: float,
    noise: NoiseChannel | None = None,
) -> tuple[float, float]:
    """(MK, MK') via the grouped expansion that shares marginal terms."""
    prep = prepared(state, s, noise)
    if prep is None:
        return (
            mk_parameter(state, settings, s, noise),
            mk_prime(state, settings, s, noise),
        )
    return prep.mk_pair(settings.to_array())


def svetlichny(
    state: states.StateSpec,
    settings: MeasurementSettings,
    s: float,
    sign: int | None = None,
    noise: NoiseChannel | None = None,
) -> float:
    """|MK + sign * MK'|; with ``sign=None`` the larger of the two choices."""
    mk, mkp = mk_pair(state, settings, s, noise)
    if sign is None:
        return max(abs(mk + mkp), abs(mk - mkp))
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    return abs(mk + sign * mkp)


def evaluate(
    state: states.StateSpec,
    settings: MeasurementSettings,
    s: float,
    sign: int | None = None,
    noise: NoiseChannel | None = None,
) -> BellResult:
    """Full record of one settings evaluation (sign maximized if not fixed)."""
    mk, mkp = mk_pair(state, settings, s, noise)
    if sign is None:
        sign = 1 if abs(mk + mkp) >= abs(mk - mkp) else -1
    elif sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    return BellResult(
        mk=mk,
        mk_prime=mkp,
        svetlichny=abs(mk + sign * mkp),
        settings=settings,
        s=s,
        sign=sign,
    )


# ---------------------------------------------------------------------------
# Specialized collected forms (validated alternates of the generic path)
# ---------------------------------------------------------------------------


def _d_combination(state, s, u0, u1, v0, v1, w0, w1):
    """W3(u0,v0,w1) + W3(u0,v1,w0) + W3(u1,v0,w0) - W3(u1,v1,w1)."""
    return (
        states.w3(state, states.PhasePoint3(u0, v0, w1), s)
        + states.w3(state, states.PhasePoint3(u0, v1, w0), s)
        + states.w3(state, states.PhasePoint3(u1, v0, w0), s)
        - states.w3(state, states.PhasePoint3(u1, v1, w1), s)
    )


def svetlichny_wigner(
    state: states.StateSpec, settings: MeasurementSettings, sign: int | None = None
) -> float:
    """Svetlichny value at s = 0, where only the three-mode terms survive:
    (pi^3 / 8) |D +/- D'| with D the MK combination of Wigner values."""
    m = settings
    d = _d_combination(state, 0.0, m.alpha, m.alpha_p, m.beta, m.beta_p, m.gamma, m.gamma_p)
    dp = _d_combination(state, 0.0, m.alpha_p, m.alpha, m.beta_p, m.beta, m.gamma_p, m.gamma)
    pref = math.pi**3 / 8.0
    if sign is None:
        return pref * max(abs(d + dp), abs(d - dp))
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    return pref * abs(d + sign * dp)


def svetlichny_husimi(state: states.StateSpec, settings: MeasurementSettings) -> float:
    """Svetlichny value at s = -1 (plus-sign combination) written out in
    Husimi-function terms.

    The marginal Q2 terms enter with a negative coefficient and the
    assembly carries a -4 constant; both were pinned against the operator
    oracle rather than read off a printed expansion (see docs/NOTES.md).
    """
    m = settings
    s = -1.0
    d = _d_combination(state, s, m.alpha, m.alpha_p, m.beta, m.beta_p, m.gamma, m.gamma_p)
    dp = _d_combination(state, s, m.alpha_p, m.alpha, m.beta_p, m.beta, m.gamma_p, m.gamma)
    q2 = (
        states.w2_marginal(state, (0, 1), m.alpha, m.beta_p, s)
        + states.w2_marginal(state, (0, 1), m.alpha_p, m.beta, s)
        + states.w2_marginal(state, (1, 2), m.beta, m.gamma_p, s)
        + states.w2_marginal(state, (1, 2), m.beta_p, m.gamma, s)
        + states.w2_marginal(state, (0, 2), m.alpha, m.gamma_p, s)
        + states.w2_marginal(state, (0, 2), m.alpha_p, m.gamma, s)
    )
    q1 = (
        states.w1_marginal(state, 0, m.alpha, s)
        + states.w1_marginal(state, 0, m.alpha_p, s)
        + states.w1_marginal(state, 1, m.beta, s)
        + states.w1_marginal(state, 1, m.beta_p, s)
        + states.w1_marginal(state, 2, m.gamma, s)
        + states.w1_marginal(state, 2, m.gamma_p, s)
    )
    value = 8.0 * math.pi**3 * (d + dp) - 8.0 * math.pi**2 * q2 + 4.0 * math.pi * q1 - 4.0
    return abs(value)
