"""Shared test utilities: random draws, quadrature oracles, and the
closed-form product-coherent-state correlator used for bound checks."""

from __future__ import annotations

import math

import numpy as np

from phasebell import states
from phasebell._quad import hermite_nodes, legendre_grid
from phasebell.bell import MeasurementSettings


def rand_point(rng, sigma=0.5) -> states.PhasePoint3:
    v = rng.normal(0.0, sigma, 6)
    return states.PhasePoint3(
        complex(v[0], v[1]), complex(v[2], v[3]), complex(v[4], v[5])
    )


def rand_settings(rng, sigma=0.5) -> MeasurementSettings:
    return MeasurementSettings.from_array(rng.normal(0.0, sigma, 12))


def quad_2d(f, half_width: float, n: int = 61) -> float:
    """Tensor Gauss-Legendre integral of f(re, im) over a centered square."""
    x, w = legendre_grid(half_width, n)
    xx, yy = np.meshgrid(x, x, indexing="ij")
    vals = f(xx.reshape(-1), yy.reshape(-1))
    return float(np.einsum("i,j,ij->", w, w, np.asarray(vals).reshape(n, n)))


def marginal_half_width(spec: states.StateSpec) -> float:
    if isinstance(spec, states.GhzEcs):
        return max(5.0, 5.0 + 3.0 * spec.zeta)
    if isinstance(spec, states.SqueezedVacuum3):
        return max(5.0, 5.0 * math.exp(spec.r))
    return 5.0


def gh_scale(spec: states.StateSpec, s: float) -> float:
    """Per-family Gauss-Hermite axis scale matched to the broadest Gaussian
    envelope of the three-mode quasiprobability."""
    if isinstance(spec, states.SqueezedVacuum3):
        vmax = (math.exp(2.0 * spec.r) - s + 2.0 * math.sinh(2.0 * spec.r) / 3.0) / 4.0
        return math.sqrt(2.0 * vmax)
    base = math.sqrt((1.0 - s) / 2.0)
    if isinstance(spec, states.GhzEcs):
        return base + 0.5 * spec.zeta
    return base


def w3_normalization(spec: states.StateSpec, s: float, nodes: int = 20,
                     scale: float | None = None, value_fn=None) -> float:
    """Chunked 6-D Gauss-Hermite integral of w3 (or ``value_fn``) over all
    of phase space; streams the outer two axes to bound memory."""
    if scale is None:
        scale = gh_scale(spec, s)
    y, w = hermite_nodes(nodes)
    xs = y * scale
    mesh = np.meshgrid(xs, xs, xs, xs, indexing="ij")
    inner = np.stack([m.reshape(-1) for m in mesh], axis=-1)
    wmesh = np.meshgrid(w, w, w, w, indexing="ij")
    w_inner = np.prod(np.stack([m.reshape(-1) for m in wmesh], axis=-1), axis=1)
    corr_inner = np.exp(np.sum((inner / scale) ** 2, axis=1))
    pts = np.empty((inner.shape[0], 6))
    pts[:, 2:] = inner
    total = 0.0
    for i in range(nodes):
        pts[:, 0] = xs[i]
        c1 = math.exp((xs[i] / scale) ** 2)
        for j in range(nodes):
            pts[:, 1] = xs[j]
            c2 = math.exp((xs[j] / scale) ** 2)
            if value_fn is None:
                vals = states.w3_batch(spec, pts, s)
            else:
                vals = value_fn(pts)
            total += w[i] * w[j] * c1 * c2 * float(np.dot(w_inner * corr_inner, vals))
    return total * scale**6


def coherent_o_expectation(z: complex, delta: complex, s: float) -> float:
    """<z| O(delta; s) |z> for a coherent state, in closed form."""
    pi_val = math.exp(-2.0 * abs(delta - z) ** 2 / (1.0 - s))
    if s > -1.0:
        return (1.0 - s) * pi_val + s
    return 2.0 * pi_val - 1.0


def coherent_mk_pair(zs, settings: MeasurementSettings, s: float) -> tuple[float, float]:
    """(MK, MK') of a three-mode product coherent state |z1 z2 z3>; the
    correlations factorize into single-mode expectations."""
    m = settings
    pairs = [(m.alpha, m.alpha_p), (m.beta, m.beta_p), (m.gamma, m.gamma_p)]
    e = [
        (coherent_o_expectation(z, d, s), coherent_o_expectation(z, dp, s))
        for z, (d, dp) in zip(zs, pairs)
    ]

    def corr(i, j, k):
        return e[0][i] * e[1][j] * e[2][k]

    mk = corr(0, 0, 1) + corr(0, 1, 0) + corr(1, 0, 0) - corr(1, 1, 1)
    mkp = corr(1, 1, 0) + corr(1, 0, 1) + corr(0, 1, 1) - corr(0, 0, 0)
    return mk, mkp
