"""Pure-Python quasiprobability kernels.

Fallback backend mirroring the compiled extension in ``_fast.pyx``. The
module-level functions are numpy-vectorized over trailing coordinate axes
(used by quadrature checks); :class:`PreparedBell` is plain scalar math so
the derivative-free optimizer does not pay array-boxing overhead on every
objective evaluation.

Coordinate layout conventions:

* a phase-space point of ``k`` modes is ``(x1_re, x1_im, ..., xk_re, xk_im)``
* a full settings vector is
  ``(a_re, a_im, a'_re, a'_im, b_re, b_im, b'_re, b'_im, c_re, c_im, c'_re, c'_im)``
"""

from __future__ import annotations

import math

import numpy as np

BACKEND_NAME = "python"

FAMILY_SINGLE_PHOTON = 0
FAMILY_SQUEEZED_VACUUM = 1
FAMILY_GHZ_ECS = 2


def photon_amplitudes(p: float) -> tuple[float, float, float]:
    """Mode amplitudes of the delocalized single photon for weight ``p``."""
    c_a = math.sqrt(p / 3.0)
    c_bc = math.sqrt((1.0 - p / 3.0) / 2.0)
    return c_a, c_bc, c_bc


def ecs_norm_sq(zeta: float) -> float:
    """Squared normalization of the odd three-mode cat state."""
    return 1.0 / (2.0 - 2.0 * math.exp(-6.0 * zeta * zeta))


def _gaussian_pair_consts(r: float, s: float):
    """Per-quadrature 2x2 covariance blocks (a*I + b*J form) of the
    two-mode marginal of the symmetric three-mode squeezed vacuum."""
    big = math.exp(2.0 * r) - s
    small = math.exp(-2.0 * r) - s
    s2 = math.sinh(2.0 * r)
    a_re, b_re = small / 4.0, s2 / 6.0
    a_im, b_im = big / 4.0, -s2 / 6.0
    return a_re, b_re, a_im, b_im


def _gaussian_single_vars(r: float, s: float) -> tuple[float, float]:
    c2 = math.cosh(2.0 * r)
    s2 = math.sinh(2.0 * r)
    return (3.0 * c2 - s2 - 3.0 * s) / 12.0, (3.0 * c2 + s2 - 3.0 * s) / 12.0


def w3(family: int, param: float, s: float, pts):
    """Three-mode quasiprobability, vectorized over ``pts[..., :6]``."""
    pts = np.asarray(pts, dtype=float)
    ar, ai = pts[..., 0], pts[..., 1]
    br, bi = pts[..., 2], pts[..., 3]
    cr, ci = pts[..., 4], pts[..., 5]
    t = ar * ar + ai * ai + br * br + bi * bi + cr * cr + ci * ci

    if family == FAMILY_SINGLE_PHOTON:
        u = 2.0 / (1.0 - s)
        c_a, c_b, c_c = photon_amplitudes(param)
        lin_re = c_a * ar + c_b * br + c_c * cr
        lin_im = c_a * ai + c_b * bi + c_c * ci
        bracket = 1.0 - u + u * u * (lin_re * lin_re + lin_im * lin_im)
        return (u / math.pi) ** 3 * np.exp(-u * t) * bracket

    if family == FAMILY_SQUEEZED_VACUUM:
        c2 = math.cosh(2.0 * param)
        s2 = math.sinh(2.0 * param)
        k = 1.0 + s * s - 2.0 * s * c2
        r_sq = ar * ar + br * br + cr * cr
        i_sq = ai * ai + bi * bi + ci * ci
        r_pair = ar * br + br * cr + cr * ar
        i_pair = ai * bi + bi * ci + ci * ai
        expo = (2.0 / (3.0 * k)) * (
            3.0 * (s - c2) * t + (i_sq - 4.0 * i_pair - r_sq + 4.0 * r_pair) * s2
        )
        return 8.0 / (math.pi**3 * k**1.5) * np.exp(expo)

    if family == FAMILY_GHZ_ECS:
        u = 2.0 / (1.0 - s)
        z = param
        n2 = ecs_norm_sq(z)
        r_sum = ar + br + cr
        i_sum = ai + bi + ci
        plus = np.exp(-u * (t - 2.0 * z * r_sum + 3.0 * z * z))
        minus = np.exp(-u * (t + 2.0 * z * r_sum + 3.0 * z * z))
        cross = 2.0 * np.exp(u * (3.0 * s * z * z - t)) * np.cos(2.0 * u * z * i_sum)
        return (u / math.pi) ** 3 * n2 * (plus + minus - cross)

    raise ValueError(f"unknown family id {family}")


def w2(family: int, param: float, s: float, i: int, j: int, pts):
    """Two-mode marginal over modes ``(i, j)``, vectorized over ``pts[..., :4]``."""
    pts = np.asarray(pts, dtype=float)
    xr, xi = pts[..., 0], pts[..., 1]
    yr, yi = pts[..., 2], pts[..., 3]
    t = xr * xr + xi * xi + yr * yr + yi * yi

    if family == FAMILY_SINGLE_PHOTON:
        u = 2.0 / (1.0 - s)
        cs = photon_amplitudes(param)
        c_x, c_y = cs[i], cs[j]
        mu = c_x * c_x + c_y * c_y
        lin_re = c_x * xr + c_y * yr
        lin_im = c_x * xi + c_y * yi
        bracket = 1.0 - mu * u + u * u * (lin_re * lin_re + lin_im * lin_im)
        return (u / math.pi) ** 2 * np.exp(-u * t) * bracket

    if family == FAMILY_SQUEEZED_VACUUM:
        a_re, b_re, a_im, b_im = _gaussian_pair_consts(param, s)
        det_re = a_re * (a_re + 2.0 * b_re)
        det_im = a_im * (a_im + 2.0 * b_im)
        q_re = ((a_re + b_re) * (xr * xr + yr * yr) - 2.0 * b_re * xr * yr) / det_re
        q_im = ((a_im + b_im) * (xi * xi + yi * yi) - 2.0 * b_im * xi * yi) / det_im
        pref = 1.0 / (4.0 * math.pi**2 * math.sqrt(det_re * det_im))
        return pref * np.exp(-0.5 * (q_re + q_im))

    if family == FAMILY_GHZ_ECS:
        u = 2.0 / (1.0 - s)
        z = param
        n2 = ecs_norm_sq(z)
        r_sum = xr + yr
        i_sum = xi + yi
        plus = np.exp(-u * (t - 2.0 * z * r_sum + 2.0 * z * z))
        minus = np.exp(-u * (t + 2.0 * z * r_sum + 2.0 * z * z))
        cross = (
            2.0
            * math.exp(-2.0 * z * z)
            * np.exp(u * (2.0 * s * z * z - t))
            * np.cos(2.0 * u * z * i_sum)
        )
        return (u / math.pi) ** 2 * n2 * (plus + minus - cross)

    raise ValueError(f"unknown family id {family}")


def w1(family: int, param: float, s: float, mode: int, pts):
    """One-mode marginal of mode ``mode``, vectorized over ``pts[..., :2]``."""
    pts = np.asarray(pts, dtype=float)
    xr, xi = pts[..., 0], pts[..., 1]
    t = xr * xr + xi * xi

    if family == FAMILY_SINGLE_PHOTON:
        u = 2.0 / (1.0 - s)
        c = photon_amplitudes(param)[mode]
        mu = c * c
        bracket = 1.0 - mu * u + u * u * mu * t
        return (u / math.pi) * np.exp(-u * t) * bracket

    if family == FAMILY_SQUEEZED_VACUUM:
        v_re, v_im = _gaussian_single_vars(param, s)
        pref = 1.0 / (2.0 * math.pi * math.sqrt(v_re * v_im))
        return pref * np.exp(-xr * xr / (2.0 * v_re) - xi * xi / (2.0 * v_im))

    if family == FAMILY_GHZ_ECS:
        u = 2.0 / (1.0 - s)
        z = param
        n2 = ecs_norm_sq(z)
        plus = np.exp(-u * (t - 2.0 * z * xr + z * z))
        minus = np.exp(-u * (t + 2.0 * z * xr + z * z))
        cross = (
            2.0
            * math.exp(-4.0 * z * z)
            * np.exp(u * (s * z * z - t))
            * np.cos(2.0 * u * z * xi)
        )
        return (u / math.pi) * n2 * (plus + minus - cross)

    raise ValueError(f"unknown family id {family}")


class PreparedBell:
    """Scalar evaluator for MK/Svetlichny assemblies of one state family.

    ``s_design`` fixes the branch coefficients of the observable expansion;
    ``s_eval`` is the (possibly noise-shifted) order at which the
    quasiprobability values themselves are taken. ``mode_pref`` multiplies
    each detected-mode quasiprobability factor and ``inv_scale`` rescales
    all phase-space coordinates (both are 1 in the noiseless case).
    """

    def __init__(
        self,
        family: int,
        param: float,
        s_design: float,
        s_eval: float | None = None,
        mode_pref: float = 1.0,
        inv_scale: float = 1.0,
    ):
        if s_eval is None:
            s_eval = s_design
        self.family = family
        self.param = param
        self.s_design = s_design
        self.s_eval = s_eval
        self.inv_scale = inv_scale

        one = 1.0 - s_design
        if s_design > -1.0:
            c3 = math.pi**3 * one**6 / 8.0
            c2 = math.pi**2 * one**4 * s_design / 4.0
            c1 = math.pi * one**2 * s_design**2 / 2.0
            c0 = s_design**3
        else:
            c3 = math.pi**3 * one**3
            c2 = -(math.pi**2) * one**2
            c1 = math.pi * one
            c0 = -1.0
        self.c3 = c3 * mode_pref**3
        self.c2 = c2 * mode_pref**2
        self.c1 = c1 * mode_pref
        self.c0 = c0

        s = s_eval
        self.u = 2.0 / (1.0 - s)
        if family == FAMILY_SINGLE_PHOTON:
            self.cs = photon_amplitudes(param)
        elif family == FAMILY_SQUEEZED_VACUUM:
            r = param
            self.c2h = math.cosh(2.0 * r)
            self.s2h = math.sinh(2.0 * r)
            self.k = 1.0 + s * s - 2.0 * s * self.c2h
            self.w3_pref = 8.0 / (math.pi**3 * self.k**1.5)
            self.e_t = 2.0 * (s - self.c2h) / self.k
            self.e_s = 2.0 * self.s2h / (3.0 * self.k)
            a_re, b_re, a_im, b_im = _gaussian_pair_consts(r, s)
            det_re = a_re * (a_re + 2.0 * b_re)
            det_im = a_im * (a_im + 2.0 * b_im)
            self.p2_dr = (a_re + b_re) / det_re
            self.p2_or = b_re / det_re
            self.p2_di = (a_im + b_im) / det_im
            self.p2_oi = b_im / det_im
            self.w2_pref = 1.0 / (4.0 * math.pi**2 * math.sqrt(det_re * det_im))
            v_re, v_im = _gaussian_single_vars(r, s)
            self.p1_r = 0.5 / v_re
            self.p1_i = 0.5 / v_im
            self.w1_pref = 1.0 / (2.0 * math.pi * math.sqrt(v_re * v_im))
        elif family == FAMILY_GHZ_ECS:
            self.zeta = param
            self.n2 = ecs_norm_sq(param)
        else:
            raise ValueError(f"unknown family id {family}")

    # -- scalar quasiprobability values ------------------------------------

    def _w3s(self, ar, ai, br, bi, cr, ci):
        fam, u = self.family, self.u
        t = ar * ar + ai * ai + br * br + bi * bi + cr * cr + ci * ci
        if fam == FAMILY_SINGLE_PHOTON:
            c_a, c_b, c_c = self.cs
            lr = c_a * ar + c_b * br + c_c * cr
            li = c_a * ai + c_b * bi + c_c * ci
            return (
                (u / math.pi) ** 3
                * math.exp(-u * t)
                * (1.0 - u + u * u * (lr * lr + li * li))
            )
        if fam == FAMILY_SQUEEZED_VACUUM:
            r_sq = ar * ar + br * br + cr * cr
            i_sq = ai * ai + bi * bi + ci * ci
            r_pair = ar * br + br * cr + cr * ar
            i_pair = ai * bi + bi * ci + ci * ai
            expo = self.e_t * t + self.e_s * (
                i_sq - 4.0 * i_pair - r_sq + 4.0 * r_pair
            )
            return self.w3_pref * math.exp(expo)
        z = self.zeta
        r_sum = ar + br + cr
        i_sum = ai + bi + ci
        s = self.s_eval
        plus = math.exp(-u * (t - 2.0 * z * r_sum + 3.0 * z * z))
        minus = math.exp(-u * (t + 2.0 * z * r_sum + 3.0 * z * z))
        cross = 2.0 * math.exp(u * (3.0 * s * z * z - t)) * math.cos(
            2.0 * u * z * i_sum
        )
        return (u / math.pi) ** 3 * self.n2 * (plus + minus - cross)

    def _w2s(self, i, j, xr, xi, yr, yi):
        fam, u = self.family, self.u
        t = xr * xr + xi * xi + yr * yr + yi * yi
        if fam == FAMILY_SINGLE_PHOTON:
            c_x, c_y = self.cs[i], self.cs[j]
            mu = c_x * c_x + c_y * c_y
            lr = c_x * xr + c_y * yr
            li = c_x * xi + c_y * yi
            return (
                (u / math.pi) ** 2
                * math.exp(-u * t)
                * (1.0 - mu * u + u * u * (lr * lr + li * li))
            )
        if fam == FAMILY_SQUEEZED_VACUUM:
            q = (
                self.p2_dr * (xr * xr + yr * yr)
                - 2.0 * self.p2_or * xr * yr
                + self.p2_di * (xi * xi + yi * yi)
                - 2.0 * self.p2_oi * xi * yi
            )
            return self.w2_pref * math.exp(-0.5 * q)
        z = self.zeta
        s = self.s_eval
        plus = math.exp(-u * (t - 2.0 * z * (xr + yr) + 2.0 * z * z))
        minus = math.exp(-u * (t + 2.0 * z * (xr + yr) + 2.0 * z * z))
        cross = (
            2.0
            * math.exp(-2.0 * z * z + u * (2.0 * s * z * z - t))
            * math.cos(2.0 * u * z * (xi + yi))
        )
        return (u / math.pi) ** 2 * self.n2 * (plus + minus - cross)

    def _w1s(self, mode, xr, xi):
        fam, u = self.family, self.u
        t = xr * xr + xi * xi
        if fam == FAMILY_SINGLE_PHOTON:
            c = self.cs[mode]
            mu = c * c
            return (
                (u / math.pi)
                * math.exp(-u * t)
                * (1.0 - mu * u + u * u * mu * t)
            )
        if fam == FAMILY_SQUEEZED_VACUUM:
            return self.w1_pref * math.exp(-self.p1_r * xr * xr - self.p1_i * xi * xi)
        z = self.zeta
        s = self.s_eval
        plus = math.exp(-u * (t - 2.0 * z * xr + z * z))
        minus = math.exp(-u * (t + 2.0 * z * xr + z * z))
        cross = (
            2.0
            * math.exp(-4.0 * z * z + u * (s * z * z - t))
            * math.cos(2.0 * u * z * xi)
        )
        return (u / math.pi) * self.n2 * (plus + minus - cross)

    # -- assemblies --------------------------------------------------------

    def correlation(self, ar, ai, br, bi, cr, ci) -> float:
        """Three-party correlation <O(a) O(b) O(c)> at the design order."""
        f = self.inv_scale
        ar, ai, br, bi, cr, ci = ar * f, ai * f, br * f, bi * f, cr * f, ci * f
        value = self.c3 * self._w3s(ar, ai, br, bi, cr, ci)
        value += self.c2 * (
            self._w2s(0, 1, ar, ai, br, bi)
            + self._w2s(1, 2, br, bi, cr, ci)
            + self._w2s(0, 2, ar, ai, cr, ci)
        )
        value += self.c1 * (
            self._w1s(0, ar, ai) + self._w1s(1, br, bi) + self._w1s(2, cr, ci)
        )
        return value + self.c0

    def mk_pair(self, x) -> tuple[float, float]:
        """Grouped evaluation of the MK parameter and its primed partner.

        ``x`` is the 12-component settings vector. Shares quasiprobability
        terms between the two combinations; algebraically identical to
        summing four three-party correlations each.
        """
        f = self.inv_scale
        ar, ai, pr, pi_ = x[0] * f, x[1] * f, x[2] * f, x[3] * f
        br, bi, qr, qi = x[4] * f, x[5] * f, x[6] * f, x[7] * f
        cr, ci, rr, ri = x[8] * f, x[9] * f, x[10] * f, x[11] * f

        w3 = self._w3s
        d3 = (
            w3(ar, ai, br, bi, rr, ri)
            + w3(ar, ai, qr, qi, cr, ci)
            + w3(pr, pi_, br, bi, cr, ci)
            - w3(pr, pi_, qr, qi, rr, ri)
        )
        d3p = (
            w3(pr, pi_, qr, qi, cr, ci)
            + w3(pr, pi_, br, bi, rr, ri)
            + w3(ar, ai, qr, qi, rr, ri)
            - w3(ar, ai, br, bi, cr, ci)
        )

        w2 = self._w2s
        ab_uu = w2(0, 1, ar, ai, br, bi)
        ab_up = w2(0, 1, ar, ai, qr, qi)
        ab_pu = w2(0, 1, pr, pi_, br, bi)
        ab_pp = w2(0, 1, pr, pi_, qr, qi)
        bc_uu = w2(1, 2, br, bi, cr, ci)
        bc_up = w2(1, 2, br, bi, rr, ri)
        bc_pu = w2(1, 2, qr, qi, cr, ci)
        bc_pp = w2(1, 2, qr, qi, rr, ri)
        ac_uu = w2(0, 2, ar, ai, cr, ci)
        ac_up = w2(0, 2, ar, ai, rr, ri)
        ac_pu = w2(0, 2, pr, pi_, cr, ci)
        ac_pp = w2(0, 2, pr, pi_, rr, ri)
        d2 = (ab_uu + ab_up + ab_pu - ab_pp) + (bc_uu + bc_up + bc_pu - bc_pp) + (
            ac_uu + ac_up + ac_pu - ac_pp
        )
        d2p = (ab_pp + ab_pu + ab_up - ab_uu) + (bc_pp + bc_pu + bc_up - bc_uu) + (
            ac_pp + ac_pu + ac_up - ac_uu
        )

        w1 = self._w1s
        m1 = w1(0, ar, ai) + w1(1, br, bi) + w1(2, cr, ci)
        m1p = w1(0, pr, pi_) + w1(1, qr, qi) + w1(2, rr, ri)

        mk = self.c3 * d3 + self.c2 * d2 + 2.0 * self.c1 * m1 + 2.0 * self.c0
        mkp = self.c3 * d3p + self.c2 * d2p + 2.0 * self.c1 * m1p + 2.0 * self.c0
        return mk, mkp
