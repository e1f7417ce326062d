# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled quasiprobability kernels; scalar twin of ``_slow.py``.

Keep formula structure in sync with the fallback; the parity test suite
compares the two backends pointwise.
"""

from libc.math cimport M_PI, cos, cosh, exp, sinh, sqrt

import numpy as np

BACKEND_NAME = "compiled"

FAMILY_SINGLE_PHOTON = 0
FAMILY_SQUEEZED_VACUUM = 1
FAMILY_GHZ_ECS = 2

DEF FAM_PHOTON = 0
DEF FAM_SQUEEZED = 1
DEF FAM_ECS = 2


cdef class PreparedBell:
    """Scalar evaluator for MK/Svetlichny assemblies of one state family."""

    cdef public int family
    cdef public double param, s_design, s_eval, inv_scale
    cdef public double c3, c2, c1, c0
    cdef double u
    # single-photon family
    cdef double cs0, cs1, cs2
    # squeezed family
    cdef double w3_pref, e_t, e_s
    cdef double p2_dr, p2_or, p2_di, p2_oi, w2_pref
    cdef double p1_r, p1_i, w1_pref
    # cat-state family
    cdef double zeta, n2

    def __init__(self, int family, double param, double s_design,
                 s_eval=None, double mode_pref=1.0, double inv_scale=1.0):
        cdef double s, one, c3, c2, c1, c0
        cdef double r, c2h, s2h, k, big, small
        cdef double a_re, b_re, a_im, b_im, det_re, det_im, v_re, v_im

        if s_eval is None:
            s = s_design
        else:
            s = <double> s_eval
        self.family = family
        self.param = param
        self.s_design = s_design
        self.s_eval = s
        self.inv_scale = inv_scale

        one = 1.0 - s_design
        if s_design > -1.0:
            c3 = M_PI ** 3 * one ** 6 / 8.0
            c2 = M_PI ** 2 * one ** 4 * s_design / 4.0
            c1 = M_PI * one ** 2 * s_design ** 2 / 2.0
            c0 = s_design ** 3
        else:
            c3 = M_PI ** 3 * one ** 3
            c2 = -(M_PI ** 2) * one ** 2
            c1 = M_PI * one
            c0 = -1.0
        self.c3 = c3 * mode_pref ** 3
        self.c2 = c2 * mode_pref ** 2
        self.c1 = c1 * mode_pref
        self.c0 = c0

        self.u = 2.0 / (1.0 - s)
        if family == FAM_PHOTON:
            self.cs0 = sqrt(param / 3.0)
            self.cs1 = sqrt((1.0 - param / 3.0) / 2.0)
            self.cs2 = self.cs1
        elif family == FAM_SQUEEZED:
            r = param
            c2h = cosh(2.0 * r)
            s2h = sinh(2.0 * r)
            k = 1.0 + s * s - 2.0 * s * c2h
            self.w3_pref = 8.0 / (M_PI ** 3 * k ** 1.5)
            self.e_t = 2.0 * (s - c2h) / k
            self.e_s = 2.0 * s2h / (3.0 * k)
            big = exp(2.0 * r) - s
            small = exp(-2.0 * r) - s
            a_re = small / 4.0
            b_re = s2h / 6.0
            a_im = big / 4.0
            b_im = -s2h / 6.0
            det_re = a_re * (a_re + 2.0 * b_re)
            det_im = a_im * (a_im + 2.0 * b_im)
            self.p2_dr = (a_re + b_re) / det_re
            self.p2_or = b_re / det_re
            self.p2_di = (a_im + b_im) / det_im
            self.p2_oi = b_im / det_im
            self.w2_pref = 1.0 / (4.0 * M_PI ** 2 * sqrt(det_re * det_im))
            v_re = (3.0 * c2h - s2h - 3.0 * s) / 12.0
            v_im = (3.0 * c2h + s2h - 3.0 * s) / 12.0
            self.p1_r = 0.5 / v_re
            self.p1_i = 0.5 / v_im
            self.w1_pref = 1.0 / (2.0 * M_PI * sqrt(v_re * v_im))
        elif family == FAM_ECS:
            self.zeta = param
            self.n2 = 1.0 / (2.0 - 2.0 * exp(-6.0 * param * param))
        else:
            raise ValueError(f"unknown family id {family}")

    # -- scalar quasiprobability values ------------------------------------

    cdef double _w3s(self, double ar, double ai, double br, double bi,
                     double cr, double ci) nogil:
        cdef double u = self.u
        cdef double t = ar * ar + ai * ai + br * br + bi * bi + cr * cr + ci * ci
        cdef double lr, li, r_sq, i_sq, r_pair, i_pair, expo
        cdef double z, r_sum, i_sum, plus, minus, cross
        if self.family == FAM_PHOTON:
            lr = self.cs0 * ar + self.cs1 * br + self.cs2 * cr
            li = self.cs0 * ai + self.cs1 * bi + self.cs2 * ci
            return ((u / M_PI) ** 3 * exp(-u * t)
                    * (1.0 - u + u * u * (lr * lr + li * li)))
        if self.family == FAM_SQUEEZED:
            r_sq = ar * ar + br * br + cr * cr
            i_sq = ai * ai + bi * bi + ci * ci
            r_pair = ar * br + br * cr + cr * ar
            i_pair = ai * bi + bi * ci + ci * ai
            expo = self.e_t * t + self.e_s * (i_sq - 4.0 * i_pair - r_sq + 4.0 * r_pair)
            return self.w3_pref * exp(expo)
        z = self.zeta
        r_sum = ar + br + cr
        i_sum = ai + bi + ci
        plus = exp(-u * (t - 2.0 * z * r_sum + 3.0 * z * z))
        minus = exp(-u * (t + 2.0 * z * r_sum + 3.0 * z * z))
        cross = 2.0 * exp(u * (3.0 * self.s_eval * z * z - t)) * cos(2.0 * u * z * i_sum)
        return (u / M_PI) ** 3 * self.n2 * (plus + minus - cross)

    cdef double _w2s(self, int i, int j, double xr, double xi,
                     double yr, double yi) nogil:
        cdef double u = self.u
        cdef double t = xr * xr + xi * xi + yr * yr + yi * yi
        cdef double c_x, c_y, mu, lr, li, q
        cdef double z, plus, minus, cross
        if self.family == FAM_PHOTON:
            c_x = self.cs0 if i == 0 else (self.cs1 if i == 1 else self.cs2)
            c_y = self.cs0 if j == 0 else (self.cs1 if j == 1 else self.cs2)
            mu = c_x * c_x + c_y * c_y
            lr = c_x * xr + c_y * yr
            li = c_x * xi + c_y * yi
            return ((u / M_PI) ** 2 * exp(-u * t)
                    * (1.0 - mu * u + u * u * (lr * lr + li * li)))
        if self.family == FAM_SQUEEZED:
            q = (self.p2_dr * (xr * xr + yr * yr) - 2.0 * self.p2_or * xr * yr
                 + self.p2_di * (xi * xi + yi * yi) - 2.0 * self.p2_oi * xi * yi)
            return self.w2_pref * exp(-0.5 * q)
        z = self.zeta
        plus = exp(-u * (t - 2.0 * z * (xr + yr) + 2.0 * z * z))
        minus = exp(-u * (t + 2.0 * z * (xr + yr) + 2.0 * z * z))
        cross = (2.0 * exp(-2.0 * z * z + u * (2.0 * self.s_eval * z * z - t))
                 * cos(2.0 * u * z * (xi + yi)))
        return (u / M_PI) ** 2 * self.n2 * (plus + minus - cross)

    cdef double _w1s(self, int mode, double xr, double xi) nogil:
        cdef double u = self.u
        cdef double t = xr * xr + xi * xi
        cdef double c, mu
        cdef double z, plus, minus, cross
        if self.family == FAM_PHOTON:
            c = self.cs0 if mode == 0 else (self.cs1 if mode == 1 else self.cs2)
            mu = c * c
            return (u / M_PI) * exp(-u * t) * (1.0 - mu * u + u * u * mu * t)
        if self.family == FAM_SQUEEZED:
            return self.w1_pref * exp(-self.p1_r * xr * xr - self.p1_i * xi * xi)
        z = self.zeta
        plus = exp(-u * (t - 2.0 * z * xr + z * z))
        minus = exp(-u * (t + 2.0 * z * xr + z * z))
        cross = (2.0 * exp(-4.0 * z * z + u * (self.s_eval * z * z - t))
                 * cos(2.0 * u * z * xi))
        return (u / M_PI) * self.n2 * (plus + minus - cross)

    # -- assemblies --------------------------------------------------------

    def correlation(self, double ar, double ai, double br, double bi,
                    double cr, double ci):
        """Three-party correlation <O(a) O(b) O(c)> at the design order."""
        cdef double f = self.inv_scale
        cdef double value
        ar *= f; ai *= f; br *= f; bi *= f; cr *= f; ci *= f
        value = self.c3 * self._w3s(ar, ai, br, bi, cr, ci)
        value += self.c2 * (self._w2s(0, 1, ar, ai, br, bi)
                            + self._w2s(1, 2, br, bi, cr, ci)
                            + self._w2s(0, 2, ar, ai, cr, ci))
        value += self.c1 * (self._w1s(0, ar, ai) + self._w1s(1, br, bi)
                            + self._w1s(2, cr, ci))
        return value + self.c0

    cpdef tuple mk_pair(self, double[::1] x):
        """Grouped MK parameter and its primed partner for a 12-vector."""
        cdef double f = self.inv_scale
        cdef double ar = x[0] * f, ai = x[1] * f, pr = x[2] * f, pi_ = x[3] * f
        cdef double br = x[4] * f, bi = x[5] * f, qr = x[6] * f, qi = x[7] * f
        cdef double cr = x[8] * f, ci = x[9] * f, rr = x[10] * f, ri = x[11] * f
        cdef double d3, d3p, d2, d2p, m1, m1p, mk, mkp
        cdef double ab_uu, ab_up, ab_pu, ab_pp
        cdef double bc_uu, bc_up, bc_pu, bc_pp
        cdef double ac_uu, ac_up, ac_pu, ac_pp

        d3 = (self._w3s(ar, ai, br, bi, rr, ri)
              + self._w3s(ar, ai, qr, qi, cr, ci)
              + self._w3s(pr, pi_, br, bi, cr, ci)
              - self._w3s(pr, pi_, qr, qi, rr, ri))
        d3p = (self._w3s(pr, pi_, qr, qi, cr, ci)
               + self._w3s(pr, pi_, br, bi, rr, ri)
               + self._w3s(ar, ai, qr, qi, rr, ri)
               - self._w3s(ar, ai, br, bi, cr, ci))

        ab_uu = self._w2s(0, 1, ar, ai, br, bi)
        ab_up = self._w2s(0, 1, ar, ai, qr, qi)
        ab_pu = self._w2s(0, 1, pr, pi_, br, bi)
        ab_pp = self._w2s(0, 1, pr, pi_, qr, qi)
        bc_uu = self._w2s(1, 2, br, bi, cr, ci)
        bc_up = self._w2s(1, 2, br, bi, rr, ri)
        bc_pu = self._w2s(1, 2, qr, qi, cr, ci)
        bc_pp = self._w2s(1, 2, qr, qi, rr, ri)
        ac_uu = self._w2s(0, 2, ar, ai, cr, ci)
        ac_up = self._w2s(0, 2, ar, ai, rr, ri)
        ac_pu = self._w2s(0, 2, pr, pi_, cr, ci)
        ac_pp = self._w2s(0, 2, pr, pi_, rr, ri)
        d2 = ((ab_uu + ab_up + ab_pu - ab_pp)
              + (bc_uu + bc_up + bc_pu - bc_pp)
              + (ac_uu + ac_up + ac_pu - ac_pp))
        d2p = ((ab_pp + ab_pu + ab_up - ab_uu)
               + (bc_pp + bc_pu + bc_up - bc_uu)
               + (ac_pp + ac_pu + ac_up - ac_uu))

        m1 = self._w1s(0, ar, ai) + self._w1s(1, br, bi) + self._w1s(2, cr, ci)
        m1p = self._w1s(0, pr, pi_) + self._w1s(1, qr, qi) + self._w1s(2, rr, ri)

        mk = self.c3 * d3 + self.c2 * d2 + 2.0 * self.c1 * m1 + 2.0 * self.c0
        mkp = self.c3 * d3p + self.c2 * d2p + 2.0 * self.c1 * m1p + 2.0 * self.c0
        return mk, mkp


def _flatten(pts, int width):
    arr = np.ascontiguousarray(pts, dtype=np.float64)
    if arr.shape[arr.ndim - 1] != width:
        raise ValueError(f"last axis must have length {width}")
    scalar = arr.ndim == 1
    flat = arr.reshape(1, width) if scalar else arr.reshape(-1, width)
    return arr, flat, scalar


def w3(int family, double param, double s, pts):
    """Three-mode quasiprobability, vectorized over ``pts[..., :6]``."""
    arr, flat, scalar = _flatten(pts, 6)
    cdef double[:, ::1] v = flat
    out = np.empty(v.shape[0])
    cdef double[::1] o = out
    cdef PreparedBell prep = PreparedBell(family, param, s)
    cdef Py_ssize_t i
    with nogil:
        for i in range(v.shape[0]):
            o[i] = prep._w3s(v[i, 0], v[i, 1], v[i, 2], v[i, 3], v[i, 4], v[i, 5])
    if scalar:
        return float(out[0])
    return out.reshape(arr.shape[:arr.ndim - 1])


def w2(int family, double param, double s, int i, int j, pts):
    """Two-mode marginal over modes ``(i, j)``, vectorized over ``pts[..., :4]``."""
    arr, flat, scalar = _flatten(pts, 4)
    cdef double[:, ::1] v = flat
    out = np.empty(v.shape[0])
    cdef double[::1] o = out
    cdef PreparedBell prep = PreparedBell(family, param, s)
    cdef Py_ssize_t k
    with nogil:
        for k in range(v.shape[0]):
            o[k] = prep._w2s(i, j, v[k, 0], v[k, 1], v[k, 2], v[k, 3])
    if scalar:
        return float(out[0])
    return out.reshape(arr.shape[:arr.ndim - 1])


def w1(int family, double param, double s, int mode, pts):
    """One-mode marginal of mode ``mode``, vectorized over ``pts[..., :2]``."""
    arr, flat, scalar = _flatten(pts, 2)
    cdef double[:, ::1] v = flat
    out = np.empty(v.shape[0])
    cdef double[::1] o = out
    cdef PreparedBell prep = PreparedBell(family, param, s)
    cdef Py_ssize_t k
    with nogil:
        for k in range(v.shape[0]):
            o[k] = prep._w1s(mode, v[k, 0], v[k, 1])
    if scalar:
        return float(out[0])
    return out.reshape(arr.shape[:arr.ndim - 1])
