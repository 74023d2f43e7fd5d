# cython: language_level=3
# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel twin of ``_pykern``: same callables, same algorithms.

Only the hot scalar math and the grid scans live here; everything with a
contract (validation, types, optimization protocol) stays in the public
modules.  See ``_pykern`` for parameter conventions.
"""

from libc.math cimport (M_PI, exp, expm1, fabs, lgamma as c_lgamma, log,
                        pow as c_pow, sin, sqrt, tgamma)

import numpy as np

cdef double _INVPHI = 0.6180339887498949
cdef double _DIGAMMA_SHIFT = 10.0
cdef double _BETA_OVERFLOW = 175.0


cdef double _digamma(double x) noexcept nogil:
    cdef double acc = 0.0
    cdef double w
    while x < _DIGAMMA_SHIFT:
        acc -= 1.0 / x
        x += 1.0
    w = 1.0 / (x * x)
    return acc + log(x) - 0.5 / x - w * (
        1.0 / 12.0
        - w * (1.0 / 120.0
               - w * (1.0 / 252.0
                      - w * (1.0 / 240.0
                             - w * (1.0 / 132.0 - w * (691.0 / 32760.0))))))


cdef inline double _sinpi_g(double g) noexcept nogil:
    cdef double w = g - 1.0
    if w > 0.5:
        w = 2.0 - g
    return -sin(M_PI * w)


cdef inline double _cospi_g(double g) noexcept nogil:
    return -sin(M_PI * (1.5 - g))


cdef inline double _vg(double g) noexcept nogil:
    return -1.0 / (_sinpi_g(g) * tgamma(2.0 * g - 1.0))


cdef double _dvg(double g) noexcept nogil:
    cdef double s = _sinpi_g(g)
    return (M_PI * _cospi_g(g) + 2.0 * s * _digamma(2.0 * g - 1.0)) / (
        s * s * tgamma(2.0 * g - 1.0))


cdef inline double _beta(double g, double lamq, double t, double v) noexcept nogil:
    if t <= 0.0:
        return 0.0
    return lamq * c_pow(t, 2.0 * g) * v / (2.0 * g)


cdef double _gb(double g, double lamq, double t, double v, double dv) noexcept nogil:
    cdef double tp, b, db
    if t <= 0.0:
        return 0.0
    tp = c_pow(t, 2.0 * g)
    b = lamq * tp * v / (2.0 * g)
    if b == 0.0 or b > _BETA_OVERFLOW:
        return 0.0
    db = lamq * tp / (2.0 * g * g) * (g * dv + (2.0 * g * log(t) - 1.0) * v)
    return db * db / expm1(4.0 * b)


cdef inline double _cobj(double lp1, double lp2, double lq1, double lq2,
                         double s) noexcept nogil:
    return exp(s * lp1 + (1.0 - s) * lp2) + exp(s * lq1 + (1.0 - s) * lq2)


cdef double _chernoff_s(double p1, double p2, double q1, double q2,
                        double s_tol, double* s_out) noexcept nogil:
    cdef double lp1, lp2, lq1, lq2, a, b, c, d, fc, fd, s, q
    if p1 == p2:
        s_out[0] = 0.5
        return 1.0
    if q1 == 0.0:
        s_out[0] = 0.0
        return p2
    if q2 == 0.0:
        s_out[0] = 1.0
        return p1
    lp1 = log(p1)
    lp2 = log(p2)
    lq1 = log(q1)
    lq2 = log(q2)
    a = 0.0
    b = 1.0
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc = _cobj(lp1, lp2, lq1, lq2, c)
    fd = _cobj(lp1, lp2, lq1, lq2, d)
    while b - a > s_tol:
        if fc < fd:
            b = d
            d = c
            fd = fc
            c = b - _INVPHI * (b - a)
            fc = _cobj(lp1, lp2, lq1, lq2, c)
        else:
            a = c
            c = d
            fc = fd
            d = a + _INVPHI * (b - a)
            fd = _cobj(lp1, lp2, lq1, lq2, d)
    s = 0.5 * (a + b)
    q = _cobj(lp1, lp2, lq1, lq2, s)
    if fc < q:
        q = fc
        s = c
    if fd < q:
        q = fd
        s = d
    if q > 1.0:
        q = 1.0
    s_out[0] = s
    return q


# ---------------------------------------------------------------------------
# python-visible wrappers


def lgamma_fn(double x):
    return c_lgamma(x)


def digamma_fn(double x):
    return _digamma(x)


def v_gamma(double g):
    return _vg(g)


def dv_gamma(double g):
    return _dvg(g)


def covariance_fn(double g, double t, double s):
    cdef double h2 = 2.0 * (g - 1.0)
    return 0.5 * _vg(g) * (c_pow(fabs(t), h2) + c_pow(fabs(s), h2)
                           - c_pow(fabs(t - s), h2))


def beta_fn(double g, double lamq, double t):
    return _beta(g, lamq, t, _vg(g))


def dbeta_fn(double g, double lamq, double t):
    cdef double v, dv, tp
    if t <= 0.0:
        return 0.0
    v = _vg(g)
    dv = _dvg(g)
    tp = c_pow(t, 2.0 * g)
    return lamq * tp / (2.0 * g * g) * (g * dv + (2.0 * g * log(t) - 1.0) * v)


def visibility_fn(double g, double lamq, double t):
    return 0.5 * (1.0 + exp(-2.0 * _beta(g, lamq, t, _vg(g))))


def g_bures_fn(double g, double lamq, double t):
    return _gb(g, lamq, t, _vg(g), _dvg(g))


def helstrom_fn(double g1, double g2, double lamq, double t):
    cdef double b1 = _beta(g1, lamq, t, _vg(g1))
    cdef double b2 = _beta(g2, lamq, t, _vg(g2))
    return 0.5 - 0.25 * fabs(exp(-2.0 * b1) - exp(-2.0 * b2))


def chernoff_point(double p1, double p2, double s_tol=1e-10):
    cdef double s = 0.5
    cdef double q = _chernoff_s(p1, p2, 1.0 - p1, 1.0 - p2, s_tol, &s)
    return q, s


def chernoff_fn(double g1, double g2, double lamq, double t, double s_tol=1e-10):
    cdef double b1 = _beta(g1, lamq, t, _vg(g1))
    cdef double b2 = _beta(g2, lamq, t, _vg(g2))
    cdef double p1 = 0.5 * (1.0 + exp(-2.0 * b1))
    cdef double p2 = 0.5 * (1.0 + exp(-2.0 * b2))
    cdef double q1 = -0.5 * expm1(-2.0 * b1)
    cdef double q2 = -0.5 * expm1(-2.0 * b2)
    cdef double s = 0.5
    cdef double q = _chernoff_s(p1, p2, q1, q2, s_tol, &s)
    return q, s


def g_bures_grid(double g, double lamq, ts):
    cdef double[::1] tv = np.ascontiguousarray(ts, dtype=np.float64)
    out = np.empty(tv.shape[0], dtype=np.float64)
    cdef double[::1] ov = out
    cdef double v = _vg(g)
    cdef double dv = _dvg(g)
    cdef Py_ssize_t i
    with nogil:
        for i in range(tv.shape[0]):
            ov[i] = _gb(g, lamq, tv[i], v, dv)
    return out


def helstrom_grid(double g1, double g2, double lamq, ts):
    cdef double[::1] tv = np.ascontiguousarray(ts, dtype=np.float64)
    out = np.empty(tv.shape[0], dtype=np.float64)
    cdef double[::1] ov = out
    cdef double v1 = _vg(g1)
    cdef double v2 = _vg(g2)
    cdef Py_ssize_t i
    with nogil:
        for i in range(tv.shape[0]):
            ov[i] = 0.5 - 0.25 * fabs(exp(-2.0 * _beta(g1, lamq, tv[i], v1))
                                      - exp(-2.0 * _beta(g2, lamq, tv[i], v2)))
    return out


def chernoff_grid(double g1, double g2, double lamq, ts, double s_tol=1e-10):
    cdef double[::1] tv = np.ascontiguousarray(ts, dtype=np.float64)
    qs = np.empty(tv.shape[0], dtype=np.float64)
    ss = np.empty(tv.shape[0], dtype=np.float64)
    cdef double[::1] qv = qs
    cdef double[::1] sv = ss
    cdef double v1 = _vg(g1)
    cdef double v2 = _vg(g2)
    cdef double b1, b2, p1, p2, c1, c2, s
    cdef Py_ssize_t i
    with nogil:
        for i in range(tv.shape[0]):
            b1 = _beta(g1, lamq, tv[i], v1)
            b2 = _beta(g2, lamq, tv[i], v2)
            p1 = 0.5 * (1.0 + exp(-2.0 * b1))
            p2 = 0.5 * (1.0 + exp(-2.0 * b2))
            c1 = -0.5 * expm1(-2.0 * b1)
            c2 = -0.5 * expm1(-2.0 * b2)
            s = 0.5
            qv[i] = _chernoff_s(p1, p2, c1, c2, s_tol, &s)
            sv[i] = s
    return qs, ss


def visibility_gamma_grid(gs, double lamq, double t):
    cdef double[::1] gv = np.ascontiguousarray(gs, dtype=np.float64)
    out = np.empty(gv.shape[0], dtype=np.float64)
    cdef double[::1] ov = out
    cdef Py_ssize_t i
    with nogil:
        for i in range(gv.shape[0]):
            ov[i] = 0.5 * (1.0 + exp(-2.0 * _beta(gv[i], lamq, t, _vg(gv[i]))))
    return out
