"""Pure-Python / numpy kernel twin of the compiled module ``_ckern``.

Both modules expose the same callables with identical algorithms, so the
selected backend never changes results beyond roundoff.  Scalars go
through :mod:`math`; grid variants are numpy-vectorized so the fallback
stays usable for full sweeps.

Conventions shared by every kernel:

* ``g``     complementary Hurst parameter, open interval (1, 2)
* ``lamq``  coupling raised to the family's exponent power, lambda**q
* ``t``     interaction time, >= 0

Domain validation lives in the public modules, not here.
"""

import math

import numpy as np

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
_DIGAMMA_SHIFT = 10.0
# exp(4*beta) overflows past beta ~ 177; the metric is zero there anyway
_BETA_OVERFLOW = 175.0


def lgamma_fn(x):
    """Natural log of the Euler gamma function (positive arguments)."""
    return math.lgamma(x)


def digamma_fn(x):
    """Digamma psi(x) for x > 0: upward recurrence, then the asymptotic
    series in 1/x**2 once the argument is >= 10."""
    acc = 0.0
    while x < _DIGAMMA_SHIFT:
        acc -= 1.0 / x
        x += 1.0
    w = 1.0 / (x * x)
    return acc + math.log(x) - 0.5 / x - w * (
        1.0 / 12.0
        - w * (1.0 / 120.0
               - w * (1.0 / 252.0
                      - w * (1.0 / 240.0
                             - w * (1.0 / 132.0 - w * (691.0 / 32760.0)))))
    )


def _sinpi_g(g):
    # sin(pi*g) for g in (1,2) is negative; measuring the angle from the
    # nearer integer keeps full relative accuracy at the interval ends.
    w = g - 1.0
    if w > 0.5:
        w = 2.0 - g
    return -math.sin(math.pi * w)


def _cospi_g(g):
    # cos(pi*g) for g in (1,2); exactly zero at g = 1.5.
    return -math.sin(math.pi * (1.5 - g))


def v_gamma(g):
    """Noise amplitude coefficient, pole-free form -1/(sin(pi g) Gamma(2g-1)).

    Equivalent to (2/pi) Gamma(2-2g) cos(pi g) by the reflection identity,
    but finite across the whole open interval including g = 3/2.
    """
    return -1.0 / (_sinpi_g(g) * math.gamma(2.0 * g - 1.0))


def dv_gamma(g):
    """d/dg of ``v_gamma`` obtained by differentiating the pole-free form."""
    s = _sinpi_g(g)
    num = math.pi * _cospi_g(g) + 2.0 * s * digamma_fn(2.0 * g - 1.0)
    return num / (s * s * math.gamma(2.0 * g - 1.0))


def covariance_fn(g, t, s):
    """Fractional-Brownian covariance K(t, s) with Hurst exponent g - 1."""
    h2 = 2.0 * (g - 1.0)
    return 0.5 * v_gamma(g) * (abs(t) ** h2 + abs(s) ** h2 - abs(t - s) ** h2)


def beta_fn(g, lamq, t):
    """Dephasing exponent lamq * t**(2g) * V(g) / (2g)."""
    if t <= 0.0:
        return 0.0
    return lamq * t ** (2.0 * g) * v_gamma(g) / (2.0 * g)


def dbeta_fn(g, lamq, t):
    """d beta / d g at fixed (lamq, t)."""
    if t <= 0.0:
        return 0.0
    v = v_gamma(g)
    dv = dv_gamma(g)
    tp = t ** (2.0 * g)
    return lamq * tp / (2.0 * g * g) * (g * dv + (2.0 * g * math.log(t) - 1.0) * v)


def visibility_fn(g, lamq, t):
    """Coherence weight p = (1 + exp(-2 beta)) / 2."""
    return 0.5 * (1.0 + math.exp(-2.0 * beta_fn(g, lamq, t)))


def g_bures_fn(g, lamq, t):
    """Bures metric of the equatorial dephasing family at one point.

    Assembled from the eigenvalue form (dp/dg)^2 / (4 p (1-p)), which
    collapses to (dbeta/dg)^2 / (exp(4 beta) - 1).
    """
    if t <= 0.0:
        return 0.0
    v = v_gamma(g)
    dv = dv_gamma(g)
    tp = t ** (2.0 * g)
    b = lamq * tp * v / (2.0 * g)
    if b == 0.0 or b > _BETA_OVERFLOW:
        return 0.0
    db = lamq * tp / (2.0 * g * g) * (g * dv + (2.0 * g * math.log(t) - 1.0) * v)
    return db * db / math.expm1(4.0 * b)


def helstrom_fn(g1, g2, lamq, t):
    """Single-shot error floor 1/2 - |exp(-2 b1) - exp(-2 b2)| / 4."""
    b1 = beta_fn(g1, lamq, t)
    b2 = beta_fn(g2, lamq, t)
    return 0.5 - 0.25 * abs(math.exp(-2.0 * b1) - math.exp(-2.0 * b2))


def _chernoff_obj(lp1, lp2, lq1, lq2, s):
    return math.exp(s * lp1 + (1.0 - s) * lp2) + math.exp(s * lq1 + (1.0 - s) * lq2)


def chernoff_point(p1, p2, s_tol=1e-10):
    """Minimize p1^s p2^(1-s) + (1-p1)^s (1-p2)^(1-s) over s in [0, 1].

    The objective is a sum of two exponentials in s, hence convex;
    golden-section search converges unconditionally.  Returns (q, s*).
    Degenerate inputs (equal weights, or a pure state with p = 1) take
    their limiting values directly.
    """
    if p1 == p2:
        return 1.0, 0.5
    q1 = 1.0 - p1
    q2 = 1.0 - p2
    if q1 == 0.0:
        return p2, 0.0
    if q2 == 0.0:
        return p1, 1.0
    lp1 = math.log(p1)
    lp2 = math.log(p2)
    lq1 = math.log(q1)
    lq2 = math.log(q2)
    a, b = 0.0, 1.0
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc = _chernoff_obj(lp1, lp2, lq1, lq2, c)
    fd = _chernoff_obj(lp1, lp2, lq1, lq2, d)
    while b - a > s_tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = _chernoff_obj(lp1, lp2, lq1, lq2, c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = _chernoff_obj(lp1, lp2, lq1, lq2, d)
    s = 0.5 * (a + b)
    q = _chernoff_obj(lp1, lp2, lq1, lq2, s)
    if fc < q:
        q, s = fc, c
    if fd < q:
        q, s = fd, d
    return min(q, 1.0), s


def _visibility_pair(g1, g2, lamq, t):
    b1 = beta_fn(g1, lamq, t)
    b2 = beta_fn(g2, lamq, t)
    p1 = 0.5 * (1.0 + math.exp(-2.0 * b1))
    p2 = 0.5 * (1.0 + math.exp(-2.0 * b2))
    return p1, p2


def chernoff_fn(g1, g2, lamq, t, s_tol=1e-10):
    """Chernoff quantity and optimal s for the pair at interaction time t."""
    p1, p2 = _visibility_pair(g1, g2, lamq, t)
    return chernoff_point(p1, p2, s_tol)


# ---------------------------------------------------------------------------
# grid variants


def _beta_grid(g, lamq, ts):
    out = np.zeros_like(ts)
    pos = ts > 0.0
    out[pos] = lamq * np.power(ts[pos], 2.0 * g) * (v_gamma(g) / (2.0 * g))
    return out


def g_bures_grid(g, lamq, ts):
    """Vectorized ``g_bures_fn`` over a time grid."""
    ts = np.ascontiguousarray(ts, dtype=np.float64)
    v = v_gamma(g)
    dv = dv_gamma(g)
    out = np.zeros_like(ts)
    b = _beta_grid(g, lamq, ts)
    live = (b > 0.0) & (b <= _BETA_OVERFLOW)
    if np.any(live):
        tl = ts[live]
        tp = np.power(tl, 2.0 * g)
        db = lamq * tp / (2.0 * g * g) * (g * dv + (2.0 * g * np.log(tl) - 1.0) * v)
        out[live] = db * db / np.expm1(4.0 * b[live])
    return out


def helstrom_grid(g1, g2, lamq, ts):
    """Vectorized ``helstrom_fn`` over a time grid."""
    ts = np.ascontiguousarray(ts, dtype=np.float64)
    b1 = _beta_grid(g1, lamq, ts)
    b2 = _beta_grid(g2, lamq, ts)
    return 0.5 - 0.25 * np.abs(np.exp(-2.0 * b1) - np.exp(-2.0 * b2))


def chernoff_grid(g1, g2, lamq, ts, s_tol=1e-10):
    """Vectorized ``chernoff_fn``: golden-section over s run on all grid
    points in lockstep (the bracket shrinks by the same ratio everywhere,
    so the iteration count is data-independent)."""
    ts = np.ascontiguousarray(ts, dtype=np.float64)
    b1 = _beta_grid(g1, lamq, ts)
    b2 = _beta_grid(g2, lamq, ts)
    e1 = np.exp(-2.0 * b1)
    e2 = np.exp(-2.0 * b2)
    p1 = 0.5 * (1.0 + e1)
    p2 = 0.5 * (1.0 + e2)
    q1 = -0.5 * np.expm1(-2.0 * b1)
    q2 = -0.5 * np.expm1(-2.0 * b2)

    qs = np.ones_like(ts)
    ss = np.full_like(ts, 0.5)
    pure1 = q1 == 0.0
    pure2 = q2 == 0.0
    equal = p1 == p2
    qs[pure1 & ~equal] = p2[pure1 & ~equal]
    ss[pure1 & ~equal] = 0.0
    qs[pure2 & ~equal & ~pure1] = p1[pure2 & ~equal & ~pure1]
    ss[pure2 & ~equal & ~pure1] = 1.0

    m = ~(equal | pure1 | pure2)
    if not np.any(m):
        return qs, ss
    lp1 = np.log(p1[m])
    lp2 = np.log(p2[m])
    lq1 = np.log(q1[m])
    lq2 = np.log(q2[m])

    def obj(s):
        return np.exp(s * lp1 + (1.0 - s) * lp2) + np.exp(s * lq1 + (1.0 - s) * lq2)

    a = np.zeros(lp1.shape)
    b = np.ones(lp1.shape)
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc = obj(c)
    fd = obj(d)
    width = 1.0
    while width > s_tol:
        left = fc < fd
        bn = np.where(left, d, b)
        an = np.where(left, a, c)
        dn = np.where(left, c, an + _INVPHI * (bn - an))
        cn = np.where(left, bn - _INVPHI * (bn - an), d)
        probe = np.where(left, cn, dn)
        fp = obj(probe)
        fdn = np.where(left, fc, fp)
        fcn = np.where(left, fp, fd)
        a, b, c, d, fc, fd = an, bn, cn, dn, fcn, fdn
        width *= _INVPHI
    s = 0.5 * (a + b)
    fs = obj(s)
    take_c = fc < fs
    fs = np.where(take_c, fc, fs)
    s = np.where(take_c, c, s)
    take_d = fd < fs
    fs = np.where(take_d, fd, fs)
    s = np.where(take_d, d, s)
    qs[m] = np.minimum(fs, 1.0)
    ss[m] = s
    return qs, ss


def visibility_gamma_grid(gs, lamq, t):
    """Visibility p as a function of gamma at fixed (lamq, t);
    used by the likelihood scan of the estimator."""
    gs = np.ascontiguousarray(gs, dtype=np.float64)
    vs = np.array([v_gamma(g) for g in gs])
    if t <= 0.0:
        return np.ones_like(gs)
    b = lamq * np.power(t, 2.0 * gs) * vs / (2.0 * gs)
    return 0.5 * (1.0 + np.exp(-2.0 * b))
