"""Time optimization of the figures of merit and the sweep tables.

Protocol: a log-spaced coarse scan over the interaction time detects
every interior local optimum by discrete slope sign change, each one is
refined with golden-section search on the log-time axis, and the global
winner is reported together with the full local-optimum list.  Keeping
the losers matters: the merit functions generically carry two peaks
(weak-coupling / strong-coupling), and the jump of the global maximum
between them as the coupling crosses its threshold is the central
qualitative feature of the model.

The scan window is chosen per evaluation: the merit functions live where
the dephasing exponent is of order one, so the window covers
beta in [BETA_LO, BETA_HI] (analytically inverted), widened around the
coupling-independent structural times - the zero of d beta/d gamma for
the metric, the equal-exponent crossing for discrimination pairs - where
the secondary peak sits even when beta is small there.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .backend import kern
from .dephasing import Coupling, DephasingFamily
from .metrology import DiscriminationPair, S_TOL
from .specfun import HurstPoint

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0

# window: times where the dephasing exponent passes through order one
BETA_LO = 1e-3
BETA_HI = 10.0
# log-margin applied around structural times folded into the window
WINDOW_MARGIN = 30.0
# golden-section stop: relative tolerance on the optimizer time
T_REL_TOL = 1e-8
# relative spacing under which two refined optima are considered the same
_DEDUP_RTOL = 1e-6


class NoThresholdError(RuntimeError):
    """The coupling sweep has no interior optimum: the minimizer of the
    time-optimized metric sits at a grid endpoint."""


@dataclass(frozen=True)
class TimeGrid:
    """Log-spaced interaction-time grid for the coarse scan."""

    t_min: float = 1e-6
    t_max: float = 1e6
    points: int = 4001

    def __post_init__(self):
        if not (0.0 < self.t_min < self.t_max):
            raise ValueError("need 0 < t_min < t_max")
        if self.points < 100:
            raise ValueError("need at least 100 grid points")

    def times(self) -> np.ndarray:
        return np.geomspace(self.t_min, self.t_max, self.points)


@dataclass(frozen=True)
class OptResult:
    """Optimized figure of merit with its optimizer and diagnostics."""

    value: float
    t_star: float
    local_optima: tuple = ()
    s_star: float | None = None


def _golden_log(f, lo: float, hi: float, rel_tol: float = T_REL_TOL):
    """Golden-section maximization of f on the log axis over [lo, hi].

    Returns the best point actually evaluated, so the result can never be
    worse than any probe, in particular not worse than the bracket ends'
    interior samples.
    """
    a = math.log(lo)
    b = math.log(hi)
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc = f(math.exp(c))
    fd = f(math.exp(d))
    if fc >= fd:
        best_x, best_f = math.exp(c), fc
    else:
        best_x, best_f = math.exp(d), fd
    while b - a > rel_tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(math.exp(c))
            if fc > best_f:
                best_x, best_f = math.exp(c), fc
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(math.exp(d))
            if fd > best_f:
                best_x, best_f = math.exp(d), fd
    xm = math.exp(0.5 * (a + b))
    fm = f(xm)
    if fm > best_f:
        best_x, best_f = xm, fm
    return best_x, best_f


def _t_at_beta(gamma: float, lamq: float, target: float) -> float:
    """Invert beta(t) = target for the power-law exponent."""
    v = kern.v_gamma(gamma)
    return (2.0 * gamma * target / (lamq * v)) ** (1.0 / (2.0 * gamma))


def _metric_pivot(gamma: float) -> float:
    """Time where d beta/d gamma changes sign; the metric vanishes there
    and a secondary peak sits on each side.  Independent of the coupling."""
    v = kern.v_gamma(gamma)
    dv = kern.dv_gamma(gamma)
    return math.exp(1.0 / (2.0 * gamma) - dv / (2.0 * v))


def _pair_pivot(g1: float, g2: float) -> float | None:
    """Time where the two dephasing exponents cross (coupling cancels)."""
    if g1 == g2:
        return None
    v1 = kern.v_gamma(g1)
    v2 = kern.v_gamma(g2)
    return math.exp(math.log(v2 * g1 / (v1 * g2)) / (2.0 * (g1 - g2)))


def _window_bounds(gammas, lamq: float, pivots, t_min: float,
                   t_max: float) -> tuple[float, float]:
    lo = min(_t_at_beta(g, lamq, BETA_LO) for g in gammas)
    hi = max(_t_at_beta(g, lamq, BETA_HI) for g in gammas)
    for p in pivots:
        if p is not None and p > 0.0 and math.isfinite(p):
            lo = min(lo, p / WINDOW_MARGIN)
            hi = max(hi, p * WINDOW_MARGIN)
    return max(lo, t_min), min(hi, t_max)


def _window(grid: TimeGrid, gammas, lamq: float, pivots) -> np.ndarray:
    lo, hi = _window_bounds(gammas, lamq, pivots, grid.t_min, grid.t_max)
    if not lo < hi:
        return grid.times()
    return np.geomspace(lo, hi, grid.points)


def metric_time_window(gammas, lam: float, exponent_power: int = 1,
                       t_min: float = 1e-6,
                       t_max: float = 1e6) -> tuple[float, float]:
    """Interaction-time window covering the metric's peaks for every
    listed gamma at the given coupling (used for map-style sweeps)."""
    lamq = float(lam) ** exponent_power
    gs = [float(g) for g in gammas]
    return _window_bounds(gs, lamq, [_metric_pivot(g) for g in gs],
                          t_min, t_max)


def _local_peaks(vals: np.ndarray) -> list[int]:
    left = vals[1:-1] > vals[:-2]
    right = vals[1:-1] >= vals[2:]
    return [int(i) + 1 for i in np.nonzero(left & right)[0]]


def _scan_refine(grid_fn, scalar_fn, ts: np.ndarray, minimize: bool = False,
                 flat_warn: str | None = None) -> OptResult:
    """Coarse scan + per-peak golden refinement; sign handled internally
    so the same protocol serves maximization and minimization."""
    vals = np.asarray(grid_fn(ts), dtype=np.float64)
    if flat_warn and np.all(np.abs(vals) < 1e-300):
        warnings.warn(flat_warn, RuntimeWarning, stacklevel=3)
    sign = -1.0 if minimize else 1.0
    sv = sign * vals
    peaks = _local_peaks(sv)
    if not peaks:
        peaks = [int(np.argmax(sv))]

    def f(t: float) -> float:
        return sign * scalar_fn(t)

    refined = []
    for i in peaks:
        lo = ts[max(i - 1, 0)]
        hi = ts[min(i + 1, len(ts) - 1)]
        t_star, f_star = _golden_log(f, lo, hi)
        if f_star < sv[i]:
            t_star, f_star = float(ts[i]), float(sv[i])
        refined.append((t_star, f_star))

    refined.sort()
    dedup: list[tuple[float, float]] = []
    for t_star, f_star in refined:
        if dedup and abs(t_star - dedup[-1][0]) <= _DEDUP_RTOL * t_star:
            if f_star > dedup[-1][1]:
                dedup[-1] = (t_star, f_star)
        else:
            dedup.append((t_star, f_star))

    best_t, best_f = max(dedup, key=lambda p: p[1])
    local = tuple((t, sign * v) for t, v in dedup)
    return OptResult(value=sign * best_f, t_star=best_t, local_optima=local)


def maximize_gb_over_t(fam: DephasingFamily,
                       grid: TimeGrid = TimeGrid()) -> OptResult:
    """Maximize the Bures metric over the interaction time."""
    g, lamq = fam.gamma, fam.lam_q
    ts = _window(grid, [g], lamq, [_metric_pivot(g)])
    return _scan_refine(
        lambda tv: kern.g_bures_grid(g, lamq, tv),
        lambda t: kern.g_bures_fn(g, lamq, t),
        ts,
        flat_warn="Bures metric is flat to underflow over the scan window",
    )


def minimize_pe_over_t(pair: DiscriminationPair,
                       grid: TimeGrid = TimeGrid()) -> OptResult:
    """Minimize the single-shot Helstrom error over the interaction time."""
    g1, g2 = pair.gamma1.gamma, pair.gamma2.gamma
    if g1 == g2:
        raise ValueError("discrimination requires two distinct parameters")
    lamq = pair.lam_q
    ts = _window(grid, [g1, g2], lamq, [_pair_pivot(g1, g2)])
    return _scan_refine(
        lambda tv: kern.helstrom_grid(g1, g2, lamq, tv),
        lambda t: kern.helstrom_fn(g1, g2, lamq, t),
        ts,
        minimize=True,
    )


def minimize_q_over_t(pair: DiscriminationPair,
                      grid: TimeGrid = TimeGrid()) -> OptResult:
    """Minimize the Chernoff quantity over time (inner s-search per point)."""
    g1, g2 = pair.gamma1.gamma, pair.gamma2.gamma
    if g1 == g2:
        raise ValueError("discrimination requires two distinct parameters")
    lamq = pair.lam_q
    ts = _window(grid, [g1, g2], lamq, [_pair_pivot(g1, g2)])
    res = _scan_refine(
        lambda tv: kern.chernoff_grid(g1, g2, lamq, tv, S_TOL)[0],
        lambda t: kern.chernoff_fn(g1, g2, lamq, t, S_TOL)[0],
        ts,
        minimize=True,
    )
    _, s_star = kern.chernoff_fn(g1, g2, lamq, res.t_star, S_TOL)
    return OptResult(res.value, res.t_star, res.local_optima, s_star)


def threshold_lambda(p: HurstPoint, lambdas: np.ndarray,
                     grid: TimeGrid = TimeGrid(),
                     exponent_power: int = 1) -> float:
    """Coupling threshold separating the weak and strong probing regimes.

    Operationally the interior minimizer, over the coupling grid, of the
    time-optimized Bures metric; refined by golden-section on the log
    axis.  Raises NoThresholdError when the minimum sits at an endpoint
    (the expected situation near the limits of the gamma interval).
    """
    lambdas = np.asarray(lambdas, dtype=np.float64)
    if len(lambdas) < 3 or np.any(np.diff(lambdas) <= 0.0):
        raise ValueError("need an increasing coupling grid of >= 3 points")

    def gstar(lam: float) -> float:
        fam = DephasingFamily(p, Coupling(lam), exponent_power=exponent_power)
        return maximize_gb_over_t(fam, grid).value

    vals = np.array([gstar(lam) for lam in lambdas])
    i = int(np.argmin(vals))
    if i == 0 or i == len(lambdas) - 1:
        raise NoThresholdError(
            f"time-optimized metric for gamma={p.gamma} is monotone over the "
            f"coupling grid; no interior threshold"
        )
    lam_th, _ = _golden_log(lambda lam: -gstar(lam),
                            lambdas[i - 1], lambdas[i + 1], rel_tol=1e-6)
    return lam_th


# ---------------------------------------------------------------------------
# sweep tables behind the figure-reproduction CLI


def metric_map_table(gammas: np.ndarray, ts: np.ndarray, lam: float,
                     exponent_power: int = 1) -> np.ndarray:
    """Rows (gamma, t, g_bures, qfi) over the gamma x t grid, gamma outer."""
    lamq = float(lam) ** exponent_power
    rows = np.empty((len(gammas) * len(ts), 4))
    for i, g in enumerate(gammas):
        gb = kern.g_bures_grid(float(g), lamq, ts)
        block = rows[i * len(ts):(i + 1) * len(ts)]
        block[:, 0] = g
        block[:, 1] = ts
        block[:, 2] = gb
        block[:, 3] = 4.0 * gb
    return rows


def optimized_metric_table(n_samples: int, seed: int,
                           lam_min: float = 1e-3, lam_max: float = 1e3,
                           gamma_min: float = 1.001, gamma_max: float = 1.999,
                           grid: TimeGrid = TimeGrid(),
                           exponent_power: int = 1) -> np.ndarray:
    """Random-sample survey of the time-optimized metric: rows
    (gamma, lambda, g_star, tau_b).  gamma uniform, lambda log-uniform."""
    rng = np.random.default_rng(seed)
    gs = rng.uniform(gamma_min, gamma_max, n_samples)
    lams = np.exp(rng.uniform(math.log(lam_min), math.log(lam_max), n_samples))
    rows = np.empty((n_samples, 4))
    for i in range(n_samples):
        fam = DephasingFamily(HurstPoint(gs[i]), Coupling(lams[i]),
                              exponent_power=exponent_power)
        res = maximize_gb_over_t(fam, grid)
        rows[i] = (gs[i], lams[i], res.value, res.t_star)
    return rows


def helstrom_table(gamma1s, gamma2s, lams, grid: TimeGrid = TimeGrid(),
                   exponent_power: int = 1) -> np.ndarray:
    """Rows (gamma1, gamma2, lambda, pe_min, t_star) over the product grid;
    coincident parameter pairs are skipped."""
    rows = []
    for g1 in gamma1s:
        for g2 in gamma2s:
            if g1 == g2:
                continue
            for lam in lams:
                pair = DiscriminationPair(HurstPoint(float(g1)),
                                          HurstPoint(float(g2)),
                                          Coupling(float(lam)),
                                          exponent_power=exponent_power)
                res = minimize_pe_over_t(pair, grid)
                rows.append((float(g1), float(g2), float(lam),
                             res.value, res.t_star))
    return np.array(rows)


def chernoff_table(pairs, lams, n_copies: int = 1,
                   grid: TimeGrid = TimeGrid(),
                   exponent_power: int = 1) -> np.ndarray:
    """Rows (gamma1, gamma2, lambda, q_min, s_star, t_star, pe_bound_n)
    for each parameter pair over the coupling grid."""
    rows = []
    for g1, g2 in pairs:
        for lam in lams:
            pair = DiscriminationPair(HurstPoint(float(g1)),
                                      HurstPoint(float(g2)),
                                      Coupling(float(lam)),
                                      exponent_power=exponent_power)
            res = minimize_q_over_t(pair, grid)
            rows.append((float(g1), float(g2), float(lam), res.value,
                         res.s_star, res.t_star,
                         0.5 * res.value ** n_copies))
    return np.array(rows)
