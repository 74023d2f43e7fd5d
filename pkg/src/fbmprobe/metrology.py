"""Information-geometric figures of merit for the dephasing probe.

Estimation side: the Bures metric of the family gamma -> rho_gamma(t).
For the equatorial initial state the family commutes with itself across
gamma, only the eigenvalues move, and the metric collapses to the
Bernoulli expression

    g_B = (dp/dgamma)^2 / (4 p (1 - p)),   p = (1 + exp(-2 beta)) / 2

equal to one quarter of the quantum Fisher information.  The x-basis
measurement attains it, so its classical Fisher information equals the
QFI exactly.

Discrimination side: the single-shot Helstrom error probability and the
Chernoff quantity Q = inf_s Tr[rho1^s rho2^(1-s)], which for commuting
states is a two-term classical Chernoff objective, convex in s.  The
multi-copy error is bounded by Q**n / 2, and the local expansion of
1 - Q defines a metric equal to half the Bures metric on this family.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .backend import kern
from .dephasing import Coupling, DephasingFamily, QubitState, _default_initial
from .specfun import HurstPoint

# golden-section width at which the Chernoff s-search stops
S_TOL = 1e-10

_REL_QFI_TOL = 1e-12


@dataclass(frozen=True)
class MetricSample:
    """One (gamma, lambda, t) evaluation of the estimation metrics."""

    gamma: float
    lam: float
    t: float
    g_bures: float
    qfi: float
    g_qcb: float

    def __post_init__(self):
        if self.g_bures < 0.0:
            raise ValueError("g_bures must be >= 0")
        scale = max(abs(self.qfi), abs(self.g_bures), 1e-300)
        if abs(self.qfi - 4.0 * self.g_bures) > 4.0 * _REL_QFI_TOL * scale:
            raise ValueError("qfi must equal 4 * g_bures")
        if not (0.5 * self.g_bures - _REL_QFI_TOL * scale
                <= self.g_qcb
                <= self.g_bures + _REL_QFI_TOL * scale):
            raise ValueError("g_qcb must lie in [g_bures/2, g_bures]")


@dataclass(frozen=True, eq=False)
class DiscriminationPair:
    """Two candidate noise parameters sharing coupling, initial state and
    coupling convention; priors are fixed at 1/2 each."""

    gamma1: HurstPoint
    gamma2: HurstPoint
    coupling: Coupling
    initial: QubitState = field(default_factory=_default_initial)
    exponent_power: int = 1

    def __post_init__(self):
        if self.exponent_power not in (1, 2):
            raise ValueError(
                f"exponent_power must be 1 or 2, got {self.exponent_power}"
            )

    @property
    def lam_q(self) -> float:
        return self.coupling.lam ** self.exponent_power

    def family(self, which: int) -> DephasingFamily:
        hp = self.gamma1 if which == 1 else self.gamma2
        return DephasingFamily(hp, self.coupling, self.initial,
                               self.exponent_power)


def bures_metric_bloch(st: QubitState, d_bloch: np.ndarray) -> float:
    """Bures metric from a Bloch vector and its parameter derivative:
    (|dr|^2 + (r.dr)^2 / (1-|r|^2)) / 4 for mixed states.

    Pure states are admitted only when the radial derivative vanishes
    (the second term is then dropped); otherwise the metric is singular
    and a ValueError is raised.
    """
    r = st.bloch
    dr = np.asarray(d_bloch, dtype=np.float64).reshape(3)
    r2 = float(r @ r)
    radial = float(r @ dr)
    flat = float(dr @ dr)
    if r2 >= 1.0 - 1e-12:
        if abs(radial) < 1e-12:
            return 0.25 * flat
        raise ValueError(
            "Bures metric singular: pure state with nonzero radial derivative"
        )
    return 0.25 * (flat + radial * radial / (1.0 - r2))


def g_bures_gamma(fam: DephasingFamily, t: float) -> float:
    """Bures metric of the equatorial family w.r.t. gamma at time t."""
    if t < 0.0:
        raise ValueError("g_bures_gamma requires t >= 0")
    return kern.g_bures_fn(fam.gamma, fam.lam_q, t)


def qfi_gamma(fam: DephasingFamily, t: float) -> float:
    """Quantum Fisher information, four times the Bures metric."""
    return 4.0 * g_bures_gamma(fam, t)


def g_qcb_gamma(fam: DephasingFamily, t: float) -> float:
    """Chernoff-bound metric; half the Bures metric on this commuting
    family (the cross terms of the spectral sums vanish identically)."""
    return 0.5 * g_bures_gamma(fam, t)


def evaluate_metrics(fam: DephasingFamily, t: float) -> MetricSample:
    gb = g_bures_gamma(fam, t)
    return MetricSample(fam.gamma, fam.coupling.lam, t, gb, 4.0 * gb, 0.5 * gb)


def fidelity(a: QubitState, b: QubitState) -> float:
    """Uhlmann fidelity between qubit states, in closed Bloch form:
    F = (1 + r1.r2 + sqrt((1-|r1|^2)(1-|r2|^2))) / 2."""
    r1 = a.bloch
    r2 = b.bloch
    d1 = max(0.0, 1.0 - float(r1 @ r1))
    d2 = max(0.0, 1.0 - float(r2 @ r2))
    f = 0.5 * (1.0 + float(r1 @ r2) + math.sqrt(d1 * d2))
    return min(1.0, max(0.0, f))


def helstrom_pe(pair: DiscriminationPair, t: float) -> float:
    """Minimum single-shot error probability for the equatorial pair,
    1/2 - |exp(-2 beta1) - exp(-2 beta2)|/4; bounded below by 1/4."""
    if t < 0.0:
        raise ValueError("helstrom_pe requires t >= 0")
    return kern.helstrom_fn(pair.gamma1.gamma, pair.gamma2.gamma,
                            pair.lam_q, t)


def helstrom_pe_general(rho1: QubitState, rho2: QubitState) -> float:
    """Helstrom bound for arbitrary qubit states; the trace norm of the
    difference is the Bloch distance |r2 - r1|."""
    d = float(np.linalg.norm(rho2.bloch - rho1.bloch))
    return 0.5 * (1.0 - 0.5 * d)


def chernoff_q(pair: DiscriminationPair, t: float,
               s_tol: float = S_TOL) -> tuple[float, float]:
    """Chernoff quantity Q and the minimizing s for the pair at time t.

    The commuting-family objective is convex in s; golden-section search
    shrinks the bracket below ``s_tol``.  Q = 1 exactly for identical
    parameters or t = 0.
    """
    if t < 0.0:
        raise ValueError("chernoff_q requires t >= 0")
    return kern.chernoff_fn(pair.gamma1.gamma, pair.gamma2.gamma,
                            pair.lam_q, t, s_tol)


def multicopy_bound(q: float, n: int) -> float:
    """Upper bound Q**n / 2 on the n-copy discrimination error."""
    if not (0.0 < q <= 1.0):
        raise ValueError(f"q must be in (0, 1], got {q}")
    if n < 1 or int(n) != n:
        raise ValueError(f"n must be a positive integer, got {n}")
    return 0.5 * q ** int(n)
