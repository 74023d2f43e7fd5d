"""Probe dynamics under fractional Brownian dephasing.

A qubit coupled through sigma_z to a classical fractional Brownian noise
B(t) accumulates a random phase; averaging over noise realizations with
the Gaussian generating function turns the evolution into a dephasing
channel.  The transverse Bloch components shrink by exp(-2*beta(t)) with

    beta(t) = lambda**q * t**(2*gamma) * V(gamma) / (2*gamma)

and the population weight ("visibility") is p = (1 + exp(-2*beta)) / 2.

``exponent_power`` q selects the coupling convention: q=1 makes beta
linear in lambda, q=2 makes it quadratic as a phase variance
Var(lambda * integral B dt) would demand.  Both are exposed; q=1 is the
default.  The Monte Carlo oracle scales its path coupling as
lambda**(q/2), so analytic and sampled dephasing agree under either
convention.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .backend import kern
from .specfun import HurstPoint

BLOCH_NORM_TOL = 1e-12
PURE_TOL = 1e-9


@dataclass(frozen=True)
class Coupling:
    """System-environment coupling strength, dimensionless and > 0."""

    lam: float

    def __post_init__(self):
        if not (self.lam > 0.0) or not math.isfinite(self.lam):
            raise ValueError(f"coupling must be finite and > 0, got {self.lam}")


@dataclass(frozen=True, eq=False)
class QubitState:
    """Single-qubit density operator in Bloch form, rho = (I + r.sigma)/2."""

    bloch: np.ndarray

    def __post_init__(self):
        r = np.asarray(self.bloch, dtype=np.float64).reshape(3)
        if np.linalg.norm(r) > 1.0 + BLOCH_NORM_TOL:
            raise ValueError(f"Bloch vector norm {np.linalg.norm(r)} exceeds 1")
        object.__setattr__(self, "bloch", r)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.bloch))

    def is_pure(self) -> bool:
        return abs(self.norm - 1.0) < PURE_TOL

    def density_matrix(self) -> np.ndarray:
        rx, ry, rz = self.bloch
        return 0.5 * np.array(
            [[1.0 + rz, rx - 1j * ry], [rx + 1j * ry, 1.0 - rz]], dtype=complex
        )

    @classmethod
    def from_angles(cls, theta: float, azimuth: float = 0.0) -> "QubitState":
        """Pure state cos(theta/2)|0> + e^{i*azimuth} sin(theta/2)|1>."""
        st = math.sin(theta)
        return cls(np.array([st * math.cos(azimuth), st * math.sin(azimuth),
                             math.cos(theta)]))

    @classmethod
    def plus_x(cls) -> "QubitState":
        return cls(np.array([1.0, 0.0, 0.0]))


def _default_initial() -> QubitState:
    return QubitState.plus_x()


@dataclass(frozen=True, eq=False)
class DephasingFamily:
    """The one-parameter state family rho_gamma(t) for fixed coupling and
    initial state."""

    hurst_point: HurstPoint
    coupling: Coupling
    initial: QubitState = field(default_factory=_default_initial)
    exponent_power: int = 1

    def __post_init__(self):
        if self.exponent_power not in (1, 2):
            raise ValueError(
                f"exponent_power must be 1 or 2, got {self.exponent_power}"
            )

    @property
    def gamma(self) -> float:
        return self.hurst_point.gamma

    @property
    def lam_q(self) -> float:
        """Coupling raised to the exponent power; the scale entering beta."""
        return self.coupling.lam ** self.exponent_power


def covariance(p: HurstPoint, t: float, s: float) -> float:
    """Fractional Brownian covariance
    K(t,s) = V/2 * (t^{2H} + s^{2H} - |t-s|^{2H}) with H = gamma - 1."""
    if t < 0.0 or s < 0.0:
        raise ValueError("covariance requires t, s >= 0")
    return kern.covariance_fn(p.gamma, t, s)


def covariance_matrix(p: HurstPoint, ts: np.ndarray) -> np.ndarray:
    """Covariance K evaluated on a grid, vectorized; rows/cols follow ts."""
    ts = np.asarray(ts, dtype=np.float64)
    h2 = 2.0 * p.hurst
    tp = np.abs(ts) ** h2
    return 0.5 * kern.v_gamma(p.gamma) * (
        tp[:, None] + tp[None, :] - np.abs(ts[:, None] - ts[None, :]) ** h2
    )


def beta(fam: DephasingFamily, t: float) -> float:
    """Dephasing exponent; zero at t = 0, nondecreasing in t."""
    if t < 0.0:
        raise ValueError("beta requires t >= 0")
    return kern.beta_fn(fam.gamma, fam.lam_q, t)


def visibility(fam: DephasingFamily, t: float) -> float:
    """Coherence weight p(t) = (1 + exp(-2*beta))/2, in (1/2, 1]."""
    if t < 0.0:
        raise ValueError("visibility requires t >= 0")
    return kern.visibility_fn(fam.gamma, fam.lam_q, t)


def evolve(fam: DephasingFamily, t: float) -> QubitState:
    """Dephasing channel on the family's initial state: transverse Bloch
    components scale by exp(-2*beta(t)), the z component is untouched."""
    f = math.exp(-2.0 * beta(fam, t))
    rx, ry, rz = fam.initial.bloch
    return QubitState(np.array([f * rx, f * ry, rz]))


def state_eigensystem(st: QubitState):
    """Eigenvalues (descending) and eigen-axes of a qubit state.

    Returns ((1+|r|)/2, (1-|r|)/2) with Bloch axes +-r/|r|; a maximally
    mixed state falls back to the z axis pair.
    """
    r = st.bloch
    n = float(np.linalg.norm(r))
    if n < 1e-14:
        axis = np.array([0.0, 0.0, 1.0])
        return (0.5, 0.5), (axis, -axis)
    axis = r / n
    return (0.5 * (1.0 + n), 0.5 * (1.0 - n)), (axis, -axis)
