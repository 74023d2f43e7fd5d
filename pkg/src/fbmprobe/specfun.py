"""Real special functions and the noise-amplitude coefficient.

The fractional-noise covariance carries an amplitude V(gamma) that is
formally Gamma(2-2*gamma)*cos(pi*gamma)*2/pi.  That expression is a
0*inf indeterminate at gamma = 3/2 and hits gamma-function poles at the
interval ends, so everything here is computed from the reflected,
pole-free form

    V(gamma)  = -1 / (sin(pi*gamma) * Gamma(2*gamma - 1))

which is finite and strictly positive on the whole open interval (1, 2).
Its gamma-derivative follows by direct differentiation:

    V'(gamma) = [pi*cos(pi*gamma) + 2*sin(pi*gamma)*psi(2*gamma - 1)]
                / (sin(pi*gamma)**2 * Gamma(2*gamma - 1))
"""

from dataclasses import dataclass

from .backend import kern

# width of the guard band at each end of the admissible gamma interval;
# V diverges at gamma = 1 and gamma = 2
GAMMA_MARGIN = 1e-6


@dataclass(frozen=True)
class HurstPoint:
    """Noise-roughness parameter bundle.

    ``gamma`` is the complementary Hurst parameter; the Hurst exponent is
    gamma - 1 and the trajectory fractal dimension is 3 - gamma.  Values
    outside [1 + GAMMA_MARGIN, 2 - GAMMA_MARGIN] are rejected rather than
    clamped so sweep data can never be silently corrupted.
    """

    gamma: float

    def __post_init__(self):
        g = float(self.gamma)
        if not (1.0 + GAMMA_MARGIN <= g <= 2.0 - GAMMA_MARGIN):
            raise ValueError(
                f"gamma must lie in [1 + {GAMMA_MARGIN}, 2 - {GAMMA_MARGIN}], got {g}"
            )
        object.__setattr__(self, "gamma", g)

    @property
    def hurst(self) -> float:
        return self.gamma - 1.0

    @property
    def fractal_dim(self) -> float:
        return 3.0 - self.gamma

    @classmethod
    def from_hurst(cls, h: float) -> "HurstPoint":
        return cls(1.0 + h)

    @classmethod
    def from_fractal_dim(cls, d: float) -> "HurstPoint":
        return cls(3.0 - d)


def ln_gamma_fn(x: float) -> float:
    """ln Gamma(x) for x > 0."""
    if x <= 0.0:
        raise ValueError(f"ln_gamma_fn requires x > 0, got {x}")
    return kern.lgamma_fn(x)


def digamma_fn(x: float) -> float:
    """psi(x) = d/dx ln Gamma(x) for x > 0."""
    if x <= 0.0:
        raise ValueError(f"digamma_fn requires x > 0, got {x}")
    return kern.digamma_fn(x)


def v_gamma(p: HurstPoint) -> float:
    """Noise amplitude V at the given point; finite and > 0 everywhere."""
    return kern.v_gamma(p.gamma)


def dv_gamma(p: HurstPoint) -> float:
    """d V / d gamma at the given point."""
    return kern.dv_gamma(p.gamma)
