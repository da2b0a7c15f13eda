"""Special functions and closed-form sharp constants.

All constants are expressed for a *real* dimension parameter d > 2: radial
integrals carry the weight r^(d-1) with real exponent, so every Gamma-based
formula below is evaluated by analytic continuation in d.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import DomainError

__all__ = [
    "Dimension",
    "ConstantBundle",
    "gamma",
    "f_integral",
    "sphere_volume",
    "sobolev_constant",
    "sd_radial_constant",
    "ckn_sharp_constant",
    "constants",
]


@dataclass(frozen=True)
class Dimension:
    """Real dimension parameter with its derived exponents.

    d must exceed 2 for any Sobolev-type quantity; d = 2 is allowed only
    on the Onofri side, where none of the derived exponents is used.
    """

    d: float

    def __post_init__(self):
        if self.d < 2.0:
            raise DomainError(f"dimension must satisfy d >= 2, got {self.d}")

    @property
    def two_star(self) -> float:
        self._require_super_critical()
        return 2.0 * self.d / (self.d - 2.0)

    @property
    def q(self) -> float:
        """Exponent pairing u with its dual density v = u^q."""
        self._require_super_critical()
        return (self.d + 2.0) / (self.d - 2.0)

    @property
    def m(self) -> float:
        """Fast-diffusion exponent, the reciprocal of q."""
        self._require_super_critical()
        return (self.d - 2.0) / (self.d + 2.0)

    @property
    def a_c(self) -> float:
        return (self.d - 2.0) / 2.0

    def _require_super_critical(self):
        if self.d <= 2.0:
            raise DomainError("derived exponents need d > 2")


def gamma(x: float) -> float:
    """Euler Gamma for x > 0.

    Delegates to the C library implementation (Lanczos-type), which is well
    below the 1e-13 relative error budget on [0.05, 200].
    """
    if x <= 0.0:
        raise DomainError(f"gamma requires x > 0, got {x}")
    return math.gamma(x)


def f_integral(q: float) -> float:
    """Value of the even sech-power integral over the real line.

    Closed form sqrt(pi) * Gamma(q/2) / Gamma((q+1)/2); satisfies the
    recursion f(q+2) = q/(q+1) * f(q).
    """
    if q <= 0.0:
        raise DomainError(f"f_integral requires q > 0, got {q}")
    # work in log space so large q stays finite
    return math.exp(
        0.5 * math.log(math.pi) + math.lgamma(q / 2.0) - math.lgamma((q + 1.0) / 2.0)
    )


def sphere_volume(d: float) -> float:
    """Surface measure of the unit sphere in R^d, continued to real d > 0."""
    if d <= 0.0:
        raise DomainError(f"sphere_volume requires d > 0, got {d}")
    return 2.0 * math.pi ** (d / 2.0) / math.gamma(d / 2.0)


def sobolev_constant(d: float) -> float:
    """Best constant of the sharp Sobolev inequality on R^d, d > 2."""
    if d <= 2.0:
        raise DomainError(f"sobolev_constant requires d > 2, got {d}")
    ratio = math.exp((2.0 / d) * (math.lgamma(d) - math.lgamma(d / 2.0)))
    return ratio / (math.pi * d * (d - 2.0))


def sd_radial_constant(d: float) -> float:
    """Radial (per-unit-sphere) sharp constant for real d > 2.

    Equals sobolev_constant(d) * sphere_volume(d)^(2/d) at integer d.
    """
    if d <= 2.0:
        raise DomainError(f"sd_radial_constant requires d > 2, got {d}")
    ratio = math.exp(
        (2.0 / d)
        * (math.lgamma((d + 1.0) / 2.0) - 0.5 * math.log(math.pi) - math.lgamma(d / 2.0))
    )
    return 4.0 / (d * (d - 2.0)) * ratio


def ckn_sharp_constant(a: float, b: float, d: float) -> float:
    """Sharp weighted-inequality constant in the radially-symmetric regime.

    Full-space normalization: the weighted critical norm squared of u is
    bounded by this constant times the weighted Dirichlet energy, both taken
    over R^d. Valid when radial optimizers are global (see
    ckn.symmetry_region, which is the caller's responsibility to consult).
    The exponent p is recovered from b = a - a_c + d/p. Reduces to
    sobolev_constant(d) at a = b = 0.
    """
    a_c = (d - 2.0) / 2.0
    if a >= a_c:
        raise DomainError(f"need a < (d-2)/2, got a={a}, d={d}")
    denom = d - 2.0 + 2.0 * (b - a)
    if denom <= 0.0:
        raise DomainError(f"invalid (a, b, d): p undefined for b-a={b - a}")
    p = 2.0 * d / denom
    two_star = math.inf if d <= 2.0 else 2.0 * d / (d - 2.0)
    if not (2.0 < p <= two_star) and not math.isclose(p, 2.0):
        raise DomainError(f"p={p} outside (2, 2*]")
    if math.isclose(p, 2.0):
        raise DomainError("p = 2 endpoint: constant formula degenerates")
    s = a - a_c  # strictly negative here
    g = math.exp(
        math.lgamma(2.0 / (p - 2.0) + 0.5)
        - 0.5 * math.log(math.pi)
        - math.lgamma(2.0 / (p - 2.0))
    )
    # the sphere-volume factor carries a negative exponent: the rest of the
    # expression is the per-unit-sphere (radial) constant, and passing to
    # full-space integrals divides by sphere_volume^((p-2)/p)
    return (
        sphere_volume(d) ** (-(p - 2.0) / p)
        * (s * s * (p - 2.0) ** 2 / (p + 2.0)) ** ((p - 2.0) / (2.0 * p))
        * ((p + 2.0) / (2.0 * p * s * s))
        * (4.0 / (p + 2.0)) ** ((6.0 - p) / (2.0 * p))
        * g ** ((p - 2.0) / p)
    )


@dataclass(frozen=True)
class ConstantBundle:
    """Closed-form constants attached to one dimension parameter."""

    d: float
    S_d: float
    s_d: float
    sphere_volume: float
    c_lower: float  # proven lower bound d/(d+4) * S_d for the chain constant

    @property
    def c_lower_radial(self) -> float:
        """Same lower bound in the radial (per-unit-sphere) normalization."""
        return self.d / (self.d + 4.0) * self.s_d


@lru_cache(maxsize=None)
def constants(d: float) -> ConstantBundle:
    """Constant bundle for dimension d > 2, cached per d."""
    return ConstantBundle(
        d=d,
        S_d=sobolev_constant(d),
        s_d=sd_radial_constant(d),
        sphere_volume=sphere_volume(d),
        c_lower=d / (d + 4.0) * sobolev_constant(d),
    )
