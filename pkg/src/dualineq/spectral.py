"""Linearization of the sharp-inequality pair around the extremal profile.

The second variation of the primal deficit is the quadratic form F and the
second variation of the dual deficit is G. Both diagonalize on products of
the extremal with axisymmetric sphere harmonics (Gegenbauer polynomials in
z = (r^2 - 1)/(r^2 + 1)); the eigenvalues are closed-form, so every check
here compares a quadrature against exact eigenvalue arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import eval_gegenbauer

from . import radial_core as rc
from .errors import DomainError, PreconditionError
from .specfun import constants

__all__ = [
    "SpectralMode",
    "eigenvalues",
    "mode_profile",
    "form_F",
    "form_G",
    "ratio_bound_check",
    "poincare_check",
    "cd_lower_bound",
    "weighted_norm_sq",
]

# modes decay only like r^-(d-2), so give the quadrature more room than the
# radial_core default
MODE_HALF_WIDTH = 25.0
MODE_NODES = 4096


def eigenvalues(k: int, d: float) -> tuple[float, float]:
    """Sphere-harmonic eigenvalue lambda_k and flat eigenvalue mu_k.

    lambda_k = k(k + d - 1) for the Laplace-Beltrami operator on S^d;
    mu_k = 4 lambda_k + d(d-2) after stereographic projection.
    """
    if k < 0:
        raise DomainError("harmonic index must be >= 0")
    lam = float(k) * (float(k) + d - 1.0)
    mu = 4.0 * lam + d * (d - 2.0)
    return lam, mu


@dataclass(frozen=True)
class SpectralMode:
    """Axisymmetric eigenmode of the linearized operator."""

    k: int
    d: float
    lambda_k: float
    mu_k: float
    profile: rc.RadialProfile


def _weight(t: np.ndarray) -> np.ndarray:
    """(1 + r^2)^-2 at the grid nodes."""
    return (1.0 + np.exp(-2.0 * t)) ** -2.0


def weighted_norm_sq(f: rc.RadialProfile) -> float:
    """Integral of f^2 (1+r^2)^-2 r^(d-1) dr."""
    return rc.integrate_r(f.u**2 * _weight(f.t), f.t, f.d - 1.0, what="weighted norm")


def weighted_inner(f: rc.RadialProfile, g: rc.RadialProfile) -> float:
    """Inner product with weight (1+r^2)^-2 r^(d-1) dr on shared nodes."""
    if f.t.shape != g.t.shape or not np.array_equal(f.t, g.t):
        raise DomainError("profiles must share a grid")
    return rc.integrate_r(f.u * g.u * _weight(f.t), f.t, f.d - 1.0, what="weighted inner")


@lru_cache(maxsize=256)
def _mode_cached(k: int, d: float, half_width: float, n: int) -> SpectralMode:
    t = rc.log_radius_grid(half_width, n)
    r2 = np.exp(-2.0 * t)
    z = (r2 - 1.0) / (r2 + 1.0)
    ustar = (1.0 + r2) ** (-(d - 2.0) / 2.0)
    alpha = (d - 1.0) / 2.0
    poly = eval_gegenbauer(k, alpha, z) if k > 0 else np.ones_like(z)
    profile = rc.RadialProfile(d=d, t=t, u=ustar * poly, tag=f"mode-{k}")
    norm = math.sqrt(weighted_norm_sq(profile))
    lam, mu = eigenvalues(k, d)
    return SpectralMode(k=k, d=d, lambda_k=lam, mu_k=mu, profile=profile.with_values(profile.u / norm))


def mode_profile(
    k: int, d: float, half_width: float = MODE_HALF_WIDTH, n: int = MODE_NODES
) -> SpectralMode:
    """Normalized mode u_star * C_k^((d-1)/2)(z), unit weighted L^2 norm."""
    if d <= 2.0:
        raise DomainError("modes need d > 2")
    if k < 0:
        raise DomainError("harmonic index must be >= 0")
    return _mode_cached(k, float(d), float(half_width), int(n))


def form_F(f: rc.RadialProfile, d: float | None = None) -> float:
    """Primal second-variation form: energy minus mu_1 times weighted norm."""
    d = f.d if d is None else d
    _, mu1 = eigenvalues(1, d)
    return rc.dirichlet_energy(f) - mu1 * weighted_norm_sq(f)


def form_G(f: rc.RadialProfile, d: float | None = None) -> float:
    """Dual second-variation form.

    (1/mu_1) * weighted norm minus the inverse-Laplacian pairing of the
    weighted density f (1+r^2)^-2.
    """
    d = f.d if d is None else d
    _, mu1 = eigenvalues(1, d)
    v = f.with_values(f.u * _weight(f.t), tag="weighted-density")
    kpot = rc.inverse_laplacian_radial(v, d_eff=d)
    pairing = rc.integrate_r(v.u * kpot.u, f.t, d - 1.0, what="dual pairing")
    return weighted_norm_sq(f) / mu1 - pairing


def ratio_bound_check(d: float, k_max: int = 6) -> float:
    """Minimum of F[f_k]/G[f_k] over k = 2..k_max.

    The exact value of the ratio at mode k is mu_1 * mu_k, increasing in k,
    so the minimum is d(d+2)^2(d+4) at k = 2.
    """
    best = math.inf
    for k in range(2, k_max + 1):
        mode = mode_profile(k, d)
        ratio = form_F(mode.profile) / form_G(mode.profile)
        best = min(best, ratio)
    return best


def poincare_check(f: rc.RadialProfile, d: float | None = None, tol: float = 1e-8) -> bool:
    """Weighted Poincare inequality E(f) >= (d+2)(d+4) |f|^2_weighted.

    Requires f weighted-orthogonal to the k = 0 and k = 1 modes; a violating
    projection raises a precondition error naming the offending mode.
    """
    d = f.d if d is None else d
    norm = math.sqrt(weighted_norm_sq(f))
    if norm == 0.0:
        return True
    for k in (0, 1):
        mode = mode_profile(k, d, half_width=float(f.t[-1]), n=f.t.size)
        proj = weighted_inner(f, mode.profile) / norm
        if abs(proj) > 1e-8:
            raise PreconditionError(
                f"profile has a k={k} component (projection {proj:.3e})"
            )
    energy = rc.dirichlet_energy(f)
    return energy >= (d + 2.0) * (d + 4.0) * norm**2 - tol * max(1.0, energy)


def cd_lower_bound(d: float) -> float:
    """Lower bound d/(d+4) * S_d for the improved-inequality constant."""
    return constants(d).c_lower
