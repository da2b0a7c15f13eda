"""Two-dimensional endpoint: Moser-Trudinger-Onofri and log-HLS deficits.

At d = 2 the Sobolev/HLS pair degenerates into the exponential-class pair:
the Onofri functional on the f-side and the logarithmic HLS functional on
the density side g = e^f mu. The inverse Laplacian of a radial density with
nonzero mass is the logarithmic potential

    w(r) = -log r * int_0^r h s ds - int_r^infty h s log s ds,

which replaces the d > 2 kernel (the d > 2 formula diverges at d = 2 for
positive-mass data). The module also certifies the deficits at d = 2 + eps
against their 2-d limits, which is how the endpoint is reached analytically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import functionals as fn
from . import radial_core as rc
from .errors import DomainError
from .specfun import gamma, sd_radial_constant

__all__ = [
    "OnofriProfile",
    "log_kernel_potential",
    "onofri_deficit",
    "loghls_deficit",
    "onofri_chain",
    "mu_alpha_weight",
    "mu_alpha_deficit",
    "dim_limit_check",
    "epsilon_bookkeeping",
]


@dataclass(frozen=True)
class OnofriProfile:
    """A radial exponent function f on the d = 2 log-radius grid."""

    profile: rc.RadialProfile
    alpha: float = 0.0

    def __post_init__(self):
        if self.profile.d != 2.0:
            raise DomainError("Onofri profiles live at d = 2")
        if not -1.0 < self.alpha <= 0.0:
            raise DomainError("alpha must lie in (-1, 0]")

    @property
    def f(self) -> np.ndarray:
        return self.profile.u

    @property
    def t(self) -> np.ndarray:
        return self.profile.t

    @property
    def mass(self) -> float:
        """M = int e^f (1+r^2)^{-2} 2 r dr."""
        t = self.t
        vals = np.exp(self.f) * (1.0 + np.exp(-2.0 * t)) ** -2.0
        m = 2.0 * rc.integrate_r(vals, t, 1.0, what="onofri mass")
        if not math.isfinite(m) or m <= 0.0:
            raise DomainError("mass integral must be positive and finite")
        return m


def onofri_profile(
    f_of_r,
    alpha: float = 0.0,
    half_width: float = rc.DEFAULT_HALF_WIDTH,
    n: int = rc.DEFAULT_NODES,
) -> OnofriProfile:
    """Sample a callable f(r) into an OnofriProfile."""
    return OnofriProfile(rc.profile_from_function(f_of_r, 2.0, half_width, n), alpha)


def log_kernel_potential(values: np.ndarray, t: np.ndarray) -> np.ndarray:
    """Logarithmic-kernel potential of a radial density sampled on t.

    Solves -(w'' + w'/r) = h for radial h, i.e. the planar Newtonian
    potential; w grows like -mass * log r at infinity when h has mass.
    """
    g = values * np.exp(-2.0 * t)
    inner = rc._cumulative_from_end(g, t)  # int_0^r h s ds as a function of t
    slog = rc._cumulative(-t * g, t)  # int_r^infty h s log s ds, from far end
    return t * inner - slog


def onofri_deficit(p: OnofriProfile) -> float:
    """(1/8) int |f'|^2 r dr + int f dmu - log int e^f dmu, always >= 0."""
    t = p.t
    grad = rc.differentiate_t(p.f, p.profile.spacing)
    energy = float(np.trapezoid(grad**2, t))
    weight = np.exp(-2.0 * t) * (1.0 + np.exp(-2.0 * t)) ** -2.0
    linear = 2.0 * float(np.trapezoid(p.f * weight, t))
    return energy / 8.0 + linear - math.log(p.mass)


def loghls_deficit(p: OnofriProfile) -> float:
    """Entropy minus logarithmic-potential energy of h = e^f (1+r^2)^{-2}.

    2 int h log(h/M) r dr - (8/M) int h w_h r dr + M with M the mass of
    2 h r dr; zero exactly when h is a multiple of (1+r^2)^{-2}.
    """
    t = p.t
    h = np.exp(p.f) * (1.0 + np.exp(-2.0 * t)) ** -2.0
    m = p.mass
    # h > 0 always, and log h decays quadratically against the r dr weight
    entropy = 2.0 * rc.integrate_r(h * (np.log(h) - math.log(m)), t, 1.0, what="loghls entropy")
    w = log_kernel_potential(h, t)
    pairing = rc.integrate_r(h * w, t, 1.0, what="loghls pairing")
    return entropy - 8.0 / m * pairing + m


def onofri_chain(p: OnofriProfile, tol: float = 1e-7) -> fn.DeficitReport:
    """Certify 0 <= loghls_deficit <= M * onofri_deficit."""
    lhs = loghls_deficit(p)
    m = p.mass
    rhs = m * onofri_deficit(p)
    scale = max(1.0, abs(lhs), abs(rhs))
    passed = lhs >= -tol * scale and rhs - lhs >= -tol * scale
    return fn.DeficitReport(
        lhs=lhs, rhs=rhs, residual=rhs - lhs, dimension=2.0, c_ratio=1.0, pass_=passed
    )


def mu_alpha_weight(t: np.ndarray, alpha: float) -> np.ndarray:
    """Density mu_alpha(r) = ((1+alpha)/pi) r^{2 alpha} (1+r^{2(1+alpha)})^{-2}."""
    r2a = np.exp(-2.0 * alpha * t)
    denom = (1.0 + np.exp(-2.0 * (1.0 + alpha) * t)) ** 2.0
    return (1.0 + alpha) / math.pi * r2a / denom


def mu_alpha_deficit(p: OnofriProfile, tol: float = 1e-7) -> fn.DeficitReport:
    """Two-sided weighted chain for the alpha-family of probability measures.

    lhs: relative entropy of v = e^u mu_alpha / int e^u dmu_alpha minus
    4 pi (1+alpha) times the log-potential energy of v - mu_alpha.
    rhs: the alpha-Onofri deficit. Both sides vanish iff u is constant.
    """
    alpha = p.alpha
    t = p.t
    u = p.f
    mu = mu_alpha_weight(t, alpha)
    eu_mu = np.exp(u) * mu
    m_u = 2.0 * math.pi * rc.integrate_r(eu_mu, t, 1.0, what="alpha mass")
    v = eu_mu / m_u
    # v log(v / mu_alpha) = v (u - log m_u): no singular logs at the origin
    entropy = 2.0 * math.pi * rc.integrate_r(v * (u - math.log(m_u)), t, 1.0, what="alpha entropy")
    g = v - mu
    w = log_kernel_potential(g, t)
    pairing = 2.0 * math.pi * rc.integrate_r(g * w, t, 1.0, what="alpha pairing")
    lhs = entropy - 4.0 * math.pi * (1.0 + alpha) * pairing
    grad = rc.differentiate_t(u, p.profile.spacing)
    energy = float(np.trapezoid(grad**2, t))
    linear = 2.0 * math.pi * rc.integrate_r(u * mu, t, 1.0, what="alpha linear")
    rhs = energy / (8.0 * (1.0 + alpha)) - math.log(m_u) + linear
    scale = max(1.0, abs(lhs), abs(rhs))
    passed = lhs >= -tol * scale and rhs - lhs >= -tol * scale
    return fn.DeficitReport(
        lhs=lhs, rhs=rhs, residual=rhs - lhs, dimension=2.0, c_ratio=1.0, pass_=passed
    )


def _dual_limit_target(v: np.ndarray, t: np.ndarray) -> float:
    """2-d limit of the rescaled dual deficit for a compactly supported v."""
    mass = rc.integrate_r(v, t, 1.0, what="dual mass")
    safe = np.where(v > 0.0, v, 1.0)
    entropy = rc.integrate_r(v * np.where(v > 0.0, np.log(safe / mass), 0.0), t, 1.0, what="dual entropy")
    g = v * np.exp(-2.0 * t)
    inner = rc._cumulative_from_end(g, t)  # int_0^r v s ds
    # int v k2[v] r dr = -2 int r log r v(r) (int_0^r v s ds) dr
    pairing = -2.0 * float(np.trapezoid((-t) * g * inner, t))
    return 0.5 * mass * entropy - pairing - 0.5 * (math.log(2.0) - 1.0) * mass**2


def dim_limit_check(f: rc.RadialProfile, eps_list) -> list[dict]:
    """Errors of the d = 2 + eps deficits against their 2-d limits.

    For each eps the primal entry compares (2/eps) times the Sobolev deficit
    of u = u_star (1 + (eps/(2d)) f) with the Onofri deficit of f; the dual
    entry compares h(d)/eps with its explicit limit, where

        h(d) = (int v^{2d/(d+2)} r^{d-1} dr)^{1+2/d}
               - (1/s_d) int v k_d[v] r^{d-1} dr

    and v = f (so f must be nonnegative with compact support in log radius).
    """
    if f.d != 2.0:
        raise DomainError("test function must be sampled at d = 2")
    if np.any(f.u < 0.0):
        raise DomainError("dual-side limit needs a nonnegative test function")
    p2 = OnofriProfile(f)
    onofri = onofri_deficit(p2)
    dual_target = _dual_limit_target(f.u, f.t)
    rows = []
    for eps in eps_list:
        if eps <= 0.0:
            raise DomainError("eps must be positive")
        d = 2.0 + eps
        # the energy tail of u_star decays like exp(-eps L): scale the grid
        half_width = max(60.0, 28.0 / eps)
        n = 1 << max(13, math.ceil(math.log2(2.0 * half_width / 0.3)))
        t = rc.log_radius_grid(half_width, n)
        fv = _resample(f, t)
        ustar = np.exp(-(d - 2.0) / 2.0 * np.logaddexp(0.0, -2.0 * t))
        u = rc.RadialProfile(d=d, t=t, u=ustar * (1.0 + (d - 2.0) / (2.0 * d) * fv), tag="dim-limit")
        err_primal = abs(2.0 / eps * fn.sobolev_deficit(u) - onofri)
        v = rc.RadialProfile(d=d, t=t, u=fv, tag="dim-limit-dual")
        mom = rc.moment(v, 2.0 * d / (d + 2.0))
        kd = rc.inverse_laplacian_radial(v)
        pairing = rc.integrate_r(v.u * kd.u, t, d - 1.0, what="dual pairing")
        h_d = mom ** (1.0 + 2.0 / d) - pairing / sd_radial_constant(d)
        err_dual = abs(h_d / eps - dual_target)
        rows.append({"eps": eps, "err_primal": err_primal, "err_dual": err_dual})
    return rows


def _resample(f: rc.RadialProfile, t: np.ndarray) -> np.ndarray:
    """Values of f on a new grid, zero outside the original support."""
    from scipy.interpolate import make_interp_spline

    spline = make_interp_spline(f.t, f.u, k=3)
    out = np.zeros_like(t)
    inside = (t >= f.t[0]) & (t <= f.t[-1])
    out[inside] = spline(t[inside])
    return out


def epsilon_bookkeeping(alpha: float, eps: float) -> dict:
    """Weighted-inequality bookkeeping of the d = 2 endpoint.

    With a_eps = -eps (alpha+1)/(1-eps), b_eps = a_eps + eps, p_eps = 2/eps,
    the optimal-profile integrals kappa_eps (critical norm to the p-th
    power) and lambda_eps (weighted energy) have closed Gamma forms; both
    are returned together with their quadrature values.
    """
    if not -1.0 < alpha <= 0.0:
        raise DomainError("alpha must lie in (-1, 0]")
    if not 0.0 < eps < 1.0:
        raise DomainError("eps must lie in (0, 1)")
    a_eps = -eps / (1.0 - eps) * (alpha + 1.0)
    b_eps = a_eps + eps
    p_eps = 2.0 / eps
    # the energy integrand decays like r^{2 a_eps} at infinity, which is
    # slow for small eps: widen the grid accordingly
    half_width = max(60.0, 16.0 / abs(a_eps))
    n = 1 << max(13, math.ceil(math.log2(2.0 * half_width / 0.25)))
    t = rc.log_radius_grid(half_width, n)
    r = np.exp(-t)
    u = (1.0 + r ** (2.0 * (alpha + 1.0))) ** (-eps / (1.0 - eps))
    gamma_factor = gamma(1.0 / (1.0 - eps)) ** 2 / gamma(2.0 / (1.0 - eps))
    kappa_exact = math.pi / (alpha + 1.0) * gamma_factor
    lambda_exact = 4.0 * math.pi * abs(a_eps) / (1.0 - eps) * gamma_factor
    kappa_num = 2.0 * math.pi * rc.integrate_r(
        u**p_eps, t, 1.0 - b_eps * p_eps, what="kappa quadrature"
    )
    # |u'|^2 r^{1-2a} dr = (du/dt)^2 e^{2 a t} dt, avoiding e^t overflow
    du_dt = rc.differentiate_t(u, t[1] - t[0])
    lambda_num = 2.0 * math.pi * rc.integrate_r(
        du_dt**2, t, -2.0 * a_eps - 1.0, what="lambda quadrature"
    )
    return {
        "a_eps": a_eps,
        "b_eps": b_eps,
        "p_eps": p_eps,
        "kappa": kappa_num,
        "kappa_exact": kappa_exact,
        "lambda": lambda_num,
        "lambda_exact": lambda_exact,
    }
