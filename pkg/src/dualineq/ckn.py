"""Weighted interpolation inequalities of Caffarelli-Kohn-Nirenberg type.

For radial functions the weight |x|^{-2a} acts exactly like changing the
dimension from d to d - 2a, so the whole completion-of-square machinery of
the unweighted case carries over with the weighted inverse operator
L_a^{-1}. Sharp constants are only known inside the symmetry region where
radial optimizers are global; parameters outside the certified bracket are
rejected rather than evaluated with an invalid constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import functionals as fn
from . import radial_core as rc
from .errors import DomainError
from .specfun import ckn_sharp_constant, sphere_volume

__all__ = [
    "CknParams",
    "ckn_deficit",
    "la_inverse",
    "ckn_square_chain",
    "ckn_interpolation_check",
    "symmetry_region",
    "symmetry_beta_curve",
    "ckn_optimal_profile",
]

SYMMETRY_MARGIN = 1e-3


@dataclass(frozen=True)
class CknParams:
    """Admissible weight exponents (a, b) at dimension d.

    The critical exponent p is determined by b = a - a_c + d/p; delta is
    the shape exponent of the radial optimizer.
    """

    a: float
    b: float
    d: float

    def __post_init__(self):
        d, a, b = self.d, self.a, self.b
        if d < 1.0:
            raise DomainError("dimension must be at least 1")
        if a >= self.a_c:
            raise DomainError("need a < (d-2)/2")
        if d >= 3.0:
            if not (a <= b <= a + 1.0):
                raise DomainError("need a <= b <= a+1 for d >= 3")
        elif d >= 2.0:
            if not (a < b <= a + 1.0):
                raise DomainError("need a < b <= a+1 for d = 2")
        else:
            if not (a + 0.5 < b <= a + 1.0):
                raise DomainError("need a + 1/2 < b <= a+1 for d = 1")
        p = self.p
        if not 2.0 <= p <= 2.0 * d / max(d - 2.0, 1e-300):
            raise DomainError(f"critical exponent p = {p} outside [2, 2d/(d-2)]")

    @property
    def a_c(self) -> float:
        return (self.d - 2.0) / 2.0

    @property
    def p(self) -> float:
        return self.d / (self.b - self.a + self.a_c)

    @property
    def q(self) -> float:
        return self.p / (self.p - 1.0)

    @property
    def delta(self) -> float:
        return (self.a_c + self.b - self.a) / (1.0 + self.a - self.b)

    @property
    def radial_constant(self) -> float:
        """C_{a,b} |S^{d-1}|^{(p-2)/p}, the per-unit-sphere sharp constant."""
        return ckn_sharp_constant(self.a, self.b, self.d) * sphere_volume(self.d) ** (
            (self.p - 2.0) / self.p
        )


def symmetry_region(p: float, d: float) -> tuple[float, float | None]:
    """Certified bracket (lower, upper) for the symmetry-breaking curve a(p).

    Radial optimizers are global for a above the curve; the lower bound is
    valid for all p in (2, 2*), the upper bound only on a sub-interval.
    """
    if d < 2.0:
        raise DomainError("symmetry bounds need d >= 2")
    two_star = 2.0 * d / (d - 2.0) if d > 2.0 else math.inf
    if not 2.0 < p < two_star:
        raise DomainError("p must lie strictly between 2 and 2d/(d-2)")
    a_c = (d - 2.0) / 2.0
    lower = a_c - 2.0 * math.sqrt((d - 1.0) / (p * p - 4.0))
    upper = None
    if p < 2.0 * (d * d - d + 1.0) / (d * d - 3.0 * d + 3.0):
        upper = a_c - 0.5 * math.sqrt((d - 1.0) * (6.0 - p) / (p - 2.0))
    return lower, upper


def symmetry_beta_curve(p_values, d: float) -> list[dict]:
    """Heuristic b(p) curve from bracket midpoints; reporting only."""
    rows = []
    a_c = (d - 2.0) / 2.0
    for p in p_values:
        lower, upper = symmetry_region(p, d)
        mid = lower if upper is None else 0.5 * (lower + upper)
        rows.append({"p": p, "alpha_mid": mid, "beta": mid - a_c + d / p})
    return rows


def _require_symmetric(prm: CknParams) -> None:
    if prm.a == prm.b == 0.0:
        return  # unweighted case: the sharp constant is unconditional
    lower, _ = symmetry_region(prm.p, prm.d)
    if prm.a < lower + SYMMETRY_MARGIN:
        raise DomainError(
            f"constant unavailable: a = {prm.a} below the certified symmetry "
            f"bound {lower + SYMMETRY_MARGIN}"
        )


def ckn_optimal_profile(
    prm: CknParams,
    half_width: float = rc.DEFAULT_HALF_WIDTH,
    n: int = rc.DEFAULT_NODES,
) -> rc.RadialProfile:
    """Radial optimizer (1 + r^{(2/delta)(a_c - a)})^{-delta}."""
    if prm.delta <= 0.0:
        raise DomainError("optimizer needs delta > 0")
    expo = 2.0 / prm.delta * (prm.a_c - prm.a)
    t = rc.log_radius_grid(half_width, n)
    # (1 + r^expo)^{-delta} evaluated stably in the log variable
    u = np.exp(-prm.delta * np.logaddexp(0.0, -expo * t))
    return rc.RadialProfile(d=prm.d, t=t, u=u, tag=f"ckn-optimal(a={prm.a},b={prm.b})")


def _weighted_energy(u: rc.RadialProfile, prm: CknParams) -> float:
    """int |u'|^2 r^{d-1-2a} dr, the dimension-(d-2a) Dirichlet energy."""
    return rc.dirichlet_energy(u, d_eff=u.d - 2.0 * prm.a)


def _critical_norm_p(u: rc.RadialProfile, prm: CknParams) -> float:
    """int |u|^p r^{d-1-bp} dr."""
    return rc.moment(u, prm.p, weight_exponent=u.d - 1.0 - prm.b * prm.p)


def ckn_deficit(u: rc.RadialProfile, prm: CknParams) -> float:
    """Radial weighted deficit c_{a,b} E_a[u] - I_{b,p}[u]^{2/p} >= 0."""
    if u.d != prm.d:
        raise DomainError("profile and parameters disagree on the dimension")
    _require_symmetric(prm)
    return prm.radial_constant * _weighted_energy(u, prm) - _critical_norm_p(u, prm) ** (
        2.0 / prm.p
    )


def la_inverse(v: rc.RadialProfile, prm: CknParams) -> rc.RadialProfile:
    """Inverse of L_a = -Delta + 2a x/|x|^2 . grad on radial functions.

    Radially L_a is the Laplacian in dimension d - 2a, so the explicit
    double-integral inverse applies with that effective dimension.
    """
    d_eff = v.d - 2.0 * prm.a
    if d_eff <= 2.0:
        raise DomainError("weighted inverse needs d - 2a > 2")
    return rc.inverse_laplacian_radial(v, d_eff=d_eff)


def _dual_pair(u: rc.RadialProfile, prm: CknParams) -> tuple[rc.RadialProfile, float]:
    """Dual density v with |x|^{-2a} v = kappa^{2-p} |x|^{-bp} u^{p-1}."""
    if np.any(u.u < 0.0):
        raise DomainError("dual construction requires u >= 0")
    omega = sphere_volume(prm.d)
    kappa = (omega * _critical_norm_p(u, prm)) ** (1.0 / prm.p)
    # r = exp(-t), so the weight r^(2a - bp) is exp((bp - 2a) t)
    values = kappa ** (2.0 - prm.p) * np.exp(
        (prm.b * prm.p - 2.0 * prm.a) * u.t
    ) * u.u ** (prm.p - 1.0)
    return u.with_values(values, tag="ckn-dual"), kappa


def ckn_square_chain(u: rc.RadialProfile, prm: CknParams, tol: float = 1e-7) -> fn.DeficitReport:
    """Two-sided weighted chain: 0 <= dual deficit <= primal deficit.

    Full-space normalization; the dual deficit is
    (int |v|^q |x|^{-(2a-b)q})^{2/q} - (1/C) <v, L_a^{-1} v> with v the
    kappa-normalized dual density of u.
    """
    if u.d != prm.d:
        raise DomainError("profile and parameters disagree on the dimension")
    _require_symmetric(prm)
    omega = sphere_volume(prm.d)
    c_full = ckn_sharp_constant(prm.a, prm.b, prm.d)
    v, _ = _dual_pair(u, prm)
    q = prm.q
    norm_q = omega * rc.moment(v, q, weight_exponent=u.d - 1.0 - (2.0 * prm.a - prm.b) * q)
    w = la_inverse(v, prm)
    pairing = omega * rc.integrate_r(
        v.u * w.u, u.t, u.d - 1.0 - 2.0 * prm.a, what="weighted dual pairing"
    )
    lhs = norm_q ** (2.0 / q) - pairing / c_full
    rhs = c_full * omega * _weighted_energy(u, prm) - (
        omega * _critical_norm_p(u, prm)
    ) ** (2.0 / prm.p)
    scale = max(1.0, abs(lhs), abs(rhs))
    passed = lhs >= -tol * scale and rhs - lhs >= -tol * scale
    return fn.DeficitReport(
        lhs=lhs, rhs=rhs, residual=rhs - lhs, dimension=prm.d, c_ratio=1.0, pass_=passed
    )


def ckn_interpolation_check(u: rc.RadialProfile, prm: CknParams) -> float:
    """Slack of 2 ||u||_{p,b}^2 <= C E_a[u] + (1/C) <v, L_a^{-1} v>.

    Returns rhs - lhs (nonnegative up to quadrature error) in full-space
    normalization for the kappa-related pair (u, v).
    """
    _require_symmetric(prm)
    omega = sphere_volume(prm.d)
    c_full = ckn_sharp_constant(prm.a, prm.b, prm.d)
    v, _ = _dual_pair(u, prm)
    w = la_inverse(v, prm)
    pairing = omega * rc.integrate_r(
        v.u * w.u, u.t, u.d - 1.0 - 2.0 * prm.a, what="weighted dual pairing"
    )
    lhs = 2.0 * (omega * _critical_norm_p(u, prm)) ** (2.0 / prm.p)
    rhs = c_full * omega * _weighted_energy(u, prm) + pairing / c_full
    return rhs - lhs
