"""Fast-diffusion flow in sphere coordinates with certified diagnostics.

The radial fast-diffusion evolution with extinction at time T is rewritten
through stereographic projection and the self-similar time tau = -log(T - t)
as

    w_tau = L w^m - (1/4) d (d-2) w^m + (1/4) (d+2) w,   m = (d-2)/(d+2),

where L is the axisymmetric Laplace-Beltrami operator
L w = (1-z^2) w_zz - d z w_z on z in (-1, 1). In these variables the
separating solution is the constant w = c_star and extinction is pushed to
tau = infinity, so monotonicity of the diagnostics (J, H, H', Q) can be
certified step by step without ever integrating into the singularity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi

from . import functionals as fn
from . import radial_core as rc
from .errors import DomainError, PreconditionError
from .specfun import sd_radial_constant

__all__ = [
    "FlowState",
    "FlowReport",
    "PhiReport",
    "SphereGrid",
    "sphere_grid",
    "stationary_constant",
    "to_sphere",
    "to_radial",
    "separation_datum",
    "step",
    "diagnostics",
    "run_flow",
    "phi_basic",
    "phi_refined",
    "phi_improved_check",
]

DEFAULT_Z_NODES = 128
DEFAULT_DTAU = 1e-3
RADIAL_HALF_WIDTH = 16.0
RADIAL_NODES = 2048


def stationary_constant(d: float) -> float:
    """Fixed point c_star = (d(d-2)/(d+2))^((d+2)/4) of the w-equation."""
    return (d * (d - 2.0) / (d + 2.0)) ** ((d + 2.0) / 4.0)


@dataclass(frozen=True)
class SphereGrid:
    """Gauss-Jacobi nodes, weights and differentiation matrices on (-1, 1).

    The quadrature weights absorb the axisymmetric surface factor
    (1-z^2)^((d-2)/2), so sums of w_i f(z_i) approximate
    integral f(z) (1-z^2)^((d-2)/2) dz with spectral accuracy. The
    differentiation matrices are barycentric (exact for the interpolant).
    """

    d: float
    z: np.ndarray
    quad: np.ndarray
    bary: np.ndarray
    d1: np.ndarray
    d2: np.ndarray

    def integrate(self, values: np.ndarray) -> float:
        return float(np.dot(self.quad, values))

    def interpolate(self, values: np.ndarray, z_new: np.ndarray) -> np.ndarray:
        """Barycentric evaluation of the interpolant at new points."""
        diff = z_new[:, None] - self.z[None, :]
        exact = np.isclose(diff, 0.0, atol=1e-15)
        diff = np.where(exact, 1.0, diff)
        num = (self.bary / diff) @ values
        den = (self.bary / diff).sum(axis=1)
        out = num / den
        hit_rows, hit_cols = np.nonzero(exact)
        out[hit_rows] = values[hit_cols]
        return out


@lru_cache(maxsize=32)
def sphere_grid(d: float, n: int = DEFAULT_Z_NODES) -> SphereGrid:
    alpha = (d - 2.0) / 2.0
    z, quad = roots_jacobi(n, alpha, alpha)
    # barycentric weights via log-sums to avoid under/overflow
    diff = z[:, None] - z[None, :]
    np.fill_diagonal(diff, 1.0)
    logw = -np.sum(np.log(np.abs(diff)), axis=1)
    sign = np.prod(np.sign(diff), axis=1)
    bary = sign * np.exp(logw - np.max(logw))
    with np.errstate(divide="ignore"):
        inv = 1.0 / (z[:, None] - z[None, :])
    np.fill_diagonal(inv, 0.0)
    d1 = (bary[None, :] / bary[:, None]) * inv
    np.fill_diagonal(d1, -np.sum(d1, axis=1))
    d2 = d1 @ d1
    return SphereGrid(d=d, z=z, quad=quad, bary=bary, d1=d1, d2=d2)


@dataclass
class FlowState:
    """One axisymmetric flow trajectory in (tau, z) variables."""

    d: float
    tau: float
    w: np.ndarray
    grid: SphereGrid
    history: list = field(default_factory=list)
    kappa0: float | None = None

    @property
    def m(self) -> float:
        return (self.d - 2.0) / (self.d + 2.0)


def _z_of_t(t: np.ndarray) -> np.ndarray:
    """z = (r^2 - 1)/(r^2 + 1) with r = exp(-t)."""
    return -np.tanh(t)


def to_sphere(
    v: rc.RadialProfile, T_guess: float = 1.0, n: int = DEFAULT_Z_NODES
) -> FlowState:
    """Map a positive radial profile to sphere coordinates at t = 0.

    v(r) = e^{-(d+2) tau / 4} (2/(1+r^2))^{(d+2)/2} w(z) with
    tau_0 = -log(T_guess).
    """
    if T_guess <= 0.0:
        raise DomainError("extinction-time guess must be positive")
    if np.any(v.u <= 0.0):
        raise DomainError("flow data must be strictly positive")
    d = v.d
    grid = sphere_grid(d, n)
    tau0 = -math.log(T_guess)
    t_nodes = -np.arctanh(grid.z)
    from scipy.interpolate import make_interp_spline

    # w as a function of t is smooth and bounded; interpolate it, not v
    factor = (0.5 * (1.0 + np.exp(-2.0 * v.t))) ** ((d + 2.0) / 2.0)
    w_on_t = v.u * factor * math.exp((d + 2.0) * tau0 / 4.0)
    spline = make_interp_spline(v.t, w_on_t, k=5)
    w = spline(t_nodes)
    if np.any(w <= 0.0):
        raise DomainError("sphere data lost positivity in interpolation")
    return FlowState(d=d, tau=tau0, w=w, grid=grid)


def to_radial(
    state: FlowState,
    half_width: float = RADIAL_HALF_WIDTH,
    n: int = RADIAL_NODES,
) -> rc.RadialProfile:
    """Reconstruct the radial solution v(r) at the state's tau."""
    d = state.d
    t = rc.log_radius_grid(half_width, n)
    z_new = _z_of_t(t)
    w = state.grid.interpolate(state.w, z_new)
    # 2/(1+r^2) = 2/(1+e^{-2t}), written to stay accurate as t -> -inf
    conf = (2.0 / (1.0 + np.exp(-2.0 * t))) ** ((d + 2.0) / 2.0)
    v = math.exp(-(d + 2.0) * state.tau / 4.0) * conf * w
    return rc.RadialProfile(d=d, t=t, u=v, tag="flow-radial")


def separation_datum(
    d: float,
    T: float = 1.0,
    half_width: float = RADIAL_HALF_WIDTH,
    n: int = RADIAL_NODES,
) -> rc.RadialProfile:
    """Radial datum whose flow separates variables (w identically c_star)."""
    grid = sphere_grid(d, DEFAULT_Z_NODES)
    state = FlowState(
        d=d, tau=-math.log(T), w=np.full(grid.z.size, stationary_constant(d)), grid=grid
    )
    return to_radial(state, half_width, n)


def _reaction_ops(state: FlowState) -> tuple[np.ndarray, float, float]:
    d = state.d
    grid = state.grid
    lap = np.diag(1.0 - grid.z**2) @ grid.d2 - d * np.diag(grid.z) @ grid.d1
    return lap, 0.25 * d * (d - 2.0), 0.25 * (d + 2.0)


def step(state: FlowState, dtau: float = DEFAULT_DTAU, max_halvings: int = 20) -> FlowState:
    """Advance one extrapolated semi-implicit step, halving dtau on positivity loss.

    The m-power is lagged (w^m ~ w_old^{m-1} w_new), which makes every
    constant state an exact fixed point of the scalar part of the scheme,
    so the separating solution stays stationary to machine precision. One
    full solve and two half solves are combined by step doubling
    (2 w_half2 - w_full), giving second-order accuracy in dtau; the
    trajectory-integrated certificates (Q monotonicity, extinction bound)
    need that order to sit below their tolerances near the extremal
    manifold, where the continuous inequalities are saturated.
    """
    if dtau <= 0.0:
        raise DomainError("step size must be positive")
    lap, c_nl, c_lin = _reaction_ops(state)
    nn = state.w.size
    ident = np.eye(nn)
    m = state.m

    def solve(w: np.ndarray, h: float) -> np.ndarray:
        a = w ** (m - 1.0)
        op = (lap - c_nl * ident) * a[None, :] + c_lin * ident
        return np.linalg.solve(ident - h * op, w)

    for _ in range(max_halvings + 1):
        w_full = solve(state.w, dtau)
        w_half = solve(state.w, 0.5 * dtau)
        if np.all(w_full > 0.0) and np.all(w_half > 0.0):
            w_half2 = solve(w_half, 0.5 * dtau)
            if np.all(w_half2 > 0.0):
                w_new = 2.0 * w_half2 - w_full
                if not np.all(w_new > 0.0):
                    w_new = w_half2  # rare: drop extrapolation, keep positivity
                new = FlowState(
                    d=state.d,
                    tau=state.tau + dtau,
                    w=w_new,
                    grid=state.grid,
                    history=state.history,
                    kappa0=state.kappa0,
                )
                new.history.append((new.tau,) + diagnostics(new))
                return new
        dtau *= 0.5
    raise PreconditionError("positivity lost after 20 step halvings")


def diagnostics(state: FlowState) -> tuple[float, float, float, float, float]:
    """Return (J, H, H', Q, kappa0) at the current state.

    J and Q come from the sphere quadrature; H and H' are evaluated on the
    reconstructed radial profile so they share the error model of the
    deficit functionals. kappa0 = H'_0 / J_0 is frozen on first call.
    """
    d = state.d
    grid = state.grid
    m = state.m
    j = math.exp(-d * state.tau / 2.0) * grid.integrate(state.w ** (2.0 * d / (d + 2.0)))
    v = to_radial(state)
    u = v.with_values(v.u**m, tag="flow-primal")
    h = -fn.hls_deficit(v)
    hprime = 2.0 * j ** (2.0 / d) * fn.sobolev_deficit(u)
    # Q = J^{2/d-1} ||grad v^m||^2 over the whole space; on the sphere the
    # energy picks up the mass term and the conformal exponential. Constant
    # states keep Q exactly constant (the equality case).
    wm = state.w**m
    wm_z = grid.d1 @ wm
    energy = grid.integrate((1.0 - grid.z**2) * wm_z**2) + 0.25 * d * (d - 2.0) * grid.integrate(wm**2)
    q = j ** (2.0 / d - 1.0) * math.exp(-(d - 2.0) * state.tau / 2.0) * energy
    if state.kappa0 is None:
        state.kappa0 = hprime / j
    return j, h, hprime, q, state.kappa0


@dataclass(frozen=True)
class FlowReport:
    """Certified-monotonicity summary of one trajectory."""

    dimension: float
    n_steps: int
    j_decreasing: bool
    j_slope_ok: bool
    h_nonpositive_increasing: bool
    q_nonincreasing: bool
    concavity_ok: bool
    decay_rate_ok: bool
    extinction_bound_ok: bool
    max_slack: float
    history: list

    @property
    def all_ok(self) -> bool:
        return (
            self.j_decreasing
            and self.j_slope_ok
            and self.h_nonpositive_increasing
            and self.q_nonincreasing
            and self.concavity_ok
            and self.decay_rate_ok
            and self.extinction_bound_ok
        )


def run_flow(
    v0: rc.RadialProfile,
    tau_max: float = 1.0,
    dtau: float = DEFAULT_DTAU,
    T_guess: float = 1.0,
    n: int = DEFAULT_Z_NODES,
    tol: float = 1e-6,
) -> FlowReport:
    """Integrate the flow and certify the monotonicity suite along it.

    Certified per accepted step: J decreasing; the slope of J^{2/d} in the
    original time variable at most -4/((d+2) s_d); H <= 0 and increasing;
    Q non-increasing; the discrete concavity bound
    (log H')' <= (log J)'; and the exponential decay H' <= H'_0 e^{-kappa dt}
    with kappa = (2d/(d+2)) J_0^{-2/d} / s_d. The extinction bound is the
    integrated form J^{2/d}(t) <= J_0^{2/d} - (4/(d+2)) t / s_d.
    """
    d = v0.d
    s_d = sd_radial_constant(d)
    state = to_sphere(v0, T_guess, n)
    state.history.append((state.tau,) + diagnostics(state))
    # generic data reach extinction before or after the guessed time, so w
    # collapses to 0 (or grows) in finite tau; stop once J is negligible
    j_floor = 1e-9 * max(1.0, state.history[0][1])
    while state.tau < -math.log(T_guess) + tau_max:
        state = step(state, dtau)
        if state.history[-1][1] <= j_floor:
            break

    hist = state.history
    taus = np.array([row[0] for row in hist])
    js = np.array([row[1] for row in hist])
    hs = np.array([row[2] for row in hist])
    hps = np.array([row[3] for row in hist])
    qs = np.array([row[4] for row in hist])
    # original time t = T - e^{-tau}; only increments matter
    ts = -np.exp(-taus)
    dts = np.diff(ts)

    slack = 0.0

    dj = np.diff(js)
    j_dec = bool(np.all(dj < tol * js[:-1]))
    slack = max(slack, float(np.max(dj / js[:-1], initial=-math.inf)))

    # instantaneous slope of J^{2/d} in original time, from the state itself:
    # (2/d) J^{2/d-1} J' = target * (1 + H'/(2J)), so the certified claim is
    # target * H'/(2J) <= tol, i.e. the Sobolev deficit is nonnegative.
    target = -4.0 / ((d + 2.0) * s_d)
    slope_slack = float(np.max(target * hps / (2.0 * js)))
    j_slope_ok = bool(slope_slack <= tol)
    slack = max(slack, slope_slack)

    h_ok = bool(np.all(hs <= tol) and np.all(np.diff(hs) >= -tol))
    slack = max(slack, float(np.max(hs)), float(np.max(-np.diff(hs))))

    dq = np.diff(qs)
    q_scale = max(1.0, float(np.max(qs)))
    q_ok = bool(np.all(dq <= tol * q_scale))
    slack = max(slack, float(np.max(dq / q_scale)))

    # ratio checks are meaningless once H' sits at the quadrature floor
    floor = 1e-9 * max(1.0, float(js[0]))
    live = (hps[:-1] > floor) & (hps[1:] > floor)
    if np.any(live):
        dlog_hp = np.log(hps[1:][live] / hps[:-1][live])
        dlog_j = np.log(js[1:][live] / js[:-1][live])
        conc_slack = float(np.max(dlog_hp - dlog_j))
        concavity_ok = bool(conc_slack <= 1e-5)
        kappa = (2.0 * d / (d + 2.0)) / (s_d * js[0] ** (2.0 / d))
        decay_slack = float(np.max(dlog_hp + kappa * dts[live]))
        decay_ok = bool(decay_slack <= 1e-5)
        slack = max(slack, conc_slack, decay_slack)
    else:
        concavity_ok = True
        decay_ok = True

    # trajectory-integrated bound: flagged only beyond 10x the tolerance,
    # since it accumulates scheme error over the whole run. The terminal
    # collapse (w -> 0 with the non-Lipschitz m-power) cannot be resolved at
    # any fixed step size, so the bound is certified while J retains a
    # meaningful fraction of its initial value.
    elapsed = ts - ts[0]
    resolved = js >= 1e-1 * js[0]
    ext_slack = float(
        np.max((js ** (2.0 / d) - (js[0] ** (2.0 / d) + target * elapsed))[resolved])
    )
    ext_ok = bool(ext_slack <= 10.0 * tol)
    slack = max(slack, ext_slack)

    return FlowReport(
        dimension=d,
        n_steps=len(hist) - 1,
        j_decreasing=j_dec,
        j_slope_ok=j_slope_ok,
        h_nonpositive_increasing=h_ok,
        q_nonincreasing=q_ok,
        concavity_ok=concavity_ok,
        decay_rate_ok=decay_ok,
        extinction_bound_ok=ext_ok,
        max_slack=slack,
        history=hist,
    )


def phi_basic(x: float, c: float) -> float:
    """sqrt(c^2 + 2 c x) - c, the improvement profile of the main bound."""
    return math.sqrt(c * c + 2.0 * c * x) - c


def phi_refined(x: float, c: float) -> float:
    """Refined improvement profile from the sharper ODE estimate."""
    inner = c * c + c * x + 0.5 * c * c * (math.sqrt(1.0 + 4.0 * x / c) - 1.0)
    return math.sqrt(inner) - c


@dataclass(frozen=True)
class PhiReport:
    """Evaluation record of the improved deficit inequality."""

    x: float
    phi_basic: float
    phi_refined: float
    slack: float

    @property
    def pass_(self) -> bool:
        return self.slack >= -1e-7


def phi_improved_check(u: rc.RadialProfile, c_ratio: float, tol: float = 1e-7) -> PhiReport:
    """Certify H[v] + s_d J^{1+2/d} phi(x) >= 0 for both phi variants.

    Here v = u^{(d+2)/(d-2)}, J is the dual mass of v, H = -hls_deficit(v)
    and x = J^{2/d-1} times the primal Sobolev deficit of u.
    """
    if not 0.0 < c_ratio <= 1.0:
        raise DomainError(f"c_ratio must lie in (0, 1], got {c_ratio}")
    d = u.d
    s_d = sd_radial_constant(d)
    q = (d + 2.0) / (d - 2.0)
    v = u.with_values(u.u**q, tag="dual-density")
    j = fn.critical_moment(u)
    h = -fn.hls_deficit(v)
    x = j ** (2.0 / d - 1.0) * fn.sobolev_deficit(u)
    x = max(x, 0.0)
    scale = s_d * j ** (1.0 + 2.0 / d)
    pb = phi_basic(x, c_ratio)
    pr = phi_refined(x, c_ratio)
    for p in (pb, pr):
        if not 0.0 <= p <= x + 1e-12 * max(1.0, x):
            raise DomainError("phi variant left the admissible band [0, x]")
    slack = min(h + scale * pb, h + scale * pr) / max(1.0, scale)
    return PhiReport(x=x, phi_basic=pb, phi_refined=pr, slack=slack)
