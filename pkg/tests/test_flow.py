"""Normalized fast-diffusion flow: fixed point, certified monotonicity,
scheme convergence, and the improvement-profile phi."""

import math

import numpy as np
import pytest

from dualineq import flow
from dualineq import functionals as fn
from dualineq import radial_core as rc
from dualineq.errors import DomainError


def test_stationary_constant_is_fixed_point():
    for d in (3.0, 4.0):
        grid = flow.sphere_grid(d)
        c = flow.stationary_constant(d)
        assert c == pytest.approx((d * (d - 2.0) / (d + 2.0)) ** ((d + 2.0) / 4.0))
        state = flow.FlowState(d=d, tau=0.0, w=np.full(grid.z.size, c), grid=grid)
        out = flow.step(state, 1e-3)
        assert np.max(np.abs(out.w - c)) <= 1e-11 * c


def test_sphere_radial_roundtrip():
    d = 3.0
    v0 = flow.separation_datum(d)
    state = flow.to_sphere(v0)
    back = flow.to_radial(state)
    mask = np.abs(back.t) <= 12.0
    assert np.max(np.abs(back.u - v0.u)[mask]) <= 1e-9 * np.max(v0.u)


def test_separation_datum_is_equality_case():
    for d in (3.0, 4.0):
        rep = flow.run_flow(flow.separation_datum(d), tau_max=0.2, dtau=2e-3)
        assert rep.all_ok
        assert rep.max_slack <= 1e-6
        # the separation solution keeps both deficits at zero
        js = np.array([row[1] for row in rep.history])
        hs = np.array([row[2] for row in rep.history])
        assert np.max(np.abs(hs)) <= 1e-6 * max(1.0, js[0])


@pytest.mark.parametrize("d", [3.0, 4.0])
def test_run_flow_random_datum_certified(d):
    rng = np.random.default_rng(int(d))
    u = fn.random_test_profile(d, rng, amplitude=0.2)
    v0 = u.with_values(u.u ** ((d + 2.0) / (d - 2.0)))
    rep = flow.run_flow(v0, tau_max=0.3, dtau=5e-4)
    assert rep.all_ok, (
        f"flags: dec={rep.j_decreasing} slope={rep.j_slope_ok} "
        f"h={rep.h_nonpositive_increasing} q={rep.q_nonincreasing} "
        f"conc={rep.concavity_ok} decay={rep.decay_rate_ok} "
        f"ext={rep.extinction_bound_ok} slack={rep.max_slack:.3e}"
    )


def test_run_flow_history_columns():
    rep = flow.run_flow(flow.separation_datum(3.0), tau_max=0.05, dtau=2e-3)
    assert rep.n_steps >= 20
    row = rep.history[0]
    assert len(row) == 6  # (tau, J, H, H', Q, kappa0)
    taus = np.array([r[0] for r in rep.history])
    assert np.all(np.diff(taus) > 0.0)


def test_scheme_convergence_under_refinement():
    # halving dtau changes the end-state diagnostics by <= 1e-5 relative
    d = 3.0
    rng = np.random.default_rng(2)
    u = fn.random_test_profile(d, rng, amplitude=0.15)
    v0 = u.with_values(u.u**5.0)
    ends = []
    for dtau in (1e-3, 5e-4):
        rep = flow.run_flow(v0, tau_max=0.1, dtau=dtau)
        ends.append(rep.history[-1][1])
    assert abs(ends[0] - ends[1]) <= 1e-5 * max(ends)


def test_step_preserves_positivity():
    d = 3.0
    grid = flow.sphere_grid(d)
    rng = np.random.default_rng(0)
    w = 0.2 + 0.1 * rng.random(grid.z.size)
    state = flow.FlowState(d=d, tau=0.0, w=w, grid=grid)
    out = flow.step(state, 1e-3)
    assert np.all(out.w > 0.0)


def test_phi_variants_pointwise():
    c = 3.0 / 7.0
    assert flow.phi_basic(0.0, c) == 0.0
    assert flow.phi_refined(0.0, c) == 0.0
    xs = np.linspace(0.0, 40.0, 301)
    for phi in (flow.phi_basic, flow.phi_refined):
        vals = np.array([phi(x, c) for x in xs])
        assert np.all(np.diff(vals) > 0.0)  # increasing
        assert np.all(np.diff(vals, 2) <= 1e-12)  # concave
        assert np.all(vals <= xs + 1e-12)  # dominated by x


def test_phi_crossovers():
    # phi >= C x below the crossover and phi <= C x above it
    c = 3.0 / 7.0
    for phi, crossover in (
        (flow.phi_basic, 2.0 * (1.0 - c) / c),
        (flow.phi_refined, (1.0 - c) / c),
    ):
        assert phi(crossover, c) == pytest.approx(c * crossover, rel=1e-12)
        assert phi(0.9 * crossover, c) > c * 0.9 * crossover
        assert phi(1.1 * crossover, c) < c * 1.1 * crossover


def test_phi_improved_check_on_random_profiles():
    rng = np.random.default_rng(8)
    for d in (3.0, 4.0):
        c = d / (d + 4.0)
        for _ in range(10):
            u = fn.random_test_profile(d, rng)
            rep = flow.phi_improved_check(u, c)
            assert rep.pass_, f"slack {rep.slack:.3e}"
            assert 0.0 <= rep.phi_refined <= rep.x + 1e-12


def test_phi_improved_check_rejects_bad_ratio():
    rng = np.random.default_rng(1)
    u = fn.random_test_profile(3.0, rng)
    with pytest.raises(DomainError):
        flow.phi_improved_check(u, 0.0)
    with pytest.raises(DomainError):
        flow.phi_improved_check(u, 1.5)
