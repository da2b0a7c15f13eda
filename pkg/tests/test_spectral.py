"""Second-variation forms on the linearization modes: eigenvalue ratios,
the kernel mode, and the weighted Poincare inequality."""

import math

import numpy as np
import pytest

from dualineq import radial_core as rc
from dualineq import spectral
from dualineq.errors import PreconditionError
from dualineq.specfun import constants


def mu(k, d):
    return 4.0 * k * (k + d - 1.0) + d * (d - 2.0)


def test_eigenvalues_formula():
    for d in (3.0, 4.0, 5.0):
        for k in range(0, 5):
            lam, mu_k = spectral.eigenvalues(k, d)
            assert lam == pytest.approx(k * (k + d - 1.0), rel=1e-14)
            assert mu_k == pytest.approx(mu(k, d), rel=1e-14)


@pytest.mark.parametrize("d,target", [(3.0, 525.0), (4.0, 1152.0)])
def test_form_ratio_at_k2(d, target):
    # F/G at mode k equals mu_1 mu_k; at k=2 this is d(d+2)^2(d+4)
    assert target == pytest.approx(d * (d + 2.0) ** 2 * (d + 4.0), rel=1e-15)
    f2 = spectral.mode_profile(2, d)
    ratio = spectral.form_F(f2.profile) / spectral.form_G(f2.profile)
    assert ratio == pytest.approx(target, rel=1e-5)


def test_form_ratio_increasing_in_k():
    d = 3.0
    ratios = []
    for k in range(2, 7):
        f = spectral.mode_profile(k, d)
        ratios.append(spectral.form_F(f.profile) / spectral.form_G(f.profile))
        assert ratios[-1] == pytest.approx(mu(1, d) * mu(k, d), rel=1e-4)
    assert all(b > a for a, b in zip(ratios, ratios[1:]))


def test_ratio_bound_check_minimum():
    for d in (3.0, 4.0):
        got = spectral.ratio_bound_check(d)
        assert got == pytest.approx(d * (d + 2.0) ** 2 * (d + 4.0), rel=1e-5)


def test_kernel_mode_annihilates_both_forms():
    # only k = 1 (the dilation/translation mode) is in the kernel
    for d in (3.0, 4.0):
        f1 = spectral.mode_profile(1, d)
        assert abs(spectral.form_F(f1.profile)) <= 1e-7
        assert abs(spectral.form_G(f1.profile)) <= 1e-7


def test_k0_mode_is_not_in_kernel():
    # F[f_0] / ||f_0||^2 = mu_0 - mu_1 = -4d, exactly -12 at d = 3
    d = 3.0
    f0 = spectral.mode_profile(0, d)
    got = spectral.form_F(f0.profile) / spectral.weighted_norm_sq(f0.profile)
    assert got == pytest.approx(-12.0, rel=1e-6)


def test_mode_orthogonality():
    d = 3.0
    f2 = spectral.mode_profile(2, d)
    f3 = spectral.mode_profile(3, d)
    n2 = math.sqrt(spectral.weighted_norm_sq(f2.profile))
    n3 = math.sqrt(spectral.weighted_norm_sq(f3.profile))
    inner = spectral.weighted_inner(f2.profile, f3.profile)
    assert abs(inner) <= 1e-9 * n2 * n3


def test_poincare_saturation():
    for d in (3.0, 4.0, 5.0):
        ratios = []
        for k in range(2, 7):
            f = spectral.mode_profile(k, d)
            ratios.append(
                spectral.form_F(f.profile) / spectral.weighted_norm_sq(f.profile)
            )
        assert min(ratios) == pytest.approx(4.0 * (d + 2.0), rel=1e-5)
        assert ratios[0] == min(ratios)


def test_poincare_check_guards_low_modes():
    d = 3.0
    f2 = spectral.mode_profile(2, d)
    assert spectral.poincare_check(f2.profile)
    f0 = spectral.mode_profile(0, d)
    with pytest.raises(PreconditionError):
        spectral.poincare_check(f0.profile)


def test_cd_lower_bound_matches_bundle():
    for d in (3.0, 4.0):
        assert spectral.cd_lower_bound(d) == pytest.approx(
            constants(d).c_lower, rel=1e-15
        )
