"""Domain membership, boundary radius, and the Gauss-series tester."""

from fractions import Fraction

import pytest
from mpmath import mp

from heunlab import (AllZeroLimits, InvalidC, InvalidParams, boundary_radius,
                     domain_membership, eta_z, gauss_test, membership_sum,
                     series_limits)

F = Fraction
A2_LIMITS = (F(3, 2), F(-1, 2))


def test_membership_sum_two_lags():
    with mp.workprec(128):
        total = membership_sum(A2_LIMITS, F(1, 2), prec=128)
        assert abs(total - mp.mpf(7) / 8) < mp.mpf("1e-35")
    # the sign of a limit never matters, only its modulus
    assert membership_sum((F(3, 2), F(1, 2)), F(1, 2)) == membership_sum(A2_LIMITS, F(1, 2))


def test_domain_membership_report():
    inside = domain_membership(A2_LIMITS, F(1, 2))
    assert inside.inside and float(inside.total) == pytest.approx(0.875)
    outside = domain_membership(A2_LIMITS, F(9, 10))
    assert not outside.inside
    assert float(outside.total) == pytest.approx(1.755)
    assert float(outside.radius_bound) == pytest.approx(0.5615528128088303)


def test_boundary_radius_quadratic_anchor():
    r = boundary_radius(A2_LIMITS)
    with mp.workprec(256):
        ref = (mp.sqrt(17) - 3) / 2
        assert abs(r - ref) < mp.mpf(2) ** -240


def test_boundary_radius_named_anchors():
    with mp.workprec(256):
        assert abs(boundary_radius((2, 1)) - (mp.sqrt(2) - 1)) < mp.mpf(2) ** -240
        assert abs(boundary_radius((1, 1)) - (mp.sqrt(5) - 1) / 2) < mp.mpf(2) ** -240
    assert boundary_radius((1,)) == 1
    assert boundary_radius((2, 0)) == mp.mpf("0.5")


def test_boundary_radius_methods_agree():
    for limits in (A2_LIMITS, (F(5, 3), F(7, 2)), (F(1, 10), F(1, 10))):
        closed = boundary_radius(limits, method="closed")
        bisect = boundary_radius(limits, method="bisect")
        assert abs(closed - bisect) < mp.mpf(2) ** -248


def test_boundary_radius_three_lags_by_bisection():
    r = boundary_radius((1, 1, 1))
    assert abs(membership_sum((1, 1, 1), r) - 1) < mp.mpf(2) ** -240
    with mp.workprec(256):
        # independent oracle: the real root of r^3 + r^2 + r - 1
        ref = [z for z in mp.polyroots([1, 1, 1, -1]) if abs(mp.im(z)) < 1e-30][0]
        assert abs(r - mp.re(ref)) < mp.mpf("1e-70")
    with pytest.raises(InvalidParams):
        boundary_radius((1, 1, 1), method="closed")


def test_boundary_radius_input_guards():
    with pytest.raises(AllZeroLimits):
        boundary_radius((0, 0))
    with pytest.raises(InvalidParams):
        boundary_radius(A2_LIMITS, method="newton")


def test_eta_z_at_the_boundary():
    r = boundary_radius(A2_LIMITS)
    eta, z = eta_z(A2_LIMITS, r)
    assert float(eta) == pytest.approx(0.8423292192132454)
    assert float(z) == pytest.approx(0.1576707807867546)
    assert abs(eta + z - 1) < mp.mpf(2) ** -240


def test_eta_z_off_boundary_scaling():
    eta, z = eta_z(A2_LIMITS, F(1, 2))
    assert abs(eta - mp.mpf(3) / 4) < mp.mpf(2) ** -240
    assert abs(z - mp.mpf(1) / 8) < mp.mpf(2) ** -240


def test_gauss_convergent_case():
    rep = gauss_test(F(1, 2), F(1, 3), F(1, 2) + F(1, 3) + 1, n_max=1 << 16)
    assert rep.verdict == "ABS_CONVERGENT"
    assert rep.s == 1.0
    assert rep.trend == "shrinking"
    assert rep.fitted_exponent == pytest.approx(rep.predicted_exponent, abs=0.1)
    assert rep.checkpoints[0][0] == 1024


def test_gauss_logarithmic_divergence():
    rep = gauss_test(F(1, 2), F(1, 2), F(1), n_max=1 << 16)
    assert rep.verdict == "DIVERGENT"
    assert rep.s == 0.0
    assert rep.trend == "flat"


def test_gauss_strong_divergence():
    # c - a - b = -1/2: terms shrink too slowly, partial sums run away
    rep = gauss_test(F(1, 2), F(1, 2), F(1, 2), n_max=1 << 16)
    assert rep.verdict == "DIVERGENT"
    assert rep.trend == "growing"


def test_gauss_exact_verdict_beats_float_noise():
    # margin 1e-9 is invisible to the float fit but decisive exactly
    c = F(1) + F(1, 10 ** 9)
    rep = gauss_test(F(1, 2), F(1, 2), c, n_max=1 << 14)
    assert rep.verdict == "ABS_CONVERGENT"
    assert rep.trend == "flat"


def test_gauss_terminating():
    rep = gauss_test(-3, F(1, 2), 2, n_max=1 << 14)
    assert rep.verdict == "TERMINATING"
    assert rep.terminated
    # all checkpoints agree once the polynomial has been summed
    finals = {v for _, v in rep.checkpoints}
    assert len(finals) == 1


def test_gauss_input_guards():
    with pytest.raises(InvalidParams):
        gauss_test(F(1, 2), F(1, 2), F(2), n_max=100)
    with pytest.raises(InvalidC):
        gauss_test(F(1, 2), F(1, 2), 0)


def test_heun_limits_feed_the_domain(a2_params):
    r = boundary_radius(series_limits(a2_params))
    assert float(r) == pytest.approx(0.5615528128088303)
