"""Float64 boundary probes: scans, traces, and the radius estimator."""

import math
from fractions import Fraction

import pytest

from heunlab import (InsufficientData, InvalidParams, RationalFnInN,
                     RecurrenceSystem, boundary_radius, discrepancy_report,
                     empirical_radius, eta_z, heun_recurrence, modulus_stream,
                     modulus_system, poly_from, series_limits,
                     stream_coefficients, term_scan, term_trace)

F = Fraction
R_STAR_A2 = 0.5615528128088303


def geometric_system(ratio=F(1, 2)):
    one = poly_from(F(1))
    return RecurrenceSystem((
        RationalFnInN(poly_from(ratio), one),
        RationalFnInN(poly_from(F(0)), one),
    ))


def gauss_coefficient_system():
    """Single-lag system with d_{n+1}/d_n -> 1: unit radius, slow polynomial drift."""
    num = poly_from(F(1, 2), 1) * poly_from(F(1, 3), 1)
    den = poly_from(F(5, 4), 1) * poly_from(F(1), 1)
    zero = RationalFnInN(poly_from(F(0)), poly_from(F(1)))
    return RecurrenceSystem((RationalFnInN(num, den), zero))


def test_scan_geometric_control_converges():
    scan = term_scan(geometric_system(), 1.0, 1 << 13)
    assert scan.verdict == "converges-empirically"
    assert all(abs(g) < 1e-8 for g in scan.gaps)
    assert scan.checkpoints[0][0] == 1024
    assert scan.max_abs_partial == pytest.approx(2.0, rel=1e-9)


def test_scan_modulus_diverges_at_boundary(a2_params):
    system = heun_recurrence(a2_params)
    scan = term_scan(system, R_STAR_A2, 1 << 17)
    assert scan.which == "modulus"
    assert scan.verdict == "diverges-empirically"
    assert all(g > 0 for g in scan.gaps)


def test_scan_modulus_converges_inside(a2_params):
    system = heun_recurrence(a2_params)
    scan = term_scan(system, 0.99 * R_STAR_A2, 1 << 17)
    assert scan.verdict == "converges-empirically"


def test_scan_signed_settles_at_boundary(a2_params):
    # sign cancellation: the signed series converges where the majorant blows up
    system = heun_recurrence(a2_params)
    scan = term_scan(system, R_STAR_A2, 1 << 17, which="signed")
    assert scan.offset == 0
    assert scan.verdict == "converges-empirically"


def test_scan_saturates_instead_of_overflowing(a2_params):
    # far outside the disk the real-scale partials leave float64; the verdict
    # must still come out as divergence, not an exception or "inconclusive"
    system = heun_recurrence(a2_params)
    scan = term_scan(system, 2.0, 1 << 13)
    assert scan.verdict == "diverges-empirically"
    assert math.isinf(scan.max_abs_partial)
    assert all(math.isfinite(lm) for lm in scan.term_log_mags)


def test_scan_input_guards(a2_params):
    system = heun_recurrence(a2_params)
    with pytest.raises(InvalidParams):
        term_scan(system, 0.5, 100)
    with pytest.raises(InvalidParams):
        term_scan(system, 0.5, 1 << 12, which="absolute")
    one_lag = RecurrenceSystem((RationalFnInN(poly_from(F(1, 2)), poly_from(F(1))),))
    with pytest.raises(InvalidParams):
        term_scan(one_lag, 0.5, 1 << 12)


def test_trace_matches_exact_majorant(a2_params):
    system = heun_recurrence(a2_params)
    r = 0.5
    rows = term_trace(system, r, 60, stride=1)
    exact = modulus_stream(modulus_system(system, 1), 60)
    assert rows[0] == (0, 1.0, 0.0, 0.0, 1.0, 1.0)
    partial = 1.0
    for n, value, value_im, log_mag, term, total in rows[1:]:
        c = float(exact[n])
        assert value_im == 0.0
        assert value == pytest.approx(c, rel=1e-9)
        assert term == pytest.approx(c * r ** n, rel=1e-9)
        assert log_mag == pytest.approx(math.log(c), rel=1e-9)
        partial += c * r ** n
        assert total == pytest.approx(partial, rel=1e-9)


def test_trace_signed_matches_exact_stream(a2_params):
    system = heun_recurrence(a2_params)
    rows = term_trace(system, 0.25, 40, stride=1, which="signed")
    exact = stream_coefficients(system, 40)
    for n, value, _, _, term, _ in rows[1:]:
        d = float(exact[n])
        assert value == pytest.approx(d, rel=1e-9)
        assert term == pytest.approx(d * 0.25 ** n, rel=1e-9)


def test_trace_stride_decimation(a2_params):
    system = heun_recurrence(a2_params)
    rows = term_trace(system, 0.5, 100, stride=7)
    assert [r[0] for r in rows] == [0] + list(range(7, 100, 7)) + [99]


def test_trace_saturation_keeps_log_column(a2_params):
    system = heun_recurrence(a2_params)
    rows = term_trace(system, 2.0, 3000, stride=500)
    last = rows[-1]
    assert math.isinf(last[4]) and math.isinf(last[5])
    assert math.isfinite(last[3])  # log magnitude still informative


def test_trace_input_guards(a2_params):
    system = heun_recurrence(a2_params)
    with pytest.raises(InvalidParams):
        term_trace(system, 0.5, 10, stride=0)
    with pytest.raises(InvalidParams):
        term_trace(system, -1.0, 10)
    with pytest.raises(InvalidParams):
        term_trace(system, 0.5, 0)


def test_empirical_radius_geometric():
    stream = stream_coefficients(geometric_system(), 2048, 53)
    assert empirical_radius(stream) == pytest.approx(2.0, rel=1e-6)


def test_empirical_radius_unit_disk():
    stream = stream_coefficients(gauss_coefficient_system(), 4096, 53)
    assert empirical_radius(stream) == pytest.approx(1.0, abs=1e-2)


def test_empirical_radius_heun(a2_params):
    # the true Frobenius solution is dominant: its disk ends at the nearest
    # singularity (1), not at the guaranteed-domain radius
    stream = stream_coefficients(heun_recurrence(a2_params), 4096, 53)
    assert empirical_radius(stream) == pytest.approx(1.0, abs=1e-2)


def test_empirical_radius_needs_points():
    stream = stream_coefficients(geometric_system(), 100, 53)
    with pytest.raises(InsufficientData):
        empirical_radius(stream)


def test_discrepancy_report(a2_params):
    system = heun_recurrence(a2_params)
    limits = series_limits(a2_params)
    r = boundary_radius(limits)
    eta, z = eta_z(limits, r)
    rep = discrepancy_report(system, r, eta, z, n_terms=1 << 17, stream_len=2048)
    assert rep.agreement == "cancellation"
    assert rep.signed.verdict == "converges-empirically"
    assert rep.modulus.verdict == "diverges-empirically"
    assert rep.r_star == pytest.approx(R_STAR_A2)
    assert rep.eta + rep.z == pytest.approx(1.0)
    assert rep.radius_estimate == pytest.approx(1.0, abs=1e-2)
    assert len(rep.gap_ratios) == len(rep.modulus.gaps)
    # cancellation in numbers: signed gaps are a vanishing share of majorant gaps
    assert rep.gap_ratios[-1] < 1e-6
