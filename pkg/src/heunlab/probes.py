"""Empirical boundary probes: stream millions of terms, watch the Cauchy gaps.

The analytic machinery certifies what happens at the boundary radius; these
probes measure it.  A probe streams term values t_n (either the majorant
sequence c_n r^n or the signed d_n r^n) in float64 with power-of-two
rescaling, records partial sums at dyadic checkpoints, and issues a verdict
from the final Cauchy gaps S_{2n} - S_n:

* gaps below 1e-8 across three doublings: converges-empirically;
* gaps at or above 1e-3 across three doublings: diverges-empirically;
* anything else: inconclusive.

Rescaling matters: at 0.99 of the boundary radius the terms underflow float64
long before the last checkpoint, and without the scale channel the recurrence
itself would degenerate to 0/0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InsufficientData, InvalidParams
from .recurrence import CoefficientStream, RecurrenceSystem, stream_coefficients

VERDICT_CONVERGES = "converges-empirically"
VERDICT_DIVERGES = "diverges-empirically"
VERDICT_INCONCLUSIVE = "inconclusive"

GAP_SMALL = 1e-8
GAP_LARGE = 1e-3
SUSTAIN = 3

_RESCALE_HI = math.ldexp(1.0, 500)
_RESCALE_LO = math.ldexp(1.0, -500)
_RESCALE_SHIFT = 512


def _lag_value_arrays(system: RecurrenceSystem, offset: int, count: int,
                      signed: bool) -> tuple:
    """Float64 arrays of the two lag coefficients at offset .. offset+count-1."""
    if system.k != 2:
        raise InvalidParams("probes are stated for three-term recurrences")
    n = np.arange(offset, offset + count, dtype=np.float64)

    def vals(fn):
        num = np.zeros_like(n)
        for c in fn.num.coeffs[::-1]:
            num = num * n + float(c)
        den = np.zeros_like(n)
        for c in fn.den.coeffs[::-1]:
            den = den * n + float(c)
        # a leading pole entry can be inf/nan; the recurrence never reads it
        with np.errstate(divide="ignore", invalid="ignore"):
            return num / den

    a = vals(system.lags[0])
    b = vals(system.lags[1])
    if not signed:
        a, b = np.abs(a), np.abs(b)
    return a, b


@dataclass(frozen=True)
class ProbeSeries:
    which: str  # "modulus" or "signed"
    r: float
    offset: int
    n_terms: int
    checkpoints: tuple  # (n, partial sum S_n)
    gaps: tuple  # S_{2n} - S_n between consecutive checkpoints
    term_log_mags: tuple  # natural log |t_n| at checkpoints, -inf when zero
    verdict: str
    max_abs_partial: float


def _verdict_from_gaps(gaps) -> str:
    tail = [abs(g) for g in gaps[-SUSTAIN:]]
    if len(tail) < SUSTAIN:
        return VERDICT_INCONCLUSIVE
    if all(g < GAP_SMALL for g in tail):
        return VERDICT_CONVERGES
    # a non-finite gap means the partial sums already left float range
    if all(g >= GAP_LARGE or not math.isfinite(g) for g in tail):
        return VERDICT_DIVERGES
    return VERDICT_INCONCLUSIVE


def _real_scale(u: float, scale_pow: int) -> float:
    """u * 2**scale_pow in float64, saturating instead of raising."""
    if u == 0.0:
        return 0.0
    try:
        return math.ldexp(u, scale_pow)
    except OverflowError:
        return math.copysign(math.inf, u)


def term_scan(system: RecurrenceSystem, r: float, n_terms: int = 1 << 20,
              which: str = "modulus", offset: int = 1) -> ProbeSeries:
    """Stream t_0 .. t_{n_terms-1} at radius r and collect dyadic diagnostics.

    For "modulus" the recurrence is the majorant sequence from `offset` (so
    t_j = c_j r^j); for "signed" it is the true coefficient recurrence from
    index 0 (t_n = d_n r^n).  The inner loop carries a power-of-two scale so
    the recurrence state never leaves the representable range even when the
    real-scale terms underflow.
    """
    if which not in ("modulus", "signed"):
        raise InvalidParams(f"unknown probe channel {which!r}")
    if n_terms < 1 << 11:
        raise InvalidParams("probe needs at least 2^11 terms for dyadic gaps")
    signed = which == "signed"
    if signed:
        offset = 0
    a_arr, b_arr = _lag_value_arrays(system, offset, n_terms, signed)
    rf = float(r)
    a_arr = a_arr * rf
    b_arr = b_arr * (rf * rf)

    checkpoints = []
    term_logs = []
    marks = set((1 << j) for j in range(10, 64) if (1 << j) <= n_terms)

    u_prev = 0.0  # scaled t_{j-1}
    u = 1.0  # scaled t_0
    scale_pow = 0
    total = 1.0  # real-scale running sum, starts with t_0 = 1
    max_abs = 1.0
    ln2 = math.log(2.0)
    for j in range(1, n_terms):
        nxt = a_arr[j - 1] * u + b_arr[j - 1] * u_prev if j >= 2 else a_arr[0] * u
        u_prev, u = u, nxt
        mag = max(abs(u), abs(u_prev))
        if mag > _RESCALE_HI:
            u = math.ldexp(u, -_RESCALE_SHIFT)
            u_prev = math.ldexp(u_prev, -_RESCALE_SHIFT)
            scale_pow += _RESCALE_SHIFT
        elif 0.0 < mag < _RESCALE_LO:
            u = math.ldexp(u, _RESCALE_SHIFT)
            u_prev = math.ldexp(u_prev, _RESCALE_SHIFT)
            scale_pow -= _RESCALE_SHIFT
        total += _real_scale(u, scale_pow)
        if abs(total) > max_abs:
            max_abs = abs(total)
        if j + 1 in marks:
            checkpoints.append((j + 1, total))
            term_logs.append(math.log(abs(u)) + scale_pow * ln2 if u != 0 else -math.inf)
    gaps = tuple(s2 - s1 for (_, s1), (_, s2) in zip(checkpoints, checkpoints[1:]))
    return ProbeSeries(which, rf, offset, n_terms, tuple(checkpoints), gaps,
                       tuple(term_logs), _verdict_from_gaps(gaps), max_abs)


def term_trace(system: RecurrenceSystem, r: float, n_terms: int,
               stride: int = 1, which: str = "modulus", offset: int = 1) -> list:
    """Decimated per-term trace rows at radius r, for CSV export.

    Rows are (n, value_re, value_im, log_mag, term_at_r, partial_sum), where
    value is the bare coefficient and term_at_r = value * r^n.  The value and
    sum columns saturate to +-inf once they leave float64 range; log_mag is
    the column that stays informative there.
    """
    if which not in ("modulus", "signed"):
        raise InvalidParams(f"unknown probe channel {which!r}")
    rf = float(r)
    if not (rf > 0.0 and math.isfinite(rf)):
        raise InvalidParams("trace radius must be a positive finite number")
    if stride < 1 or n_terms < 1:
        raise InvalidParams("trace needs stride >= 1 and at least one term")
    signed = which == "signed"
    if signed:
        offset = 0
    a_arr, b_arr = _lag_value_arrays(system, offset, n_terms, signed)
    a_arr = a_arr * rf
    b_arr = b_arr * (rf * rf)
    ln2 = math.log(2.0)
    lnr = math.log(rf)

    rows = [(0, 1.0, 0.0, 0.0, 1.0, 1.0)]
    u_prev = 0.0
    u = 1.0
    scale_pow = 0
    total = 1.0
    for j in range(1, n_terms):
        nxt = a_arr[j - 1] * u + b_arr[j - 1] * u_prev if j >= 2 else a_arr[0] * u
        u_prev, u = u, nxt
        mag = max(abs(u), abs(u_prev))
        if mag > _RESCALE_HI:
            u = math.ldexp(u, -_RESCALE_SHIFT)
            u_prev = math.ldexp(u_prev, -_RESCALE_SHIFT)
            scale_pow += _RESCALE_SHIFT
        elif 0.0 < mag < _RESCALE_LO:
            u = math.ldexp(u, _RESCALE_SHIFT)
            u_prev = math.ldexp(u_prev, _RESCALE_SHIFT)
            scale_pow -= _RESCALE_SHIFT
        term = _real_scale(u, scale_pow)
        total += term
        if j % stride == 0 or j == n_terms - 1:
            if u != 0.0:
                log_coef = math.log(abs(u)) + scale_pow * ln2 - j * lnr
                try:
                    value = math.copysign(math.exp(log_coef), u)
                except OverflowError:
                    value = math.copysign(math.inf, u)
            else:
                log_coef = -math.inf
                value = 0.0
            rows.append((j, value, 0.0, log_coef, term, total))
    return rows


def empirical_radius(stream: CoefficientStream, min_points: int = 64) -> float:
    """Estimate the radius of convergence from coefficient magnitudes.

    Fits log |d_n| = c + s log n + n log(rho) over the tail half of the
    stream and returns 1/rho.  The power correction term soaks up the
    polynomial factor that otherwise biases a pure geometric fit.
    """
    logs = stream.log_mags
    n0 = len(logs) // 2
    pts = [(n, lm) for n, lm in enumerate(logs) if n >= max(n0, 1) and math.isfinite(lm)]
    if len(pts) < min_points:
        raise InsufficientData(f"need {min_points} usable tail points, have {len(pts)}")
    ns = np.array([p[0] for p in pts], dtype=np.float64)
    ys = np.array([p[1] for p in pts], dtype=np.float64)
    X = np.stack([ns, np.log(ns), np.ones_like(ns)], axis=1)
    coef, *_ = np.linalg.lstsq(X, ys, rcond=None)
    return float(math.exp(-coef[0]))


@dataclass(frozen=True)
class DiscrepancyReport:
    """Side-by-side behavior of the signed series and its majorant at the boundary.

    The majorant diverging while the signed gaps shrink is not a
    contradiction: the majorant bounds the absolute series, and sign
    cancellation can leave the signed partial sums settling anyway.  The
    gap_ratios column makes the cancellation visible.
    """

    r_star: float
    eta: float
    z: float
    radius_estimate: float
    signed: ProbeSeries
    modulus: ProbeSeries
    gap_ratios: tuple  # |signed gap| / modulus gap at matching checkpoints
    agreement: str  # "both-diverge", "both-converge", "cancellation", "inconclusive"


def discrepancy_report(system: RecurrenceSystem, r_star, eta, z,
                       n_terms: int = 1 << 20, stream_len: int = 4096,
                       offset: int = 1) -> DiscrepancyReport:
    signed = term_scan(system, float(r_star), n_terms, "signed")
    modulus = term_scan(system, float(r_star), n_terms, "modulus", offset)
    ratios = []
    for gs, gm in zip(signed.gaps, modulus.gaps):
        ratios.append(abs(gs) / gm if gm > 0 else math.inf)
    diag = stream_coefficients(system, stream_len, 53)
    estimate = empirical_radius(diag)
    sv, mv = signed.verdict, modulus.verdict
    if sv == VERDICT_DIVERGES and mv == VERDICT_DIVERGES:
        agreement = "both-diverge"
    elif sv == VERDICT_CONVERGES and mv == VERDICT_CONVERGES:
        agreement = "both-converge"
    elif sv == VERDICT_CONVERGES and mv == VERDICT_DIVERGES:
        agreement = "cancellation"
    else:
        agreement = "inconclusive"
    return DiscrepancyReport(float(r_star), float(eta), float(z), estimate,
                             signed, modulus, tuple(ratios), agreement)
