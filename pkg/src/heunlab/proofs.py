"""Boundary-divergence proof machinery: case split, certified constants, minorant.

The divergence argument for sum |c_n| r^n at the boundary radius runs through
four stages, each of which is an operation here so that every constant the
argument quotes can be found, certified, and re-verified mechanically:

1. classify the recurrence by comparing sub-leading coefficients of the
   normalized lag numerators and denominators (four sign cases);
2. find positive integers h and a start index N with |A_n| > 1 - h/n > 1 - eps
   for all n >= N, certified on a finite range by sweeping and beyond it by an
   exact polynomial positivity certificate;
3. bound Pochhammer ratios from below past a computable index floor;
4. assemble the explicit minorant whose growth forces the divergence verdict.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from mpmath import mp

from .errors import (DegreeMismatch, DomainError, InvalidParams, NotFoundWithin)
from .polynomials import PolynomialInN
from .recurrence import (LimitProfile, RecurrenceSystem, limit_profile)
from .scalars import DEFAULT_PRECISION, as_mp, is_exact, real_part
from .special import Hyp2F1Params, hyp2f1_series

CASE1, CASE2, CASE3, CASE4 = "CASE1", "CASE2", "CASE3", "CASE4"

# which named constant plays each lag's role, by case
H_LABELS = {
    CASE1: ("h1", "h2"),
    CASE2: ("h3", "h4"),
    CASE3: ("h3", "h2"),
    CASE4: ("h1", "h4"),
}


@dataclass(frozen=True)
class CaseReport:
    case: str
    lag1_num_sub: object  # sub-leading coefficient of the monic numerator
    lag1_den_sub: object
    lag2_num_sub: object
    lag2_den_sub: object
    lag1_strictly_less: bool
    lag2_strictly_less: bool


def classify_case(profile: LimitProfile) -> CaseReport:
    """Sort a three-term system into one of the four sub-leading sign cases.

    Comparisons use real parts and are exact whenever the sub-leading data is
    rational.  Systems where a lag limit vanishes or the degrees differ fall
    outside the hypothesis and are rejected.
    """
    if len(profile.limits) != 2:
        raise InvalidParams("case classification is stated for three-term recurrences")
    if any(s is None for s in profile.subleading):
        raise DegreeMismatch("both lag coefficients need matching numerator/denominator degree")
    if any(L == 0 for L in profile.limits):
        raise InvalidParams("case classification needs nonzero lag limits")
    (o1, w1), (o2, w2) = profile.subleading
    lt1 = bool(real_part(o1) < real_part(w1))
    lt2 = bool(real_part(o2) < real_part(w2))
    if lt1 and lt2:
        case = CASE1
    elif not lt1 and not lt2:
        case = CASE2
    elif not lt1 and lt2:
        case = CASE3
    else:
        case = CASE4
    return CaseReport(case, o1, w1, o2, w2, lt1, lt2)


@dataclass(frozen=True)
class BoundCertificate:
    """Exact witness that |num(n)/den(n)| > 1 - h/n for every n past `valid_from`.

    The cleared inequality n*num(n) - (n-h)*den(n) > 0 has positive leading
    coefficient by the choice of h; past a Cauchy root bound the sign is
    locked, and likewise num and den are positive past their own bounds, so
    the absolute values drop.  valid_from is the max of the three bounds.
    """

    h: int
    leading: object
    valid_from: int


def _monic(poly: PolynomialInN) -> PolynomialInN:
    lead = poly.leading
    return PolynomialInN(tuple(c / lead for c in poly.coeffs))


def _cauchy_bound(poly: PolynomialInN) -> int:
    """All real roots lie strictly below 1 + max |c_i| / |lead|."""
    lead = abs(poly.leading)
    if poly.degree <= 0:
        return 1
    worst = max(abs(c) for c in poly.coeffs[:-1])
    return int(math.floor(1 + worst / lead)) + 1


def _bound_certificate(num_m: PolynomialInN, den: PolynomialInN, h: int) -> BoundCertificate:
    n_poly = PolynomialInN((0, 1))
    cleared = n_poly * num_m - PolynomialInN((-h, 1)) * den
    if cleared.is_zero or cleared.leading <= 0:
        raise NotFoundWithin(f"cleared margin polynomial is not eventually positive for h = {h}")
    bound = max(_cauchy_bound(cleared), _cauchy_bound(num_m), _cauchy_bound(den), h + 1)
    return BoundCertificate(h, cleared.leading, bound)


def _float_poly(poly: PolynomialInN) -> np.ndarray:
    return np.array([float(c) for c in poly.coeffs], dtype=np.float64)


def _polyval(arr: np.ndarray, n: np.ndarray) -> np.ndarray:
    acc = np.zeros_like(n)
    for c in arr[::-1]:
        acc = acc * n + c
    return acc


@dataclass(frozen=True)
class SweepResult:
    last_violation: int  # 0 when the bound holds on the whole range
    min_margin: float
    argmin: int
    rechecked: int


def _margin_sweep(num_m: PolynomialInN, den: PolynomialInN, h: int,
                  n_lo: int, n_hi: int, exact: bool) -> SweepResult:
    """Check |num(n)|/|den(n)| > 1 - h/n over [n_lo, n_hi].

    Float64 does the scan; any point whose margin is within 1e-6 of zero is
    re-decided exactly when the coefficients are rational, so the reported
    last violation is exact.  Margins far from zero dwarf float error (they
    shrink like 1/n, which at n = 1e5 is still 1e9 times the rounding noise).
    """
    fn_num, fn_den = _float_poly(num_m), _float_poly(den)
    last_violation = 0
    min_margin = math.inf
    argmin = n_lo
    rechecked = 0
    chunk = 1 << 17
    for start in range(n_lo, n_hi + 1, chunk):
        stop = min(start + chunk - 1, n_hi)
        n = np.arange(start, stop + 1, dtype=np.float64)
        margins = np.abs(_polyval(fn_num, n)) / np.abs(_polyval(fn_den, n)) - (1.0 - h / n)
        i = int(np.argmin(margins))
        if margins[i] < min_margin:
            min_margin = float(margins[i])
            argmin = start + i
        suspicious = np.nonzero(margins < 1e-6)[0]
        for idx in suspicious:
            nv = start + int(idx)
            if exact:
                rechecked += 1
                ok = abs(Fraction(num_m(nv))) * nv > (nv - h) * abs(Fraction(den(nv)))
            else:
                ok = margins[idx] > 0
            if not ok and nv > last_violation:
                last_violation = nv
    return SweepResult(last_violation, min_margin, argmin, rechecked)


@dataclass(frozen=True)
class ProofConstants:
    case: str
    h_lag1: int
    h_lag2: int
    h_labels: tuple
    N: int
    eps: object
    N_check: int
    N_eps: int  # part of N forced by h/n < eps
    last_violation_lag1: int
    last_violation_lag2: int
    cert_lag1: BoundCertificate
    cert_lag2: BoundCertificate
    sweep_lag1: SweepResult
    sweep_lag2: SweepResult
    verified: bool


def _smallest_h_less(num_sub, den_sub) -> int:
    # smallest positive integer h with (den_sub - num_sub) - h < 0
    gap = real_part(den_sub) - real_part(num_sub)
    if is_exact(gap):
        h = math.floor(gap) + 1
    else:
        h = int(mp.floor(gap)) + 1
    return max(h, 1)


def find_proof_constants(system: RecurrenceSystem, eps=Fraction(1, 100),
                         N_check: int = 10 ** 5) -> ProofConstants:
    """Find (h, N) making |A_n| > 1 - h/n > 1 - eps for n in [N, N_check] and beyond.

    In the strictly-less cases h is forced by the sub-leading gap; in the
    greater-or-equal cases h = 1 suffices once n clears the relevant roots.
    N is the smallest index compatible with the sweep, the certificates, and
    the eps floor (n > h/eps).  Everything reported is certified: the sweep
    re-decides near-zero margins exactly and the tail past N_check is covered
    by the positivity certificate.
    """
    if not (0 < eps < 1):
        raise InvalidParams("eps must lie in (0, 1)")
    profile = limit_profile(system)
    report = classify_case(profile)
    exact = all(is_exact(c) for fn in system.lags for c in fn.num.coeffs + fn.den.coeffs)

    num1_m, den1 = _monic(system.lags[0].num), _monic(system.lags[0].den)
    num2_m, den2 = _monic(system.lags[1].num), _monic(system.lags[1].den)

    h1 = _smallest_h_less(report.lag1_num_sub, report.lag1_den_sub) \
        if report.lag1_strictly_less else 1
    h2 = _smallest_h_less(report.lag2_num_sub, report.lag2_den_sub) \
        if report.lag2_strictly_less else 1

    cert1 = _bound_certificate(num1_m, den1, h1)
    cert2 = _bound_certificate(num2_m, den2, h2)
    if max(cert1.valid_from, cert2.valid_from) > N_check:
        raise NotFoundWithin("certificate root bound exceeds the checked range")

    sweep1 = _margin_sweep(num1_m, den1, h1, 1, N_check, exact)
    sweep2 = _margin_sweep(num2_m, den2, h2, 1, N_check, exact)

    h_max = max(h1, h2)
    if is_exact(eps):
        N_eps = math.floor(Fraction(h_max) / Fraction(eps)) + 1
    else:
        N_eps = int(mp.floor(h_max / as_mp(eps))) + 1
    N = max(sweep1.last_violation + 1, sweep2.last_violation + 1, N_eps, 2)
    if N > N_check:
        raise NotFoundWithin(f"no admissible N at or below N_check = {N_check}")
    verified = (sweep1.last_violation < N and sweep2.last_violation < N
                and N - h2 > 0 and N > h_max / (eps if not is_exact(eps) else Fraction(eps)))
    return ProofConstants(report.case, h1, h2, H_LABELS[report.case], N, eps, N_check,
                          N_eps, sweep1.last_violation, sweep2.last_violation,
                          cert1, cert2, sweep1, sweep2, bool(verified))


@dataclass(frozen=True)
class ConstantsVerification:
    ok: bool
    checked_lo: int
    checked_hi: int
    min_margin_lag1: float
    min_margin_lag2: float
    violations: int
    eps_floor_ok: bool
    ratio_bound_precondition_ok: bool
    tail_certified: bool


def verify_proof_constants(system: RecurrenceSystem, pc: ProofConstants,
                           n_lo: int | None = None, n_hi: int | None = None) -> ConstantsVerification:
    """Independent re-check of stored constants over an index window."""
    lo = pc.N if n_lo is None else n_lo
    hi = pc.N_check if n_hi is None else n_hi
    if lo > hi:
        raise InvalidParams("empty verification window")
    exact = all(is_exact(c) for fn in system.lags for c in fn.num.coeffs + fn.den.coeffs)
    num1_m, den1 = _monic(system.lags[0].num), _monic(system.lags[0].den)
    num2_m, den2 = _monic(system.lags[1].num), _monic(system.lags[1].den)
    s1 = _margin_sweep(num1_m, den1, pc.h_lag1, lo, hi, exact)
    s2 = _margin_sweep(num2_m, den2, pc.h_lag2, lo, hi, exact)
    violations = (1 if s1.last_violation >= lo else 0) + (1 if s2.last_violation >= lo else 0)
    eps_v = pc.eps if not is_exact(pc.eps) else Fraction(pc.eps)
    eps_floor_ok = bool(max(pc.h_lag1, pc.h_lag2) / eps_v < pc.N)
    ratio_ok = pc.N - pc.h_lag2 > 0  # the Pochhammer bound needs N - h2 > 0
    tail_ok = max(pc.cert_lag1.valid_from, pc.cert_lag2.valid_from) <= hi
    ok = violations == 0 and eps_floor_ok and ratio_ok and tail_ok
    return ConstantsVerification(bool(ok), lo, hi, s1.min_margin, s2.min_margin,
                                 violations, bool(eps_floor_ok), bool(ratio_ok), bool(tail_ok))


def z_power_tail(z, h2: int, m: int, k_max: int, prec: int = DEFAULT_PRECISION):
    """(sum_{k=m}^{k_max} z^k / k^(h2/2), bound on the dropped remainder)."""
    if m < 1 or k_max < m:
        raise InvalidParams("need 1 <= m <= k_max")
    with mp.workprec(prec):
        zv = as_mp(z, prec)
        if not (0 < zv < 1):
            raise DomainError("z-power tail needs 0 < z < 1")
        total = mp.mpf(0)
        for k in range(m, k_max + 1):
            total += zv ** k / mp.mpf(k) ** (mp.mpf(h2) / 2)
        rem = zv ** (k_max + 1) / ((1 - zv) * mp.mpf(k_max + 1) ** (mp.mpf(h2) / 2))
        return total, rem


@dataclass(frozen=True)
class MinorantReport:
    value: object  # truncated lower-bound partial value
    value_closed: object  # closed-form route, None in the divergent regime
    growing: bool
    w: object
    regime: str  # "divergent" or "summable"
    regime_strict: bool  # eps/(1-eps)^(m+1) < eta strictly
    prefactor: object
    j_sum: object
    z_tail: object
    z_tail_remainder: object
    j_max: int
    k_max: int


def minorant_partial(N: int, h2: int, eta, z, eps=Fraction(1, 100), m: int = 2,
                     K=Fraction(1, 2), j_max: int = 64, k_max: int = 4096,
                     prec: int = DEFAULT_PRECISION,
                     allow_divergent: bool = False) -> MinorantReport:
    """Evaluate the explicit minorant of sum |c_n| r^n at the boundary.

    The minorant is prefactor * J * T with prefactor = (1-K) eps / 2,

        J = sum_{j>=1} [Gamma((1+N+2m+j)/2) / Gamma((1+N+2m-h2+j)/2)] w^j,
        T = sum_{k>=m} z^k / k^(h2/2),      w = (1-eps)^(m+1) eta / eps.

    J also collapses to two Gauss series in w^2 (even and odd j split); that
    closed route is returned alongside for cross-checking when w < 1.  When
    w >= 1 the j-series grows without bound: that is the regime the
    divergence argument needs, and it is reported, not silently summed, so
    the call raises unless allow_divergent is set.
    """
    if not (N - h2 > 0):
        raise DomainError(f"need N - h2 > 0, got N = {N}, h2 = {h2}")
    if m < 1 or j_max < 4 or k_max < m:
        raise InvalidParams("need m >= 1, j_max >= 4, k_max >= m")
    with mp.workprec(prec):
        eta_v, z_v, eps_v, K_v = (as_mp(v, prec) for v in (eta, z, eps, K))
        if not (0 < eta_v < 1 and 0 < z_v < 1):
            raise DomainError("minorant needs 0 < eta < 1 and 0 < z < 1")
        if not (0 < eps_v < 1 and 0 < K_v < 1):
            raise InvalidParams("need 0 < eps < 1 and 0 < K < 1")
        w = (1 - eps_v) ** (m + 1) * eta_v / eps_v
        regime_strict = bool(eps_v / (1 - eps_v) ** (m + 1) < eta_v)
        divergent = bool(w >= 1)
        if divergent and not allow_divergent:
            raise DomainError(
                f"w = {mp.nstr(w, 8)} >= 1: the j-series diverges (this is the "
                f"divergence regime); pass allow_divergent to get partial sums"
            )
        c0 = 1 + N + 2 * m
        lg = mp.loggamma
        log_w = mp.log(w)
        terms = []
        j_sum = mp.mpf(0)
        for j in range(1, j_max + 1):
            t = mp.exp(lg(mp.mpf(c0 + j) / 2) - lg(mp.mpf(c0 - h2 + j) / 2) + j * log_w)
            j_sum += t
            terms.append(t)
        growing = bool(terms[-1] > terms[len(terms) // 2])
        z_tail, z_rem = z_power_tail(z_v, h2, m, k_max, prec)
        prefactor = (1 - K_v) * eps_v / 2
        value = prefactor * j_sum * z_tail
        value_closed = None
        if not divergent:
            g0 = mp.exp(lg(mp.mpf(c0) / 2) - lg(mp.mpf(c0 - h2) / 2))
            g1 = mp.exp(lg(mp.mpf(c0 + 1) / 2) - lg(mp.mpf(c0 + 1 - h2) / 2))
            tol = mp.mpf(2) ** (8 - prec)
            f1, ok1 = hyp2f1_series(
                Hyp2F1Params(1, mp.mpf(c0) / 2, mp.mpf(c0 - h2) / 2), w * w, tol, 10 ** 6, prec)
            f2, ok2 = hyp2f1_series(
                Hyp2F1Params(1, mp.mpf(c0 + 1) / 2, mp.mpf(c0 + 1 - h2) / 2), w * w, tol, 10 ** 6, prec)
            if ok1 and ok2:
                value_closed = prefactor * (-g0 + g0 * f1 + w * g1 * f2) * z_tail
        return MinorantReport(value, value_closed, growing, w,
                              "divergent" if divergent else "summable",
                              regime_strict, prefactor, j_sum, z_tail, z_rem,
                              j_max, k_max)
