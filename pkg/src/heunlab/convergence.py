"""Absolute-convergence domain, boundary radius, and a Gauss-series tester.

For a recurrence whose lag coefficients tend to limits L_1 .. L_k, the
guaranteed domain of absolute convergence of sum d_n x^n is the set where
sum_i |L_i| |x|^i < 1.  Its boundary meets the positive axis at the unique
positive root r* of sum_i |L_i| r^i = 1 (the membership polynomial is
strictly increasing in r, so the root is simple and bisection is safe).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from mpmath import mp

from .errors import AllZeroLimits, DomainError, InvalidParams
from .scalars import DEFAULT_PRECISION, as_mp, is_exact
from .special import Hyp2F1Params, _is_nonpositive_integer


def _abs_limits(limits, prec):
    with mp.workprec(prec):
        mags = [mp.fabs(as_mp(L, prec)) for L in limits]
    if all(m == 0 for m in mags):
        raise AllZeroLimits("every lag limit vanishes; no finite boundary radius")
    return mags


def membership_sum(limits, x, prec: int = DEFAULT_PRECISION):
    """sum_i |L_i| |x|^i evaluated at working precision."""
    mags = _abs_limits(limits, prec)
    with mp.workprec(prec):
        ax = mp.fabs(as_mp(x, prec))
        total = mp.mpf(0)
        p = mp.mpf(1)
        for m in mags:
            p = p * ax
            total = total + m * p
        return total


@dataclass(frozen=True)
class MembershipReport:
    inside: bool
    total: object
    radius_bound: object  # r*; |x| < r* is sufficient but not necessary for inside


def domain_membership(limits, x, prec: int = DEFAULT_PRECISION) -> MembershipReport:
    total = membership_sum(limits, x, prec)
    return MembershipReport(bool(total < 1), total, boundary_radius(limits, prec))


def boundary_radius(limits, prec: int = DEFAULT_PRECISION, method: str = "auto"):
    """Unique positive r with sum_i |L_i| r^i = 1.

    method "closed" uses the two-lag quadratic formula (in the cancellation-free
    arrangement), "bisect" brackets and halves, "auto" picks closed when it
    applies.  Both land within an ulp or two of each other at the working
    precision; tests compare them across random limit pairs.
    """
    mags = _abs_limits(limits, prec)
    if method not in ("auto", "closed", "bisect"):
        raise InvalidParams(f"unknown method {method!r}")
    with mp.workprec(prec + 16):
        if method in ("auto", "closed") and len(mags) <= 2:
            if len(mags) == 1:
                r = 1 / mags[0]
            else:
                m1, m2 = mags
                if m2 == 0:
                    if m1 == 0:
                        raise AllZeroLimits("every lag limit vanishes")
                    r = 1 / m1
                else:
                    # root of m2 r^2 + m1 r - 1; this form avoids subtractive cancellation
                    r = 2 / (m1 + mp.sqrt(m1 * m1 + 4 * m2))
            with mp.workprec(prec):
                return +r
        if method == "closed":
            raise InvalidParams("closed form is only available for k <= 2 lags")

        def f(r):
            total = mp.mpf(-1)
            p = mp.mpf(1)
            for m in mags:
                p = p * r
                total = total + m * p
            return total

        hi = mp.mpf(1)
        while f(hi) < 0:
            hi = hi * 2
        lo = mp.mpf(0)
        # prec+16 working bits; 8 extra halvings land the midpoint well under an ulp at prec
        for _ in range(mp.prec + 8):
            mid = (lo + hi) / 2
            if f(mid) < 0:
                lo = mid
            else:
                hi = mid
        r = (lo + hi) / 2
    with mp.workprec(prec):
        return +r


def eta_z(limits, r, prec: int = DEFAULT_PRECISION):
    """The boundary weights (|L_1| r, |L_2| r^2, ...); they sum to 1 at r = r*."""
    mags = _abs_limits(limits, prec)
    with mp.workprec(prec):
        rv = as_mp(r, prec)
        out = []
        p = mp.mpf(1)
        for m in mags:
            p = p * rv
            out.append(m * p)
        return tuple(out)


@dataclass(frozen=True)
class GaussReport:
    """Verdict and empirical diagnostics for sum |(a)_n (b)_n / ((c)_n n!)|."""

    verdict: str  # ABS_CONVERGENT | DIVERGENT | TERMINATING
    s: float  # Re(c - a - b)
    predicted_exponent: float  # |t_n| ~ n^predicted
    fitted_exponent: float
    checkpoints: tuple  # (n, partial sum) at powers of two
    gaps: tuple
    gap_ratios: tuple
    trend: str  # shrinking | growing | flat
    terminated: bool
    n_terms: int


def gauss_test(a, b, c, n_max: int = 1 << 20) -> GaussReport:
    """Classify absolute convergence of the Gauss series at x = 1 and measure it.

    The exact verdict uses the classical criterion: absolutely convergent iff
    Re(c - a - b) > 0 (with termination when a or b is a nonpositive integer).
    The empirical channel streams |t_n| in float64, fits the decay exponent of
    the terms, and reports Cauchy gaps S_{2n} - S_n at dyadic checkpoints:
    shrinking gaps are the observable signature of a summable tail.
    """
    Hyp2F1Params(a, b, c)  # validates c
    if n_max < 1 << 12:
        raise InvalidParams("n_max too small for dyadic diagnostics")
    terminated = _is_nonpositive_integer(a) or _is_nonpositive_integer(b)

    def _c(v):
        if isinstance(v, Fraction):
            return complex(float(v), 0.0)
        return complex(v)

    ac, bc, cc = _c(a), _c(b), _c(c)
    s_val = (cc - ac - bc).real
    if is_exact(a) and is_exact(b) and is_exact(c):
        s_exact = Fraction(c) - Fraction(a) - Fraction(b)
        convergent = s_exact > 0
    else:
        convergent = s_val > 0
    if terminated:
        verdict = "TERMINATING"
    else:
        verdict = "ABS_CONVERGENT" if convergent else "DIVERGENT"

    n = np.arange(n_max, dtype=np.float64)
    ratios = np.abs((ac + n) * (bc + n)) / np.abs((cc + n) * (n + 1.0))
    t = np.empty(n_max + 1, dtype=np.float64)
    t[0] = 1.0
    np.cumprod(ratios, out=t[1:])
    if terminated:
        t[np.isnan(t)] = 0.0
    partial = np.cumsum(t)

    checkpoints = []
    j = 10
    while (1 << j) <= n_max:
        checkpoints.append(((1 << j), float(partial[(1 << j) - 1])))
        j += 1
    gaps = tuple(round(b2 - b1, 12) for (_, b1), (_, b2) in zip(checkpoints, checkpoints[1:]))
    ratios_g = []
    for g0, g1 in zip(gaps, gaps[1:]):
        ratios_g.append(float("inf") if g0 == 0 else g1 / g0)
    tail = ratios_g[-3:]
    if tail and all(q < 0.98 for q in tail):
        trend = "shrinking"
    elif tail and all(q > 1.02 for q in tail):
        trend = "growing"
    else:
        trend = "flat"

    lo = n_max // 4
    idx = np.arange(lo, n_max + 1)
    vals = t[lo:]
    mask = vals > 0
    if mask.sum() >= 16:
        X = np.stack([np.log(idx[mask]), np.ones(mask.sum())], axis=1)
        slope = float(np.linalg.lstsq(X, np.log(vals[mask]), rcond=None)[0][0])
    else:
        slope = float("-inf")
    predicted = (ac + bc - cc).real - 1.0
    return GaussReport(verdict, float(s_val), float(predicted), slope,
                       tuple(checkpoints), gaps, tuple(round(q, 12) for q in ratios_g),
                       trend, bool(terminated), n_max)
