"""General (k+1)-term recurrences with rational-function coefficients.

A system prescribes d_{n+1} = sum_{i=1..k} alpha_i(n) d_{n+1-i} for n >= 0
with d_0 = 1, where each lag coefficient alpha_i is a ratio of polynomials in
the index n.  Terms whose index n+1-i would be negative are dropped, which
reproduces the usual seeding (d_1 = alpha_1(0) d_0, and so on).

The module also builds the modulus-majorant sequences: replace every
coefficient by its absolute value evaluated from a base offset upward.  Those
majorants drive the domination bound used by the boundary analysis.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from mpmath import mp

from .errors import DegreeMismatch, IndicialPole, InsufficientData, InvalidParams
from .polynomials import RationalFnInN
from .scalars import DEFAULT_PRECISION, as_mp, is_exact, log_abs, parse_precision, scalar_abs


@dataclass(frozen=True)
class RecurrenceSystem:
    """Lag coefficients alpha_1 .. alpha_k as rational functions of n."""

    lags: tuple

    def __post_init__(self):
        if not self.lags:
            raise InvalidParams("a recurrence needs at least one lag coefficient")
        for i, fn in enumerate(self.lags, start=1):
            if not isinstance(fn, RationalFnInN):
                raise InvalidParams(f"lag {i} is not a rational function of n")
            # lag i first fires at n = i-1 (it multiplies d_{n+1-i})
            bad = [p for p in fn.pole_set if p >= i - 1]
            if bad:
                raise IndicialPole(
                    f"lag {i} coefficient has a pole at n = {min(bad)}; "
                    f"the recurrence cannot advance past it"
                )

    @property
    def k(self) -> int:
        return len(self.lags)

    def coefficient(self, i: int, n: int):
        """alpha_i(n) for 1-based lag i."""
        return self.lags[i - 1](n)


@dataclass(frozen=True)
class CoefficientStream:
    """Computed values d_start .. d_{start+len-1} of a recurrence solution."""

    values: tuple
    precision: object  # "exact" or bit count
    start: int = 0

    def __len__(self):
        return len(self.values)

    def __getitem__(self, n: int):
        if n < self.start or n >= self.start + len(self.values):
            raise IndexError(f"index {n} outside stream range")
        return self.values[n - self.start]

    @cached_property
    def log_mags(self) -> tuple:
        return tuple(log_abs(v) for v in self.values)


def _mp_lags(system: RecurrenceSystem, prec: int):
    """Convert lag polynomials to mpmath coefficients once, for fast streaming."""
    out = []
    with mp.workprec(prec):
        for fn in system.lags:
            num = tuple(as_mp(c, prec) for c in fn.num.coeffs)
            den = tuple(as_mp(c, prec) for c in fn.den.coeffs)
            out.append((num, den, fn.pole_set))
    return out


def _horner(coeffs, n):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * n + c
    return acc


def stream_coefficients(system: RecurrenceSystem, count: int,
                        precision: int | str = "exact") -> CoefficientStream:
    """Run the recurrence from d_0 = 1 and return the first `count` values.

    With precision="exact" the values are Fractions and satisfy the recurrence
    identically; with a bit count they are mpmath numbers computed at that
    working precision.
    """
    precision = parse_precision(precision)
    if count < 1:
        raise InvalidParams("count must be at least 1")
    k = system.k
    if precision == "exact":
        values = [Fraction(1)]
        for n in range(count - 1):
            acc = Fraction(0)
            for i in range(1, min(k, n + 1) + 1):
                acc += system.coefficient(i, n) * values[n + 1 - i]
            values.append(acc)
        return CoefficientStream(tuple(values), "exact")
    prec = precision
    lags = _mp_lags(system, prec)
    with mp.workprec(prec):
        values = [mp.mpf(1)]
        for n in range(count - 1):
            acc = mp.mpf(0)
            for i in range(1, min(k, n + 1) + 1):
                num, den, _ = lags[i - 1]
                acc += _horner(num, n) / _horner(den, n) * values[n + 1 - i]
            values.append(acc)
    return CoefficientStream(tuple(values), prec)


def _work_ctx(precision):
    return mp.workprec(53 if precision == "exact" else precision)


def recurrence_residuals(system: RecurrenceSystem, stream: CoefficientStream):
    """d_{n+1} - sum_i alpha_i(n) d_{n+1-i} for every computable n; exact tier gives exact zeros."""
    out = []
    vals = stream.values
    k = system.k
    with _work_ctx(stream.precision):
        for n in range(len(vals) - 1):
            acc = vals[n + 1] * 0
            for i in range(1, min(k, n + 1) + 1):
                acc += system.coefficient(i, n) * vals[n + 1 - i]
            out.append(vals[n + 1] - acc)
    return out


def modulus_system(system: RecurrenceSystem, offset: int) -> "ModulusRecurrence":
    return ModulusRecurrence(system, offset)


@dataclass(frozen=True)
class ModulusRecurrence:
    """The majorant recurrence c_0 = 1, c_{j+1} = sum_i |alpha_i(j + offset)| c_{j+1-i}.

    Offset N gives the sequence dominating |d_{N+j}| / |d_N| contributions;
    offset N+1 gives the companion sequence attached to the d_{N-1} term.
    """

    base: RecurrenceSystem
    offset: int

    def __post_init__(self):
        if self.offset < 0:
            raise InvalidParams("modulus offset must be nonnegative")

    def coefficient(self, i: int, j: int):
        return scalar_abs(self.base.coefficient(i, j + self.offset))


def modulus_stream(mod: ModulusRecurrence, count: int,
                   precision: int | str = "exact") -> CoefficientStream:
    """First `count` values of the majorant sequence (all nonnegative)."""
    precision = parse_precision(precision)
    if count < 1:
        raise InvalidParams("count must be at least 1")
    k = mod.base.k
    if precision == "exact":
        values = [Fraction(1)]
        convert = lambda v: v
    else:
        with mp.workprec(precision):
            values = [mp.mpf(1)]
        convert = lambda v: as_mp(v, precision)
    with _work_ctx(precision):
        for j in range(count - 1):
            acc = values[0] * 0
            for i in range(1, min(k, j + 1) + 1):
                acc += convert(mod.coefficient(i, j)) * values[j + 1 - i]
            values.append(acc)
    return CoefficientStream(tuple(values), precision)


@dataclass(frozen=True)
class DominationReport:
    """Margins of |d_{N+j}| <= cbar_j |d_N| + chat_{j-1} |B_N| |d_{N-1}|, j = 0..M."""

    N: int
    M: int
    lhs: tuple
    rhs: tuple
    margins: tuple  # rhs - lhs, nonnegative when the bound holds
    holds: bool


def dominating_series_check(system: RecurrenceSystem, stream: CoefficientStream,
                            N: int, M: int) -> DominationReport:
    """Verify the two-sided majorant bound for a three-term system.

    cbar runs with offset N and chat with offset N+1; the j-th bound reads
    |d_{N+j}| <= cbar_j |d_N| + chat_{j-1} |alpha_2(N)| |d_{N-1}| with the
    chat term absent at j = 0.  Exact streams are compared exactly; floating
    streams allow a 2^(10-p) relative slack for accumulated rounding.
    """
    if system.k != 2:
        raise InvalidParams("domination bound is stated for three-term recurrences")
    if N < 1:
        raise InvalidParams("need N >= 1 so that d_{N-1} exists")
    if N + M >= len(stream) + stream.start:
        raise InsufficientData(f"stream ends before index {N + M}")
    precision = stream.precision
    cbar = modulus_stream(modulus_system(system, N), M + 1, precision)
    chat = modulus_stream(modulus_system(system, N + 1), max(M, 1), precision)
    work = 53 if precision == "exact" else precision
    lhs, rhs, margins = [], [], []
    with _work_ctx(precision):
        b_at_N = scalar_abs(system.coefficient(2, N), work)
        dN = scalar_abs(stream[N], work)
        dNm1 = scalar_abs(stream[N - 1], work)
        for j in range(M + 1):
            left = scalar_abs(stream[N + j], work)
            right = cbar[j] * dN
            if j >= 1:
                right = right + chat[j - 1] * b_at_N * dNm1
            lhs.append(left)
            rhs.append(right)
            margins.append(right - left)
        if precision == "exact":
            holds = all(m >= 0 for m in margins)
        else:
            slack = mp.mpf(2) ** (10 - precision)
            holds = all(m >= -slack * (1 + r) for m, r in zip(margins, rhs))
    return DominationReport(N, M, tuple(lhs), tuple(rhs), tuple(margins), holds)


@dataclass(frozen=True)
class LimitProfile:
    """Large-n limits of the lag coefficients, plus sub-leading data.

    limits[i-1] is lim_n alpha_i(n).  For lags whose numerator and denominator
    share the same degree, subleading[i-1] = (num_sub, den_sub) holds the
    monic-normalized n^(t-1) coefficients used by the case classification;
    it is None when the numerator degree drops (limit zero).
    """

    limits: tuple
    subleading: tuple
    degrees: tuple


def limit_profile(system: RecurrenceSystem) -> LimitProfile:
    limits, subs, degs = [], [], []
    for fn in system.lags:
        dn, dd = fn.degrees
        if dn > dd:
            raise DegreeMismatch("lag coefficient grows without bound in n")
        limits.append(fn.leading_ratio())
        degs.append((dn, dd))
        if dn == dd and dd >= 1:
            num_sub = (fn.num.coeffs[dn - 1] if dn >= 1 else 0) / fn.num.leading
            den_sub = (fn.den.coeffs[dd - 1] if dd >= 1 else 0) / fn.den.leading
            subs.append((num_sub, den_sub))
        else:
            subs.append(None)
    return LimitProfile(tuple(limits), tuple(subs), tuple(degs))
