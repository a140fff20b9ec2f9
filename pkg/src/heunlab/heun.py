"""Frobenius machinery for the Heun equation.

The equation, in its standard normal form on (0, 1, a, infinity), is

    y'' + (g/x + d/(x-1) + e/(x-a)) y' + (A B x - q) / (x (x-1) (x-a)) y = 0

with e = A + B - g - d + 1 (so that infinity stays regular singular).  A
Frobenius solution x^lam sum d_n x^n about the origin exists for each
indicial root lam in {0, 1-g}, and its coefficients satisfy a three-term
recurrence whose lag coefficients are ratios of monic quadratics in n.

Two independent routes to the same object live here: the recurrence that
generates the coefficients, and a direct residual check that substitutes a
finite coefficient block into the differential equation cleared of
denominators.  Tests play them against each other.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp

from .errors import InputError, InvalidParams, OutsideDomain
from .polynomials import PolynomialInN, RationalFnInN
from .recurrence import CoefficientStream, RecurrenceSystem, stream_coefficients
from .scalars import (DEFAULT_PRECISION, as_mp, is_exact, parse_precision,
                      scalar_abs, to_scalar)


@dataclass(frozen=True)
class HeunParams:
    """Parameters (a, q, alpha, beta, gamma, delta) with the accessory e derived."""

    a: object
    q: object
    alpha: object
    beta: object
    gamma: object
    delta: object

    def __post_init__(self):
        for name in ("a", "q", "alpha", "beta", "gamma", "delta"):
            object.__setattr__(self, name, to_scalar(getattr(self, name)))
        if self.a == 0 or self.a == 1:
            raise InvalidParams("the third singular point a must avoid 0 and 1")

    @property
    def epsilon(self):
        return self.alpha + self.beta - self.gamma - self.delta + 1

    def is_exact(self) -> bool:
        return all(is_exact(getattr(self, n))
                   for n in ("a", "q", "alpha", "beta", "gamma", "delta"))


def indicial_roots(params: HeunParams):
    """The two exponents at the origin: 0 and 1 - gamma."""
    return (Fraction(0) if is_exact(params.gamma) else params.gamma * 0,
            1 - params.gamma)


def _check_root(params: HeunParams, root):
    root = to_scalar(root)
    r0, r1 = indicial_roots(params)
    if root != r0 and root != r1:
        raise InvalidParams(f"{root} is not an indicial root; expected {r0} or {r1}")
    return root


def heun_recurrence(params: HeunParams, root=0) -> RecurrenceSystem:
    """Three-term recurrence for the Frobenius coefficients at exponent `root`.

    Both lag coefficients share the denominator (n+1+lam)(n+gamma+lam).  The
    lag-1 numerator is quadratic with leading coefficient (1+a)/a and the
    lag-2 numerator is -1/a times a monic quadratic; the numerators are built
    un-divided so that a = -1 (vanishing lag-1 limit) stays representable.
    """
    lam = _check_root(params, root)
    a, q = params.a, params.q
    al, be, ga, de = params.alpha, params.beta, params.gamma, params.delta
    den = PolynomialInN(((1 + lam) * (ga + lam), 1 + ga + 2 * lam, 1))
    num1 = PolynomialInN((
        (lam * (al + be - de + lam + a * (ga + de - 1 + lam)) + q) / a,
        (al + be - de + 2 * lam + a * (ga + de - 1 + 2 * lam)) / a,
        (1 + a) / a,
    ))
    num2 = PolynomialInN((
        -(al - 1 + lam) * (be - 1 + lam) / a,
        -(al + be - 2 + 2 * lam) / a,
        -1 / (Fraction(a) if is_exact(a) else a),
    ))
    return RecurrenceSystem((RationalFnInN(num1, den), RationalFnInN(num2, den)))


def series_limits(params: HeunParams):
    """Large-n limits of the two lag coefficients: ((1+a)/a, -1/a)."""
    a = params.a
    if is_exact(a):
        a = Fraction(a)
    return ((1 + a) / a, -1 / a)


def heun_series(params: HeunParams, root=0, count: int = 64,
                precision: int | str = "exact") -> CoefficientStream:
    """First `count` Frobenius coefficients d_0 .. d_{count-1}."""
    return stream_coefficients(heun_recurrence(params, root), count, precision)


def ode_residual(params: HeunParams, root, stream: CoefficientStream, order: int | None = None):
    """Residual coefficients from substituting the series into the cleared equation.

    Multiplying the equation by x(x-1)(x-a) gives P2 y'' + P1 y' + P0 y with
    polynomial coefficients; substituting y = x^lam sum d_n x^n and collecting
    x^(lam+j) yields one residual per j.  The list returned covers
    j = -1 .. order, where j = -1 is the indicial term (zero by the choice of
    root) and each j needs d_{j+1}, so order is capped at len(stream) - 2.

    This route never touches the recurrence; it is the independent witness
    that the recurrence was transcribed correctly.
    """
    lam = _check_root(params, root)
    a, q = params.a, params.q
    al, be, ga, de = params.alpha, params.beta, params.gamma, params.delta
    ep = params.epsilon
    d = stream.values
    top = len(d) - 2
    if order is None:
        order = top
    if order > top:
        raise InputError(f"order {order} needs d_{order + 1}; stream has {len(d)} values")

    def w0(n):
        return d[n]

    def w1(n):
        return d[n] * (n + lam)

    def w2(n):
        return d[n] * (n + lam) * (n + lam - 1)

    # P2 = x^3 - (1+a) x^2 + a x ; P1 = (g+d+e) x^2 - (g(1+a)+d a+e) x + g a ; P0 = A B x - q
    p1_2, p1_1, p1_0 = ga + de + ep, -(ga * (1 + a) + de * a + ep), ga * a
    p0_1, p0_0 = al * be, -q
    wp = mp.workprec(53 if stream.precision == "exact" else stream.precision)
    with wp:
        return _residual_loop(order, d, w0, w1, w2, a, p1_2, p1_1, p1_0, p0_1, p0_0)


def _residual_loop(order, d, w0, w1, w2, a, p1_2, p1_1, p1_0, p0_1, p0_0):
    out = []
    for j in range(-1, order + 1):
        acc = d[0] * 0
        # P2 y'': powers x^{lam+n+1}, x^{lam+n}, x^{lam+n-1}
        if 0 <= j - 1 < len(d):
            acc += w2(j - 1)
        if 0 <= j < len(d):
            acc += -(1 + a) * w2(j)
        if 0 <= j + 1 < len(d):
            acc += a * w2(j + 1)
        # P1 y': powers x^{lam+n+1}, x^{lam+n}, x^{lam+n-1}
        if 0 <= j - 1 < len(d):
            acc += p1_2 * w1(j - 1)
        if 0 <= j < len(d):
            acc += p1_1 * w1(j)
        if 0 <= j + 1 < len(d):
            acc += p1_0 * w1(j + 1)
        # P0 y: powers x^{lam+n+1}, x^{lam+n}
        if 0 <= j - 1 < len(d):
            acc += p0_1 * w0(j - 1)
        if 0 <= j < len(d):
            acc += p0_0 * w0(j)
        out.append(acc)
    return out


@dataclass(frozen=True)
class EvalResult:
    value: object
    n_used: int
    converged: bool
    domain_sum: object
    inside: bool


def absolute_profile_sum(params: HeunParams, x, prec: int = DEFAULT_PRECISION):
    """|(1+a)/a| |x| + |1/a| |x|^2, the membership functional of the guaranteed domain."""
    A, B = series_limits(params)
    if is_exact(x) and params.is_exact():
        ax = abs(Fraction(x))
        return abs(A) * ax + abs(B) * ax * ax
    with mp.workprec(prec):
        ax = mp.fabs(as_mp(x, prec))
        return scalar_abs(A, prec) * ax + scalar_abs(B, prec) * ax * ax


def heun_eval(params: HeunParams, x, root=0, tol=Fraction(1, 10 ** 30),
              n_max: int = 10 ** 5, force: bool = False,
              precision: int | str = DEFAULT_PRECISION) -> EvalResult:
    """Evaluate the Frobenius solution x^lam sum d_n x^n at the point x.

    Points outside the guaranteed absolute-convergence region are refused
    unless force=True: outside that region a partial sum can look settled
    while the tail is not summable, so a silent number would be a lie.
    Summation stops once three consecutive terms fall below tol relative to
    max(1, |partial sum|).

    Returns:
        EvalResult with the value, terms consumed, and convergence flag.

    Raises:
        OutsideDomain: when force is False and the membership sum is >= 1.
    """
    precision = parse_precision(precision)
    lam = _check_root(params, root)
    x = to_scalar(x, precision if precision != "exact" else DEFAULT_PRECISION)
    prec = DEFAULT_PRECISION if precision == "exact" else precision
    dsum = absolute_profile_sum(params, x, prec)
    inside = bool(dsum < 1)
    if not inside and not force:
        raise OutsideDomain(
            f"membership sum {float(dsum):.6g} >= 1: outside the guaranteed "
            f"absolute-convergence domain (use force to evaluate anyway)"
        )
    system = heun_recurrence(params, lam)
    exact_mode = precision == "exact"
    if exact_mode and not (is_exact(x) and params.is_exact() and is_exact(tol)):
        raise InputError("exact evaluation needs rational parameters, point, and tolerance")
    if exact_mode and not (is_exact(lam) and Fraction(lam).denominator == 1 and lam >= 0):
        raise InputError("exact evaluation needs a nonnegative integer exponent; use a bit precision")

    with mp.workprec(prec):
        if exact_mode:
            xv = Fraction(x)
            total = Fraction(0)
            power = xv ** int(Fraction(lam))  # x^lam exact for integer lam
            d_prev = None
            d_curr = Fraction(1)
            tol_v = Fraction(tol)
        else:
            xv = as_mp(x, prec)
            total = mp.mpf(0)
            lam_v = as_mp(lam, prec)
            power = mp.power(xv, lam_v) if xv != 0 else (mp.mpf(1) if lam_v == 0 else mp.mpf(0))
            d_prev = None
            d_curr = mp.mpf(1)
            tol_v = as_mp(tol, prec)
        lag1, lag2 = system.lags
        small_run = 0
        n_used = 0
        converged = False
        for n in range(n_max):
            term = d_curr * power
            total = total + term
            n_used = n + 1
            scale = scalar_abs(total, prec)
            if scale < 1:
                scale = scale * 0 + 1
            if scalar_abs(term, prec) < tol_v * scale:
                small_run += 1
                if small_run >= 3:
                    converged = True
                    break
            else:
                small_run = 0
            if exact_mode:
                nxt = lag1(n) * d_curr + (lag2(n) * d_prev if n >= 1 else Fraction(0))
            else:
                c1 = as_mp(lag1(n), prec)
                nxt = c1 * d_curr
                if n >= 1:
                    nxt = nxt + as_mp(lag2(n), prec) * d_prev
            d_prev, d_curr = d_curr, nxt
            power = power * xv
    return EvalResult(total, n_used, converged, dsum, inside)
