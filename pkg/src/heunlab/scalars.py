"""Two-tier scalar arithmetic.

Every quantity in this package lives in one of two tiers:

* exact: ``fractions.Fraction`` (integers are promoted on entry), closed under
  the arithmetic the recurrences need, so residual checks can assert equality
  with zero rather than smallness;
* floating: ``mpmath`` real/complex numbers at an explicit binary precision,
  used where roots, logarithms, or gamma functions force approximation.

Functions here never silently change tier.  Callers choose a tier by passing
``precision="exact"`` or a bit count, and the helpers below convert on demand.
"""

from __future__ import annotations

import math
import os
from fractions import Fraction
from typing import Union

import mpmath
from mpmath import mp

from .errors import InputError

DEFAULT_PRECISION = 256  # bits
ENV_PRECISION = "HEUNLAB_PRECISION"

ExactNumber = Union[int, Fraction]
Scalar = Union[Fraction, mpmath.mpf, mpmath.mpc]


def precision_from_env(default: int | str = DEFAULT_PRECISION) -> int | str:
    """Resolve the working precision from the environment.

    Returns ``"exact"`` or a bit count.  Malformed values raise InputError
    rather than being ignored; a silently dropped precision request is worse
    than a loud one.
    """
    raw = os.environ.get(ENV_PRECISION)
    if raw is None:
        return default
    return parse_precision(raw)


def parse_precision(raw: int | str) -> int | str:
    if isinstance(raw, int):
        bits = raw
    else:
        text = str(raw).strip().lower()
        if text == "exact":
            return "exact"
        try:
            bits = int(text)
        except ValueError:
            raise InputError(f"precision must be 'exact' or a bit count, got {raw!r}") from None
    if bits < 2:
        raise InputError(f"precision must be at least 2 bits, got {bits}")
    return bits


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction))


def parse_number(text: str) -> Fraction:
    """Parse a rational literal: 'p/q', integers, decimals, scientific notation."""
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"not a rational literal: {text!r}") from exc


def parse_point(text: str, prec: int = DEFAULT_PRECISION):
    """Parse an evaluation point: rational if possible, else a complex literal."""
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError):
        pass
    try:
        z = complex(str(text).strip().replace(" ", ""))
    except ValueError as exc:
        raise InputError(f"not a number: {text!r}") from exc
    with mp.workprec(prec):
        if z.imag == 0.0:
            return mp.mpf(z.real)
        return mp.mpc(z.real, z.imag)


def to_scalar(value, prec: int = DEFAULT_PRECISION) -> Scalar:
    """Promote a Python value into the scalar union, keeping exactness when possible."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise InputError("booleans are not scalars")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(value)  # floats are exact binary rationals
    if isinstance(value, (mpmath.mpf, mpmath.mpc)):
        return value
    if isinstance(value, complex):
        with mp.workprec(prec):
            return mp.mpc(value.real, value.imag)
    if isinstance(value, str):
        return parse_number(value)
    raise InputError(f"cannot interpret {value!r} as a scalar")


def as_mp(x, prec: int = DEFAULT_PRECISION):
    """Convert to an mpmath number at the given precision."""
    with mp.workprec(prec):
        if isinstance(x, Fraction):
            return mp.mpf(x.numerator) / mp.mpf(x.denominator)
        if isinstance(x, int):
            return mp.mpf(x)
        if isinstance(x, complex):
            return mp.mpc(x.real, x.imag)
        return +mpmath.mpmathify(x)  # unary + rounds to working precision


def scalar_abs(x, prec: int = DEFAULT_PRECISION):
    """Absolute value in the same tier as the input.

    Complex exact values do not occur in this package (rational instances stay
    rational), so the exact tier only handles real Fractions.
    """
    if isinstance(x, (int, Fraction)):
        return abs(Fraction(x))
    with mp.workprec(prec):
        return mp.fabs(x)


def real_part(x):
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, mpmath.mpc):
        return x.real
    return x


def log_abs(x) -> float:
    """Natural log of |x| as a float, -inf at zero.  Safe for huge rationals."""
    if isinstance(x, (int, Fraction)):
        f = Fraction(x)
        if f == 0:
            return float("-inf")
        # math.log takes arbitrarily large ints without overflow
        return math.log(abs(f.numerator)) - math.log(f.denominator)
    a = mp.fabs(x)
    if a == 0:
        return float("-inf")
    return float(mp.log(a))


def scalars_close(x, y, tol, prec: int = DEFAULT_PRECISION) -> bool:
    if is_exact(x) and is_exact(y) and is_exact(tol):
        return abs(Fraction(x) - Fraction(y)) <= Fraction(tol)
    with mp.workprec(prec):
        return mp.fabs(as_mp(x, prec) - as_mp(y, prec)) <= as_mp(tol, prec)


def fmt_scalar(x, digits: int = 17) -> str:
    """Deterministic human-readable rendering, exact tier as 'p/q'."""
    if isinstance(x, (int, Fraction)):
        f = Fraction(x)
        return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"
    if isinstance(x, mpmath.mpc):
        return mpmath.nstr(x, digits)
    return mpmath.nstr(mpmath.mpf(x), digits)
