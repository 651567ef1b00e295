"""Exact rational scalars, exponents and certified root enclosures."""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence, Union

import gmpy2

from .errors import InputError, UnsupportedExponent

Rat = Fraction
Vector = tuple  # tuple[Fraction, ...]
Exponent = Union[Fraction, float]  # rational >= 1, or math.inf

INF = math.inf

# bits of precision for irrational roots; enclosures have relative width ~2**-ROOT_BITS
ROOT_BITS = 64


def to_rat(value) -> Fraction:
    """Parse an exact rational: int, Fraction, or a string like ``"3/4"``.

    Floats are rejected; nothing on the exact path may be a float.
    """
    if isinstance(value, bool):
        raise InputError(f"boolean is not a rational: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Rational):
        return Fraction(int(value.numerator), int(value.denominator))
    if type(value).__name__ == "mpq":
        return Fraction(int(value.numerator), int(value.denominator))
    if isinstance(value, str):
        s = value.strip()
        try:
            return Fraction(s)
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"not a rational: {value!r}") from exc
    raise InputError(f"not an exact rational: {value!r} ({type(value).__name__})")


def to_vec(values: Iterable) -> tuple:
    return tuple(to_rat(v) for v in values)


def fmt_rat(q: Fraction) -> str:
    return str(q)


def fmt_vec(v: Sequence[Fraction]) -> list[str]:
    return [str(x) for x in v]


def dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def vadd(a, b) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def vsub(a, b) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


def vscale(c, a) -> tuple:
    return tuple(c * x for x in a)


def zeros(n: int) -> tuple:
    return (Fraction(0),) * n


def mat_vec(m: Sequence[Sequence[Fraction]], v: Sequence[Fraction]) -> tuple:
    return tuple(dot(row, v) for row in m)


def transpose(m: Sequence[Sequence[Fraction]]) -> tuple:
    return tuple(tuple(col) for col in zip(*m))


# --- exponents -------------------------------------------------------------

def parse_exponent(value) -> Exponent:
    """Parse an exponent ``p`` in ``[1, inf]``: rational or ``"inf"``."""
    if isinstance(value, float):
        if math.isinf(value) and value > 0:
            return INF
        raise UnsupportedExponent(f"exponent must be rational or inf, got float {value!r}")
    if isinstance(value, str) and value.strip().lower() in ("inf", "infinity", "oo"):
        return INF
    try:
        p = to_rat(value)
    except InputError as exc:
        raise UnsupportedExponent(str(exc)) from exc
    if p < 1:
        raise UnsupportedExponent(f"exponent must be >= 1, got {p}")
    return p


def conjugate(p: Exponent) -> Exponent:
    """Hölder conjugate: 1/p + 1/p' = 1, with 1 <-> inf."""
    if p == INF:
        return Fraction(1)
    if p == 1:
        return INF
    return p / (p - 1)


def fmt_exponent(p: Exponent) -> str:
    return "inf" if p == INF else str(p)


def is_integral(p: Exponent) -> bool:
    return p != INF and p.denominator == 1


# --- certified roots ---------------------------------------------------------

def root_bounds(x: Fraction, n: int, bits: int = ROOT_BITS) -> tuple[Fraction, Fraction]:
    """Rationals ``(lo, hi)`` with ``lo**n <= x <= hi**n``.

    ``lo == hi`` exactly when ``x`` is an n-th power of a rational.
    """
    if x < 0:
        raise ValueError("root of a negative number")
    if n == 1 or x == 0:
        return x, x
    num, den = gmpy2.mpz(x.numerator), gmpy2.mpz(x.denominator)
    rn, exact_n = gmpy2.iroot(num, n)
    rd, exact_d = gmpy2.iroot(den, n)
    if exact_n and exact_d:
        q = Fraction(int(rn), int(rd))
        return q, q
    # floor((x * 2**(n*bits))**(1/n)) / 2**bits
    scaled = (num << (n * bits)) // den
    r, _ = gmpy2.iroot(scaled, n)
    scale = 1 << bits
    lo = Fraction(int(r), scale)
    hi = Fraction(int(r) + 1, scale)
    return lo, hi


def pow_bounds(x: Fraction, r: Fraction, bits: int = ROOT_BITS) -> tuple[Fraction, Fraction]:
    """Enclosure of ``x**r`` for rational ``x >= 0`` and rational ``r >= 0``."""
    if x < 0:
        raise ValueError("fractional power of a negative number")
    if r == 0:
        return Fraction(1), Fraction(1)
    if x == 0:
        return Fraction(0), Fraction(0)
    a, b = r.numerator, r.denominator
    if b == 1:
        v = x ** a
        return v, v
    return root_bounds(x ** a, b, bits)


def pnorm_bounds(values: Sequence[Fraction], p: Exponent) -> tuple[Fraction, Fraction]:
    """Enclosure of ``(sum |v_i|**p)**(1/p)``; max for ``p = inf``."""
    vals = [abs(v) for v in values]
    if not vals:
        return Fraction(0), Fraction(0)
    if p == INF:
        m = max(vals)
        return m, m
    if p == 1:
        s = sum(vals, Fraction(0))
        return s, s
    if p.denominator == 1:
        s = sum((v ** p.numerator for v in vals), Fraction(0))
        return root_bounds(s, p.numerator)
    lo = hi = Fraction(0)
    for v in vals:
        a, b = pow_bounds(v, p)
        lo += a
        hi += b
    return pow_bounds(lo, 1 / p)[0], pow_bounds(hi, 1 / p)[1]
