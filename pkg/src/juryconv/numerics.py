"""Scalar backends and exact combinatorial coefficients.

Matrices in this library carry one of two scalar backends: exact
rationals (``fractions.Fraction``: arbitrary precision, always reduced,
positive denominator) or complex floats.  Everything downstream -- ring
operations, partition sums, transforms -- funnels its coefficient
arithmetic through the helpers here, so exactness is never lost by
accident on the rational side and non-finite floats never enter a
matrix on the complex side.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Union

RATIONAL = "rational"
COMPLEX = "complex"
BACKENDS = (RATIONAL, COMPLEX)

Scalar = Union[Fraction, complex]

# Factorials at or below this are memoized; larger arguments fall back to a
# direct big-integer product.
FACTORIAL_CACHE_CAP = 64


class ScalarError(ValueError):
    """Non-finite float, unknown backend, or malformed scalar encoding."""


@lru_cache(maxsize=None)
def _factorial_cached(n: int) -> int:
    return math.factorial(n)


def factorial(n: int) -> int:
    """Exact n! as a big integer."""
    if n < 0:
        raise ValueError(f"factorial of negative argument {n}")
    if n <= FACTORIAL_CACHE_CAP:
        return _factorial_cached(n)
    return math.factorial(n)


def binomial(n: int, k: int) -> int:
    """Exact binomial coefficient C(n, k); 0 when k > n."""
    if n < 0 or k < 0:
        raise ValueError(f"binomial needs nonnegative arguments, got ({n}, {k})")
    return math.comb(n, k)


def generalized_binomial(alpha: float, k: int) -> float:
    """Generalized binomial coefficient alpha*(alpha-1)*...*(alpha-k+1) / k!.

    Agrees with ``binomial(alpha, k)`` when alpha is a nonnegative
    integer, and equals 1 for k = 0 (empty product) for any alpha.
    """
    if k < 0:
        raise ValueError(f"generalized_binomial needs k >= 0, got {k}")
    prod = 1.0
    a = float(alpha)
    for j in range(k):
        prod *= a - j
    return prod / factorial(k)


def multiset_weight(counts: Mapping[object, int]) -> Fraction:
    """Exact weight 1 / prod(c!) over the multiplicities of a multiset."""
    denom = 1
    for c in counts.values():
        if c < 1:
            raise ValueError(f"multiset multiplicities must be >= 1, got {c}")
        denom *= factorial(c)
    return Fraction(1, denom)


def _check_finite_complex(z: complex) -> complex:
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ScalarError(f"non-finite complex scalar {z!r}")
    return z


def coerce(value, backend: str) -> Scalar:
    """Coerce ``value`` into the given backend's scalar type.

    Rational backend accepts ints, Fractions and "p/q" strings; floats
    are rejected there to avoid silently importing binary-float noise
    into exact computations.  Complex backend accepts any real or
    complex number and insists on finiteness.
    """
    if backend == RATIONAL:
        if isinstance(value, bool):
            raise ScalarError(f"cannot coerce {value!r} to a rational scalar")
        if isinstance(value, Fraction):
            return value
        if isinstance(value, int):
            return Fraction(value)
        if isinstance(value, str):
            try:
                return Fraction(value)
            except (ValueError, ZeroDivisionError) as exc:
                raise ScalarError(f"malformed rational literal {value!r}") from exc
        raise ScalarError(
            f"cannot coerce {value!r} to a rational scalar; "
            "use Fraction, int, or a 'p/q' string"
        )
    if backend == COMPLEX:
        if isinstance(value, Fraction):
            return complex(float(value))
        if isinstance(value, (int, float, complex)):
            return _check_finite_complex(complex(value))
        raise ScalarError(f"cannot coerce {value!r} to a complex scalar")
    raise ScalarError(f"unknown scalar backend {backend!r}")


def zero(backend: str) -> Scalar:
    return Fraction(0) if backend == RATIONAL else complex(0.0)


def one(backend: str) -> Scalar:
    return Fraction(1) if backend == RATIONAL else complex(1.0)


def scalar_to_json(value: Scalar, backend: str):
    """JSON encoding: rational -> "p/q" string, complex -> [re, im]."""
    if backend == RATIONAL:
        f = value if isinstance(value, Fraction) else Fraction(value)
        return f"{f.numerator}/{f.denominator}"
    z = complex(value)
    return [z.real, z.imag]


def scalar_from_json(payload, backend: str) -> Scalar:
    if backend == RATIONAL:
        if isinstance(payload, str):
            return coerce(payload, RATIONAL)
        if isinstance(payload, int):
            return Fraction(payload)
        raise ScalarError(f"rational JSON entry must be int or 'p/q', got {payload!r}")
    if backend == COMPLEX:
        if isinstance(payload, (list, tuple)):
            if len(payload) != 2:
                raise ScalarError(f"complex JSON entry must be [re, im], got {payload!r}")
            return _check_finite_complex(complex(float(payload[0]), float(payload[1])))
        if isinstance(payload, (int, float)):
            return _check_finite_complex(complex(float(payload)))
        raise ScalarError(f"complex JSON entry must be number or [re, im], got {payload!r}")
    raise ScalarError(f"unknown scalar backend {backend!r}")


def close(a, b, tol: float = 1e-12) -> bool:
    """Epsilon-aware comparison for float/complex scalars.

    Never compare transform outputs with ``==`` on the complex backend;
    the partition sums mix many floating additions.
    """
    a = complex(a)
    b = complex(b)
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def is_zero_scalar(value: Scalar, backend: str, tol: float = 0.0) -> bool:
    if backend == RATIONAL:
        return value == 0
    return abs(complex(value)) <= tol


def real_part(value: Scalar) -> float:
    """Real part of a scalar as a float (used where a real point is required)."""
    if isinstance(value, Fraction):
        return float(value)
    return complex(value).real


def imag_part(value: Scalar) -> float:
    if isinstance(value, Fraction):
        return 0.0
    return complex(value).imag
