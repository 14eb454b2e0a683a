"""Convolution-compatible functional calculus.

A scalar function f acts on an M x N matrix through the partition
expansion: entry (0, 0) becomes f(a00) and entry (i, j) becomes

    sum_{l=1}^{i+j} f^(l)(a00) * E_l(A, i, j)

with E_l the elementary partition sums of :mod:`juryconv.partitions`.
This extension is multiplicative for the convolution product, which is
what makes it the right analogue of the functional and entrywise
calculi for this ring.  A step-size variant replaces the derivatives by
divided differences, so the transform applies to functions with no
assumed regularity; as the step shrinks it recovers the smooth version.

The module also hosts the bivariate-series matrix for real powers:
entry (i, j) is i! j! times the x^i y^j coefficient of F(x, y)^alpha,
where F packs the matrix entries as a polynomial in two variables.
Conjugating the power transform by diag(0!, 1!, ..., (N-1)!) lands
exactly on that matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from . import numerics
from .numerics import COMPLEX, RATIONAL, ScalarError
from .conv_core import (
    ConvMatrix,
    add,
    conv,
    conv_identity,
    scale,
)
from .partitions import elementary_sum


class DomainError(ValueError):
    """A function was evaluated (or differenced) outside its domain."""

    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node


class SeriesDivergenceError(RuntimeError):
    """Partial sums of a series transform failed to settle within budget."""


Number = Union[int, float, Fraction, complex]


def _as_real(x: Number, what: str) -> Union[Fraction, float]:
    """Reject non-real points; transforms act through real base points."""
    if isinstance(x, complex):
        if x.imag != 0:
            raise DomainError(f"{what} requires a real point, got {x!r}", node=x)
        return x.real
    return x


# ----------------------------------------------------------------------
# polynomials
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class Poly:
    """Polynomial c0 + c1 z + ... + cn z^n with trailing zeros trimmed.

    Coefficients are either all exact (Fractions) or all complex floats;
    mixed input is promoted to floats.
    """

    coeffs: tuple

    @staticmethod
    def of(coeffs: Iterable) -> "Poly":
        raw = list(coeffs)
        exact = all(isinstance(c, (int, Fraction, str)) and not isinstance(c, bool)
                    for c in raw)
        if exact:
            vals = [numerics.coerce(c, RATIONAL) for c in raw]
        else:
            vals = [numerics.coerce(c, COMPLEX) for c in raw]
        while vals and vals[-1] == 0:
            vals.pop()
        return Poly(tuple(vals))

    @staticmethod
    def binomial_power(root, d: int) -> "Poly":
        """(z - root)^d expanded into coefficients."""
        out = Poly.of([1])
        linear = Poly.of([-root, 1]) if not isinstance(root, (float, complex)) \
            else Poly(( -complex(root), complex(1.0) ))
        for _ in range(d):
            out = out * linear
        return out

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_exact(self) -> bool:
        return all(isinstance(c, Fraction) for c in self.coeffs)

    def evaluate(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc if self.coeffs else (Fraction(0) if self.is_exact else 0.0)

    def derivative_value(self, ell: int, x):
        """Value of the ell-th derivative at x (exact when inputs are)."""
        if ell < 0:
            raise ValueError(f"derivative order must be >= 0, got {ell}")
        acc = 0
        for k in range(len(self.coeffs) - 1, ell - 1, -1):
            fall = numerics.factorial(k) // numerics.factorial(k - ell)
            acc = acc * x + fall * self.coeffs[k]
        return acc

    def __mul__(self, other: "Poly") -> "Poly":
        if not self.coeffs or not other.coeffs:
            return Poly(())
        n, m = len(self.coeffs), len(other.coeffs)
        out = [0] * (n + m - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly.of(out)

    def __add__(self, other: "Poly") -> "Poly":
        n = max(len(self.coeffs), len(other.coeffs))
        out = []
        for k in range(n):
            a = self.coeffs[k] if k < len(self.coeffs) else 0
            b = other.coeffs[k] if k < len(other.coeffs) else 0
            out.append(a + b)
        return Poly.of(out)


# ----------------------------------------------------------------------
# function catalog
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class FunctionSpec:
    """A scalar function together with its symbolic derivative evaluators.

    Kinds: ``poly`` (exact when the coefficients are), ``power`` x^alpha
    on (0, inf), ``exp``, and ``series`` (finite coefficient list inside
    a declared radius of convergence).  ``max_order`` optionally caps the
    differentiability the spec is willing to certify; transforms check
    it before asking for derivatives.
    """

    kind: str
    poly: Optional[Poly] = None
    alpha: Optional[float] = None
    coeffs: Optional[tuple] = None
    radius: float = math.inf
    max_order: Optional[int] = None

    # -- constructors ---------------------------------------------------

    @staticmethod
    def polynomial(coeffs, max_order: Optional[int] = None) -> "FunctionSpec":
        p = coeffs if isinstance(coeffs, Poly) else Poly.of(coeffs)
        return FunctionSpec(kind="poly", poly=p, max_order=max_order)

    @staticmethod
    def power(alpha: float, max_order: Optional[int] = None) -> "FunctionSpec":
        return FunctionSpec(kind="power", alpha=float(alpha), max_order=max_order)

    @staticmethod
    def exp(max_order: Optional[int] = None) -> "FunctionSpec":
        return FunctionSpec(kind="exp", max_order=max_order)

    @staticmethod
    def series(coeffs: Sequence[float], radius: float,
               max_order: Optional[int] = None) -> "FunctionSpec":
        if radius <= 0:
            raise ValueError(f"series radius must be > 0, got {radius}")
        return FunctionSpec(kind="series", coeffs=tuple(float(c) for c in coeffs),
                            radius=float(radius), max_order=max_order)

    # -- protocol ---------------------------------------------------------

    @property
    def is_exact(self) -> bool:
        return self.kind == "poly" and self.poly.is_exact

    def ensure_order(self, ell: int):
        if self.max_order is not None and ell > self.max_order:
            raise DomainError(
                f"function declares derivatives only up to order {self.max_order}, "
                f"but order {ell} is required"
            )

    def domain_contains(self, x) -> bool:
        if self.kind == "poly":
            return True  # polynomial algebra works over the whole complex plane
        try:
            x = _as_real(x, self.kind)
        except DomainError:
            return False
        if self.kind == "power":
            return x > 0
        if self.kind == "series":
            return abs(x) < self.radius
        return True  # exp: entire real line

    def require_in_domain(self, x):
        if not self.domain_contains(x):
            raise DomainError(f"point {x} outside the domain of kind {self.kind!r}", node=x)

    def value(self, x):
        return self.derivative(0, x)

    def derivative(self, ell: int, x):
        """ell-th derivative at x; derivative(0, x) is the plain value."""
        if ell < 0:
            raise ValueError(f"derivative order must be >= 0, got {ell}")
        self.ensure_order(ell)
        if self.kind == "poly":
            return self.poly.derivative_value(ell, x)
        x = _as_real(x, self.kind)
        self.require_in_domain(x)
        xf = float(x)
        if self.kind == "exp":
            return math.exp(xf)
        if self.kind == "power":
            coeff = 1.0
            for j in range(ell):
                coeff *= self.alpha - j
            return coeff * xf ** (self.alpha - ell)
        if self.kind == "series":
            acc = 0.0
            for k in range(len(self.coeffs) - 1, ell - 1, -1):
                fall = numerics.factorial(k) / numerics.factorial(k - ell)
                acc = acc * xf + fall * self.coeffs[k]
            return acc
        raise ScalarError(f"unknown function kind {self.kind!r}")

    # -- serialization ------------------------------------------------------

    def to_json_dict(self) -> dict:
        if self.kind == "poly":
            coeffs = [
                numerics.scalar_to_json(c, RATIONAL) if isinstance(c, Fraction)
                else [c.real, c.imag]
                for c in self.poly.coeffs
            ]
            return {"kind": "poly", "coeffs": coeffs}
        if self.kind == "power":
            return {"kind": "power", "alpha": self.alpha}
        if self.kind == "exp":
            return {"kind": "exp"}
        return {"kind": "series", "coeffs": list(self.coeffs), "radius": self.radius}

    @staticmethod
    def from_json_dict(payload: dict) -> "FunctionSpec":
        if not isinstance(payload, dict) or "kind" not in payload:
            raise ScalarError("function JSON must be an object with a 'kind' field")
        kind = payload["kind"]
        max_order = payload.get("max_order")
        if kind == "poly":
            if "coeffs" not in payload:
                raise ScalarError("poly function JSON is missing field 'coeffs'")
            return FunctionSpec.polynomial(payload["coeffs"], max_order=max_order)
        if kind == "power":
            if "alpha" not in payload:
                raise ScalarError("power function JSON is missing field 'alpha'")
            return FunctionSpec.power(payload["alpha"], max_order=max_order)
        if kind == "exp":
            return FunctionSpec.exp(max_order=max_order)
        if kind == "series":
            for fieldname in ("coeffs", "radius"):
                if fieldname not in payload:
                    raise ScalarError(f"series function JSON is missing field {fieldname!r}")
            return FunctionSpec.series(payload["coeffs"], payload["radius"],
                                       max_order=max_order)
        raise ScalarError(f"unknown function kind {kind!r}")


# ----------------------------------------------------------------------
# difference operators
# ----------------------------------------------------------------------

def forward_difference(f: FunctionSpec, x, h, ell: int):
    """ell-th forward difference sum_j C(ell,j) (-1)^(ell-j) f(x + j h).

    All nodes x + j h for j in [0:ell] must lie in the domain of f; the
    first offending node is reported.  Exact when f and the points are.
    """
    if ell < 0:
        raise ValueError(f"difference order must be >= 0, got {ell}")
    if h <= 0:
        raise ValueError(f"step size must be > 0, got {h}")
    x = _as_real(x, "forward difference")
    for j in range(ell + 1):
        node = x + j * h
        if not f.domain_contains(node):
            raise DomainError(
                f"node x + {j}h = {node} leaves the domain of kind {f.kind!r}",
                node=node,
            )
    acc = 0
    for j in range(ell + 1):
        sign = -1 if (ell - j) % 2 else 1
        acc = acc + sign * numerics.binomial(ell, j) * f.value(x + j * h)
    return acc


def divided_difference(f: FunctionSpec, x, h, ell: int):
    """ell-th divided difference: the forward difference divided by h^ell."""
    fd = forward_difference(f, x, h, ell)
    if ell == 0:
        return fd
    return fd / h ** ell


# ----------------------------------------------------------------------
# transforms
# ----------------------------------------------------------------------

SUM_OF_POWERS = "sum_of_powers"
PARTITION_FORMULA = "partition_formula"


def poly_transform(p, a: ConvMatrix, mode: str = SUM_OF_POWERS) -> ConvMatrix:
    """Action of a polynomial on a matrix in the convolution ring.

    ``sum_of_powers`` evaluates c0 I + c1 A + c2 A<>A + ... directly;
    ``partition_formula`` goes through the derivative/partition
    expansion.  The two agree exactly on the rational backend.
    """
    if not isinstance(p, Poly):
        p = Poly.of(p)
    if mode == PARTITION_FORMULA:
        return smooth_transform(FunctionSpec.polynomial(p), a)
    if mode != SUM_OF_POWERS:
        raise ValueError(f"unknown mode {mode!r}")
    if not (p.is_exact and a.scalar == RATIONAL):
        a = a.astype(COMPLEX)
    result = ConvMatrix.zeros(a.rows, a.cols, a.scalar)
    power = conv_identity(a.rows, a.cols, a.scalar)
    for k, c in enumerate(p.coeffs):
        result = add(result, scale(c, power))
        if k + 1 < len(p.coeffs):
            power = conv(power, a)
    return result


def smooth_transform(f: FunctionSpec, a: ConvMatrix) -> ConvMatrix:
    """Derivative-based matrix transform of a scalar function.

    Entry (0, 0) is f(a00); entry (i, j) contracts the derivatives
    f^(1)(a00) ... f^(i+j)(a00) against the elementary partition sums of
    the matrix.  Requires f to provide derivatives up to order M+N-2 at
    a00.
    """
    order = a.rows + a.cols - 2
    f.ensure_order(order)
    a00 = a.data[0][0]
    f.require_in_domain(a00)
    exact = f.is_exact and a.scalar == RATIONAL
    work = a if exact else a.astype(COMPLEX)
    if exact or f.kind == "poly":
        x0 = work.data[0][0]
    else:
        x0 = _as_real(work.data[0][0], f.kind)
    derivs = [None] * (order + 1)
    for ell in range(1, order + 1):
        derivs[ell] = f.derivative(ell, x0)
    out = []
    for i in range(work.rows):
        row = []
        for j in range(work.cols):
            if (i, j) == (0, 0):
                row.append(f.value(x0) if exact else complex(f.value(x0)))
                continue
            acc = numerics.zero(work.scalar)
            for ell in range(1, i + j + 1):
                e = elementary_sum(work, ell, (i, j))
                acc = acc + derivs[ell] * e
            row.append(acc if exact else complex(acc))
        out.append(tuple(row))
    return ConvMatrix(work.rows, work.cols, tuple(out), work.scalar)


def stepped_transform(f: FunctionSpec, a: ConvMatrix, h) -> ConvMatrix:
    """Step-size variant: derivatives replaced by divided differences.

    Well-defined for any scalar function provided the nodes
    a00 + k h for k in [0:M+N-2] lie in the domain; the first node
    violation is reported by name.
    """
    if h <= 0:
        raise ValueError(f"step size must be > 0, got {h}")
    order = a.rows + a.cols - 2
    a00 = a.data[0][0]
    x0 = _as_real(a00, f.kind)
    for k in range(order + 1):
        node = x0 + k * h
        if not f.domain_contains(node):
            raise DomainError(
                f"node a00 + {k}h = {node} leaves the domain of kind {f.kind!r}",
                node=node,
            )
    exact = (f.is_exact and a.scalar == RATIONAL
             and isinstance(h, (int, Fraction)) and not isinstance(h, bool))
    work = a if exact else a.astype(COMPLEX)
    hval = h if exact else float(h)
    divs = [None] * (order + 1)
    for ell in range(1, order + 1):
        divs[ell] = divided_difference(f, x0, hval, ell)
    out = []
    for i in range(work.rows):
        row = []
        for j in range(work.cols):
            if (i, j) == (0, 0):
                row.append(f.value(x0) if exact else complex(f.value(x0)))
                continue
            acc = numerics.zero(work.scalar)
            for ell in range(1, i + j + 1):
                e = elementary_sum(work, ell, (i, j))
                acc = acc + divs[ell] * e
            row.append(acc if exact else complex(acc))
        out.append(tuple(row))
    return ConvMatrix(work.rows, work.cols, tuple(out), work.scalar)


@dataclass(frozen=True)
class SeriesTransformResult:
    """Partial-sum evaluation of sum_k c_k A^(<>k) with its tail metadata."""

    matrix: ConvMatrix
    terms_used: int
    tail_bound: float


# Hard ceiling on series terms before we declare divergence.
SERIES_TERM_BUDGET = 10_000
SERIES_TAIL_TOL = 1e-12
_SMALL_STREAK = 3  # consecutive negligible terms required to accept convergence


def series_transform(coeffs: Iterable[float], a: ConvMatrix,
                     truncation: Optional[int] = None,
                     tail_tol: float = SERIES_TAIL_TOL,
                     term_budget: int = SERIES_TERM_BUDGET) -> SeriesTransformResult:
    """Evaluate a power series on a matrix by partial sums of conv powers.

    Stops at the requested truncation index, at stream exhaustion, or --
    when no truncation is given -- once several consecutive terms are
    negligible relative to the running partial sum.  Raises
    :class:`SeriesDivergenceError` if entries blow up or the budget is
    exhausted first.  The reported tail bound is the last included
    term's max-norm relative to the partial sum's.
    """
    work = a.astype(COMPLEX)
    partial = ConvMatrix.zeros(work.rows, work.cols, COMPLEX)
    power = conv_identity(work.rows, work.cols, COMPLEX)
    tail = math.inf
    small_streak = 0
    seen_nonzero = False
    terms = 0
    for k, c in enumerate(coeffs):
        if truncation is not None and k > truncation:
            break
        if k > term_budget:
            raise SeriesDivergenceError(
                f"series did not settle within {term_budget} terms"
            )
        try:
            term = scale(complex(c), power)
            partial = add(partial, term)
        except (ScalarError, OverflowError) as exc:
            raise SeriesDivergenceError(f"series blew up at term {k}: {exc}") from exc
        terms = k + 1
        tnorm = term.max_abs()
        tail = tnorm / max(1.0, partial.max_abs())
        if tnorm > 0:
            seen_nonzero = True
        if truncation is None and seen_nonzero:
            if tail <= tail_tol:
                small_streak += 1
                if small_streak >= _SMALL_STREAK:
                    break
            else:
                small_streak = 0
        try:
            power = conv(power, work)
        except (ScalarError, OverflowError) as exc:
            raise SeriesDivergenceError(f"series blew up at term {k + 1}: {exc}") from exc
    # An exhausted finite stream IS the series; only budget overruns and
    # blow-ups (handled inside the loop) count as divergence.
    return SeriesTransformResult(matrix=partial, terms_used=terms, tail_bound=tail)


def factorial_frame(a: ConvMatrix) -> ConvMatrix:
    """Conjugate by diag(0!, 1!, ..., (n-1)!): entry (i, j) scaled by i! j!."""
    out = []
    for i in range(a.rows):
        fi = numerics.factorial(i)
        row = []
        for j in range(a.cols):
            c = fi * numerics.factorial(j)
            v = a.data[i][j]
            row.append(c * v if a.scalar == RATIONAL else complex(c) * v)
        out.append(tuple(row))
    return ConvMatrix(a.rows, a.cols, tuple(out), a.scalar)


def bivariate_power_matrix(alpha: float, a: ConvMatrix) -> ConvMatrix:
    """Entry (i, j) = i! j! [x^i y^j] F(x, y)^alpha, F packing the entries.

    F(x, y) = a00 + sum over nonzero (m, n) of a[m, n] x^m y^n.  The
    alpha-th power is expanded as a binomial series in G/a00 (G the
    a00-free part); only orders k <= 2(N-1) can touch the coefficient
    window, and the polynomial arithmetic is the truncated convolution
    itself.  Requires a square matrix with real entries and a00 > 0.
    """
    if a.rows != a.cols:
        raise ValueError(f"bivariate power matrix needs a square matrix, got {a.shape}")
    if not a.is_real():
        raise ValueError("bivariate power matrix requires real entries")
    n = a.rows
    work = a.astype(COMPLEX)
    a00 = work.data[0][0].real
    if a00 <= 0:
        raise DomainError(f"leading entry must be positive, got {a00}", node=a00)
    g_rows = [[v / a00 for v in row] for row in work.data]
    g_rows[0][0] = complex(0.0)
    g = ConvMatrix.from_rows(g_rows, COMPLEX)
    acc = ConvMatrix.zeros(n, n, COMPLEX)
    power = conv_identity(n, n, COMPLEX)
    top = 2 * (n - 1)
    for k in range(top + 1):
        acc = add(acc, scale(numerics.generalized_binomial(alpha, k), power))
        if k < top:
            power = conv(power, g)
    lead = a00 ** alpha
    return scale(lead, factorial_frame(acc))
