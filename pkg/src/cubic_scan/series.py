"""
Exact truncated formal power series in q over the integers.

A series of order N carries the coefficients of q^0 .. q^N, all of them exact.
Binary operations return the smaller operand order, so exactness is never
overstated.
"""

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from typing import Any

import numpy as np
from loguru import logger

# a divisor with at most 1/SPARSE_RATIO nonzero coefficients is divided sparsely
SPARSE_RATIO = 4


class SeriesError(ArithmeticError):
    """Base class for truncated series errors."""


class NonUnitConstantTermError(SeriesError):
    """Raised when a series with constant term other than +1 or -1 is inverted."""


class EmptyResultError(SeriesError):
    """Raised when an operation would produce a series of negative order."""


class OrderTooSmallError(SeriesError):
    """Raised when a comparison window exceeds the order of an operand."""


@dataclass(frozen=True, slots=True)
class TruncatedSeries:
    coeffs: tuple[int, ...]  # coeffs[n] is the coefficient of q^n, exact for every stored n

    def __post_init__(self) -> None:
        if not self.coeffs:
            raise EmptyResultError("a truncated series needs at least the constant coefficient")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def from_coeffs(cls, coeffs: Iterable[int], order: int | None = None) -> "TruncatedSeries":
        """Build a series from coefficients, padding with zeros or truncating to order."""
        values = [int(c) for c in coeffs]
        if order is None:
            return cls(tuple(values))
        if order < 0:
            raise EmptyResultError(f"order must be non-negative, got {order}")
        values = values[: order + 1] + [0] * (order + 1 - len(values))
        return cls(tuple(values))

    @classmethod
    def constant(cls, c: int, order: int) -> "TruncatedSeries":
        return cls.from_coeffs([c], order)

    @classmethod
    def zero(cls, order: int) -> "TruncatedSeries":
        return cls.from_coeffs([], order)

    @classmethod
    def monomial(cls, c: int, s: int, order: int) -> "TruncatedSeries":
        """c * q^s truncated to order (the zero series when s > order)."""
        if s < 0:
            raise ValueError(f"exponent must be non-negative, got {s}")
        return shift(cls.constant(c, order), s)

    def __getitem__(self, n: int) -> int:
        return self.coeffs[n]

    def __len__(self) -> int:
        return len(self.coeffs)

    def __repr__(self) -> str:
        head = ", ".join(str(c) for c in self.coeffs[:8])
        tail = ", ..." if self.order >= 8 else ""
        return f"TruncatedSeries(order={self.order}, coeffs=[{head}{tail}])"

    def __add__(self, other: Any) -> "TruncatedSeries":
        if isinstance(other, int):
            other = TruncatedSeries.constant(other, self.order)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return add(self, other)

    __radd__ = __add__

    def __sub__(self, other: Any) -> "TruncatedSeries":
        if isinstance(other, int):
            other = TruncatedSeries.constant(other, self.order)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return sub(self, other)

    def __rsub__(self, other: Any) -> "TruncatedSeries":
        if not isinstance(other, int):
            return NotImplemented
        return sub(TruncatedSeries.constant(other, self.order), self)

    def __neg__(self) -> "TruncatedSeries":
        return neg(self)

    def __mul__(self, other: Any) -> "TruncatedSeries":
        if isinstance(other, int):
            return scale(self, other)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "TruncatedSeries":
        return power(self, e)


def _as_array(f: TruncatedSeries, order: int) -> np.ndarray:
    return np.array(f.coeffs[: order + 1], dtype=object)


def nonzero_terms(f: TruncatedSeries) -> list[tuple[int, int]]:
    """List the (index, coefficient) pairs of f with nonzero coefficient."""
    return [(n, c) for n, c in enumerate(f.coeffs) if c]


def truncate(f: TruncatedSeries, order: int) -> TruncatedSeries:
    """Drop the coefficients past order; order may only shrink."""
    if order > f.order:
        raise OrderTooSmallError(f"cannot extend a series of order {f.order} to order {order}")
    return TruncatedSeries.from_coeffs(f.coeffs, order)


def add(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    """f + g at the smaller of the two orders."""
    order = min(f.order, g.order)
    return TruncatedSeries(tuple(a + b for a, b in zip(f.coeffs[: order + 1], g.coeffs[: order + 1], strict=True)))


def sub(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    """f - g at the smaller of the two orders."""
    order = min(f.order, g.order)
    return TruncatedSeries(tuple(a - b for a, b in zip(f.coeffs[: order + 1], g.coeffs[: order + 1], strict=True)))


def neg(f: TruncatedSeries) -> TruncatedSeries:
    """-f."""
    return TruncatedSeries(tuple(-c for c in f.coeffs))


def scale(f: TruncatedSeries, c: int) -> TruncatedSeries:
    """c * f for an integer c."""
    return TruncatedSeries(tuple(c * a for a in f.coeffs))


def mul(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    """
    Truncated Cauchy product.

    The sparser operand drives the loop: each of its nonzero coefficients adds a
    scaled, shifted slice of the other operand, so Euler products and theta
    series multiply in O(nonzeros * order).
    """
    order = min(f.order, g.order)
    kernel, other = (f, g) if len(nonzero_terms(f)) <= len(nonzero_terms(g)) else (g, f)
    dense = _as_array(other, order)
    result = np.zeros(order + 1, dtype=object)
    for k, c in enumerate(kernel.coeffs[: order + 1]):
        if c:
            result[k:] += c * dense[: order + 1 - k]
    return TruncatedSeries(tuple(int(x) for x in result))


def _unit_sign(g: TruncatedSeries) -> int:
    if g[0] not in (1, -1):
        raise NonUnitConstantTermError(f"constant term {g[0]} is not a unit in the integers")
    return g[0]


def divide(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    """
    Compute f / g for a unit g by the forward recurrence h_n = g_0 (f_n - sum_{k>=1} g_k h_{n-k}).
    """
    sign = _unit_sign(g)
    order = min(f.order, g.order)
    terms = [(k, c) for k, c in nonzero_terms(g) if 0 < k <= order]
    quotient = [0] * (order + 1)
    if len(terms) * SPARSE_RATIO <= order:
        logger.debug(f"sparse division at order {order} over {len(terms)} divisor terms")
        for n in range(order + 1):
            acc = f[n]
            for k, c in terms:
                if k > n:
                    break
                acc -= c * quotient[n - k]
            quotient[n] = sign * acc
        return TruncatedSeries(tuple(quotient))

    divisor = _as_array(g, order)
    solved = np.zeros(order + 1, dtype=object)
    for n in range(order + 1):
        acc = f[n] - (np.dot(divisor[1 : n + 1], solved[n - 1 :: -1]) if n else 0)
        solved[n] = sign * acc
    return TruncatedSeries(tuple(int(x) for x in solved))


def invert(f: TruncatedSeries) -> TruncatedSeries:
    """1 / f; the constant term of f must be 1 or -1."""
    return divide(TruncatedSeries.constant(1, f.order), f)


def power(f: TruncatedSeries, e: int) -> TruncatedSeries:
    """f^e by repeated squaring; negative exponents invert first."""
    if e < 0:
        return power(invert(f), -e)
    result = TruncatedSeries.constant(1, f.order)
    base = f
    while e:
        if e & 1:
            result = mul(result, base)
        e >>= 1
        if e:
            base = mul(base, base)
    return result


def substitute_power(f: TruncatedSeries, k: int) -> TruncatedSeries:
    """f(q^k); the result is exact up to order k * f.order."""
    if k < 1:
        raise ValueError(f"substitution power must be positive, got {k}")
    coeffs = [0] * (k * f.order + 1)
    coeffs[::k] = f.coeffs
    return TruncatedSeries(tuple(coeffs))


def dissect(f: TruncatedSeries, m: int, r: int) -> TruncatedSeries:
    """
    Series whose n-th coefficient is f[m*n + r].

    Equivalent to keeping the exponents congruent to r mod m, dividing by q^r and
    replacing q^m by q.
    """
    if m < 1:
        raise ValueError(f"dissection modulus must be positive, got {m}")
    if not 0 <= r < m:
        raise ValueError(f"residue must satisfy 0 <= r < {m}, got {r}")
    if f.order < r:
        raise EmptyResultError(f"series of order {f.order} has no coefficient at residue {r} mod {m}")
    return TruncatedSeries(f.coeffs[r::m])


def shift(f: TruncatedSeries, s: int) -> TruncatedSeries:
    """q^s * f at the same order; coefficients pushed past the order are dropped."""
    if s < 0:
        raise ValueError(f"shift must be non-negative, got {s}")
    if s > f.order:
        return TruncatedSeries.zero(f.order)
    return TruncatedSeries((0,) * s + f.coeffs[: f.order + 1 - s])


def reduce_mod(f: TruncatedSeries, m: int) -> TruncatedSeries:
    """Least non-negative residues of the coefficients modulo m."""
    if m < 2:
        raise ValueError(f"modulus must be at least 2, got {m}")
    return TruncatedSeries(tuple(c % m for c in f.coeffs))


def is_zero(f: TruncatedSeries) -> bool:
    """True when every coefficient up to the order vanishes."""
    return not any(f.coeffs)


@dataclass(frozen=True, slots=True)
class SeriesComparison:
    equal: bool
    index: int | None = None  # first disagreeing index
    lhs: int | None = None
    rhs: int | None = None

    def __bool__(self) -> bool:
        return self.equal


def equal_up_to(f: TruncatedSeries, g: TruncatedSeries, n: int) -> SeriesComparison:
    """Compare coefficients 0..n and report the first disagreement."""
    if n > f.order or n > g.order:
        raise OrderTooSmallError(f"cannot compare to index {n}: orders are {f.order} and {g.order}")
    for i in range(n + 1):
        if f[i] != g[i]:
            return SeriesComparison(False, i, f[i], g[i])
    return SeriesComparison(True)


def series_from_terms(terms: Sequence[tuple[int, int]], order: int) -> TruncatedSeries:
    """Build a series from sparse (exponent, coefficient) pairs, dropping exponents beyond order."""
    coeffs = [0] * (order + 1)
    for n, c in terms:
        if n <= order:
            coeffs[n] += c
    return TruncatedSeries(tuple(coeffs))
