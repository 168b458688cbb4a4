"""
q-Pochhammer products, eta quotients and the theta-type functions phi(-q), psi(q), P(q), X(-q).

Every builder takes the argument power k (q -> q^k) and the truncation order N and
returns a series exact to order N.
"""

from collections import defaultdict
from collections.abc import Mapping
from dataclasses import dataclass, replace
from enum import StrEnum
from functools import lru_cache

import numpy as np
from loguru import logger

from cubic_scan.series import TruncatedSeries, series_from_terms
from cubic_scan.utils import divisor_weighted_sums, generalized_pentagonals


@dataclass(frozen=True, slots=True)
class Factor:
    a: int  # first exponent of (q^a; q^b)_inf
    b: int  # step
    e: int  # power of the whole product, may be negative

    def __post_init__(self) -> None:
        if self.a < 1 or self.b < 1:
            raise ValueError(f"(q^a; q^b) needs a >= 1 and b >= 1, got a={self.a}, b={self.b}")

    def render(self, e: int) -> str:
        base = f"E({self.a},{self.b})"
        return base if e == 1 else f"{base}^{e}"


@dataclass(frozen=True, slots=True)
class ProductSpec:
    """scalar * q^qpower * prod (q^a; q^b)_inf^e"""

    scalar: int = 1
    qpower: int = 0
    factors: tuple[Factor, ...] = ()

    def __post_init__(self) -> None:
        if self.qpower < 0:
            raise ValueError(f"q-power must be non-negative, got {self.qpower}")

    @classmethod
    def eta(cls, scalar: int, qpower: int, exponents: Mapping[int, int]) -> "ProductSpec":
        """Eta quotient scalar * q^qpower * prod (q^k; q^k)^e over exponents {k: e}."""
        return cls(scalar, qpower, tuple(Factor(k, k, e) for k, e in exponents.items()))

    def exponents(self, order: int) -> dict[int, int]:
        """Net exponent c_d of (1 - q^d) for d <= order."""
        net: dict[int, int] = defaultdict(int)
        for factor in self.factors:
            for d in range(factor.a, order + 1, factor.b):
                net[d] += factor.e
        return dict(net)

    def with_scalar_offset(self, delta: int) -> "ProductSpec":
        return replace(self, scalar=self.scalar + delta)

    def render(self) -> str:
        """Canonical expression text, e.g. '3 * E(3,3)^3 * E(6,6)^3 / (E(1,1)^4 * E(2,2)^4)'."""
        numerator = []
        if self.scalar != 1:
            numerator.append(str(self.scalar))
        if self.qpower:
            numerator.append("q" if self.qpower == 1 else f"q^{self.qpower}")
        numerator += [f.render(f.e) for f in self.factors if f.e > 0]
        text = " * ".join(numerator) if numerator else "1"
        denominator = [f.render(-f.e) for f in self.factors if f.e < 0]
        if len(denominator) == 1:
            text += f" / {denominator[0]}"
        elif denominator:
            text += " / (" + " * ".join(denominator) + ")"
        return text


@lru_cache(maxsize=256)
def _pochhammer_coeffs(a: int, b: int, order: int) -> tuple[int, ...]:
    coeffs = np.zeros(order + 1, dtype=object)
    coeffs[0] = 1
    for j in range(a, order + 1, b):
        coeffs[j:] = coeffs[j:] - coeffs[: order + 1 - j]
    return tuple(int(c) for c in coeffs)


def pochhammer(a: int, b: int, order: int) -> TruncatedSeries:
    """(q^a; q^b)_inf by multiplying in each factor (1 - q^(a+nb)) with a+nb <= order."""
    if a < 1 or b < 1:
        raise ValueError(f"(q^a; q^b) needs a >= 1 and b >= 1, got a={a}, b={b}")
    return TruncatedSeries(_pochhammer_coeffs(a, b, order))


def euler(k: int, order: int) -> TruncatedSeries:
    """(q^k; q^k)_inf from the pentagonal number theorem."""
    if k < 1:
        raise ValueError(f"argument power must be positive, got {k}")
    terms = [(0, 1)] + [(k * g, sign) for g, sign in generalized_pentagonals(order // k)]
    return series_from_terms(terms, order)


@lru_cache(maxsize=256)
def _unit_product_coeffs(factors: tuple[Factor, ...], order: int) -> tuple[int, ...]:
    # Euler transform: q u'/u = -sum B_k q^k with B_k = sum_{d | k} d c_d, so n u_n = -sum_k B_k u_{n-k}
    spec = ProductSpec(factors=factors)
    weights = np.array(divisor_weighted_sums(spec.exponents(order), order), dtype=object)
    coeffs = np.zeros(order + 1, dtype=object)
    coeffs[0] = 1
    for n in range(1, order + 1):
        quotient, remainder = divmod(-np.dot(weights[1 : n + 1], coeffs[n - 1 :: -1]), n)
        if remainder:
            raise ArithmeticError(f"non-integral coefficient at q^{n} while expanding {spec.render()}")
        coeffs[n] = quotient
    return tuple(int(c) for c in coeffs)


def eval_product_spec(spec: ProductSpec, order: int) -> TruncatedSeries:
    """Expand scalar * q^s * prod (q^a; q^b)^e exactly to order."""
    if spec.qpower > order:
        return TruncatedSeries.zero(order)
    inner = order - spec.qpower
    logger.debug(f"expanding {spec.render()} to order {order}")
    unit = _unit_product_coeffs(spec.factors, inner)
    return TruncatedSeries((0,) * spec.qpower + tuple(spec.scalar * c for c in unit))


def phi_neg(k: int, order: int) -> TruncatedSeries:
    """phi(-q^k) = sum over all integers n of (-1)^n q^(k n^2)."""
    if k < 1:
        raise ValueError(f"argument power must be positive, got {k}")
    terms = [(0, 1)]
    n = 1
    while k * n * n <= order:
        terms.append((k * n * n, 2 if n % 2 == 0 else -2))
        n += 1
    return series_from_terms(terms, order)


def psi(k: int, order: int) -> TruncatedSeries:
    """psi(q^k) = sum over n >= 0 of q^(k n(n+1)/2)."""
    if k < 1:
        raise ValueError(f"argument power must be positive, got {k}")
    terms = []
    n = 0
    while k * n * (n + 1) // 2 <= order:
        terms.append((k * n * (n + 1) // 2, 1))
        n += 1
    return series_from_terms(terms, order)


def phi_neg_spec(k: int) -> ProductSpec:
    """(q^k; q^k)^2 / (q^2k; q^2k)"""
    return ProductSpec.eta(1, 0, {k: 2, 2 * k: -1})


def psi_spec(k: int) -> ProductSpec:
    """(q^2k; q^2k) / (q^k; q^2k)"""
    return ProductSpec(factors=(Factor(2 * k, 2 * k, 1), Factor(k, 2 * k, -1)))


def p_func_spec(k: int) -> ProductSpec:
    """(q^2k; q^6k) (q^4k; q^6k) (q^3k; q^3k)^2 / (q^k; q^k)"""
    return ProductSpec(
        factors=(
            Factor(2 * k, 6 * k, 1),
            Factor(4 * k, 6 * k, 1),
            Factor(3 * k, 3 * k, 2),
            Factor(k, k, -1),
        )
    )


def x_neg_spec(k: int) -> ProductSpec:
    """(q^k; q^k) (q^6k; q^6k)^2 / ((q^2k; q^2k) (q^3k; q^3k))"""
    return ProductSpec.eta(1, 0, {k: 1, 6 * k: 2, 2 * k: -1, 3 * k: -1})


def phi_neg_product(k: int, order: int) -> TruncatedSeries:
    """phi(-q^k) from its eta-product form."""
    return eval_product_spec(phi_neg_spec(k), order)


def psi_product(k: int, order: int) -> TruncatedSeries:
    """psi(q^k) from its eta-product form."""
    return eval_product_spec(psi_spec(k), order)


def p_func(k: int, order: int) -> TruncatedSeries:
    """P(q^k) from its product form."""
    if k < 1:
        raise ValueError(f"argument power must be positive, got {k}")
    return eval_product_spec(p_func_spec(k), order)


def x_neg(k: int, order: int) -> TruncatedSeries:
    """X(-q^k) from its product form."""
    if k < 1:
        raise ValueError(f"argument power must be positive, got {k}")
    return eval_product_spec(x_neg_spec(k), order)


class NamedTag(StrEnum):
    PHI_NEG = "phi"
    PSI = "psi"
    P = "P"
    X_NEG = "X"


@dataclass(frozen=True, slots=True)
class NamedFunction:
    """One of phi(-q^k), psi(q^k), P(q^k), X(-q^k); the sign in phi(-q) and X(-q) is part of the name."""

    tag: NamedTag
    argument_power: int = 1

    def __post_init__(self) -> None:
        if self.argument_power < 1:
            raise ValueError(f"argument power must be positive, got {self.argument_power}")

    def series(self, order: int) -> TruncatedSeries:
        """Reference expansion: the theta sum where one exists, the product otherwise."""
        if self.tag in (NamedTag.PHI_NEG, NamedTag.PSI):
            return self.sum_form(order)
        return self.product_form(order)

    def sum_form(self, order: int) -> TruncatedSeries:
        match self.tag:
            case NamedTag.PHI_NEG:
                return phi_neg(self.argument_power, order)
            case NamedTag.PSI:
                return psi(self.argument_power, order)
            case _:
                raise ValueError(f"{self.tag.value} has no theta-sum form")

    def product_spec(self) -> ProductSpec:
        k = self.argument_power
        match self.tag:
            case NamedTag.PHI_NEG:
                return phi_neg_spec(k)
            case NamedTag.PSI:
                return psi_spec(k)
            case NamedTag.P:
                return p_func_spec(k)
            case NamedTag.X_NEG:
                return x_neg_spec(k)

    def product_form(self, order: int) -> TruncatedSeries:
        return eval_product_spec(self.product_spec(), order)

    def render(self) -> str:
        return f"{self.tag.value}({self.argument_power})"
