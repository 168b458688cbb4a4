"""
Integer polynomials in four opaque symbols with a q-degree attached to every monomial.

The symbols stand for series in q:
    F = phi(-q^9), X = X(-q^3), P = P(q^3), S = psi(q^9)
so a monomial c * q^d * F^a X^b P^c S^e can be expanded symbolically and only
rendered to a series at the end.
"""

from collections import defaultdict
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field

from loguru import logger

from cubic_scan.products import p_func, phi_neg, psi, x_neg
from cubic_scan.series import TruncatedSeries, add, mul, power, shift

SYMBOLS = ("F", "X", "P", "S")


@dataclass(frozen=True, slots=True, order=True)
class Monomial:
    f: int = 0  # exponent of F
    x: int = 0  # exponent of X
    p: int = 0  # exponent of P
    s: int = 0  # exponent of S
    qdeg: int = 0

    def __post_init__(self) -> None:
        if min(self.f, self.x, self.p, self.s, self.qdeg) < 0:
            raise ValueError(f"monomial exponents must be non-negative: {self}")

    def __mul__(self, other: "Monomial") -> "Monomial":
        return Monomial(self.f + other.f, self.x + other.x, self.p + other.p, self.s + other.s, self.qdeg + other.qdeg)

    def exponents(self) -> tuple[int, int, int, int]:
        return (self.f, self.x, self.p, self.s)

    def degree_ok(self, theta_degree: int = 8, product_degree: int = 8) -> bool:
        """Degree bookkeeping of L^i M^j: F and X share degree 2i, P and S share degree 2j."""
        return self.f + self.x == theta_degree and self.p + self.s == product_degree

    def sort_key(self) -> tuple[int, int, int, int, int]:
        # q-degree ascending, then (P, X, F, S) exponents descending
        return (self.qdeg, -self.p, -self.x, -self.f, -self.s)

    def render(self) -> str:
        parts = []
        if self.qdeg:
            parts.append(f"q^{self.qdeg}")
        symbols = [
            name if e == 1 else f"{name}^{e}" for name, e in zip(SYMBOLS, self.exponents(), strict=True) if e
        ]
        if symbols:
            parts.append(" ".join(symbols))
        return " * ".join(parts) if parts else "1"


@dataclass(frozen=True, slots=True)
class GradedPoly:
    terms: dict[Monomial, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "terms", {m: c for m, c in self.terms.items() if c})

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[Monomial, int]]) -> "GradedPoly":
        """Sum (monomial, coefficient) pairs, merging repeated monomials."""
        merged: dict[Monomial, int] = defaultdict(int)
        for monomial, c in terms:
            merged[monomial] += c
        return cls(dict(merged))

    @classmethod
    def constant(cls, c: int) -> "GradedPoly":
        return cls({Monomial(): c})

    def __len__(self) -> int:
        return len(self.terms)

    def __add__(self, other: "GradedPoly") -> "GradedPoly":
        return poly_add(self, other)

    def __mul__(self, other: "GradedPoly") -> "GradedPoly":
        return poly_mul(self, other)

    def __pow__(self, e: int) -> "GradedPoly":
        return poly_pow(self, e)

    def coefficient(self, monomial: Monomial) -> int:
        return self.terms.get(monomial, 0)

    def sorted_terms(self) -> list[tuple[Monomial, int]]:
        return sorted(self.terms.items(), key=lambda item: item[0].sort_key())

    def groups(self) -> dict[int, "GradedPoly"]:
        """Split by q-degree, ascending."""
        grouped: dict[int, dict[Monomial, int]] = defaultdict(dict)
        for monomial, c in self.sorted_terms():
            grouped[monomial.qdeg][monomial] = c
        return {d: GradedPoly(grouped[d]) for d in sorted(grouped)}

    def render(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c} * {m.render()}" for m, c in self.sorted_terms())


def poly_L() -> GradedPoly:
    """F^2 + 2 q F X + 4 q^2 X^2"""
    return GradedPoly({Monomial(f=2): 1, Monomial(f=1, x=1, qdeg=1): 2, Monomial(x=2, qdeg=2): 4})


def poly_M() -> GradedPoly:
    """P^2 - q S P + q^2 S^2"""
    return GradedPoly({Monomial(p=2): 1, Monomial(p=1, s=1, qdeg=1): -1, Monomial(s=2, qdeg=2): 1})


def poly_add(p: GradedPoly, r: GradedPoly) -> GradedPoly:
    """p + r."""
    return GradedPoly.from_terms([*p.terms.items(), *r.terms.items()])


def poly_scale(p: GradedPoly, c: int) -> GradedPoly:
    """c * p; a zero scalar gives the zero polynomial."""
    return GradedPoly({m: c * v for m, v in p.terms.items()})


def poly_mul(p: GradedPoly, r: GradedPoly) -> GradedPoly:
    """p * r, multiplying every pair of terms."""
    return GradedPoly.from_terms((m1 * m2, c1 * c2) for m1, c1 in p.terms.items() for m2, c2 in r.terms.items())


def poly_pow(p: GradedPoly, e: int) -> GradedPoly:
    """p^e for e >= 0 by repeated multiplication."""
    if e < 0:
        raise ValueError(f"polynomial exponent must be non-negative, got {e}")
    result = GradedPoly.constant(1)
    for _ in range(e):
        result = poly_mul(result, p)
    return result


def residue_extract(p: GradedPoly, m: int, r: int) -> GradedPoly:
    """Keep the terms whose q-degree is congruent to r mod m."""
    if not 0 <= r < m:
        raise ValueError(f"residue must satisfy 0 <= r < {m}, got {r}")
    return GradedPoly({mono: c for mono, c in p.terms.items() if mono.qdeg % m == r})


def symbol_series(order: int) -> dict[str, TruncatedSeries]:
    """The series each symbol stands for, exact to order."""
    return {
        "F": phi_neg(9, order),
        "X": x_neg(3, order),
        "P": p_func(3, order),
        "S": psi(9, order),
    }


def render_series(
    p: GradedPoly, order: int, symbols: Mapping[str, TruncatedSeries] | None = None
) -> TruncatedSeries:
    """Substitute series for the symbols and q^d for the q-degree, summing all terms exactly to order."""
    values = dict(symbols) if symbols is not None else symbol_series(order)
    powers: dict[tuple[str, int], TruncatedSeries] = {}

    def symbol_power(name: str, e: int) -> TruncatedSeries:
        if (name, e) not in powers:
            powers[name, e] = mul(symbol_power(name, e - 1), values[name]) if e > 1 else power(values[name], e)
        return powers[name, e]

    total = TruncatedSeries.zero(order)
    for monomial, c in p.sorted_terms():
        if monomial.qdeg > order:
            continue
        term = TruncatedSeries.constant(c, order)
        for name, e in zip(SYMBOLS, monomial.exponents(), strict=True):
            if e:
                term = mul(term, symbol_power(name, e))
        total = add(total, shift(term, monomial.qdeg))
    logger.debug(f"rendered {len(p)} monomials to order {total.order}")
    return total
