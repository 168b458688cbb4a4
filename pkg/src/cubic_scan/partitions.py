from dataclasses import dataclass
from enum import StrEnum
from functools import lru_cache

from loguru import logger

from cubic_scan.products import euler
from cubic_scan.series import TruncatedSeries, divide, invert, substitute_power, truncate
from cubic_scan.utils import generalized_pentagonals


class PartitionKind(StrEnum):
    ORDINARY = "p"  # p(n), partitions of n
    CUBIC = "a"  # a(n), partitions of n whose even parts come in two colors


@dataclass(frozen=True, slots=True)
class PartitionTable:
    kind: PartitionKind
    values: tuple[int, ...]  # values[n] for n = 0 .. limit

    @property
    def limit(self) -> int:
        return len(self.values) - 1

    def __getitem__(self, n: int) -> int:
        return self.values[n]

    def __len__(self) -> int:
        return len(self.values)

    def as_series(self) -> TruncatedSeries:
        return TruncatedSeries(self.values)


@lru_cache(maxsize=32)
def p_series(limit: int) -> PartitionTable:
    """p(0..limit) as the coefficients of 1 / (q;q)_inf."""
    logger.debug(f"inverting the Euler product to order {limit}")
    return PartitionTable(PartitionKind.ORDINARY, invert(euler(1, limit)).coeffs)


def p_pentagonal(limit: int) -> PartitionTable:
    """p(0..limit) from Euler's recurrence p(n) = sum over generalized pentagonals g of -(-1)^k p(n - g)."""
    pentagonals = generalized_pentagonals(limit)
    values = [1] + [0] * limit
    for n in range(1, limit + 1):
        total = 0
        for g, sign in pentagonals:
            if g > n:
                break
            total -= sign * values[n - g]
        values[n] = total
    return PartitionTable(PartitionKind.ORDINARY, tuple(values))


@lru_cache(maxsize=32)
def a_series(limit: int) -> PartitionTable:
    """
    a(0..limit) as the coefficients of 1 / ((q;q)_inf (q^2;q^2)_inf).

    Computed as p(q^2) / (q;q)_inf so both steps divide by a sparse Euler product.
    """
    even_parts = substitute_power(p_series((limit + 1) // 2).as_series(), 2)
    logger.debug(f"dividing p(q^2) by the Euler product to order {limit}")
    return PartitionTable(PartitionKind.CUBIC, divide(truncate(even_parts, limit), euler(1, limit)).coeffs)


def partition_table(kind: PartitionKind, limit: int) -> PartitionTable:
    """p(0..limit) or a(0..limit) by the series route."""
    return p_series(limit) if kind is PartitionKind.ORDINARY else a_series(limit)


def dp_oracle(kind: PartitionKind, limit: int) -> PartitionTable:
    """
    Count partitions by dynamic programming over part sizes, independently of any series code.

    For CUBIC every even part size is offered twice, once per color.
    """
    if limit < 0:
        raise ValueError(f"limit must be non-negative, got {limit}")
    ways = [1] + [0] * limit
    for part in range(1, limit + 1):
        colors = 2 if kind is PartitionKind.CUBIC and part % 2 == 0 else 1
        for _ in range(colors):
            for n in range(part, limit + 1):
                ways[n] += ways[n - part]
    return PartitionTable(kind, tuple(ways))


def congruence_violations(table: PartitionTable, m: int, r: int, modulus: int) -> list[int]:
    """Return every n with m*n + r <= limit whose value is not divisible by modulus."""
    return [n for n in range((table.limit - r) // m + 1) if table[m * n + r] % modulus] if table.limit >= r else []
