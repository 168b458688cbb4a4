from collections.abc import Mapping
from functools import lru_cache


@lru_cache(maxsize=1024)
def generalized_pentagonals(limit: int) -> tuple[tuple[int, int], ...]:
    """
    Generalized pentagonal numbers k(3k-1)/2 for k = 1, -1, 2, -2, ... up to limit, paired with (-1)^k.

    These are the nonzero exponents (besides 0) of the Euler function (q;q)_inf.
    """
    pentagonals = []
    k = 1
    while True:
        first = k * (3 * k - 1) // 2
        if first > limit:
            break
        sign = -1 if k % 2 else 1
        pentagonals.append((first, sign))
        second = k * (3 * k + 1) // 2
        if second <= limit:
            pentagonals.append((second, sign))
        k += 1
    return tuple(pentagonals)


def divisor_weighted_sums(exponents: Mapping[int, int], limit: int) -> list[int]:
    """
    Return B[0..limit] with B[k] = sum of d * c_d over the divisors d of k.

    c_d is the net exponent of (1 - q^d) in a product; B[0] is always 0.
    """
    sums = [0] * (limit + 1)
    for d, c in exponents.items():
        if c == 0 or d > limit:
            continue
        weight = d * c
        for k in range(d, limit + 1, d):
            sums[k] += weight
    return sums
