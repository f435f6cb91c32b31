"""Brute-force enumeration of the partition functions, independent of q-series.

Ground truth for coefficient checks: everything here counts explicit
combinatorial objects, never expands a generating function.

A partition is represented as a nonincreasing tuple of positive parts.
count_EO counts partitions in which every even part is smaller than every
odd part.  count_EObar restricts to those in which only the largest even
part occurs an odd number of times: the largest even part (when even parts
exist) has odd multiplicity and every other part has even multiplicity; with
no even parts, all multiplicities must be even.  count_EOu counts multisets
of parts congruent to 2 mod 4 in two colors.
"""

from __future__ import annotations

from collections import Counter
from typing import Iterator

from .arith import is_generalized_pentagonal

DEFAULT_CAP = 60


def _check_args(n: int, cap: int) -> None:
    if n < 0:
        raise ValueError("partition argument must be nonnegative")
    if n > cap:
        raise ValueError(f"n={n} exceeds the enumeration cap {cap}")


def eo_partitions(n: int, cap: int = DEFAULT_CAP) -> Iterator[tuple[int, ...]]:
    """Yield the partitions of n with every even part below every odd part.

    Parts come out nonincreasing; in any such partition all odd parts
    precede all even parts, so a branch is pruned as soon as an even part
    would reach an odd one.
    """
    _check_args(n, cap)

    def rec(remaining: int, max_part: int, even_seen: bool, prefix: list[int]):
        if remaining == 0:
            yield tuple(prefix)
            return
        for p in range(min(remaining, max_part), 0, -1):
            if p % 2 == 1 and even_seen:
                continue
            prefix.append(p)
            yield from rec(remaining - p, p, even_seen or p % 2 == 0, prefix)
            prefix.pop()

    return rec(n, max(n, 1), False, [])


def count_EO(n: int, cap: int = DEFAULT_CAP) -> int:
    return sum(1 for _ in eo_partitions(n, cap))


def _only_largest_even_odd_often(parts: tuple[int, ...]) -> bool:
    mult = Counter(parts)
    evens = [p for p in mult if p % 2 == 0]
    largest_even = max(evens) if evens else None
    for p, m in mult.items():
        if p == largest_even:
            if m % 2 == 0:
                return False
        elif m % 2 == 1:
            return False
    return True


def count_EObar(n: int, cap: int = DEFAULT_CAP) -> int:
    return sum(1 for parts in eo_partitions(n, cap) if _only_largest_even_odd_often(parts))


def count_EOu(n: int, cap: int = DEFAULT_CAP) -> int:
    """Two-colored multisets of parts == 2 (mod 4) summing to n, by enumeration."""
    _check_args(n, cap)
    values = list(range(2, n + 1, 4))

    def rec(remaining: int, idx: int) -> int:
        if remaining == 0:
            return 1
        if idx < 0:
            return 0
        v = values[idx]
        total = 0
        for first in range(remaining // v + 1):
            for second in range(remaining // v - first + 1):
                if (first + second) * v <= remaining:
                    total += rec(remaining - (first + second) * v, idx - 1)
        return total

    return rec(n, len(values) - 1)


def pentagonal_parity_EObar(n: int) -> int:
    """EObar(n) mod 2 in closed form: odd exactly when n is 8 times a
    generalized pentagonal number k(3k-1)/2."""
    if n < 0:
        raise ValueError("partition argument must be nonnegative")
    return 1 if n % 8 == 0 and is_generalized_pentagonal(n // 8) else 0
