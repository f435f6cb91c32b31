"""Small exact number-theory helpers shared across the package."""

from __future__ import annotations

import math
from typing import Iterator


def primes_up_to(n: int) -> list[int]:
    """All primes <= n by a byte sieve."""
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            start = p * p
            sieve[start :: p] = b"\x00" * len(range(start, n + 1, p))
    return [i for i in range(n + 1) if sieve[i]]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of n >= 1 as {p: exponent}."""
    if n < 1:
        raise ValueError("factorize expects n >= 1")
    out: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    f = 5
    while f * f <= n:
        for p in (f, f + 2):
            while n % p == 0:
                out[p] = out.get(p, 0) + 1
                n //= p
        f += 6
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def divisors(n: int) -> list[int]:
    """Sorted positive divisors of n >= 1."""
    out = [1]
    for p, e in factorize(n).items():
        out = [d * p**k for d in out for k in range(e + 1)]
    return sorted(out)


def euler_phi(n: int) -> int:
    out = n
    for p in factorize(n):
        out = out // p * (p - 1)
    return out


def is_squarefree(n: int) -> bool:
    return all(e == 1 for e in factorize(n).values())


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n), extended to all integers n."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    while n % 2 == 0:
        n //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            result = -result
    # Jacobi symbol for odd n via quadratic reciprocity
    a %= n
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def generalized_pentagonal(k: int) -> int:
    """k(3k-1)/2 for any integer k; nonnegative for all k."""
    return k * (3 * k - 1) // 2


def is_generalized_pentagonal(x: int) -> bool:
    # x = k(3k-1)/2 for some integer k iff 24x+1 is a perfect square
    if x < 0:
        return False
    s = 24 * x + 1
    r = math.isqrt(s)
    return r * r == s


def pentagonal_numbers_ascending() -> Iterator[int]:
    """0, 1, 2, 5, 7, 12, 15, ... (generalized pentagonal numbers in order)."""
    yield 0
    k = 1
    while True:
        yield k * (3 * k - 1) // 2
        yield k * (3 * k + 1) // 2
        k += 1


def pentagonal_exponents(limit: int, scale: int = 1) -> tuple[list[int], list[int]]:
    """Support of prod_{n>=1}(1 - q^{n*scale}) up to q^limit.

    Returns ascending offsets scale*k(3k-/+1)/2 and their signs (-1)^k,
    including the constant term (offset 0, sign +1).
    """
    offs = [0]
    signs = [1]
    k = 1
    while True:
        a = scale * (k * (3 * k - 1) // 2)
        if a > limit:
            break
        offs.append(a)
        signs.append(-1 if k % 2 else 1)
        b = scale * (k * (3 * k + 1) // 2)
        if b <= limit:
            offs.append(b)
            signs.append(-1 if k % 2 else 1)
        k += 1
    return offs, signs
