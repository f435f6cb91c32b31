"""Eta-quotient metadata: weight, level conditions, character, cusp orders.

An eta quotient prod_{d | N} eta(d z)^{r_d} on Gamma_0(N) is described by its
level and exponent map.  The classification here relies on the standard
criteria for eta quotients (Ligozat/Newman, as collected by Ono): integral
weight sum r_d / 2, the two 24-divisibility conditions, the Kronecker-symbol
nebentypus, and the exact rational order of vanishing at each cusp c/d,

    (N/24) * sum_{d' | N} gcd(d, d')^2 r_{d'} / (gcd(d, N/d) * d * d').

All arithmetic is exact (fractions of arbitrary-precision integers).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Mapping

from .arith import divisors, euler_phi, factorize, kronecker


@dataclass(frozen=True)
class EtaQuotient:
    level: int
    exponents: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        if self.level < 1:
            raise ValueError("level must be a positive integer")
        for d in self.exponents:
            if d < 1 or self.level % d != 0:
                raise ValueError(f"exponent key {d} does not divide the level {self.level}")

    def exponent(self, d: int) -> int:
        return self.exponents.get(d, 0)


@dataclass(frozen=True)
class Cusp:
    """Cusp numerator/denominator c/d of Gamma_0(N); the order formula depends
    only on the denominator."""

    denominator: int
    numerator: int = 1

    def __post_init__(self):
        if self.denominator < 1:
            raise ValueError("cusp denominator must be positive")
        if gcd(self.numerator, self.denominator) != 1:
            raise ValueError("cusp numerator must be coprime to the denominator")


@dataclass(frozen=True)
class FormClassification:
    weight: Fraction
    half_integral: bool
    satisfies_24_conditions: bool
    min_cusp_order: Fraction
    label: str


def weight(eq: EtaQuotient) -> Fraction:
    """Half the exponent sum, as an exact rational."""
    return Fraction(sum(eq.exponents.values()), 2)


def check_level_conditions(eq: EtaQuotient) -> tuple[bool, bool]:
    """(sum d*r_d == 0 mod 24, sum (N/d)*r_d == 0 mod 24)."""
    N = eq.level
    first = sum(d * r for d, r in eq.exponents.items()) % 24 == 0
    second = sum((N // d) * r for d, r in eq.exponents.items()) % 24 == 0
    return first, second


def _squarefree_kernel(eq: EtaQuotient) -> int:
    """Squarefree part of prod d^{r_d} (as a square class in Q*)."""
    exps: dict[int, int] = {}
    for d, r in eq.exponents.items():
        for p, e in factorize(d).items():
            exps[p] = exps.get(p, 0) + e * r
    out = 1
    for p, e in exps.items():
        if e % 2:
            out *= p
    return out


def character(eq: EtaQuotient, d: int) -> int:
    """Nebentypus value chi(d) = ((-1)^weight * prod d'^{r_d'} / d) as a
    Kronecker symbol of the squarefree kernel."""
    w = weight(eq)
    if w.denominator != 1:
        raise ValueError("character is defined only for integral weight")
    sign = -1 if int(w) % 2 else 1
    return kronecker(sign * _squarefree_kernel(eq), d)


def cusp_order(eq: EtaQuotient, cusp: Cusp | int) -> Fraction:
    """Order of vanishing at the cusp with the given denominator, exact."""
    d = cusp.denominator if isinstance(cusp, Cusp) else cusp
    N = eq.level
    if d < 1 or N % d != 0:
        raise ValueError(f"cusp denominator {d} does not divide the level {N}")
    total = Fraction(0)
    for delta, r in eq.exponents.items():
        g = gcd(d, delta)
        total += Fraction(g * g * r, gcd(d, N // d) * d * delta)
    return Fraction(N, 24) * total


def index_gamma0(N: int) -> int:
    """Index of Gamma_0(N) in SL_2(Z): N * prod_{p | N} (1 + 1/p)."""
    if N < 1:
        raise ValueError("level must be positive")
    out = N
    for p in factorize(N):
        out = out // p * (p + 1)
    return out


def cusp_census(N: int) -> list[tuple[int, int]]:
    """(denominator, number of inequivalent cusps) for each d | N; the count
    at denominator d is phi(gcd(d, N/d))."""
    return [(d, euler_phi(gcd(d, N // d))) for d in divisors(N)]


def total_vanishing_order(eq: EtaQuotient) -> Fraction:
    """Sum of cusp orders weighted by the cusp census."""
    return sum(
        (count * cusp_order(eq, d) for d, count in cusp_census(eq.level)), Fraction(0)
    )


def classify(eq: EtaQuotient) -> FormClassification:
    """Holomorphy class from the cusp orders.

    A negative order anywhere means weakly holomorphic.  With all orders
    nonnegative, the label is only trusted when both 24-conditions hold and
    the weight is a nonnegative integer; otherwise it is "unchecked".
    """
    w = weight(eq)
    half = w.denominator != 1
    conds = check_level_conditions(eq)
    orders = [cusp_order(eq, d) for d in divisors(eq.level)]
    mn = min(orders)
    if mn < 0:
        label = "weakly holomorphic"
    elif half or w < 0 or not all(conds):
        label = "unchecked"
    elif mn > 0:
        label = "cusp form"
    else:
        label = "holomorphic modular form"
    return FormClassification(
        weight=w,
        half_integral=half,
        satisfies_24_conditions=all(conds),
        min_cusp_order=mn,
        label=label,
    )


# text format "N; d1:r1, d2:r2" used by CLI flags and claim files


def parse_eta_quotient(text: str) -> EtaQuotient:
    try:
        level_part, _, exp_part = text.partition(";")
        level = int(level_part.strip())
        exponents: dict[int, int] = {}
        for item in exp_part.split(","):
            item = item.strip()
            if not item:
                continue
            d, r = item.split(":")
            exponents[int(d.strip())] = int(r.strip())
    except ValueError as exc:
        raise ValueError(f"malformed eta quotient {text!r}; expected 'N; d:r, d:r'") from exc
    return EtaQuotient(level, exponents)


def format_eta_quotient(eq: EtaQuotient) -> str:
    body = ", ".join(f"{d}:{eq.exponents[d]}" for d in sorted(eq.exponents))
    return f"{eq.level}; {body}"
