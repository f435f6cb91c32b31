"""Radu's finite verification criterion for eta-product coefficient congruences.

Given c_r(n) defined by prod_{d | M} (q^d; q^d)^{r_d} = sum c_r(n) q^n, the
criterion proves statements of the form

    c_r(m n + t') == 0 (mod u)  for all n >= 0 and all t' in P_{m,r}(t)

from finitely many initial cases.  The pipeline: admissibility of the tuple
(m, M, N, r, t) (the delta-star conditions), double-coset representatives
for Gamma_0(N) \\ SL_2(Z) / Gamma_infty at squarefree-type levels, a cusp
nonnegativity bound p_{m,r}(gamma) + p*_{r'}(gamma) >= 0 at every
representative, and the bound nu on how many initial n must be checked.

All bound arithmetic is exact; the finite coefficient check runs in the
mod-u domain.  A verified verdict is additionally spot-checked well past
the proven range as an internal consistency guard.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Mapping

from .arith import divisors, factorize, is_squarefree
from .etaq import index_gamma0
from .qseries import Series, build_eta_product, mod_domain


class UnsupportedLevelError(ValueError):
    """Raised when no closed double-coset system is available for the level."""


@dataclass(frozen=True)
class RaduTuple:
    """Candidate tuple (m, M, N, r, t) for the congruence c_r(mn + t) == 0."""

    m: int
    M: int
    N: int
    r: Mapping[int, int] = field(default_factory=dict)
    t: int = 0

    def __post_init__(self):
        if min(self.m, self.M, self.N) < 1:
            raise ValueError("m, M, N must be positive")
        if not 0 <= self.t < self.m:
            raise ValueError("t must lie in [0, m)")
        for d in self.r:
            if d < 1 or self.M % d != 0:
                raise ValueError(f"exponent key {d} does not divide M={self.M}")

    @property
    def k(self) -> int:
        """gcd(m^2 - 1, 24)."""
        return gcd(self.m * self.m - 1, 24)

    def exponent_sum(self) -> int:
        return sum(self.r.values())

    def weighted_exponent_sum(self) -> int:
        return sum(d * e for d, e in self.r.items())

    def two_adic_split(self) -> tuple[int, int]:
        """(s, j) with prod d^{|r_d|} = 2^s * j and j odd."""
        p = 1
        for d, e in self.r.items():
            p *= d ** abs(e)
        s = 0
        while p % 2 == 0:
            p //= 2
            s += 1
        return s, p


@dataclass(frozen=True)
class CosetRep:
    """Matrix [[a, b], [c, d]] in SL_2(Z)."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError("coset representative must have determinant 1")

    @classmethod
    def lower_triangular(cls, delta: int) -> "CosetRep":
        return cls(1, 0, delta, 1)


@dataclass(frozen=True)
class DeltaStarResult:
    passed: bool
    conditions: tuple[bool, bool, bool, bool, bool, bool]

    def failed(self) -> list[int]:
        return [i + 1 for i, ok in enumerate(self.conditions) if not ok]


def delta_star_check(tup: RaduTuple) -> DeltaStarResult:
    """Admissibility of the tuple: six independent arithmetic conditions.

    1. every prime divisor of m divides N;
    2. d | M with r_d != 0 implies d | mN;
    3. k N sum_d r_d (MN/d) == 0 (mod 24);
    4. k N sum_d d r_d == 0 (mod 8);
    5. 24m / gcd(-24 k t - k sum_d d r_d, 24m) divides N;
    6. for even m: 4 | kN and 8 | sN, or 2 | s and 8 | (1 - j)N,
       where 2^s j = prod d^{|r_d|} with j odd.
    """
    m, M, N, r, t = tup.m, tup.M, tup.N, tup.r, tup.t
    k = tup.k
    s, j = tup.two_adic_split()
    c1 = all(N % p == 0 for p in factorize(m))
    c2 = all((m * N) % d == 0 for d, e in r.items() if e != 0)
    c3 = (k * N * sum(e * (M // d) * N for d, e in r.items())) % 24 == 0
    c4 = (k * N * tup.weighted_exponent_sum()) % 8 == 0
    g = gcd(-24 * k * t - k * tup.weighted_exponent_sum(), 24 * m)
    c5 = N % (24 * m // g) == 0
    if m % 2 == 0:
        c6 = (k * N % 4 == 0 and s * N % 8 == 0) or (s % 2 == 0 and (1 - j) * N % 8 == 0)
    else:
        c6 = True
    conds = (c1, c2, c3, c4, c5, c6)
    return DeltaStarResult(passed=all(conds), conditions=conds)


def _multiplier_set(m: int) -> list[int]:
    """Residues s mod 24m with s == 1 (mod 24) and gcd(s, 24m) = 1.

    Squares of units mod 24m all lie in this set (every unit squared is
    1 mod 24); the progression map below is a group action of it.
    """
    md = 24 * m
    return [s for s in range(1, md, 24) if gcd(s, md) == 1]


def compute_P(tup: RaduTuple) -> frozenset[int]:
    """Orbit of t under t |-> t s + ((s - 1)/24) sum_d d r_d (mod m)."""
    sdr = tup.weighted_exponent_sum()
    out = set()
    for s in _multiplier_set(tup.m):
        if (s - 1) % 24 != 0:
            raise AssertionError("multiplier not congruent to 1 mod 24")
        out.add((tup.t * s + (s - 1) // 24 * sdr) % tup.m)
    return frozenset(out)


def coset_reps(N: int) -> list[CosetRep]:
    """[[1,0],[d,1]] for d | N, valid when N or N/2 is squarefree."""
    if not (is_squarefree(N) or (N % 2 == 0 and is_squarefree(N // 2))):
        raise UnsupportedLevelError(
            f"level {N}: neither N nor N/2 is squarefree, no coset system available"
        )
    return [CosetRep.lower_triangular(d) for d in divisors(N)]


def lower_bound_pmr(gamma: CosetRep, tup: RaduTuple) -> Fraction:
    """min over lambda in [0, m) of
    (1/24) sum_d r_d gcd(d a + d k lambda c, m c)^2 / (d m)."""
    a, c = gamma.a, gamma.c
    m, k = tup.m, tup.k
    best: Fraction | None = None
    for lam in range(m):
        total = Fraction(0)
        for d, e in tup.r.items():
            g = gcd(d * a + d * k * lam * c, m * c)
            total += Fraction(e * g * g, d * m)
        total /= 24
        if best is None or total < best:
            best = total
    return best if best is not None else Fraction(0)


def p_star(gamma: CosetRep, rprime: Mapping[int, int]) -> Fraction:
    """(1/24) sum_d r'_d gcd(d, c)^2 / d."""
    c = gamma.c
    total = Fraction(0)
    for d, e in rprime.items():
        g = gcd(d, c)
        total += Fraction(e * g * g, d)
    return total / 24


def nu_bound(tup: RaduTuple, rprime: Mapping[int, int]) -> Fraction:
    """Upper bound nu: initial cases n = 0..floor(nu) suffice.

    nu = (1/24) [(sum r + sum r') [SL2(Z):Gamma_0(N)] - sum d r'_d]
         - (1/24m) sum d r_d - t_min/m,   t_min = min P_{m,r}(t).
    """
    t_min = min(compute_P(tup))
    sum_rp = sum(rprime.values())
    sum_drp = sum(d * e for d, e in rprime.items())
    return (
        Fraction((tup.exponent_sum() + sum_rp) * index_gamma0(tup.N) - sum_drp, 24)
        - Fraction(tup.weighted_exponent_sum(), 24 * tup.m)
        - Fraction(t_min, tup.m)
    )


@dataclass(frozen=True)
class CongruenceClaim:
    """c_r(m n + t') == 0 (mod u) for all n and t' in the progression set."""

    tup: RaduTuple
    rprime: Mapping[int, int] = field(default_factory=dict)
    u: int = 2

    def __post_init__(self):
        if self.u < 1:
            raise ValueError("modulus u must be >= 1")
        for d in self.rprime:
            if d < 1 or self.tup.N % d != 0:
                raise ValueError(f"r' key {d} does not divide N={self.tup.N}")

    @property
    def progression_set(self) -> frozenset[int]:
        return compute_P(self.tup)

    @classmethod
    def from_json(cls, obj: Mapping) -> "CongruenceClaim":
        tup = RaduTuple(
            m=int(obj["m"]),
            M=int(obj["M"]),
            N=int(obj["N"]),
            r={int(d): int(e) for d, e in obj.get("r", {}).items()},
            t=int(obj["t"]),
        )
        rprime = {int(d): int(e) for d, e in obj.get("rprime", {}).items()}
        return cls(tup=tup, rprime=rprime, u=int(obj["u"]))


@dataclass(frozen=True)
class VerificationReport:
    verdict: str  # "verified-for-all-n" | "counterexample" | "precondition-failed"
    P: tuple[int, ...]
    nu: Fraction | None = None
    checked_n_max: int | None = None
    spot_checked_to: int | None = None
    witness: tuple[int, int, int] | None = None  # (n, t', residue)
    failed_stage: str | None = None
    delta_star: DeltaStarResult | None = None

    @property
    def ok(self) -> bool:
        return self.verdict == "verified-for-all-n"

    def to_json(self) -> dict:
        out: dict = {"verdict": self.verdict, "P": [str(t) for t in self.P]}
        if self.nu is not None:
            out["nu"] = f"{self.nu.numerator}/{self.nu.denominator}"
            out["floor_nu"] = str(self.nu.__floor__())
        if self.checked_n_max is not None:
            out["checked"] = [str(n) for n in range(self.checked_n_max + 1)]
        if self.spot_checked_to is not None:
            out["spot_checked_to"] = str(self.spot_checked_to)
        if self.witness is not None:
            n, tprime, residue = self.witness
            out["witness"] = {"n": str(n), "t_prime": str(tprime), "residue": str(residue)}
        if self.failed_stage is not None:
            out["failed_stage"] = self.failed_stage
        if self.delta_star is not None:
            out["delta_star_conditions"] = list(self.delta_star.conditions)
        return out


def verify_claim(claim: CongruenceClaim, spot_margin: int | None = None) -> VerificationReport:
    """Run the full pipeline for a claim; every outcome is a verdict.

    Stages: delta-star admissibility, coset representatives, cusp
    nonnegativity at every representative, the nu bound, then the finite
    coefficient check for n <= floor(nu) and every t' in P.  A verified
    verdict is spot-checked for spot_margin (default 10*m) further n.
    """
    tup = claim.tup
    ds = delta_star_check(tup)
    P = sorted(compute_P(tup))
    if not ds.passed:
        return VerificationReport(
            verdict="precondition-failed",
            P=tuple(P),
            failed_stage=f"delta-star (conditions {ds.failed()})",
            delta_star=ds,
        )
    try:
        reps = coset_reps(tup.N)
    except UnsupportedLevelError as exc:
        return VerificationReport(
            verdict="precondition-failed",
            P=tuple(P),
            failed_stage=f"coset-representatives ({exc})",
            delta_star=ds,
        )
    for rep in reps:
        bound = lower_bound_pmr(rep, tup) + p_star(rep, claim.rprime)
        if bound < 0:
            return VerificationReport(
                verdict="precondition-failed",
                P=tuple(P),
                failed_stage=f"cusp-lower-bound (gamma with c={rep.c}: {bound} < 0)",
                delta_star=ds,
            )
    nu = nu_bound(tup, claim.rprime)
    n_max = max(nu.__floor__(), -1)
    if spot_margin is None:
        spot_margin = 10 * tup.m
    spot_to = n_max + spot_margin
    if claim.u == 1:
        return VerificationReport(
            verdict="verified-for-all-n",
            P=tuple(P),
            nu=nu,
            checked_n_max=n_max,
            spot_checked_to=spot_to,
            delta_star=ds,
        )
    T = tup.m * max(spot_to, 0) + max(P)
    factors = [(d, e) for d, e in sorted(tup.r.items()) if e != 0]
    series = build_eta_product(factors, T, mod_domain(claim.u))
    for n in range(spot_to + 1):
        for tprime in P:
            residue = series[tup.m * n + tprime]
            if residue != 0:
                return VerificationReport(
                    verdict="counterexample",
                    P=tuple(P),
                    nu=nu,
                    checked_n_max=min(n - 1, n_max),
                    witness=(n, tprime, residue),
                    failed_stage="initial-cases" if n <= n_max else "spot-check",
                    delta_star=ds,
                )
    return VerificationReport(
        verdict="verified-for-all-n",
        P=tuple(P),
        nu=nu,
        checked_n_max=n_max,
        spot_checked_to=spot_to,
        delta_star=ds,
    )


def load_claim(path) -> CongruenceClaim:
    with open(path, "r", encoding="utf-8") as fp:
        return CongruenceClaim.from_json(json.load(fp))
