"""Hecke operator T_p on q-expansions, eigenform checks, and the two
congruence-index families for the EObar counting function.

The prime-square families: for primes p_1..p_{k+1} with p_i >= 5 and
p_i == 2 (mod 3), and j not divisible by p_{k+1},

    EObar(p_1^2...p_{k+1}^2 n + (p_1^2...p_k^2 p_{k+1} (3j + p_{k+1}) - 1)/3)

is even; and for primes p_i == 1 (mod 24) such that EObar((19 p_i - 1)/3)
is divisible by 8,

    EObar(8 p_1^2...p_{k+1}^2 n + (p_1^2...p_k^2 p_{k+1} (24j + 19 p_{k+1}) - 1)/3)

is divisible by 8.  Verification reads the eobar series in the matching
modular domain directly, so it is an evidence path independent of the
Hecke recurrences that motivate the index formulas.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, prod
from typing import Mapping, Sequence

from . import etaq
from .arith import is_prime, primes_up_to
from .qseries import EXACT, Series, build_eta_product, mod_domain, named_series, shift


@dataclass(frozen=True)
class HeckeContext:
    """Weight, character value and prime for one T_p application."""

    p: int
    weight: int
    chi_p: int = 1

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.weight < 1:
            raise ValueError("weight must be >= 1")
        if self.chi_p not in (-1, 1):
            raise ValueError("character value must be +1 or -1")

    @classmethod
    def for_eta_quotient(cls, eq: etaq.EtaQuotient, p: int) -> "HeckeContext":
        w = etaq.weight(eq)
        if w.denominator != 1:
            raise ValueError("Hecke context needs an integral weight")
        return cls(p=p, weight=int(w), chi_p=etaq.character(eq, p))


@dataclass(frozen=True)
class EigenReport:
    """Result of checking a(pn) + chi(p) p^{w-1} a(n/p) = lambda a(n)."""

    p: int
    lam: int
    checked_to: int
    status: str  # "exact-match" or "mismatch"
    mismatch_at: int | None = None

    @property
    def ok(self) -> bool:
        return self.status == "exact-match"

    def to_json(self) -> dict:
        out = {
            "p": str(self.p),
            "lambda": str(self.lam),
            "checked_to": str(self.checked_to),
            "status": self.status,
        }
        if self.mismatch_at is not None:
            out["mismatch_at"] = str(self.mismatch_at)
        return out


def _reject_modular_information_loss(f: Series, ctx: HeckeContext) -> None:
    if f.domain.is_exact:
        return
    if ctx.weight > 1 and gcd(ctx.p, f.domain.modulus) > 1:
        raise ValueError(
            f"T_{ctx.p} at weight {ctx.weight} loses information mod {f.domain.modulus}"
        )


def apply_Tp(f: Series, ctx: HeckeContext) -> Series:
    """g[n] = f[p n] + chi(p) p^{weight-1} f[n/p], truncated at floor(T/p)."""
    p = ctx.p
    if f.truncation < p:
        raise ValueError(f"truncation {f.truncation} too small for T_{p}")
    _reject_modular_information_loss(f, ctx)
    w = ctx.chi_p * p ** (ctx.weight - 1)
    Tg = f.truncation // p
    coeffs = []
    for n in range(Tg + 1):
        c = f[p * n]
        if n % p == 0:
            c += w * f[n // p]
        coeffs.append(c)
    return Series(f.domain, coeffs)


def eigen_residual(f: Series, ctx: HeckeContext) -> EigenReport:
    """Read lambda(p) off the normalized expansion and verify the eigenvalue
    identity at every index where both sides are computable."""
    v = f.valuation()
    if v is None or f[v] != 1:
        raise ValueError("eigen check needs a normalized series (leading coefficient 1)")
    p = ctx.p
    if f.truncation < p * v or f.truncation < p:
        raise ValueError("truncation too small to read the eigenvalue")
    _reject_modular_information_loss(f, ctx)
    lam = f[p * v]
    w = ctx.chi_p * p ** (ctx.weight - 1)
    checked_to = f.truncation // p
    modulus = None if f.domain.is_exact else f.domain.modulus
    for n in range(checked_to + 1):
        lhs = f[p * n] + (w * f[n // p] if n % p == 0 else 0)
        diff = lhs - lam * f[n]
        if (diff % modulus if modulus else diff) != 0:
            return EigenReport(p, lam, checked_to=n - 1, status="mismatch", mismatch_at=n)
    return EigenReport(p, lam, checked_to=checked_to, status="exact-match")


# ---------------------------------------------------------------------------
# congruence families


@dataclass(frozen=True)
class FamilyInstance:
    primes: tuple[int, ...]
    j: int
    n: int
    index: int
    modulus: int


def _family_index(primes: Sequence[int], j: int, n: int, *, mod8: bool) -> int:
    primes = tuple(primes)
    if not primes:
        raise ValueError("at least one prime is required")
    for p in primes:
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if mod8:
            if p % 24 != 1:
                raise ValueError(f"prime {p} is not 1 mod 24")
        else:
            if p < 5 or p % 3 != 2:
                raise ValueError(f"prime {p} must be >= 5 and 2 mod 3")
    if n < 0:
        raise ValueError("n must be nonnegative")
    pk = primes[-1]
    if j % pk == 0:
        raise ValueError(f"j={j} must not be divisible by {pk}")
    square = prod(p * p for p in primes)
    lead = prod(p * p for p in primes[:-1])
    if mod8:
        numerator = lead * pk * (24 * j + 19 * pk) - 1
    else:
        numerator = lead * pk * (3 * j + pk) - 1
    if numerator % 3 != 0:
        raise ValueError("index formula did not produce an integer")
    base = numerator // 3
    return (8 if mod8 else 1) * square * n + base


def family_index_mod2(primes: Sequence[int], j: int, n: int) -> int:
    """Index of the mod-2 family member for primes >= 5 congruent to 2 mod 3."""
    return _family_index(primes, j, n, mod8=False)


def family_index_mod8(primes: Sequence[int], j: int, n: int) -> int:
    """Index of the mod-8 family member for primes congruent to 1 mod 24."""
    return _family_index(primes, j, n, mod8=True)


def mod8_eligibility_index(p: int) -> int:
    """EObar argument whose divisibility by 8 qualifies p for the mod-8 family."""
    if p % 24 != 1:
        raise ValueError(f"prime {p} is not 1 mod 24")
    return (19 * p - 1) // 3


@dataclass(frozen=True)
class FamilyReport:
    modulus: int
    checked: int
    failures: tuple[tuple[FamilyInstance, int], ...]

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "modulus": str(self.modulus),
            "checked": str(self.checked),
            "ok": self.ok,
            "failures": [
                {
                    "primes": [str(p) for p in inst.primes],
                    "j": str(inst.j),
                    "n": str(inst.n),
                    "index": str(inst.index),
                    "residue": str(res),
                }
                for inst, res in self.failures
            ],
        }


def _coefficient_mod(series: Series, index: int, modulus: int) -> int:
    if not series.domain.is_exact and series.domain.modulus % modulus != 0:
        raise ValueError(
            f"series modulus {series.domain.modulus} cannot resolve residues mod {modulus}"
        )
    return series[index] % modulus


def verify_family(
    primes: Sequence[int],
    j_values: Sequence[int],
    n_values: Sequence[int],
    *,
    mod8: bool,
    series: Series | None = None,
) -> FamilyReport:
    """Check every (j, n) family instance against the eobar series.

    For the mod-8 family, every prime's eligibility index is checked first.
    A missing series is built in the matching modular domain just large
    enough for the grid.
    """
    modulus = 8 if mod8 else 2
    indices = [
        (FamilyInstance(tuple(primes), j, n, _family_index(primes, j, n, mod8=mod8), modulus))
        for j in j_values
        for n in n_values
    ]
    need = max(inst.index for inst in indices)
    eligibility: list[int] = []
    if mod8:
        eligibility = [mod8_eligibility_index(p) for p in primes]
        need = max([need, *eligibility])
    if series is None:
        series = named_series("eobar", need, mod_domain(modulus))
    if series.truncation < need:
        raise ValueError(f"series truncated at {series.truncation}, need {need}")
    for p, eidx in zip(primes, eligibility):
        if _coefficient_mod(series, eidx, 8) != 0:
            raise ValueError(f"prime {p} fails the mod-8 eligibility check at index {eidx}")
    failures = []
    for inst in indices:
        res = _coefficient_mod(series, inst.index, modulus)
        if res != 0:
            failures.append((inst, res))
    return FamilyReport(modulus=modulus, checked=len(indices), failures=tuple(failures))


def eligible_primes_mod8(limit: int, series: Series | None = None) -> list[int]:
    """Primes p <= limit with p == 1 (mod 24) and EObar((19p-1)/3) == 0 (mod 8)."""
    if limit < 2:
        raise ValueError("limit must be at least 2")
    candidates = [p for p in primes_up_to(limit) if p % 24 == 1]
    if not candidates:
        return []
    need = mod8_eligibility_index(candidates[-1])
    if series is None:
        series = named_series("eobar", need, mod_domain(8))
    if series.truncation < need:
        raise ValueError(f"series truncated at {series.truncation}, need {need}")
    return [p for p in candidates if _coefficient_mod(series, mod8_eligibility_index(p), 8) == 0]


# ---------------------------------------------------------------------------
# the four weight-2 forms on Gamma_0(2304) supported on classes mod 24

_FJ_FACTORS: Mapping[int, tuple[tuple[int, int], ...]] = {
    1: ((24, 5), (96, -1)),
    7: ((24, 3), (96, 1)),
    13: ((24, 1), (96, 3)),
    19: ((96, 5), (24, -1)),
}


def fj_form(j: int, T: int) -> Series:
    """q^j times the eta-factor product supported on exponents == j (mod 24)."""
    if j not in _FJ_FACTORS:
        raise ValueError(f"j must be one of {sorted(_FJ_FACTORS)}")
    return shift(build_eta_product(_FJ_FACTORS[j], T, EXACT), j)


def fj_eta_quotient(j: int) -> etaq.EtaQuotient:
    return etaq.EtaQuotient(2304, dict(_FJ_FACTORS[j]))


@dataclass(frozen=True)
class FjStructureReport:
    truncation: int
    support_ok: Mapping[int, bool]
    annihilated: Mapping[tuple[int, int], bool]
    mapped: Mapping[tuple[int, int], tuple[int, bool]]

    @property
    def ok(self) -> bool:
        return (
            all(self.support_ok.values())
            and all(self.annihilated.values())
            and all(ok for _, ok in self.mapped.values())
        )


def fj_structure_check(
    T: int,
    annihilation_primes: Sequence[int] = (5, 11, 17, 23),
    mapping_primes: Sequence[int] = (13, 19, 37, 43, 73),
) -> FjStructureReport:
    """Support classes mod 24 and the T_p action on the four forms.

    (a) each form is supported on exponents == j (mod 24);
    (b) T_p annihilates every form for p == 5, 11, 17, 23 (mod 24);
    (c) for p coprime to 24, T_p maps the class-j form into the class
        p*j mod 24.
    """
    if T < 500:
        raise ValueError("structure check needs T >= 500")
    for p in annihilation_primes:
        if p % 24 not in (5, 11, 17, 23):
            raise ValueError(f"annihilation prime {p} is not 5, 11, 17 or 23 mod 24")
    for p in mapping_primes:
        if gcd(p, 24) != 1:
            raise ValueError(f"mapping prime {p} is not coprime to 24")
    support_ok = {}
    annihilated = {}
    mapped = {}
    for j in sorted(_FJ_FACTORS):
        f = fj_form(j, T)
        offs, _ = f.nonzeros()
        support_ok[j] = all(n % 24 == j for n in offs)
        quotient = fj_eta_quotient(j)
        for p in annihilation_primes:
            ctx = HeckeContext.for_eta_quotient(quotient, p)
            annihilated[(j, p)] = apply_Tp(f, ctx).is_zero()
        for p in mapping_primes:
            ctx = HeckeContext.for_eta_quotient(quotient, p)
            g = apply_Tp(f, ctx)
            target = p * j % 24
            offs_g, _ = g.nonzeros()
            mapped[(j, p)] = (target, all(n % 24 == target for n in offs_g))
    return FjStructureReport(
        truncation=T, support_ok=support_ok, annihilated=annihilated, mapped=mapped
    )
