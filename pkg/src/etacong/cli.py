"""Command-line driver: series expansion, oracles, congruence verification,
density and parity scans, and the explicit parity bound.

Subcommands: expand, oracle, verify, radu, hecke, density, parity-scan,
bound.  Reports are JSON on stdout with numbers rendered as decimal strings;
series can also be emitted as CSV.  Exit codes: 0 verified/ok, 1
counterexample or cross-check failure, 2 precondition, parse or resource
failure.  The coefficient ceiling (default 10^7) caps how long a modular
series a single invocation may allocate; override with ETACONG_MEM_CEILING.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from . import etaq, hecke, oracle, radu
from .arith import pentagonal_numbers_ascending
from .qseries import (
    EXACT,
    NAMED_SERIES,
    Series,
    build_eta_product,
    mod_domain,
    named_series,
    series_to_csv,
    series_to_json,
    shift,
)

DEFAULT_MEM_CEILING = 10_000_000
ORACLE_FUNCTIONS = ("eo", "eobar", "eou")


def memory_ceiling() -> int:
    raw = os.environ.get("ETACONG_MEM_CEILING")
    return int(raw) if raw else DEFAULT_MEM_CEILING


class ResourceCeilingError(ValueError):
    pass


def _check_ceiling(coefficients: int) -> None:
    ceiling = memory_ceiling()
    if coefficients > ceiling:
        raise ResourceCeilingError(
            f"request needs {coefficients} coefficients, ceiling is {ceiling} "
            "(override with ETACONG_MEM_CEILING)"
        )


# ---------------------------------------------------------------------------
# density scans


@dataclass(frozen=True)
class ScanConfig:
    """Divisibility scan of series[step*n + offset] mod modulus for n <= horizon."""

    series: str
    modulus: int
    step: int = 1
    offset: int = 0
    horizon: int = 100_000
    checkpoints: tuple[int, ...] = ()

    def __post_init__(self):
        if self.step < 1 or self.offset < 0:
            raise ValueError("need step >= 1 and offset >= 0")
        if self.modulus < 1:
            raise ValueError("modulus must be >= 1")
        cps = tuple(self.checkpoints) or (self.horizon,)
        if list(cps) != sorted(cps) or cps[-1] > self.horizon:
            raise ValueError("checkpoints must be ascending and at most the horizon")
        object.__setattr__(self, "checkpoints", cps)


@dataclass(frozen=True)
class DensityRow:
    horizon: int
    divisible: int
    fraction: Fraction

    @property
    def exception_ratio(self) -> Fraction:
        return 1 - self.fraction


@dataclass(frozen=True)
class DensityReport:
    config: ScanConfig
    rows: tuple[DensityRow, ...]

    def to_json(self) -> dict:
        return {
            "series": self.config.series,
            "modulus": str(self.config.modulus),
            "index_map": f"{self.config.step}n+{self.config.offset}",
            "rows": [
                {
                    "horizon": str(row.horizon),
                    "divisible": str(row.divisible),
                    "fraction": f"{row.fraction.numerator}/{row.fraction.denominator}",
                    "exception_ratio": f"{row.exception_ratio.numerator}/{row.exception_ratio.denominator}",
                }
                for row in self.rows
            ],
        }


def run_density(config: ScanConfig) -> DensityReport:
    """Count n <= X' with coefficient divisible by the modulus at each checkpoint."""
    T = config.step * config.horizon + config.offset
    _check_ceiling(T + 1)
    if config.modulus == 1:
        rows = tuple(DensityRow(X, X + 1, Fraction(1)) for X in config.checkpoints)
        return DensityReport(config, rows)
    series = named_series(config.series, T, mod_domain(config.modulus))
    rows = []
    divisible = 0
    n = 0
    for X in config.checkpoints:
        while n <= X:
            if series[config.step * n + config.offset] == 0:
                divisible += 1
            n += 1
        rows.append(DensityRow(X, divisible, Fraction(divisible, X + 1)))
    return DensityReport(config, rows)


# ---------------------------------------------------------------------------
# parity scan and explicit bound


@dataclass(frozen=True)
class BoundQuery:
    """Progression r mod t for the smallest odd EObar(2M) bound."""

    r: int
    t: int

    def __post_init__(self):
        if self.t < 1 or not 0 <= self.r < self.t:
            raise ValueError("need 0 <= r < t")

    @property
    def d(self) -> int:
        return gcd(12 * self.r - 1, self.t)

    @property
    def j(self) -> int:
        j = 0
        while 12 * 2**j <= self.t:
            j += 1
        return j


def smallest_odd_bound(query: BoundQuery) -> int | Fraction:
    """2^{9+j} 3^7 t^6 / d^2 * prod_{p | 6t} (1 - 1/p^2) - 2^j, exactly."""
    t, d, j = query.t, query.d, query.j
    value = Fraction(2 ** (9 + j) * 3**7 * t**6, d * d)
    x = 6 * t
    p = 2
    while x > 1:
        if x % p == 0:
            value *= 1 - Fraction(1, p * p)
            while x % p == 0:
                x //= p
        p += 1
    value -= 2**j
    return int(value) if value.denominator == 1 else value


def _odd_parity_impossible(r: int, t: int) -> bool:
    """EObar(2M) is odd only at M = 4*gp(k); gp(k) mod t has period 2t in k,
    so emptiness of the progression is decidable exactly."""
    hits = set()
    for k in range(-2 * t, 2 * t + 1):
        hits.add(4 * (k * (3 * k - 1) // 2) % t)
    return (r % t) not in hits


@dataclass(frozen=True)
class ParityScanReport:
    r: int
    t: int
    limit: int
    first_even: int | None
    first_odd: int | None
    odd_impossible: bool
    bound: int | Fraction

    def to_json(self) -> dict:
        return {
            "r": str(self.r),
            "t": str(self.t),
            "limit": str(self.limit),
            "first_even": None if self.first_even is None else str(self.first_even),
            "first_odd": None if self.first_odd is None else str(self.first_odd),
            "odd_impossible": self.odd_impossible,
            "bound": str(self.bound),
        }


def run_parity_scan(r: int, t: int, limit: int) -> ParityScanReport:
    """First M == r (mod t), M <= limit, of each parity of EObar(2M).

    Parity comes from the closed form (odd exactly at M = 4 times a
    generalized pentagonal number), so the odd side enumerates the sparse
    pentagonal support instead of walking the whole progression.
    """
    if not 0 <= r < t:
        raise ValueError("need 0 <= r < t")
    if limit < t:
        raise ValueError("limit must be at least t")
    first_even = None
    M = r
    while M <= limit:
        if oracle.pentagonal_parity_EObar(2 * M) == 0:
            first_even = M
            break
        M += t
    first_odd = None
    for gp in pentagonal_numbers_ascending():
        M = 4 * gp
        if M > limit:
            break
        if M % t == r:
            first_odd = M
            break
    bound = smallest_odd_bound(BoundQuery(r, t))
    return ParityScanReport(
        r=r,
        t=t,
        limit=limit,
        first_even=first_even,
        first_odd=first_odd,
        odd_impossible=_odd_parity_impossible(r, t),
        bound=bound,
    )


# ---------------------------------------------------------------------------
# oracle/series cross-checking


def _oracle_counts(fn: str, ns: Sequence[int], cap: int, jobs: int = 1) -> list[int]:
    counter = {"eo": oracle.count_EO, "eobar": oracle.count_EObar, "eou": oracle.count_EOu}[fn]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(counter, ns, [cap] * len(ns)))
    return [counter(n, cap) for n in ns]


def cross_check(fn: str, T: int, cap: int, jobs: int = 1) -> list[int]:
    """Indices where oracle counts and series coefficients disagree (empty = agree)."""
    series = named_series(fn, T, EXACT, enumeration_cap=max(cap, T) if fn == "eo" else cap)
    counts = _oracle_counts(fn, range(T + 1), max(cap, T), jobs)
    return [n for n in range(T + 1) if series[n] != counts[n]]


# ---------------------------------------------------------------------------
# argparse wiring


def _emit_series(series: Series, out: str, stream) -> None:
    if out == "csv":
        series_to_csv(series, stream)
    else:
        json.dump(series_to_json(series), stream)
        stream.write("\n")


def _cmd_expand(args) -> int:
    domain = mod_domain(args.mod) if args.mod else EXACT
    _check_ceiling(args.terms + 1)
    if args.name:
        series = named_series(args.name, args.terms, domain, enumeration_cap=args.cap)
    else:
        factors = [(d, e) for d, e in _parse_exponent_map(args.factors).items()]
        series = build_eta_product(factors, args.terms, domain)
    if args.cross_check:
        if args.name not in ORACLE_FUNCTIONS:
            print(f"no oracle available for {args.name!r}", file=sys.stderr)
            return 2
        horizon = min(args.terms, args.cap)
        bad = cross_check(args.name, horizon, args.cap, args.jobs)
        if bad:
            print(f"cross-check failed at indices {bad[:10]}", file=sys.stderr)
            return 1
    _emit_series(series, args.out, sys.stdout)
    return 0


def _cmd_oracle(args) -> int:
    if args.fn == "parity":
        ns = [args.n] if args.n is not None else list(range(args.upto + 1))
        values = [oracle.pentagonal_parity_EObar(n) for n in ns]
    else:
        ns = [args.n] if args.n is not None else list(range(args.upto + 1))
        for n in ns:
            if n > args.cap:
                raise ValueError(f"n={n} exceeds the enumeration cap {args.cap}")
        values = _oracle_counts(args.fn, ns, args.cap, args.jobs)
        if args.cross_check:
            bad = cross_check(args.fn, max(ns), args.cap, args.jobs)
            if bad:
                print(f"cross-check failed at indices {bad[:10]}", file=sys.stderr)
                return 1
    if args.out == "csv":
        print("index,count")
        for n, v in zip(ns, values):
            print(f"{n},{v}")
    else:
        print(json.dumps({"fn": args.fn, "counts": {str(n): str(v) for n, v in zip(ns, values)}}))
    return 0


def _verdict_exit(report: radu.VerificationReport) -> int:
    if report.verdict == "verified-for-all-n":
        return 0
    if report.verdict == "counterexample":
        return 1
    return 2


def _run_family_claim(obj: dict) -> int:
    mod8 = obj["kind"] == "thm2-family"
    index = hecke.family_index_mod8 if mod8 else hecke.family_index_mod2
    primes = [int(p) for p in obj["primes"]]
    j_values = [int(j) for j in obj.get("j_values", [1])]
    n_max = int(obj.get("n_max", 0))
    top = max(index(primes, j, n_max) for j in j_values)
    _check_ceiling(top + 1)
    report = hecke.verify_family(primes, j_values, range(n_max + 1), mod8=mod8)
    print(json.dumps(report.to_json()))
    return 0 if report.ok else 1


def _cmd_verify(args) -> int:
    try:
        with open(args.claim, "r", encoding="utf-8") as fp:
            obj = json.load(fp)
        kind = obj.get("kind", "radu")
        if kind == "radu":
            claim = radu.CongruenceClaim.from_json(obj)
            spot = args.spot_margin if args.spot_margin is not None else 10 * claim.tup.m
            _check_ceiling(claim.tup.m * (max(nu_floor(claim), -1) + spot) + claim.tup.m)
            report = radu.verify_claim(claim, spot_margin=spot)
            print(json.dumps(report.to_json()))
            return _verdict_exit(report)
        if kind in ("thm1-family", "thm2-family"):
            return _run_family_claim(obj)
        print(f"unknown claim kind {kind!r}", file=sys.stderr)
        return 2
    except (KeyError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"claim error: {exc}", file=sys.stderr)
        return 2


def nu_floor(claim: radu.CongruenceClaim) -> int:
    return radu.nu_bound(claim.tup, claim.rprime).__floor__()


def _parse_exponent_map(text: str) -> dict[int, int]:
    out: dict[int, int] = {}
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        d, e = item.split(":")
        out[int(d)] = int(e)
    return out


def _cmd_radu(args) -> int:
    tup = radu.RaduTuple(
        m=args.m, M=args.M, N=args.N, r=_parse_exponent_map(args.r), t=args.t
    )
    claim = radu.CongruenceClaim(
        tup=tup, rprime=_parse_exponent_map(args.rprime or ""), u=args.u
    )
    report = radu.verify_claim(claim, spot_margin=args.spot_margin)
    print(json.dumps(report.to_json()))
    return _verdict_exit(report)


def _cmd_hecke(args) -> int:
    if args.fj_check:
        report = hecke.fj_structure_check(args.terms)
        print(
            json.dumps(
                {
                    "checked_to": str(report.truncation),
                    "ok": report.ok,
                    "support_ok": {str(j): ok for j, ok in report.support_ok.items()},
                    "annihilated": {f"{j},{p}": ok for (j, p), ok in report.annihilated.items()},
                    "mapped": {
                        f"{j},{p}": {"class": str(tgt), "ok": ok}
                        for (j, p), (tgt, ok) in report.mapped.items()
                    },
                }
            )
        )
        return 0 if report.ok else 1
    _check_ceiling(args.terms + 1)
    if args.form == "eta8_3z":
        series = named_series(args.form, args.terms, EXACT)
        quotient = etaq.EtaQuotient(9, {3: 8})
    elif args.form == "thm2_form":
        series = named_series(args.form, args.terms, EXACT)
        quotient = etaq.EtaQuotient(2304, {96: 5, 24: -1})
    else:
        quotient = etaq.parse_eta_quotient(args.form)
        val = sum(d * r for d, r in quotient.exponents.items())
        if val % 24 != 0 or val < 0:
            print("custom form must have nonnegative integral q-valuation", file=sys.stderr)
            return 2
        factors = [(d, r) for d, r in quotient.exponents.items()]
        series = shift(build_eta_product(factors, args.terms, EXACT), val // 24)
    reports = []
    ok = True
    for p in args.primes:
        ctx = hecke.HeckeContext.for_eta_quotient(quotient, p)
        report = hecke.eigen_residual(series, ctx)
        ok = ok and report.ok
        reports.append(report.to_json())
    print(json.dumps({"form": args.form, "reports": reports}))
    return 0 if ok else 1


def _cmd_density(args) -> int:
    config = ScanConfig(
        series=args.series,
        modulus=args.mod,
        step=args.step,
        offset=args.offset,
        horizon=args.horizon,
        checkpoints=tuple(args.checkpoints or ()),
    )
    report = run_density(config)
    print(json.dumps(report.to_json()))
    return 0


def _cmd_parity_scan(args) -> int:
    report = run_parity_scan(args.r, args.t, args.limit)
    print(json.dumps(report.to_json()))
    return 0


def _cmd_bound(args) -> int:
    query = BoundQuery(args.r, args.t)
    value = smallest_odd_bound(query)
    print(
        json.dumps(
            {"r": str(args.r), "t": str(args.t), "d": str(query.d), "j": str(query.j), "bound": str(value)}
        )
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="etacong",
        description="q-series expansions of eta products and partition congruence checks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", help="expand a named series or eta-factor product")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--name", choices=NAMED_SERIES)
    group.add_argument("--factors", help="comma-separated scale:exponent pairs, e.g. '4:3,2:-2'")
    p.add_argument("-T", "--terms", type=int, required=True)
    p.add_argument("--mod", type=int, default=None)
    p.add_argument("--out", choices=("json", "csv"), default="json")
    p.add_argument("--cross-check", action="store_true")
    p.add_argument("--cap", type=int, default=oracle.DEFAULT_CAP)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(fn=_cmd_expand)

    p = sub.add_parser("oracle", help="brute-force partition counts")
    p.add_argument("--fn", choices=ORACLE_FUNCTIONS + ("parity",), required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("-n", type=int)
    group.add_argument("--upto", type=int)
    p.add_argument("--cross-check", action="store_true")
    p.add_argument("--cap", type=int, default=oracle.DEFAULT_CAP)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", choices=("json", "csv"), default="json")
    p.set_defaults(fn=_cmd_oracle)

    p = sub.add_parser("verify", help="verify a claim file (radu or family kind)")
    p.add_argument("claim")
    p.add_argument("--spot-margin", type=int, default=None)
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("radu", help="run the finite congruence criterion from flags")
    p.add_argument("-m", type=int, required=True)
    p.add_argument("-M", type=int, required=True)
    p.add_argument("-N", type=int, required=True)
    p.add_argument("--r", required=True, help="exponents as 'delta:r,delta:r'")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("-u", type=int, required=True)
    p.add_argument("--rprime", default="")
    p.add_argument("--spot-margin", type=int, default=None)
    p.set_defaults(fn=_cmd_radu)

    p = sub.add_parser("hecke", help="eigenvalue residual or structure checks")
    p.add_argument("--form", default="eta8_3z", help="named form or 'N; d:r, d:r'")
    p.add_argument("-p", "--primes", type=int, nargs="+", default=[5])
    p.add_argument("-T", "--terms", type=int, default=1000)
    p.add_argument("--fj-check", action="store_true")
    p.set_defaults(fn=_cmd_hecke)

    p = sub.add_parser("density", help="divisibility density of a named series")
    p.add_argument("--series", choices=NAMED_SERIES, required=True)
    p.add_argument("--mod", type=int, required=True)
    p.add_argument("--step", type=int, default=1)
    p.add_argument("--offset", type=int, default=0)
    p.add_argument("-X", "--horizon", type=int, required=True)
    p.add_argument("--checkpoints", type=int, nargs="*")
    p.set_defaults(fn=_cmd_density)

    p = sub.add_parser("parity-scan", help="first even/odd EObar(2M) in a progression")
    p.add_argument("-r", type=int, required=True)
    p.add_argument("-t", type=int, required=True)
    p.add_argument("--limit", type=int, default=10**6)
    p.set_defaults(fn=_cmd_parity_scan)

    p = sub.add_parser("bound", help="explicit bound for the smallest odd index")
    p.add_argument("-r", type=int, required=True)
    p.add_argument("-t", type=int, required=True)
    p.set_defaults(fn=_cmd_bound)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def console_main() -> None:  # pragma: no cover - setuptools entry point
    sys.exit(main())
