"""Exact truncated q-series with ring operations and eta-product expansion.

A Series holds the coefficients of sum_{n=0}^{T} c(n) q^n either over the
integers (exact, arbitrary precision) or over Z/mZ (modular, stored as a
numpy int64 array).  All operations are pure: inputs are never mutated and
results are safe to share across threads.

Eta factors (q^d; q^d)_infty are expanded through the pentagonal number
theorem, so they have O(sqrt(T)) nonzero terms.  Products and quotients
always convolve against the sparser operand, which keeps multi-million-term
modular sweeps tractable without FFT multiplication (left as a future
optimization hook).
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import _kernels
from .arith import pentagonal_exponents

# Largest modulus for which the deferred-reduction numba kernels cannot
# overflow int64 (nnz * m^2 < 2^63 with generous room for nnz).
_KERNEL_MODULUS_LIMIT = 1 << 20


@dataclass(frozen=True)
class CoefficientDomain:
    """Coefficient ring: exact integers or integers modulo a fixed m >= 2."""

    kind: str
    modulus: int | None = None

    def __post_init__(self):
        if self.kind == "exact":
            if self.modulus is not None:
                raise ValueError("exact domain carries no modulus")
        elif self.kind == "modular":
            if self.modulus is None or self.modulus < 2:
                raise ValueError("modular domain needs a modulus >= 2")
        else:
            raise ValueError(f"unknown domain kind {self.kind!r}")

    @property
    def is_exact(self) -> bool:
        return self.kind == "exact"


EXACT = CoefficientDomain("exact")


def mod_domain(m: int) -> CoefficientDomain:
    return CoefficientDomain("modular", m)


@dataclass(frozen=True)
class EtaFactor:
    """One factor (q^scale; q^scale)_infty^exponent of an eta product."""

    scale: int
    exponent: int

    def __post_init__(self):
        if self.scale < 1:
            raise ValueError("eta factor scale must be >= 1")


class Series:
    """Truncated q-expansion sum_{n=0}^{truncation} coeffs[n] q^n."""

    __slots__ = ("domain", "truncation", "_coeffs")

    def __init__(self, domain: CoefficientDomain, coeffs, truncation: int | None = None):
        if domain.is_exact:
            data = tuple(int(c) for c in coeffs)
        else:
            arr = np.asarray(coeffs, dtype=np.int64) % domain.modulus
            arr.setflags(write=False)
            data = arr
        T = len(data) - 1
        if truncation is not None and truncation != T:
            raise ValueError(f"coeffs length {len(data)} does not match truncation {truncation}")
        if T < 0:
            raise ValueError("at least the constant coefficient is required")
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "truncation", T)
        object.__setattr__(self, "_coeffs", data)

    def __setattr__(self, name, value):
        raise AttributeError("Series is immutable")

    @classmethod
    def one(cls, domain: CoefficientDomain, T: int) -> "Series":
        if domain.is_exact:
            return cls(domain, [1] + [0] * T)
        arr = np.zeros(T + 1, dtype=np.int64)
        arr[0] = 1 % domain.modulus
        return cls(domain, arr)

    @classmethod
    def zero(cls, domain: CoefficientDomain, T: int) -> "Series":
        if domain.is_exact:
            return cls(domain, [0] * (T + 1))
        return cls(domain, np.zeros(T + 1, dtype=np.int64))

    @property
    def coeffs(self):
        return self._coeffs

    def coeff(self, n: int) -> int:
        if not 0 <= n <= self.truncation:
            raise IndexError(f"coefficient index {n} outside 0..{self.truncation}")
        return int(self._coeffs[n])

    __getitem__ = coeff

    def nonzeros(self) -> tuple[list[int], list[int]]:
        """Ascending offsets and values of the nonzero coefficients."""
        if self.domain.is_exact:
            offs = [n for n, c in enumerate(self._coeffs) if c]
            return offs, [self._coeffs[n] for n in offs]
        idx = np.nonzero(self._coeffs)[0]
        return idx.tolist(), self._coeffs[idx].tolist()

    def is_zero(self) -> bool:
        if self.domain.is_exact:
            return not any(self._coeffs)
        return not self._coeffs.any()

    def valuation(self) -> int | None:
        """Index of the first nonzero coefficient, or None for the zero series."""
        for n in range(self.truncation + 1):
            if self._coeffs[n]:
                return n
        return None

    def __eq__(self, other) -> bool:
        if not isinstance(other, Series):
            return NotImplemented
        if self.domain != other.domain or self.truncation != other.truncation:
            return False
        if self.domain.is_exact:
            return self._coeffs == other._coeffs
        return bool(np.array_equal(self._coeffs, other._coeffs))

    __hash__ = None

    def __repr__(self) -> str:
        head = ", ".join(str(int(c)) for c in list(self._coeffs[:6]))
        tail = ", ..." if self.truncation > 5 else ""
        dom = "exact" if self.domain.is_exact else f"mod {self.domain.modulus}"
        return f"Series({dom}, T={self.truncation}, [{head}{tail}])"

    def __mul__(self, other: "Series") -> "Series":
        return multiply(self, other)

    def __add__(self, other: "Series") -> "Series":
        return add(self, other)

    def __sub__(self, other: "Series") -> "Series":
        return add(self, scale(other, -1))

    def __neg__(self) -> "Series":
        return scale(self, -1)


# ---------------------------------------------------------------------------
# internal glue


def _dense_list(s: Series) -> list[int]:
    if s.domain.is_exact:
        return list(s._coeffs)
    return s._coeffs.tolist()


def _use_numba(domain: CoefficientDomain) -> bool:
    return (
        _kernels.HAVE_NUMBA
        and not domain.is_exact
        and domain.modulus <= _KERNEL_MODULUS_LIMIT
    )


def _mul_nonzeros(dense: Series, offs: Sequence[int], vals: Sequence[int], T: int) -> Series:
    """dense * (sum vals[i] q^offs[i]) truncated at T."""
    domain = dense.domain
    if domain.is_exact:
        out = _kernels.mul_sparse_exact(_dense_list(truncate(dense, T)), offs, vals)
        return Series(domain, out)
    m = domain.modulus
    vals = [v % m for v in vals]
    if _use_numba(domain):
        arr = np.asarray(truncate(dense, T)._coeffs, dtype=np.int64)
        out = _kernels.mul_sparse_mod(
            arr, np.asarray(offs, dtype=np.int64), np.asarray(vals, dtype=np.int64), m
        )
        return Series(domain, out)
    out = _kernels.mul_sparse_mod_py(_dense_list(truncate(dense, T)), offs, vals, m)
    return Series(domain, out)


def _div_nonzeros(num: Series, offs: Sequence[int], vals: Sequence[int], c0: int) -> Series:
    """num / (c0 + sum vals[i] q^offs[i]) with offs[i] >= 1 and c0 a unit."""
    domain = num.domain
    if domain.is_exact:
        if c0 not in (1, -1):
            raise ValueError(f"constant term {c0} is not a unit over the integers")
        out = _kernels.div_sparse_exact(_dense_list(num), offs, vals, c0)
        return Series(domain, out)
    m = domain.modulus
    try:
        c0inv = pow(c0 % m, -1, m)
    except ValueError:
        raise ValueError(f"constant term {c0} is not a unit mod {m}") from None
    vals = [v % m for v in vals]
    if _use_numba(domain):
        out = _kernels.div_sparse_mod(
            np.asarray(num._coeffs, dtype=np.int64),
            np.asarray(offs, dtype=np.int64),
            np.asarray(vals, dtype=np.int64),
            c0inv,
            m,
        )
        return Series(domain, out)
    out = _kernels.div_sparse_mod_py(_dense_list(num), offs, vals, c0inv, m)
    return Series(domain, out)


# ---------------------------------------------------------------------------
# ring operations


def multiply(a: Series, b: Series) -> Series:
    """Convolution product truncated at min(a.truncation, b.truncation)."""
    if a.domain != b.domain:
        raise ValueError("cannot multiply series over different coefficient domains")
    T = min(a.truncation, b.truncation)
    a2, b2 = truncate(a, T), truncate(b, T)
    offs_a, vals_a = a2.nonzeros()
    offs_b, vals_b = b2.nonzeros()
    # convolve against the sparser operand
    if len(offs_a) <= len(offs_b):
        return _mul_nonzeros(b2, offs_a, vals_a, T)
    return _mul_nonzeros(a2, offs_b, vals_b, T)


def invert(a: Series) -> Series:
    """Multiplicative inverse: multiply(a, invert(a)) is 1 up to the truncation."""
    c0 = int(a._coeffs[0])
    offs, vals = a.nonzeros()
    if offs and offs[0] == 0:
        offs, vals = offs[1:], vals[1:]
    return _div_nonzeros(Series.one(a.domain, a.truncation), offs, vals, c0)


def divide(a: Series, b: Series) -> Series:
    """a / b for b with unit constant term, truncated at min(a.T, b.T)."""
    if a.domain != b.domain:
        raise ValueError("cannot divide series over different coefficient domains")
    T = min(a.truncation, b.truncation)
    b2 = truncate(b, T)
    c0 = int(b2._coeffs[0])
    offs, vals = b2.nonzeros()
    if offs and offs[0] == 0:
        offs, vals = offs[1:], vals[1:]
    return _div_nonzeros(truncate(a, T), offs, vals, c0)


def add(a: Series, b: Series) -> Series:
    if a.domain != b.domain:
        raise ValueError("cannot add series over different coefficient domains")
    T = min(a.truncation, b.truncation)
    if a.domain.is_exact:
        return Series(a.domain, [a._coeffs[n] + b._coeffs[n] for n in range(T + 1)])
    return Series(a.domain, a._coeffs[: T + 1] + b._coeffs[: T + 1])


def scale(a: Series, c: int) -> Series:
    if a.domain.is_exact:
        return Series(a.domain, [c * x for x in a._coeffs])
    return Series(a.domain, (c % a.domain.modulus) * a._coeffs)


def shift(a: Series, k: int) -> Series:
    """Multiply by q^k (k >= 0): prepend k zero coefficients, keep truncation."""
    if k < 0:
        raise ValueError("shift exponent must be nonnegative")
    T = a.truncation
    if a.domain.is_exact:
        return Series(a.domain, (0,) * min(k, T + 1) + a._coeffs[: max(T + 1 - k, 0)])
    out = np.zeros(T + 1, dtype=np.int64)
    if k <= T:
        out[k:] = a._coeffs[: T + 1 - k]
    return Series(a.domain, out)


def truncate(a: Series, T: int) -> Series:
    if T > a.truncation:
        raise ValueError("cannot extend a truncated series")
    if T == a.truncation:
        return a
    return Series(a.domain, a._coeffs[: T + 1])


def reduce_series(a: Series, m: int) -> Series:
    """Image of an exact series in the mod-m domain."""
    if not a.domain.is_exact:
        raise ValueError("reduce_series expects an exact series")
    return Series(mod_domain(m), [c % m for c in a._coeffs])


# ---------------------------------------------------------------------------
# eta products


def expand_eta_factor(factor: EtaFactor, T: int, domain: CoefficientDomain) -> Series:
    """Expansion of prod_{n>=1}(1 - q^{n*scale})^exponent truncated at q^T."""
    if T < 0:
        raise ValueError("truncation must be nonnegative")
    e = factor.exponent
    if e == 0:
        return Series.one(domain, T)
    offs, vals = pentagonal_exponents(T, factor.scale)
    acc = Series.one(domain, T)
    for _ in range(abs(e)):
        if e > 0:
            acc = _mul_nonzeros(acc, offs, vals, T)
        else:
            acc = _div_nonzeros(acc, offs[1:], vals[1:], 1)
    return acc


def build_eta_product(
    factors: Iterable[EtaFactor | tuple[int, int]], T: int, domain: CoefficientDomain
) -> Series:
    """Product of eta factors; negative exponents go through series division."""
    factors = [f if isinstance(f, EtaFactor) else EtaFactor(*f) for f in factors]
    if not factors:
        raise ValueError("eta product needs at least one factor")
    acc = Series.one(domain, T)
    for f in factors:
        if f.exponent == 0:
            continue
        offs, vals = pentagonal_exponents(T, f.scale)
        for _ in range(abs(f.exponent)):
            if f.exponent > 0:
                acc = _mul_nonzeros(acc, offs, vals, T)
            else:
                acc = _div_nonzeros(acc, offs[1:], vals[1:], 1)
    return acc


# Named generating functions.  Values are (q-power shift, eta factors).
_NAMED_PRODUCTS: Mapping[str, tuple[int, tuple[tuple[int, int], ...]]] = {
    # partitions counted by EObar: (q^4;q^4)^3 / (q^2;q^2)^2
    "eobar": (0, ((4, 3), (2, -2))),
    # Uncu's function: 1/(q^2;q^4)^2 = (q^4;q^4)^2 / (q^2;q^2)^2
    "eou": (0, ((4, 2), (2, -2))),
    # EObar(2n): (q^2;q^2)^3 / (q;q)^2
    "eobar_even": (0, ((2, 3), (1, -2))),
    # EOu(2n): (q^2;q^2)^2 / (q;q)^2
    "eou_even": (0, ((2, 2), (1, -2))),
    # q (q^3;q^3)^8, the expansion of eta^8(3z)
    "eta8_3z": (1, ((3, 8),)),
    # q^19 (q^96;q^96)^5 / (q^24;q^24), the expansion of eta^5(96z)/eta(24z)
    "thm2_form": (19, ((96, 5), (24, -1))),
}

NAMED_SERIES = ("eobar", "eo", "eou", "eobar_even", "eou_even", "eta8_3z", "thm2_form")


def named_series(
    name: str, T: int, domain: CoefficientDomain = EXACT, *, enumeration_cap: int = 60
) -> Series:
    """Named q-expansions; see NAMED_SERIES for the accepted names.

    "eo" has no known product form and is generated from the brute-force
    partition counter, so its truncation is limited by enumeration_cap.
    """
    if T < 0:
        raise ValueError("truncation must be nonnegative")
    if name == "eo":
        from . import oracle

        if T > enumeration_cap:
            raise ValueError(
                f"the eo series is enumeration-backed; T={T} exceeds cap {enumeration_cap}"
            )
        counts = [oracle.count_EO(n, cap=enumeration_cap) for n in range(T + 1)]
        return Series(domain, counts)
    try:
        val, factors = _NAMED_PRODUCTS[name]
    except KeyError:
        raise ValueError(f"unknown series name {name!r}; expected one of {NAMED_SERIES}") from None
    if T < val:
        return Series.zero(domain, T)
    return shift(build_eta_product(factors, T, domain), val) if val else build_eta_product(
        factors, T, domain
    )


def extract_progression(a: Series, m: int, t: int) -> Series:
    """Sub-series b with b[n] = a[m*n + t], truncated at floor((a.T - t)/m)."""
    if not 0 <= t < m:
        raise ValueError("need 0 <= t < m")
    if a.truncation < t:
        raise ValueError("series too short for the requested progression")
    Tb = (a.truncation - t) // m
    if a.domain.is_exact:
        return Series(a.domain, a._coeffs[t :: m][: Tb + 1])
    return Series(a.domain, a._coeffs[t :: m][: Tb + 1].copy())


def dissection_check(T: int) -> bool:
    """Exact check of the even/odd split of 1/(q;q)^2 up to q^T.

    Verifies 1/(q;q)^2 = (q^8)^5 / ((q^2)^5 (q^16)^2)
                       + 2q (q^4)^2 (q^16)^2 / ((q^2)^5 (q^8))
    where (q^d) abbreviates (q^d;q^d)_infty.
    """
    if T < 2:
        raise ValueError("dissection check needs T >= 2")
    lhs = build_eta_product([(1, -2)], T, EXACT)
    even = build_eta_product([(8, 5), (2, -5), (16, -2)], T, EXACT)
    odd = build_eta_product([(4, 2), (16, 2), (2, -5), (8, -1)], T, EXACT)
    rhs = add(even, shift(scale(odd, 2), 1))
    return lhs == rhs


# ---------------------------------------------------------------------------
# serialization


def series_to_json(s: Series) -> dict:
    dom: dict = {"kind": s.domain.kind}
    if not s.domain.is_exact:
        dom["modulus"] = s.domain.modulus
    return {
        "domain": dom,
        "truncation": s.truncation,
        "coeffs": [str(int(c)) for c in list(s._coeffs)],
    }


def series_from_json(obj: dict) -> Series:
    dom = obj["domain"]
    domain = EXACT if dom["kind"] == "exact" else mod_domain(int(dom["modulus"]))
    coeffs = [int(c) for c in obj["coeffs"]]
    return Series(domain, coeffs, truncation=int(obj["truncation"]))


def dump_series(s: Series, fp) -> None:
    json.dump(series_to_json(s), fp)


def load_series(fp) -> Series:
    return series_from_json(json.load(fp))


def series_to_csv(s: Series, fp) -> None:
    writer = csv.writer(fp)
    writer.writerow(["index", "coefficient"])
    for n in range(s.truncation + 1):
        writer.writerow([n, int(s._coeffs[n])])


def series_from_csv(fp, domain: CoefficientDomain = EXACT) -> Series:
    reader = csv.reader(fp)
    rows = [row for row in reader if row]
    if rows and rows[0][0] == "index":
        rows = rows[1:]
    coeffs = [0] * len(rows)
    for idx, val in rows:
        coeffs[int(idx)] = int(val)
    return Series(domain, coeffs)
