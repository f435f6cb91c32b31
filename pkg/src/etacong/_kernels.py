"""Hot loops for modular-coefficient series, JIT compiled when numba is available."""

from __future__ import annotations

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        if args and callable(args[0]):
            return args[0]
        return wrap


# Kernels assume coefficients and multiplier values already reduced to [0, m).
# Deferred reduction is safe as long as nnz * m^2 stays below 2^63; the wrappers
# in qseries only route here when that holds.


@njit(cache=True)
def mul_sparse_mod(dense, offs, vals, m):  # pragma: no cover - exercised via qseries
    T = dense.shape[0] - 1
    out = np.zeros(T + 1, dtype=np.int64)
    for i in range(offs.shape[0]):
        off = offs[i]
        v = vals[i]
        if v == 0:
            continue
        for n in range(T + 1 - off):
            out[n + off] += v * dense[n]
    for n in range(T + 1):
        out[n] %= m
    return out


@njit(cache=True)
def div_sparse_mod(num, offs, vals, c0inv, m):  # pragma: no cover
    # Solve b * (c0 + sum vals[i] q^offs[i]) = num with offs ascending, offs[i] >= 1.
    T = num.shape[0] - 1
    b = np.zeros(T + 1, dtype=np.int64)
    nnz = offs.shape[0]
    for n in range(T + 1):
        s = num[n]
        for i in range(nnz):
            off = offs[i]
            if off > n:
                break
            s -= vals[i] * b[n - off]
        b[n] = (s % m) * c0inv % m
    return b


def mul_sparse_mod_py(dense, offs, vals, m):
    T = len(dense) - 1
    out = [0] * (T + 1)
    for off, v in zip(offs, vals):
        if v == 0:
            continue
        for n in range(T + 1 - off):
            c = dense[n]
            if c:
                out[n + off] = (out[n + off] + v * c) % m
    return out


def div_sparse_mod_py(num, offs, vals, c0inv, m):
    T = len(num) - 1
    b = [0] * (T + 1)
    for n in range(T + 1):
        s = num[n]
        for off, v in zip(offs, vals):
            if off > n:
                break
            s -= v * b[n - off]
        b[n] = s * c0inv % m
    return b


def mul_sparse_exact(dense, offs, vals):
    T = len(dense) - 1
    out = [0] * (T + 1)
    for off, v in zip(offs, vals):
        if v == 0:
            continue
        for n in range(T + 1 - off):
            c = dense[n]
            if c:
                out[n + off] += v * c
    return out


def div_sparse_exact(num, offs, vals, c0inv):
    # c0inv is the exact inverse of the constant term, so +1 or -1
    T = len(num) - 1
    b = [0] * (T + 1)
    for n in range(T + 1):
        s = num[n]
        for off, v in zip(offs, vals):
            if off > n:
                break
            s -= v * b[n - off]
        b[n] = s * c0inv
    return b
