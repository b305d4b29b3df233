"""Min-plus subset convolution of set functions.

A set function over a ground set of size ``n`` is an int64 array of length
``2**n`` indexed by subset bitmask. ``INF`` marks the absorbing +infinity.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

INF = 1 << 40

MAX_GROUND = 24
_NAIVE_TABLE_LIMIT = 14


def as_set_function(values, ground_size: int | None = None) -> np.ndarray:
    arr = np.asarray(values, dtype=np.int64)
    if arr.ndim != 1:
        raise ValueError("set function must be one-dimensional")
    n = arr.size.bit_length() - 1
    if arr.size != 1 << n:
        raise ValueError(f"length {arr.size} is not a power of two")
    if ground_size is not None and n != ground_size:
        raise ValueError(f"expected ground size {ground_size}, got {n}")
    if n > MAX_GROUND:
        raise ValueError(f"ground size {n} exceeds {MAX_GROUND}")
    return np.minimum(arr, INF)


def _ground(g: np.ndarray, h: np.ndarray) -> int:
    if g.size != h.size:
        raise ValueError(f"ground size mismatch: {g.size} vs {h.size} entries")
    return g.size.bit_length() - 1


@lru_cache(maxsize=None)
def _disjoint_pairs(n: int):
    """All (A, B) with A & B == 0, grouped by A | B."""
    a = np.zeros(1, dtype=np.int64)
    b = np.zeros(1, dtype=np.int64)
    for i in range(n):
        bit = 1 << i
        a = np.concatenate([a, a | bit, a])
        b = np.concatenate([b, b, b | bit])
    y = a | b
    order = np.argsort(y, kind="stable")
    a, b, y = a[order], b[order], y[order]
    starts = np.searchsorted(y, np.arange(1 << n))
    return a, b, starts


def convolve_naive(g, h) -> np.ndarray:
    """``(g*h)(Y) = min g(A) + h(B)`` over disjoint ``A | B == Y`` by direct
    enumeration of all ``3**n`` pairs."""
    g, h = as_set_function(g), as_set_function(h)
    n = _ground(g, h)
    if n <= _NAIVE_TABLE_LIMIT:
        a, b, starts = _disjoint_pairs(n)
        vals = np.minimum(g[a] + h[b], INF)
        return np.minimum.reduceat(vals, starts)
    masks = np.arange(1 << n, dtype=np.int64)
    out = np.full(1 << n, INF, dtype=np.int64)
    for a in range(1 << n):
        if g[a] >= INF:
            continue
        bs = masks[(masks & a) == 0]
        np.minimum.at(out, a | bs, np.minimum(g[a] + h[bs], INF))
    return out


def _popcounts(n: int) -> np.ndarray:
    pc = np.zeros(1 << n, dtype=np.int64)
    for i in range(n):
        pc[1 << i:2 << i] = pc[:1 << i] + 1
    return pc


def _ranked_zeta(f: np.ndarray, n: int, sign: int) -> None:
    masks = np.arange(1 << n)
    for i in range(n):
        lo = masks[(masks >> i) & 1 == 0]
        hi = lo | (1 << i)
        if sign > 0:
            f[:, hi] = f[:, hi] + f[:, lo]
        else:
            f[:, hi] = f[:, hi] - f[:, lo]


def convolve_fast(g, h, value_bound: int) -> np.ndarray:
    """Min-plus subset convolution through ranked zeta/Moebius transforms.

    A finite value ``v`` becomes the monomial ``x**v`` and infinity becomes
    0; polynomials are evaluated at ``x = 2**s`` so each one is a single
    Python integer and ring arithmetic is exact. Every coefficient of the
    final product counts pairs (A, B) with a given sum, at most ``2**n``, so
    ``s = n + 1`` bits per coefficient never overflow and the minimum is the
    lowest set bit.
    """
    g, h = as_set_function(g), as_set_function(h)
    n = _ground(g, h)
    for f in (g, h):
        fin = f[f < INF]
        if fin.size and (fin.min() < 0 or fin.max() > value_bound):
            raise ValueError(f"finite values must lie in 0..{value_bound}")
    size = 1 << n
    fin_g, fin_h = g[g < INF], h[h < INF]
    if not fin_g.size or not fin_h.size:
        return np.full(size, INF, dtype=np.int64)
    # shifting both inputs by their minimum keeps the integers short
    base_g, base_h = int(fin_g.min()), int(fin_h.min())
    s = n + 1
    pc = _popcounts(n)

    def lift(f: np.ndarray, base: int) -> np.ndarray:
        out = np.zeros((n + 1, size), dtype=object)
        for mask in range(size):
            v = int(f[mask])
            if v < INF:
                out[pc[mask], mask] = 1 << (s * (v - base))
        return out

    gz, hz = lift(g, base_g), lift(h, base_h)
    _ranked_zeta(gz, n, +1)
    _ranked_zeta(hz, n, +1)
    prod = np.zeros((n + 1, size), dtype=object)
    for k in range(n + 1):
        acc = gz[0] * hz[k]
        for j in range(1, k + 1):
            acc = acc + gz[j] * hz[k - j]
        prod[k] = acc
    _ranked_zeta(prod, n, -1)
    out = np.empty(size, dtype=np.int64)
    for mask in range(size):
        val = prod[pc[mask], mask]
        if val == 0:
            out[mask] = INF
        else:
            low = (val & -val).bit_length() - 1
            out[mask] = low // s + base_g + base_h
    return out


def convolve(g, h, method: str = "auto", threshold: int = 8) -> np.ndarray:
    """Dispatch between the two implementations; ``auto`` goes fast once the
    ground set has ``threshold`` or more elements."""
    g, h = as_set_function(g), as_set_function(h)
    n = _ground(g, h)
    if method == "naive" or (method == "auto" and n < threshold):
        return convolve_naive(g, h)
    if method not in ("fast", "auto"):
        raise ValueError(f"unknown convolution method {method!r}")
    finite = np.concatenate([g[g < INF], h[h < INF]])
    if finite.size and finite.min() < 0:
        return convolve_naive(g, h)
    bound = int(finite.max()) if finite.size else 0
    return convolve_fast(g, h, bound)
