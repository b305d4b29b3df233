"""Randomized Cut&Count decision procedure for connected VCP3.

Colorings use four states per bag vertex, as digits: ``ONE1`` (0, in F on
cut side one), ``ONE2`` (1, in F on side two), ``ZERO0`` (2, outside F and
isolated in ``G_t - F``) and ``ZERO1`` (3, outside with one neighbour).

All counts are kept modulo 2. For a fixed coloring, the parities over
``(i, w)`` (solution size, solution weight) form a 0/1 polynomial which is
packed into one Python integer: the coefficient of ``(i, w)`` sits in an
``s``-bit slot at slot index ``i * stride + w``. Shifting multiplies by a
monomial, XOR adds mod 2, and integer multiplication followed by masking the
low bit of every slot is the mod-2 product, since each slot is wide enough
to hold the exact coefficient count.

Randomness: weights come from :class:`random.Random` (MT19937) seeded with
the caller's integer seed; repetition ``r`` uses the ``r``-th block of
``n`` draws, each ``1 + floor(random() * 2n)``. ``random()`` is the stream
Python guarantees to reproduce across versions and platforms.
"""

from __future__ import annotations

import itertools
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .convolution import _disjoint_pairs
from .decomposition import Kind, NiceDecomposition, NiceNode
from .graph import Graph, is_vcp3_set
from .vcp3 import _at, evaluate_bottom_up

ONE1, ONE2, ZERO0, ZERO1 = 0, 1, 2, 3


@dataclass(frozen=True)
class Packing:
    """Slot layout for parity polynomials with ``i <= ilim``, ``w <= wlim``."""

    ilim: int
    wlim: int
    max_bag: int

    @property
    def stride(self) -> int:
        # sums of two child weights stay below the next size row
        return 2 * self.wlim + 1

    @property
    def bits(self) -> int:
        pairs = (self.ilim + 1) * (self.wlim + 1) << (self.max_bag + 1)
        return pairs.bit_length()

    def exponent(self, i: int, w: int) -> int:
        return self.bits * (i * self.stride + w)

    @property
    def valid(self) -> int:
        s = self.bits
        row = ((1 << (s * (self.wlim + 1))) - 1) // ((1 << s) - 1)
        step = s * self.stride
        return row * (((1 << (step * (self.ilim + 1))) - 1) // ((1 << step) - 1))

    def parity(self, packed: int, i: int, w: int) -> int:
        return (packed >> self.exponent(i, w)) & 1


@dataclass
class CountTable:
    """Parities ``A_t(i, w, f) mod 2`` of one node, packed per coloring."""

    node: int
    bag: tuple[int, ...]
    packing: Packing
    data: np.ndarray  # object array of shape (4,) * |bag|

    def entry(self, i: int, w: int, coloring: tuple[int, ...] = ()) -> int:
        return self.packing.parity(int(self.data[coloring]), i, w)

    @property
    def parities(self) -> np.ndarray:
        """Dense uint8 array indexed by (coloring index, i, w)."""
        pk = self.packing
        flat = self.data.reshape(-1)
        out = np.zeros((flat.size, pk.ilim + 1, pk.wlim + 1), dtype=np.uint8)
        for c, val in enumerate(flat):
            val = int(val)
            while val:
                low = val & -val
                slot = (low.bit_length() - 1) // pk.bits
                i, w = divmod(slot, pk.stride)
                out[c, i, w] = 1
                val ^= low
        return out


def draw_weights(rng: random.Random, n: int) -> list[int]:
    top = 2 * n
    return [1 + int(rng.random() * top) for _ in range(n)]


def _mask(arr, valid: int) -> np.ndarray:
    return np.asarray(np.asarray(arr, dtype=object) & valid, dtype=object)


def _zeros(shape) -> np.ndarray:
    out = np.empty(shape, dtype=object)
    out[...] = 0
    return out


@dataclass
class _Context:
    g: Graph
    s: frozenset[int]
    v1: int
    weights: list[int]
    packing: Packing
    valid: int = field(init=False)

    def __post_init__(self):
        self.valid = self.packing.valid


def _introduce(ctx: _Context, node: NiceNode, child: np.ndarray) -> np.ndarray:
    v = node.vertex
    p = node.bag.index(v)
    shifted = _mask(child << ctx.packing.exponent(1, ctx.weights[v]), ctx.valid)
    side_two = _zeros(child.shape) if v == ctx.v1 else shifted
    return np.stack([shifted, side_two, child, _zeros(child.shape)], axis=p)


def _introduce_edge(ctx: _Context, node: NiceNode, child: np.ndarray) -> np.ndarray:
    u, v = node.edge
    p, q = node.bag.index(u), node.bag.index(v)
    b = child.ndim
    out = child.copy()
    out[_at(b, {p: ZERO1, q: ZERO1})] = child[_at(b, {p: ZERO0, q: ZERO0})]
    dead = [(ONE1, ONE2), (ONE2, ONE1), (ZERO0, ZERO0), (ZERO0, ZERO1), (ZERO1, ZERO0)]
    if ctx.v1 in (u, v):
        dead.append((ONE2, ONE2))
    for a, c in dead:
        out[_at(b, {p: a, q: c})] = 0
    return out


def _forget(ctx: _Context, node: NiceNode, child: np.ndarray, child_bag) -> np.ndarray:
    v = node.vertex
    p = child_bag.index(v)
    # a vertex of S must end up in F; this is where its status is sealed
    states = (ONE1, ONE2) if v in ctx.s else (ONE1, ONE2, ZERO0, ZERO1)
    return np.bitwise_xor.reduce(np.take(child, states, axis=p), axis=p)


def _join(ctx: _Context, node: NiceNode, left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """For each assignment of bag vertices to side one, side two or "not in
    F", the ZERO1 sets of the two children must split the parent's ZERO1
    set disjointly: a sum-product subset convolution over the non-F part."""
    b = left.ndim
    pk = ctx.packing
    out = _zeros(left.shape)
    for pattern in itertools.product((ONE1, ONE2, None), repeat=b):
        in_f = [j for j, c in enumerate(pattern) if c is not None]
        z = b - len(in_f)
        idx = tuple(slice(ZERO0, ZERO1 + 1) if c is None else c for c in pattern)
        h1 = np.asarray(left[idx], dtype=object).reshape(-1)
        h2 = np.asarray(right[idx], dtype=object).reshape(-1)
        a, bb, starts = _disjoint_pairs(z)
        sums = np.add.reduceat(h1[a] * h2[bb], starts)
        shift = pk.exponent(len(in_f), sum(ctx.weights[node.bag[j]] for j in in_f))
        res = np.array([(int(x) >> shift) & ctx.valid for x in sums], dtype=object)
        out[idx] = res.reshape((2,) * z) if z else res[0]
    return out


_CONSISTENT = ((ONE1, ONE1, ONE1), (ONE2, ONE2, ONE2), (ZERO0, ZERO0, ZERO0),
               (ZERO1, ZERO0, ZERO1), (ZERO0, ZERO1, ZERO1))


def _join_direct(ctx: _Context, node: NiceNode, left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """Reference join: sum over every consistent pair of child colorings."""
    b = left.ndim
    pk = ctx.packing
    out = _zeros(left.shape)
    for combo in itertools.product(_CONSISTENT, repeat=b):
        f1 = tuple(c[0] for c in combo)
        f2 = tuple(c[1] for c in combo)
        f = tuple(c[2] for c in combo)
        out[f] = out[f] + int(left[f1]) * int(right[f2])
    for f in itertools.product(range(4), repeat=b):
        in_f = [j for j, c in enumerate(f) if c in (ONE1, ONE2)]
        shift = pk.exponent(len(in_f), sum(ctx.weights[node.bag[j]] for j in in_f))
        out[f] = (int(out[f]) >> shift) & ctx.valid
    return out


def count_parity_tables(g: Graph, nd: NiceDecomposition, s, v1: int, weights,
                        ilim: int | None = None, wlim: int | None = None,
                        keep_tables: bool = False, join: str = "sliced") -> CountTable | dict[int, CountTable]:
    """Root parity table of the Cut&Count recurrences.

    ``ilim``/``wlim`` truncate the size and weight axes (defaults ``n`` and
    ``2n**2``). Both only grow towards the root, so truncation never changes
    the surviving entries. With ``keep_tables`` every node's table is
    returned, keyed by node id.
    """
    if not 0 <= v1 < g.n:
        raise ValueError(f"v1={v1} is not a vertex")
    s = frozenset(s) or frozenset([v1])
    if v1 not in s:
        raise ValueError("v1 must belong to S")
    if len(weights) != g.n:
        raise ValueError("need one weight per vertex")
    ilim = g.n if ilim is None else ilim
    wlim = 2 * g.n * g.n if wlim is None else wlim
    pk = Packing(ilim, wlim, nd.width + 1)
    ctx = _Context(g, s, v1, list(weights), pk)
    nodes = nd.nodes
    tables: dict[int, np.ndarray] = {}
    join_fn = _join if join == "sliced" else _join_direct

    def compute(t: int) -> None:
        node = nodes[t]
        kids = node.children
        if node.kind is Kind.LEAF:
            tab = np.array(1, dtype=object)
        elif node.kind is Kind.INTRODUCE:
            tab = _introduce(ctx, node, tables[kids[0]])
        elif node.kind is Kind.INTRODUCE_EDGE:
            tab = _introduce_edge(ctx, node, tables[kids[0]])
        elif node.kind is Kind.FORGET:
            tab = _forget(ctx, node, tables[kids[0]], nodes[kids[0]].bag)
        else:
            tab = join_fn(ctx, node, tables[kids[0]], tables[kids[1]])
        tables[t] = np.asarray(tab, dtype=object)
        if not keep_tables:
            for c in kids:
                tables.pop(c, None)

    evaluate_bottom_up(nd, compute)
    if keep_tables:
        return {t: CountTable(t, nodes[t].bag, pk, tab) for t, tab in tables.items()}
    return CountTable(nd.root, (), pk, tables[nd.root])


def _run_repetition(g, nd, s, k, candidates, weights) -> bool:
    for v1 in candidates:
        root = count_parity_tables(g, nd, s or {v1}, v1, weights,
                                   ilim=k, wlim=2 * g.n * k)
        # entries with i < |S| are zero by construction, so any set bit is
        # an odd count for some size in |S|..k
        if int(root.data[()]):
            return True
    return False


def decide_constrained_cvcp3(g: Graph, nd: NiceDecomposition, s, k: int,
                             seed: int = 0, repetitions: int = 20,
                             threads: int = 1) -> bool:
    """Is there a connected VCP3 set F with ``S <= F`` and ``|F| <= k``?

    ``True`` is always correct. ``False`` is wrong with probability at most
    ``2**-repetitions``.
    """
    s = frozenset(s)
    if any(not 0 <= v < g.n for v in s):
        raise ValueError("S contains a non-vertex")
    if repetitions < 1:
        raise ValueError("repetitions must be positive")
    if k < 0:
        return False
    if not s and is_vcp3_set(g, ()):
        return True
    k = min(k, g.n)
    if len(s) > k:
        return False
    candidates = [min(s)] if s else list(range(g.n))
    rng = random.Random(seed)
    draws = [draw_weights(rng, g.n) for _ in range(repetitions)]
    if threads <= 1:
        return any(_run_repetition(g, nd, s, k, candidates, w) for w in draws)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        results = pool.map(lambda w: _run_repetition(g, nd, s, k, candidates, w), draws)
        return any(list(results))


def minimize_cvcp3(g: Graph, nd: NiceDecomposition, s=(), seed: int = 0,
                   repetitions: int = 20, threads: int = 1) -> int | None:
    """Smallest k the decision procedure accepts, or ``None``.

    May overshoot the optimum when every repetition misses it; never
    undershoots.
    """
    s = frozenset(s)
    if not s and is_vcp3_set(g, ()):
        return 0
    for k in range(max(len(s), 1), g.n + 1):
        if decide_constrained_cvcp3(g, nd, s, k, seed, repetitions, threads):
            return k
    return None
