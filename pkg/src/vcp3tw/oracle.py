"""Brute-force ground truth and bounded-treewidth instance generators."""

from __future__ import annotations

import itertools
import random
from collections import Counter
from dataclasses import dataclass

from .decomposition import TreeDecomposition
from .graph import Graph, is_connected_induced, is_vcp3_set

VCP3_GUARD = 24
CVCP3_GUARD = 20


class TooLarge(ValueError):
    pass


def _guard(g: Graph, limit: int):
    if g.n > limit:
        raise TooLarge(f"brute force refused: n={g.n} exceeds {limit}")


def brute_vcp3(g: Graph) -> tuple[int, list[tuple[int, ...]]]:
    """Minimum VCP3 size and every optimal set, by increasing subset size."""
    _guard(g, VCP3_GUARD)
    for k in range(g.n + 1):
        found = [c for c in itertools.combinations(range(g.n), k) if is_vcp3_set(g, c)]
        if found:
            return k, found
    raise AssertionError("V itself is always a VCP3 set")


def max_dissociation_size(g: Graph) -> int:
    """Largest vertex set inducing maximum degree <= 1, scanning bitmasks."""
    _guard(g, VCP3_GUARD)
    adj = [sum(1 << u for u in g.adj[v]) for v in range(g.n)]
    best = 0
    for mask in range(1 << g.n):
        size = bin(mask).count("1")
        if size <= best:
            continue
        ok = True
        m = mask
        while m:
            low = m & -m
            v = low.bit_length() - 1
            if bin(adj[v] & mask).count("1") > 1:
                ok = False
                break
            m ^= low
        if ok:
            best = size
    return best


def brute_cvcp3(g: Graph, s=()) -> int | None:
    """Minimum connected VCP3 set containing ``s``; ``None`` if none exists.

    The empty set counts as a solution when ``s`` is empty and ``G`` already
    has maximum degree at most one.
    """
    _guard(g, CVCP3_GUARD)
    s = set(s)
    if not s and is_vcp3_set(g, ()):
        return 0
    rest = [v for v in range(g.n) if v not in s]
    for k in range(max(len(s), 1), g.n + 1):
        for extra in itertools.combinations(rest, k - len(s)):
            f = s.union(extra)
            if is_vcp3_set(g, f) and is_connected_induced(g, f):
                return k
    return None


def connected_sets(g: Graph):
    """Every nonempty vertex set inducing a connected subgraph, each once.

    Grows sets from their minimum vertex, only ever adding larger
    neighbours (the classic extension-set enumeration).
    """
    for root in range(g.n):
        def grow(current, frontier, banned):
            yield current
            frontier = list(frontier)
            for i, v in enumerate(frontier):
                new_banned = banned | set(frontier[:i + 1])
                new_frontier = frontier[i + 1:] + [
                    u for u in g.adj[v]
                    if u > root and u not in current and u not in new_banned
                    and u not in frontier
                ]
                yield from grow(current | {v}, dict.fromkeys(new_frontier), new_banned)

        start = [u for u in sorted(g.adj[root]) if u > root]
        yield from grow(frozenset([root]), dict.fromkeys(start), {root})


def brute_cvcp3_expand(g: Graph, s=()) -> int | None:
    """Second oracle path: scan connected sets instead of all subsets."""
    _guard(g, 12)
    s = set(s)
    if not s and is_vcp3_set(g, ()):
        return 0
    best = None
    for f in connected_sets(g):
        if s <= f and is_vcp3_set(g, f) and (best is None or len(f) < best):
            best = len(f)
    return best


def count_cut_pairs(g: Graph, s, v1: int, weights) -> Counter:
    """Count pairs (F, (F1, F2)) with F a VCP3 set containing ``s``, a cut
    without edges across it and ``v1`` on side one, keyed by
    ``(|F|, w(F))``."""
    _guard(g, 12)
    s = set(s) | {v1}
    counts: Counter = Counter()
    for mask in range(1 << g.n):
        f = [v for v in range(g.n) if mask >> v & 1]
        fs = set(f)
        if not s <= fs or not is_vcp3_set(g, f):
            continue
        others = [v for v in f if v != v1]
        key = (len(f), sum(weights[v] for v in f))
        for sides in itertools.product((1, 2), repeat=len(others)):
            side = dict(zip(others, sides))
            side[v1] = 1
            if all(side[u] == side[v] for u, v in g.edges if u in fs and v in fs):
                counts[key] += 1
    return counts


# --------------------------------------------------------------------------
# generators

FAMILIES = ("tree", "cycle", "cactus", "partial-k-tree", "random-gnm")


@dataclass(frozen=True)
class InstanceSpec:
    family: str
    n: int
    k: int = 2
    p: float = 0.3
    m: int | None = None
    seed: int = 0


def _permuted(n: int, edges, bags, rng: random.Random):
    perm = list(range(n))
    rng.shuffle(perm)
    g = Graph.from_edges(n, ((perm[u], perm[v]) for u, v in edges))
    return g, [[perm[v] for v in b] for b in bags]


def generate(spec: InstanceSpec) -> tuple[Graph, TreeDecomposition | None]:
    """Deterministic (graph, planted decomposition or None) for ``spec``."""
    rng = random.Random(spec.seed)
    n = spec.n
    if n < 0:
        raise ValueError("n must be nonnegative")
    if spec.family == "tree":
        if n < 1:
            raise ValueError("a tree needs at least one vertex")
        parent = [None] + [rng.randrange(i) for i in range(1, n)]
        edges = [(i, parent[i]) for i in range(1, n)]
        bags = [[i, parent[i]] for i in range(1, n)] or [[0]]
        g, bags = _permuted(n, edges, bags, rng)
        # bag i-1 holds {i, parent(i)} and hangs below its parent's bag;
        # bags of the root's children are chained to the first one
        first = None
        tree = []
        for i in range(1, n):
            if parent[i] != 0:
                tree.append((i - 1, parent[i] - 1))
            elif first is None:
                first = i
            else:
                tree.append((i - 1, first - 1))
        return g, TreeDecomposition(bags, tree)
    if spec.family == "cycle":
        if n < 3:
            raise ValueError("a cycle needs at least three vertices")
        edges = [(i, (i + 1) % n) for i in range(n)]
        bags = [[0, i, i + 1] for i in range(1, n - 1)]
        tree = [(i, i + 1) for i in range(len(bags) - 1)]
        return Graph.from_edges(n, edges), TreeDecomposition(bags, tree)
    if spec.family == "cactus":
        if n < 1:
            raise ValueError("a cactus needs at least one vertex")
        edges = []
        size = 1
        while size < n:
            at = rng.randrange(size)
            length = rng.randint(3, 5)
            if rng.random() < 0.3 or size + length - 1 > n:
                edges.append((at, size))
                size += 1
                continue
            ring = [at] + list(range(size, size + length - 1))
            edges += [(ring[i], ring[(i + 1) % length]) for i in range(length)]
            size += length - 1
        g, _ = _permuted(n, edges, [], rng)
        return g, None
    if spec.family == "partial-k-tree":
        k = spec.k
        if k < 1 or k >= n:
            raise ValueError(f"partial-{k}-tree needs 1 <= k < n (n={n})")
        base = list(range(k + 1))
        initial = set(itertools.combinations(base, 2))
        edges = sorted(initial)
        bags = [base]
        tree = []
        for v in range(k + 1, n):
            host = rng.randrange(len(bags))
            clique = list(bags[host])
            clique.remove(rng.choice(clique))
            edges += [(u, v) for u in clique]
            bags.append(clique + [v])
            tree.append((host, len(bags) - 1))
        kept = [e for e in edges if e in initial or rng.random() >= spec.p]
        g, bags = _permuted(n, kept, bags, rng)
        return g, TreeDecomposition(bags, tree)
    if spec.family == "random-gnm":
        m = spec.m if spec.m is not None else n
        pairs = list(itertools.combinations(range(n), 2))
        if m > len(pairs):
            raise ValueError(f"m={m} exceeds {len(pairs)} possible edges")
        return Graph.from_edges(n, rng.sample(pairs, m)), None
    raise ValueError(f"unknown family {spec.family!r}")
