"""Minimum VCP3 set by dynamic programming over a nice tree decomposition.

A coloring of a bag assigns each vertex one of three states, stored as a
digit: ``IN`` (0, in the solution), ``ISO`` (1, outside and isolated in
``G_t - F``) or ``DEG1`` (2, outside with exactly one neighbour in
``G_t - F``). A node's table is an int64 array of shape ``(3,) * |bag|``;
axis ``j`` is the ``j``-th smallest bag vertex, so the flat C-order index
is the base-3 number with the first bag vertex as its leading digit.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .convolution import INF, convolve
from .decomposition import Kind, NiceDecomposition, NiceNode, validate_nice
from .graph import Graph, is_vcp3_set

IN, ISO, DEG1 = 0, 1, 2


def _sat(a: np.ndarray) -> np.ndarray:
    return np.minimum(a, INF)


def _at(ndim: int, assign: dict[int, object]) -> tuple:
    idx: list[object] = [slice(None)] * ndim
    for pos, val in assign.items():
        idx[pos] = val
    return tuple(idx)


def _check(node: NiceNode, kind: Kind):
    if node.kind is not kind:
        raise ValueError(f"expected a {kind.value} node, got {node.kind.value}")


def table_leaf(node: NiceNode) -> np.ndarray:
    _check(node, Kind.LEAF)
    return np.array(0, dtype=np.int64)


def table_introduce_vertex(node: NiceNode, child: np.ndarray) -> np.ndarray:
    _check(node, Kind.INTRODUCE)
    p = node.bag.index(node.vertex)
    return np.stack([_sat(child + 1), child, np.full_like(child, INF)], axis=p)


def table_introduce_edge(node: NiceNode, child: np.ndarray) -> np.ndarray:
    _check(node, Kind.INTRODUCE_EDGE)
    u, v = node.edge
    if u not in node.bag or v not in node.bag:
        raise ValueError(f"edge {node.edge} not inside bag {node.bag}")
    p, q = node.bag.index(u), node.bag.index(v)
    b = child.ndim
    out = child.copy()
    out[_at(b, {p: DEG1, q: DEG1})] = child[_at(b, {p: ISO, q: ISO})]
    for a, c in ((ISO, ISO), (ISO, DEG1), (DEG1, ISO)):
        out[_at(b, {p: a, q: c})] = INF
    return out


def table_forget(node: NiceNode, child: np.ndarray, child_bag) -> tuple[np.ndarray, np.ndarray]:
    """Return the table and, per entry, the forgotten vertex's minimising
    state (smallest state on ties)."""
    _check(node, Kind.FORGET)
    p = child_bag.index(node.vertex)
    return child.min(axis=p), child.argmin(axis=p).astype(np.uint8)


def _slice_for(b: int, ones: tuple[int, ...]) -> tuple:
    # in-solution positions fixed to IN, the rest range over (ISO, DEG1),
    # which reads as a subset bitmask with DEG1 meaning "in the set"
    return tuple(IN if j in ones else slice(ISO, DEG1 + 1) for j in range(b))


def table_join(node: NiceNode, left: np.ndarray, right: np.ndarray,
               convolution: str = "auto", threshold: int = 8) -> np.ndarray:
    """Fix the in-solution set R, then the DEG1 sets of the children must be
    disjoint with union equal to the parent's DEG1 set: a min-plus subset
    convolution over the bag minus R."""
    _check(node, Kind.JOIN)
    if left.shape != right.shape or left.ndim != len(node.bag):
        raise ValueError("join children must share the parent's bag")
    b = left.ndim
    out = np.full(left.shape, INF, dtype=np.int64)
    for r in range(b + 1):
        for ones in itertools.combinations(range(b), r):
            idx = _slice_for(b, ones)
            h1, h2 = left[idx], right[idx]
            conv = convolve(h1.ravel(), h2.ravel(), method=convolution, threshold=threshold)
            conv = np.where(conv < INF, conv - r, INF)
            out[idx] = conv.reshape(h1.shape)
    return out


# (left state, right state) -> parent state, per bag vertex
_CONSISTENT = ((IN, IN, IN), (ISO, ISO, ISO), (DEG1, ISO, DEG1), (ISO, DEG1, DEG1))


def table_join_direct(left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """Reference join: minimum over every consistent pair of child
    colorings, one pair at a time."""
    b = left.ndim
    out = np.full(left.shape, INF, dtype=np.int64)
    for combo in itertools.product(_CONSISTENT, repeat=b):
        f1 = tuple(c[0] for c in combo)
        f2 = tuple(c[1] for c in combo)
        f = tuple(c[2] for c in combo)
        v1, v2 = int(left[f1]), int(right[f2])
        if v1 >= INF or v2 >= INF:
            continue
        val = v1 + v2 - f.count(IN)
        if val < out[f]:
            out[f] = val
    return out


@dataclass
class DpRun:
    """Tables of one bottom-up pass, with what backtracking needs."""

    graph: Graph
    nd: NiceDecomposition
    tables: dict[int, np.ndarray] = field(default_factory=dict)
    choices: dict[int, np.ndarray] = field(default_factory=dict)

    @property
    def value(self) -> int:
        return int(self.tables[self.nd.root][()])

    def backtrack(self, t: int | None = None, coloring: tuple[int, ...] = ()) -> set[int]:
        """Rebuild a set F realising ``c[t, coloring]``; ties go to the
        lexicographically smallest child coloring."""
        nodes = self.nd.nodes
        if t is None:
            t = self.nd.root
        if self.tables.get(t) is not None and self.tables[t][coloring] >= INF:
            raise ValueError("no set realises an infinite entry")
        chosen: set[int] = set()
        stack = [(t, tuple(coloring))]
        while stack:
            t, f = stack.pop()
            node = nodes[t]
            if node.kind is Kind.LEAF:
                continue
            if node.kind is Kind.INTRODUCE:
                p = node.bag.index(node.vertex)
                if f[p] == IN:
                    chosen.add(node.vertex)
                stack.append((node.children[0], f[:p] + f[p + 1:]))
            elif node.kind is Kind.INTRODUCE_EDGE:
                p, q = (node.bag.index(x) for x in node.edge)
                if f[p] == DEG1 and f[q] == DEG1:
                    f = tuple(ISO if j in (p, q) else s for j, s in enumerate(f))
                stack.append((node.children[0], f))
            elif node.kind is Kind.FORGET:
                c = node.children[0]
                p = nodes[c].bag.index(node.vertex)
                alpha = int(self.choices[t][f])
                stack.append((c, f[:p] + (alpha,) + f[p:]))
            else:
                c1, c2 = node.children
                t1, t2 = self.tables[c1], self.tables[c2]
                deg1 = [j for j, s in enumerate(f) if s == DEG1]
                best = None
                for r in range(len(deg1) + 1):
                    for part in itertools.combinations(deg1, r):
                        f1 = tuple(ISO if (s == DEG1 and j not in part) else s for j, s in enumerate(f))
                        f2 = tuple(ISO if (s == DEG1 and j in part) else s for j, s in enumerate(f))
                        key = (int(t1[f1]) + int(t2[f2]), f1)
                        if best is None or key < best[0]:
                            best = (key, f2)
                (_, f1), f2 = best
                stack.append((c1, f1))
                stack.append((c2, f2))
        return chosen


def run_dp(g: Graph, nd: NiceDecomposition, convolution: str = "auto",
           threshold: int = 8, keep_tables: bool = False, threads: int = 1) -> DpRun:
    """Evaluate all tables bottom-up. Unless ``keep_tables`` is set, a
    child's table is dropped once its parent is done, except children of
    join nodes, whose tables backtracking still reads."""
    nodes = nd.nodes
    run = DpRun(g, nd)
    tables = run.tables

    def compute(t: int) -> None:
        node = nodes[t]
        kids = node.children
        if node.kind is Kind.LEAF:
            tab = table_leaf(node)
        elif node.kind is Kind.INTRODUCE:
            tab = table_introduce_vertex(node, tables[kids[0]])
        elif node.kind is Kind.INTRODUCE_EDGE:
            tab = table_introduce_edge(node, tables[kids[0]])
        elif node.kind is Kind.FORGET:
            tab, run.choices[t] = table_forget(node, tables[kids[0]], nodes[kids[0]].bag)
        else:
            tab = table_join(node, tables[kids[0]], tables[kids[1]], convolution, threshold)
        tables[t] = tab
        if not keep_tables and node.kind is not Kind.JOIN:
            for c in kids:
                tables.pop(c, None)

    evaluate_bottom_up(nd, compute, threads)
    return run


def evaluate_bottom_up(nd: NiceDecomposition, compute, threads: int = 1) -> None:
    """Call ``compute(t)`` once per node, children first. With several
    threads, independent subtrees run concurrently; the submission order is
    the post-order, so every task's children were started before it."""
    if threads <= 1:
        for t in range(len(nd.nodes)):
            compute(t)
        return
    futures = {}
    with ThreadPoolExecutor(max_workers=threads) as pool:
        for t, node in enumerate(nd.nodes):
            deps = [futures[c] for c in node.children]

            def task(t=t, deps=deps):
                for d in deps:
                    d.result()
                compute(t)

            futures[t] = pool.submit(task)
        for f in futures.values():
            f.result()


def solve_vcp3(g: Graph, nd: NiceDecomposition, convolution: str = "auto",
               threshold: int = 8, threads: int = 1, check: bool = True,
               shortcut: bool = True) -> tuple[int, list[int]]:
    """Minimum VCP3 set size and an optimal witness (sorted vertex list)."""
    if check:
        problems = validate_nice(nd, g)
        if problems:
            raise ValueError("invalid nice decomposition: " + problems[0])
    if shortcut and g.max_degree() <= 1:
        return 0, []
    run = run_dp(g, nd, convolution, threshold, threads=threads)
    size = run.value
    witness = sorted(run.backtrack())
    assert len(witness) == size and is_vcp3_set(g, witness)
    return size, witness
