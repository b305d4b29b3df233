import itertools
import random
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vcp3tw.cutcount import (ONE1, ONE2, ZERO0, ZERO1, count_parity_tables,
                             decide_constrained_cvcp3, draw_weights, minimize_cvcp3)
from vcp3tw.decomposition import heuristic_decompose, make_nice
from vcp3tw.graph import Graph
from vcp3tw.oracle import brute_cvcp3, count_cut_pairs

from .conftest import complete, cycle, path, small_graphs, subgraph_view


def _nice(g, strategy="min-degree"):
    return make_nice(heuristic_decompose(g, strategy), g)


def _root_parities(g, s, v1, weights, join="sliced"):
    root = count_parity_tables(g, _nice(g), s, v1, weights, join=join)
    pk = root.packing
    return {(i, w) for i in range(pk.ilim + 1) for w in range(pk.wlim + 1) if root.entry(i, w)}


def _odd_keys(counts):
    return {key for key, c in counts.items() if c % 2}


def test_single_vertex():
    g = Graph.from_edges(1, [])
    assert _root_parities(g, {0}, 0, [2]) == {(1, 2)}


def test_k2():
    g = path(2)
    weights = [1, 3]
    odd = _root_parities(g, {0}, 0, weights)
    assert (2, 4) in odd
    assert count_cut_pairs(g, {0}, 0, weights)[(2, 4)] == 1
    assert odd == _odd_keys(count_cut_pairs(g, {0}, 0, weights))


def test_disconnected_candidates_cancel():
    # every 2-set breaking both P3s is disconnected, so its cut count is even
    g = Graph.from_edges(6, [(0, 1), (1, 2), (3, 4), (4, 5)])
    rng = random.Random(7)
    for _ in range(10):
        weights = draw_weights(rng, g.n)
        assert not any(i == 2 for i, _ in _root_parities(g, {1}, 1, weights))


@settings(max_examples=40, deadline=None)
@given(small_graphs(7), st.randoms(use_true_random=False), st.sampled_from(["sliced", "direct"]))
def test_root_parity_identity(g, rng, join):
    if not g.n:
        return
    weights = draw_weights(rng, g.n)
    v1 = rng.randrange(g.n)
    s = {v1} | {v for v in range(g.n) if rng.random() < 0.2}
    assert _root_parities(g, s, v1, weights, join) == _odd_keys(count_cut_pairs(g, s, v1, weights))


def _node_counts(g, nd, t, s, v1, weights, coloring):
    node = nd.nodes[t]
    verts, edges = subgraph_view(nd, t)
    bag = node.bag
    adj = {v: set() for v in verts}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    inside = {bag[j] for j, c in enumerate(coloring) if c in (ONE1, ONE2)}
    side = {bag[j]: 1 if c == ONE1 else 2 for j, c in enumerate(coloring) if c in (ONE1, ONE2)}
    forgotten = sorted(verts - set(bag))
    counts = Counter()
    for r in range(len(forgotten) + 1):
        for extra in itertools.combinations(forgotten, r):
            if not (s & set(forgotten)) <= set(extra):
                continue
            fs = inside | set(extra)
            deg = {v: sum(1 for x in adj[v] if x not in fs) for v in verts if v not in fs}
            if any(d > 1 for d in deg.values()):
                continue
            if any(deg[bag[j]] != (0 if c == ZERO0 else 1) for j, c in enumerate(coloring)
                   if c in (ZERO0, ZERO1)):
                continue
            key = (len(fs), sum(weights[v] for v in fs))
            for sides in itertools.product((1, 2), repeat=len(extra)):
                full = dict(side)
                full.update(zip(extra, sides))
                if v1 in full and full[v1] != 1:
                    continue
                if all(full[u] == full[v] for u, v in edges if u in fs and v in fs):
                    counts[key] += 1
    return counts


@settings(max_examples=60, deadline=None)
@given(small_graphs(7), st.randoms(use_true_random=False))
def test_every_node_table_matches_enumeration(g, rng):
    if not g.n:
        return
    nd = _nice(g, "min-fill")
    weights = draw_weights(rng, g.n)
    v1 = rng.randrange(g.n)
    s = frozenset({v1} | {v for v in range(g.n) if rng.random() < 0.25})
    tables = count_parity_tables(g, nd, s, v1, weights, keep_tables=True)
    for t, node in enumerate(nd.nodes):
        tab = tables[t]
        pk = tab.packing
        dense = tab.parities
        for idx, coloring in enumerate(itertools.product(range(4), repeat=len(node.bag))):
            expected = _odd_keys(_node_counts(g, nd, t, s, v1, weights, coloring))
            got = {(i, w) for i in range(pk.ilim + 1) for w in range(pk.wlim + 1) if dense[idx, i, w]}
            assert got == expected


def test_table_dimensions():
    g = cycle(5)
    nd = _nice(g)
    tables = count_parity_tables(g, nd, {0}, 0, [1] * 5, keep_tables=True)
    n = g.n
    for t, tab in tables.items():
        b = len(nd.nodes[t].bag)
        assert tab.parities.size == (n + 1) * (2 * n * n + 1) * 4 ** b


def test_input_errors(p3):
    nd = _nice(p3)
    with pytest.raises(ValueError):
        count_parity_tables(p3, nd, {0}, 7, [1, 1, 1])
    with pytest.raises(ValueError):
        count_parity_tables(p3, nd, {1}, 0, [1, 1, 1])
    with pytest.raises(ValueError):
        decide_constrained_cvcp3(p3, nd, {9}, 2)
    with pytest.raises(ValueError):
        decide_constrained_cvcp3(p3, nd, (), 2, repetitions=0)


def test_decide_examples():
    p5 = path(5)
    assert decide_constrained_cvcp3(p5, _nice(p5), (), 1)
    c5 = cycle(5)
    truth = brute_cvcp3(c5)
    for seed in range(5):
        assert decide_constrained_cvcp3(c5, _nice(c5), (), 2, seed=seed) == (truth <= 2)
    k4 = complete(4)
    assert decide_constrained_cvcp3(k4, _nice(k4), {0}, 2)
    assert not decide_constrained_cvcp3(k4, _nice(k4), {0}, 1)


def test_minimize_examples():
    for g in (path(6), cycle(7), complete(5)):
        assert minimize_cvcp3(g, _nice(g)) == brute_cvcp3(g)
    matching = Graph.from_edges(4, [(0, 1), (2, 3)])
    assert minimize_cvcp3(matching, _nice(matching)) == 0
    two = Graph.from_edges(6, [(0, 1), (1, 2), (3, 4), (4, 5)])
    assert minimize_cvcp3(two, _nice(two), {1, 4}) is None
    assert brute_cvcp3(two, {1, 4}) is None


@settings(max_examples=30, deadline=None)
@given(small_graphs(8), st.integers(0, 1000))
def test_minimize_never_undershoots(g, seed):
    got = minimize_cvcp3(g, _nice(g), (), seed=seed, repetitions=3)
    truth = brute_cvcp3(g)
    if truth is None:
        assert got is None
    else:
        assert got is not None and got >= truth


def test_weights_reproducible():
    a = draw_weights(random.Random(11), 30)
    assert a == draw_weights(random.Random(11), 30)
    assert all(1 <= w <= 60 for w in a)


def test_threads_match_sequential():
    g = cycle(9)
    nd = _nice(g)
    for k in range(2, 6):
        assert decide_constrained_cvcp3(g, nd, (), k, seed=3, threads=3) == \
            decide_constrained_cvcp3(g, nd, (), k, seed=3)
