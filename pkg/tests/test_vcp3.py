import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vcp3tw.convolution import INF
from vcp3tw.decomposition import (Kind, NiceNode, TreeDecomposition, heuristic_decompose,
                                  make_nice)
from vcp3tw.graph import Graph, is_vcp3_set
from vcp3tw.oracle import InstanceSpec, brute_vcp3, generate, max_dissociation_size
from vcp3tw.vcp3 import (DEG1, IN, ISO, run_dp, solve_vcp3, table_forget,
                         table_introduce_edge, table_introduce_vertex, table_join,
                         table_join_direct, table_leaf)

from .conftest import complete, cycle, path, small_graphs, subgraph_view


def _nice(g, strategy="min-degree"):
    return make_nice(heuristic_decompose(g, strategy), g)


def test_leaf():
    tab = table_leaf(NiceNode(Kind.LEAF, ()))
    assert tab.shape == () and int(tab) == 0


def test_wrong_node_type():
    with pytest.raises(ValueError):
        table_leaf(NiceNode(Kind.FORGET, (), (0,), vertex=1))


def test_introduce_vertex():
    node = NiceNode(Kind.INTRODUCE, (4,), (0,), vertex=4)
    assert table_introduce_vertex(node, table_leaf(NiceNode(Kind.LEAF, ()))).tolist() == [1, 0, INF]
    child = np.array([INF, 3, 0])
    node = NiceNode(Kind.INTRODUCE, (1, 2), (0,), vertex=2)
    out = table_introduce_vertex(node, child)
    assert out[:, IN].tolist() == [INF, 4, 1]
    assert out[:, ISO].tolist() == [INF, 3, 0]
    assert (out[:, DEG1] == INF).all()


def test_introduce_edge():
    child = np.zeros((3, 3), dtype=np.int64)
    child[ISO, ISO] = 7
    node = NiceNode(Kind.INTRODUCE_EDGE, (0, 1), (0,), edge=(0, 1))
    out = table_introduce_edge(node, child)
    assert out[DEG1, DEG1] == 7
    assert out[ISO, DEG1] == INF and out[DEG1, ISO] == INF and out[ISO, ISO] == INF
    assert out[IN, ISO] == 0 and out[DEG1, IN] == 0
    with pytest.raises(ValueError):
        table_introduce_edge(NiceNode(Kind.INTRODUCE_EDGE, (0, 1), (0,), edge=(0, 5)), child)


def test_forget():
    node = NiceNode(Kind.FORGET, (), (0,), vertex=3)
    tab, _ = table_forget(node, np.array([1, 0, INF]), (3,))
    assert int(tab) == 0
    tab, _ = table_forget(node, np.array([INF] * 3), (3,))
    assert int(tab) == INF


def _random_table(rng, b, inf_rate=0.2):
    vals = rng.integers(0, 2 * b + 3, size=(3,) * b)
    vals[rng.random((3,) * b) < inf_rate] = INF
    # c[t, f] >= |f^-1(1)| for any real table
    ins = sum(np.indices((3,) * b) == IN) if b else 0
    return np.where(vals >= INF, INF, vals + ins).astype(np.int64)


def test_join_all_in_entry():
    rng = np.random.default_rng(0)
    left, right = _random_table(rng, 3, 0), _random_table(rng, 3, 0)
    node = NiceNode(Kind.JOIN, (0, 1, 2), (0, 1))
    out = table_join(node, left, right, "naive", 8)
    assert out[IN, IN, IN] == left[IN, IN, IN] + right[IN, IN, IN] - 3


def test_join_infinite_side():
    rng = np.random.default_rng(1)
    node = NiceNode(Kind.JOIN, (0, 1), (0, 1))
    out = table_join(node, _random_table(rng, 2), np.full((3, 3), INF), "naive", 8)
    assert (out == INF).all()


@pytest.mark.parametrize("method", ["naive", "fast"])
def test_join_matches_direct(method):
    rng = np.random.default_rng(2)
    for b in range(0, 6):
        node = NiceNode(Kind.JOIN, tuple(range(b)), (0, 1))
        left, right = _random_table(rng, b), _random_table(rng, b)
        assert np.array_equal(table_join(node, left, right, method, 0), table_join_direct(left, right))


def test_examples(p3, c5):
    size, witness = solve_vcp3(p3, _nice(p3), shortcut=False)
    assert size == 1 and is_vcp3_set(p3, witness)
    assert solve_vcp3(c5, _nice(c5))[0] == 2
    k2 = path(2)
    assert solve_vcp3(k2, _nice(k2), shortcut=False) == (0, [])
    one = Graph.from_edges(1, [])
    assert solve_vcp3(one, _nice(one), shortcut=False) == (0, [])


def test_rejects_invalid_decomposition(p3):
    nd = make_nice(TreeDecomposition([(0, 1), (1, 2)], [(0, 1)]), p3)
    with pytest.raises(ValueError):
        solve_vcp3(path(4), nd)


def _certificate_minimum(g, verts, edges, bag, f):
    adj = {v: set() for v in verts}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    forced = {bag[j] for j, s in enumerate(f) if s == IN}
    outside_bag = sorted(set(verts) - set(bag))
    best = INF
    for r in range(len(outside_bag) + 1):
        if r + len(forced) >= best:
            break
        for extra in itertools.combinations(outside_bag, r):
            fs = forced | set(extra)
            deg = {v: sum(1 for x in adj[v] if x not in fs) for v in verts if v not in fs}
            if any(d > 1 for d in deg.values()):
                continue
            if all(deg[bag[j]] == (0 if s == ISO else 1) for j, s in enumerate(f) if s != IN):
                best = len(fs)
                break
    return best


@settings(max_examples=60, deadline=None)
@given(small_graphs(8))
def test_every_table_entry_is_certified(g):
    nd = _nice(g, "min-fill")
    run = run_dp(g, nd, "naive", keep_tables=True)
    for t, node in enumerate(nd.nodes):
        verts, edges = subgraph_view(nd, t)
        tab = run.tables[t]
        for f in itertools.product((IN, ISO, DEG1), repeat=len(node.bag)):
            expected = _certificate_minimum(g, verts, edges, node.bag, f)
            assert int(tab[f]) == expected
            if expected < INF:
                fs = run.backtrack(t, f)
                assert len(fs) == expected and fs <= verts
                assert {node.bag[j] for j, s in enumerate(f) if s == IN} == fs & set(node.bag)


@settings(max_examples=60, deadline=None)
@given(small_graphs(9))
def test_matches_oracles(g):
    size, witness = solve_vcp3(g, _nice(g), shortcut=False)
    assert size == brute_vcp3(g)[0] == g.n - max_dissociation_size(g)
    assert len(witness) == size and is_vcp3_set(g, witness)


@settings(max_examples=40, deadline=None)
@given(small_graphs(9), st.randoms(use_true_random=False))
def test_invariance(g, rng):
    answers = set()
    for strategy in ("min-degree", "min-fill"):
        td = heuristic_decompose(g, strategy)
        if td.bags:
            td = TreeDecomposition(td.bags, td.edges, root=rng.randrange(len(td.bags)))
        nd = make_nice(td, g)
        for method in ("naive", "fast"):
            answers.add(solve_vcp3(g, nd, convolution=method, threshold=0, shortcut=False)[0])
    assert len(answers) == 1


@settings(max_examples=40, deadline=None)
@given(small_graphs(9), st.data())
def test_monotone_under_edge_deletion(g, data):
    if not g.m:
        return
    e = data.draw(st.sampled_from(g.sorted_edges()))
    h = g.remove_edge(*e)
    assert solve_vcp3(h, _nice(h))[0] <= solve_vcp3(g, _nice(g))[0]


def test_fast_and_naive_witnesses_agree():
    for seed in range(10):
        g, td = generate(InstanceSpec("partial-k-tree", 14, k=4, seed=seed))
        nd = make_nice(td, g)
        assert solve_vcp3(g, nd, "fast", threshold=0) == solve_vcp3(g, nd, "naive")


def test_threads_match_sequential():
    g, td = generate(InstanceSpec("partial-k-tree", 40, k=3, seed=5))
    nd = make_nice(td, g)
    assert solve_vcp3(g, nd, threads=4) == solve_vcp3(g, nd, threads=1)


def test_known_families():
    assert solve_vcp3(complete(5), _nice(complete(5)))[0] == 3
    assert solve_vcp3(cycle(9), _nice(cycle(9)))[0] == 3
    assert solve_vcp3(path(7), _nice(path(7)))[0] == 2
    star = Graph.from_edges(8, [(0, i) for i in range(1, 8)])
    assert solve_vcp3(star, _nice(star))[0] == 1
