"""Tree decompositions: validation, heuristic construction, PACE ``.td``
I/O, and conversion to nice form with introduce-edge nodes."""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from enum import Enum

from .graph import Graph, GraphFormatError, _int, _tokens


@dataclass
class TreeDecomposition:
    """Bags (sorted vertex tuples) on a tree given by undirected ``edges``
    between bag indices. ``root`` picks the node the tree is hung from."""

    bags: list[tuple[int, ...]]
    edges: list[tuple[int, int]] = field(default_factory=list)
    root: int = 0

    def __post_init__(self):
        self.bags = [tuple(sorted(set(b))) for b in self.bags]

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def neighbors(self) -> list[list[int]]:
        nb: list[list[int]] = [[] for _ in self.bags]
        for a, b in self.edges:
            nb[a].append(b)
            nb[b].append(a)
        return nb

    def parents(self) -> list[int | None]:
        """BFS parent of each node reachable from ``root``; the root and any
        unreachable node get ``None``."""
        par: list[int | None] = [None] * len(self.bags)
        if not self.bags:
            return par
        nb = self.neighbors()
        seen = {self.root}
        queue = deque([self.root])
        while queue:
            x = queue.popleft()
            for y in nb[x]:
                if y not in seen:
                    seen.add(y)
                    par[y] = x
                    queue.append(y)
        return par


@dataclass(frozen=True)
class Violation:
    condition: int  # 0 = tree shape, 1/2/3 = decomposition conditions
    witness: object
    message: str


def _tree_violations(td: TreeDecomposition) -> list[Violation]:
    k = len(td.bags)
    if k == 0:
        return []
    out = []
    if len(td.edges) != k - 1:
        out.append(Violation(0, len(td.edges), f"{k} nodes need {k - 1} tree edges"))
    for a, b in td.edges:
        if not (0 <= a < k and 0 <= b < k) or a == b:
            out.append(Violation(0, (a, b), f"bad tree edge {(a, b)}"))
            return out
    par = td.parents()
    unreached = [i for i in range(k) if i != td.root and par[i] is None]
    if unreached:
        out.append(Violation(0, unreached[0], f"node {unreached[0]} not connected to root"))
    return out


def validate(td: TreeDecomposition, g: Graph) -> list[Violation]:
    """List every violated condition with a witness; empty iff valid."""
    out = _tree_violations(td)
    if out:
        return out
    covered = set()
    for b in td.bags:
        covered.update(b)
    for v in range(g.n):
        if v not in covered:
            out.append(Violation(1, v, f"vertex {v} is in no bag"))
    bagsets = [set(b) for b in td.bags]
    for u, v in g.sorted_edges():
        if not any(u in b and v in b for b in bagsets):
            out.append(Violation(2, (u, v), f"edge {(u, v)} is in no bag"))
    nb = td.neighbors()
    occ: dict[int, list[int]] = {}
    for i, b in enumerate(td.bags):
        for v in b:
            occ.setdefault(v, []).append(i)
    for v in sorted(occ):
        nodes = set(occ[v])
        start = occ[v][0]
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in nb[x]:
                if y in nodes and y not in seen:
                    seen.add(y)
                    stack.append(y)
        if seen != nodes:
            out.append(Violation(3, v, f"bags containing {v} are not connected"))
    return out


def _fill_in(nbrs: dict[int, set[int]], v: int) -> int:
    ns = list(nbrs[v])
    missing = 0
    for i, a in enumerate(ns):
        na = nbrs[a]
        for b in ns[i + 1:]:
            if b not in na:
                missing += 1
    return missing


def elimination_order(g: Graph, strategy: str = "min-degree") -> list[int]:
    if strategy not in ("min-degree", "min-fill"):
        raise ValueError(f"unknown heuristic {strategy!r}")
    nbrs = {v: set(g.adj[v]) for v in range(g.n)}
    order = []
    while nbrs:
        if strategy == "min-degree":
            v = min(nbrs, key=lambda x: (len(nbrs[x]), x))
        else:
            v = min(nbrs, key=lambda x: (_fill_in(nbrs, x), len(nbrs[x]), x))
        ns = nbrs.pop(v)
        for a in ns:
            nbrs[a].discard(v)
            nbrs[a].update(ns - {a})
        order.append(v)
    return order


def decomposition_from_order(g: Graph, order: list[int]) -> TreeDecomposition:
    """Standard bag-per-vertex decomposition of an elimination ordering."""
    pos = {v: i for i, v in enumerate(order)}
    nbrs = {v: set(g.adj[v]) for v in range(g.n)}
    bags = []
    parent_vertex = []
    for v in order:
        ns = nbrs.pop(v)
        for a in ns:
            nbrs[a].discard(v)
            nbrs[a].update(ns - {a})
        bags.append(tuple(sorted(ns | {v})))
        parent_vertex.append(min(ns, key=pos.__getitem__) if ns else None)
    edges = []
    roots = []
    for i, pv in enumerate(parent_vertex):
        if pv is None:
            roots.append(i)
        else:
            edges.append((i, pos[pv]))
    # stitch components together; bags of different components are disjoint
    for a, b in zip(roots, roots[1:]):
        edges.append((a, b))
    return TreeDecomposition(bags, edges, root=roots[-1] if roots else 0)


def heuristic_decompose(g: Graph, strategy: str = "min-degree") -> TreeDecomposition:
    return decomposition_from_order(g, elimination_order(g, strategy))


def parse_td(text: str | bytes) -> TreeDecomposition:
    """Parse PACE ``.td``; the result is rooted at bag 1."""
    header = None
    bags: dict[int, tuple[int, ...]] = {}
    edges = []
    for lineno, parts in _tokens(text):
        if parts[0] == "s":
            if header is not None:
                raise GraphFormatError("duplicate solution line", lineno)
            if len(parts) != 5 or parts[1] != "td":
                raise GraphFormatError("header must be 's td <bags> <width+1> <n>'", lineno)
            header = tuple(_int(p, lineno) for p in parts[2:])
            continue
        if header is None:
            raise GraphFormatError("line before 's td' header", lineno)
        nbags, _, n = header
        if parts[0] == "b":
            if len(parts) < 2:
                raise GraphFormatError("bag line needs an id", lineno)
            bid = _int(parts[1], lineno)
            if not 1 <= bid <= nbags:
                raise GraphFormatError(f"bag id {bid} out of range 1..{nbags}", lineno)
            if bid in bags:
                raise GraphFormatError(f"bag {bid} defined twice", lineno)
            verts = [_int(p, lineno) for p in parts[2:]]
            if any(not 1 <= v <= n for v in verts):
                raise GraphFormatError(f"bag vertex out of range 1..{n}", lineno)
            bags[bid] = tuple(v - 1 for v in verts)
        else:
            if len(parts) != 2:
                raise GraphFormatError("tree edge line needs two bag ids", lineno)
            a, b = _int(parts[0], lineno), _int(parts[1], lineno)
            for x in (a, b):
                if not 1 <= x <= nbags:
                    raise GraphFormatError(f"bag id {x} out of range 1..{nbags}", lineno)
            edges.append((a - 1, b - 1))
    if header is None:
        raise GraphFormatError("missing 's td' header")
    nbags = header[0]
    return TreeDecomposition([bags.get(i, ()) for i in range(1, nbags + 1)], edges, root=0)


def emit_td(td: TreeDecomposition, n: int) -> str:
    lines = [f"s td {len(td.bags)} {td.width + 1 if td.bags else 0} {n}"]
    for i, b in enumerate(td.bags, 1):
        lines.append(" ".join(["b", str(i)] + [str(v + 1) for v in b]))
    lines += [f"{a + 1} {b + 1}" for a, b in td.edges]
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# nice decompositions


class Kind(str, Enum):
    LEAF = "leaf"
    INTRODUCE = "introduce"
    INTRODUCE_EDGE = "introduce_edge"
    FORGET = "forget"
    JOIN = "join"


@dataclass(frozen=True)
class NiceNode:
    kind: Kind
    bag: tuple[int, ...]
    children: tuple[int, ...] = ()
    vertex: int | None = None
    edge: tuple[int, int] | None = None


@dataclass
class NiceDecomposition:
    """Typed nodes in post-order: every child index is smaller than its
    parent's, and the root is the last node."""

    n: int
    nodes: list[NiceNode]

    @property
    def root(self) -> int:
        return len(self.nodes) - 1

    @property
    def width(self) -> int:
        return max(len(x.bag) for x in self.nodes) - 1

    def counts(self) -> dict[str, int]:
        c = Counter(x.kind.value for x in self.nodes)
        return {k.value: c.get(k.value, 0) for k in Kind}


class InvalidDecomposition(ValueError):
    pass


def _contract_subset_bags(td: TreeDecomposition):
    """Merge every node whose bag is a subset of a neighbour's bag."""
    bags = {i: set(b) for i, b in enumerate(td.bags)}
    nb = {i: set(x) for i, x in enumerate(td.neighbors())}
    alias = {i: i for i in bags}
    changed = True
    while changed and len(bags) > 1:
        changed = False
        for a in sorted(bags):
            target = next((b for b in sorted(nb[a]) if bags[a] <= bags[b]), None)
            if target is None:
                continue
            for c in nb[a]:
                nb[c].discard(a)
                if c != target:
                    nb[c].add(target)
                    nb[target].add(c)
            del bags[a], nb[a]
            for i, x in alias.items():
                if x == a:
                    alias[i] = target
            changed = True
    return bags, nb, alias


def make_nice(td: TreeDecomposition, g: Graph) -> NiceDecomposition:
    """Refine a valid decomposition into nice form with every edge of ``g``
    introduced exactly once, directly below the first forget of one of its
    endpoints.

    Bags contained in a neighbouring bag are merged away first, which
    leaves at most ``n`` bags. The tree is hung from ``td.root`` (or the bag
    it was merged into) and topped by a chain of forgets.
    """
    problems = validate(td, g)
    if problems:
        raise InvalidDecomposition("; ".join(p.message for p in problems))
    nodes: list[NiceNode] = []
    if not td.bags:
        nodes.append(NiceNode(Kind.LEAF, ()))
        return NiceDecomposition(g.n, nodes)

    bags, nb, alias = _contract_subset_bags(td)
    root = alias[td.root] if 0 <= td.root < len(td.bags) else min(bags)
    introduced: set[tuple[int, int]] = set()

    def add(node: NiceNode) -> int:
        nodes.append(node)
        return len(nodes) - 1

    def forget(top: int, v: int) -> int:
        bag = nodes[top].bag
        for u in bag:
            e = (min(u, v), max(u, v))
            if u != v and e in g.edges and e not in introduced:
                introduced.add(e)
                top = add(NiceNode(Kind.INTRODUCE_EDGE, bag, (top,), edge=e))
        new_bag = tuple(x for x in bag if x != v)
        return add(NiceNode(Kind.FORGET, new_bag, (top,), vertex=v))

    def introduce(top: int, v: int) -> int:
        new_bag = tuple(sorted(nodes[top].bag + (v,)))
        return add(NiceNode(Kind.INTRODUCE, new_bag, (top,), vertex=v))

    # iterative post-order over the contracted tree
    order, parent = [], {root: None}
    stack = [root]
    while stack:
        x = stack.pop()
        order.append(x)
        for y in sorted(nb[x], reverse=True):
            if y != parent[x]:
                parent[y] = x
                stack.append(y)
    top_of: dict[int, int] = {}
    for x in reversed(order):
        bx = bags[x]
        kids = sorted(y for y in nb[x] if y != parent[x])
        branches = []
        for c in kids:
            top = top_of.pop(c)
            for v in sorted(bags[c] - bx):
                top = forget(top, v)
            for v in sorted(bx - bags[c]):
                top = introduce(top, v)
            branches.append(top)
        if not branches:
            top = add(NiceNode(Kind.LEAF, ()))
            for v in sorted(bx):
                top = introduce(top, v)
            branches.append(top)
        top = branches[0]
        for other in branches[1:]:
            top = add(NiceNode(Kind.JOIN, nodes[top].bag, (top, other)))
        top_of[x] = top
    top = top_of[root]
    for v in sorted(bags[root]):
        top = forget(top, v)
    assert top == len(nodes) - 1
    return NiceDecomposition(g.n, nodes)


def validate_nice(nd: NiceDecomposition, g: Graph) -> list[str]:
    """Check every structural rule of a nice decomposition with
    introduce-edge nodes; returns human-readable problems."""
    out = []
    nodes = nd.nodes
    if not nodes:
        return ["no nodes"]
    if nodes[-1].bag:
        out.append("root bag is not empty")
    parents = Counter()
    edge_count = Counter()
    for t, x in enumerate(nodes):
        if list(x.bag) != sorted(set(x.bag)):
            out.append(f"node {t}: bag not sorted/unique")
        for c in x.children:
            if not 0 <= c < t:
                out.append(f"node {t}: child {c} not before parent")
            parents[c] += 1
        kids = [nodes[c].bag for c in x.children if 0 <= c < t]
        if len(kids) != len(x.children):
            continue
        if x.kind is Kind.LEAF:
            if x.children or x.bag:
                out.append(f"node {t}: leaf must be childless with empty bag")
        elif x.kind is Kind.JOIN:
            if len(kids) != 2 or kids[0] != x.bag or kids[1] != x.bag:
                out.append(f"node {t}: join children must share its bag")
        elif len(kids) != 1:
            out.append(f"node {t}: {x.kind.value} needs exactly one child")
        elif x.kind is Kind.INTRODUCE:
            if x.vertex in kids[0] or set(x.bag) != set(kids[0]) | {x.vertex}:
                out.append(f"node {t}: bad introduce of {x.vertex}")
        elif x.kind is Kind.FORGET:
            if x.vertex not in kids[0] or set(x.bag) != set(kids[0]) - {x.vertex}:
                out.append(f"node {t}: bad forget of {x.vertex}")
        elif x.kind is Kind.INTRODUCE_EDGE:
            u, v = x.edge
            if x.bag != kids[0] or u not in x.bag or v not in x.bag:
                out.append(f"node {t}: edge {x.edge} not inside an unchanged bag")
            if (min(u, v), max(u, v)) not in g.edges:
                out.append(f"node {t}: {x.edge} is not a graph edge")
            edge_count[(min(u, v), max(u, v))] += 1
    for t in range(len(nodes) - 1):
        if parents[t] != 1:
            out.append(f"node {t}: has {parents[t]} parents")
    for e in g.sorted_edges():
        if edge_count[e] != 1:
            out.append(f"edge {e} introduced {edge_count[e]} times")
    # each vertex's occurrence set must be connected: exactly one topmost node
    tops = Counter()
    seen = set()
    for x in nodes:
        seen.update(x.bag)
    parent_of = {}
    for t, x in enumerate(nodes):
        for c in x.children:
            parent_of[c] = t
    for t, x in enumerate(nodes):
        p = parent_of.get(t)
        for v in x.bag:
            if p is None or v not in nodes[p].bag:
                tops[v] += 1
    for v in range(g.n):
        if v not in seen:
            out.append(f"vertex {v} never appears")
        elif tops[v] != 1:
            out.append(f"vertex {v} occurs in {tops[v]} disconnected pieces")
    return out
