"""Simple undirected graphs, text parsers, and the basic VCP3 predicates."""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass, field


class GraphFormatError(ValueError):
    """Raised when graph or decomposition text cannot be parsed."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Graph:
    """Immutable simple graph on vertices ``0 .. n-1``.

    Edges are stored as sorted pairs ``(u, v)`` with ``u < v``.
    """

    n: int
    edges: frozenset[tuple[int, int]]
    adj: tuple[frozenset[int], ...] = field(repr=False, compare=False)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> Graph:
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        norm = set()
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            norm.add((min(u, v), max(u, v)))
            nbrs[u].add(v)
            nbrs[v].add(u)
        return cls(n, frozenset(norm), tuple(frozenset(s) for s in nbrs))

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def max_degree(self) -> int:
        return max((len(a) for a in self.adj), default=0)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def relabel(self, perm: list[int]) -> Graph:
        """Return the graph with vertex ``v`` renamed to ``perm[v]``."""
        return Graph.from_edges(self.n, ((perm[u], perm[v]) for u, v in self.edges))

    def remove_edge(self, u: int, v: int) -> Graph:
        e = (min(u, v), max(u, v))
        return Graph.from_edges(self.n, (x for x in self.edges if x != e))

    def components(self) -> list[list[int]]:
        seen = [False] * self.n
        comps = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            stack, comp = [s], []
            while stack:
                x = stack.pop()
                comp.append(x)
                for y in self.adj[x]:
                    if not seen[y]:
                        seen[y] = True
                        stack.append(y)
            comps.append(sorted(comp))
        return comps


def _tokens(text: str | bytes):
    if isinstance(text, bytes):
        text = text.decode()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line or line.startswith("c"):
            continue
        yield lineno, line.split()


def _int(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise GraphFormatError(f"expected integer, got {tok!r}", lineno) from None


def parse_pace_gr(text: str | bytes) -> Graph:
    """Parse a PACE ``.gr`` file (``p tw n m`` header, 1-indexed edges)."""
    n = None
    edges = []
    for lineno, parts in _tokens(text):
        if parts[0] == "p":
            if n is not None:
                raise GraphFormatError("duplicate header", lineno)
            if len(parts) != 4 or parts[1] != "tw":
                raise GraphFormatError("header must be 'p tw <n> <m>'", lineno)
            n = _int(parts[2], lineno)
            _int(parts[3], lineno)
            continue
        if n is None:
            raise GraphFormatError("edge before header", lineno)
        if parts[0] == "e":
            parts = parts[1:]
        if len(parts) != 2:
            raise GraphFormatError("edge line needs two endpoints", lineno)
        u, v = _int(parts[0], lineno), _int(parts[1], lineno)
        if u == v:
            raise GraphFormatError(f"self-loop at vertex {u}", lineno)
        if not (1 <= u <= n and 1 <= v <= n):
            raise GraphFormatError(f"vertex out of range 1..{n}", lineno)
        edges.append((u - 1, v - 1))
    if n is None:
        raise GraphFormatError("missing 'p tw' header")
    return Graph.from_edges(n, edges)


def parse_edge_list(text: str | bytes, n: int | None = None) -> Graph:
    """Parse ``u v`` lines (0-indexed). ``n`` defaults to the largest id + 1."""
    edges = []
    for lineno, parts in _tokens(text):
        if len(parts) != 2:
            raise GraphFormatError("expected 'u v'", lineno)
        u, v = _int(parts[0], lineno), _int(parts[1], lineno)
        if u < 0 or v < 0:
            raise GraphFormatError("negative vertex id", lineno)
        if u == v:
            raise GraphFormatError(f"self-loop at vertex {u}", lineno)
        edges.append((u, v))
    top = max((max(e) for e in edges), default=-1) + 1
    if n is None:
        n = top
    elif top > n:
        raise GraphFormatError(f"vertex id {top - 1} exceeds n={n}")
    return Graph.from_edges(n, edges)


def parse_graph(text: str | bytes, format: str = "pace-gr") -> Graph:
    if format == "pace-gr":
        return parse_pace_gr(text)
    if format == "edge-list":
        return parse_edge_list(text)
    raise ValueError(f"unknown graph format {format!r}")


def emit_pace_gr(g: Graph) -> str:
    lines = [f"p tw {g.n} {g.m}"]
    lines += [f"{u + 1} {v + 1}" for u, v in g.sorted_edges()]
    return "\n".join(lines) + "\n"


def is_vcp3_set(g: Graph, f: Iterable[int]) -> bool:
    """True iff ``G - F`` has maximum degree at most one."""
    removed = set(f)
    for v in range(g.n):
        if v in removed:
            continue
        deg = 0
        for u in g.adj[v]:
            if u not in removed:
                deg += 1
                if deg > 1:
                    return False
    return True


def is_connected_induced(g: Graph, f: Iterable[int]) -> bool:
    """True iff ``G[F]`` is nonempty and connected."""
    verts = set(f)
    if not verts:
        return False
    start = next(iter(verts))
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in g.adj[x]:
            if y in verts and y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(verts)
