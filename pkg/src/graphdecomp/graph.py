"""Simple undirected graphs with dense integer labels.

Everything downstream (decompositions, colorings, minor models) works on
:class:`Graph`, an immutable value type over vertices ``0..n-1``.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

INF = math.inf


class GraphError(ValueError):
    """Raised on malformed graphs or violated operation preconditions."""


def _norm(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


class Graph:
    """Immutable simple undirected graph on vertices ``0..n-1``."""

    __slots__ = ("_n", "_edges", "_adj")

    def __init__(self, n: int, edges: Iterable[Sequence[int]] = ()):
        if n < 0:
            raise GraphError("vertex count must be nonnegative")
        adj: list[set[int]] = [set() for _ in range(n)]
        es = set()
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if u == v:
                raise GraphError(f"self-loop at {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge {u}-{v} has an endpoint outside 0..{n - 1}")
            es.add(_norm(u, v))
            adj[u].add(v)
            adj[v].add(u)
        self._n = n
        self._edges = frozenset(es)
        self._adj = tuple(frozenset(a) for a in adj)

    # basic accessors
    @property
    def n(self) -> int:
        return self._n

    @property
    def m(self) -> int:
        return len(self._edges)

    @property
    def edges(self) -> frozenset[tuple[int, int]]:
        return self._edges

    def vertices(self) -> range:
        return range(self._n)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self._edges)

    def neighbors(self, v: int) -> frozenset[int]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def max_degree(self) -> int:
        return max((len(a) for a in self._adj), default=0)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    def __len__(self) -> int:
        return self._n

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self._n == other._n and self._edges == other._edges

    def __hash__(self) -> int:
        return hash((self._n, self._edges))

    def __repr__(self) -> str:
        return f"Graph(n={self._n}, m={self.m})"

    # derived graphs
    def induced(self, vertices: Iterable[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph on ``vertices``.

        Returns the relabeled subgraph and the map ``new label -> old label``
        (old labels are kept in ascending order).
        """
        keep = sorted(set(vertices))
        index = {v: i for i, v in enumerate(keep)}
        es = []
        for v in keep:
            iv = index[v]
            for w in self._adj[v]:
                if w > v and w in index:
                    es.append((iv, index[w]))
        return Graph(len(keep), es), keep

    def edge_subgraph(self, edges: Iterable[Sequence[int]]) -> "Graph":
        """Spanning subgraph with the given edges (which must belong to self)."""
        es = [_norm(int(e[0]), int(e[1])) for e in edges]
        for e in es:
            if e not in self._edges:
                raise GraphError(f"edge {e} is not in the graph")
        return Graph(self._n, es)

    def components(self, within: Iterable[int] | None = None) -> list[list[int]]:
        """Connected components (of the induced subgraph on ``within``), sorted."""
        allowed = set(range(self._n)) if within is None else set(within)
        seen: set[int] = set()
        comps = []
        for s in sorted(allowed):
            if s in seen:
                continue
            seen.add(s)
            comp = [s]
            stack = [s]
            while stack:
                u = stack.pop()
                for w in self._adj[u]:
                    if w in allowed and w not in seen:
                        seen.add(w)
                        comp.append(w)
                        stack.append(w)
            comps.append(sorted(comp))
        return comps

    def is_connected_set(self, vertices: Iterable[int]) -> bool:
        vs = set(vertices)
        if not vs:
            return False
        return len(self.components(vs)) == 1

    def is_connected(self) -> bool:
        return self._n > 0 and len(self.components()) == 1

    def is_forest(self) -> bool:
        return self.m == self._n - len(self.components())


@dataclass(frozen=True)
class VertexPartition:
    """Disjoint nonempty vertex sets, listed in a fixed order."""

    parts: tuple[frozenset[int], ...]

    @classmethod
    def of(cls, parts: Iterable[Iterable[int]]) -> "VertexPartition":
        return cls(tuple(frozenset(p) for p in parts))

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def index(self) -> dict[int, int]:
        """Map vertex -> index of its part."""
        return {v: i for i, p in enumerate(self.parts) for v in p}

    def max_size(self) -> int:
        return max((len(p) for p in self.parts), default=0)

    def check(self, g: Graph) -> None:
        seen: set[int] = set()
        for p in self.parts:
            if not p:
                raise GraphError("empty part")
            if seen & p:
                raise GraphError("parts overlap")
            seen |= p
        if seen != set(g.vertices()):
            raise GraphError("parts do not cover the vertex set")


@dataclass(frozen=True)
class BfsLayering:
    """BFS layers ``L_0..L_s`` from ``root`` plus the BFS-tree parent map."""

    root: int
    layers: tuple[tuple[int, ...], ...]
    parent: dict[int, int] = field(hash=False)

    @property
    def depth(self) -> int:
        return len(self.layers) - 1

    def layer_of(self) -> dict[int, int]:
        return {v: i for i, layer in enumerate(self.layers) for v in layer}

    def vertices(self) -> set[int]:
        return {v for layer in self.layers for v in layer}

    def tree_path(self, v: int) -> list[int]:
        """Vertical path from the root down to ``v``."""
        path = [v]
        while path[-1] != self.root:
            path.append(self.parent[path[-1]])
        path.reverse()
        return path

    def ancestor(self, v: int, k: int) -> int:
        for _ in range(k):
            v = self.parent[v]
        return v


def bfs_layering(g: Graph, component_hint: int | None = None,
                 within: Iterable[int] | None = None) -> BfsLayering:
    """BFS layering of the component containing the root.

    The root is ``component_hint`` if given, else the smallest label (of
    ``within`` when given). ``within`` restricts the BFS to an induced
    subgraph without relabeling. Each vertex's parent is its smallest-label
    neighbor in the previous layer.
    """
    if g.n == 0:
        raise GraphError("empty graph")
    allowed = None if within is None else set(within)
    if component_hint is None:
        if allowed is None:
            root = 0
        elif allowed:
            root = min(allowed)
        else:
            raise GraphError("empty graph")
    else:
        root = component_hint
        if not 0 <= root < g.n or (allowed is not None and root not in allowed):
            raise GraphError(f"root {root} not in graph")
    dist = {root: 0}
    layers = [[root]]
    parent: dict[int, int] = {}
    frontier = [root]
    while frontier:
        nxt = set()
        for u in frontier:
            for w in g.neighbors(u):
                if w in dist or (allowed is not None and w not in allowed):
                    continue
                nxt.add(w)
        if not nxt:
            break
        layer = sorted(nxt)
        d = len(layers)
        for w in layer:
            dist[w] = d
        for w in layer:
            parent[w] = min(u for u in g.neighbors(w) if dist.get(u) == d - 1)
        layers.append(layer)
        frontier = layer
    return BfsLayering(root, tuple(tuple(x) for x in layers), parent)


def bfs_distances(g: Graph, sources: Iterable[int], cutoff: float = INF,
                  within: set[int] | None = None) -> dict[int, int]:
    """Multi-source BFS distances, optionally truncated at ``cutoff``."""
    dist = {}
    q = deque()
    for s in sources:
        if s not in dist:
            dist[s] = 0
            q.append(s)
    while q:
        u = q.popleft()
        du = dist[u]
        if du >= cutoff:
            continue
        for w in g.neighbors(u):
            if w not in dist and (within is None or w in within):
                dist[w] = du + 1
                q.append(w)
    return dist


def distance(g: Graph, u: int, v: int) -> float:
    return bfs_distances(g, [u]).get(v, INF)


def set_distance(g: Graph, a: Iterable[int], b: Iterable[int]) -> float:
    """Smallest distance in ``g`` between a vertex of ``a`` and one of ``b``."""
    bs = set(b)
    dist = bfs_distances(g, a)
    return min((dist[v] for v in bs if v in dist), default=INF)


def shortest_path(g: Graph, u: int, v: int, within: set[int] | None = None) -> list[int] | None:
    """A shortest ``u``-``v`` path; ties broken toward smaller labels."""
    if u == v:
        return [u]
    prev = {u: None}
    q = deque([u])
    while q:
        x = q.popleft()
        for w in sorted(g.neighbors(x)):
            if w in prev or (within is not None and w not in within):
                continue
            prev[w] = x
            if w == v:
                path = [v]
                while prev[path[-1]] is not None:
                    path.append(prev[path[-1]])
                return path[::-1]
            q.append(w)
    return None


def _eccentricity_within(g: Graph, u: int, targets: set[int], cutoff: float) -> float:
    """Largest distance from ``u`` to ``targets``; stops once all are reached."""
    dist = {u: 0}
    left = len(targets) - (u in targets)
    best = 0
    q = deque([u])
    while q and left:
        x = q.popleft()
        dx = dist[x]
        if dx >= cutoff:
            break
        for w in g.neighbors(x):
            if w not in dist:
                dist[w] = dx + 1
                q.append(w)
                if w in targets:
                    left -= 1
                    best = dx + 1
    return best if not left else INF


def weak_diameter(g: Graph, s: Iterable[int], cutoff: float = INF) -> float:
    """Max distance in ``g`` (not in ``g[s]``) over pairs of ``s``.

    Empty ``s`` gives 0. ``inf`` if some pair is disconnected in ``g``.
    With a finite integer ``cutoff`` the exact value is returned when it is
    at most ``cutoff``; otherwise ``cutoff + 1`` (a lower bound).
    """
    ss = set(s)
    if len(ss) <= 1:
        return 0
    best = 0
    for u in sorted(ss):
        ecc = _eccentricity_within(g, u, ss, cutoff)
        if ecc == INF:
            return INF if cutoff == INF else cutoff + 1
        best = max(best, ecc)
    return best


def contract_partition(g: Graph, p: VertexPartition) -> Graph:
    """Quotient ``g/p``: vertex ``i`` is part ``i``; loops and multi-edges dropped."""
    p.check(g)
    for part in p.parts:
        if not g.is_connected_set(part):
            raise GraphError("part not connected")
    idx = p.index()
    es = set()
    for u, v in g.edges:
        a, b = idx[u], idx[v]
        if a != b:
            es.add(_norm(a, b))
    return Graph(len(p), es)


def strong_product(h1: Graph, h2: Graph) -> Graph:
    """Strong product; vertex ``(u, v)`` gets label ``u * h2.n + v``."""
    n2 = h2.n
    es = []
    for u in range(h1.n):
        for v in range(n2):
            a = u * n2 + v
            for v2 in h2.neighbors(v):
                es.append((a, u * n2 + v2))
            for u2 in h1.neighbors(u):
                es.append((a, u2 * n2 + v))
                for v2 in h2.neighbors(v):
                    es.append((a, u2 * n2 + v2))
    return Graph(h1.n * n2, es)


def subdivide(g: Graph, s: int) -> Graph:
    """Replace every edge by a path with ``s`` new internal vertices.

    New vertices are appended after the originals, edge by edge in sorted
    edge order, each run ordered from the smaller endpoint.
    """
    if s < 1:
        raise GraphError("subdivision count must be positive")
    es = []
    nxt = g.n
    for u, v in g.sorted_edges():
        chain = [u] + list(range(nxt, nxt + s)) + [v]
        nxt += s
        es.extend(zip(chain, chain[1:]))
    return Graph(nxt, es)


def relabel(g: Graph, mapping: Sequence[int]) -> Graph:
    """Apply a permutation ``old -> mapping[old]``."""
    return Graph(g.n, [(mapping[u], mapping[v]) for u, v in g.edges])


# edge-list text format

def format_edge_list(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines += [f"{u} {v}" for u, v in g.sorted_edges()]
    return "\n".join(lines) + "\n"


def parse_edge_list(text: str) -> Graph:
    """Parse the ``n m`` header followed by ``m`` lines ``u v`` (u < v)."""
    rows = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not rows:
        raise GraphError("missing header")
    try:
        n, m = (int(x) for x in rows[0])
    except ValueError:
        raise GraphError(f"bad header: {' '.join(rows[0])!r}") from None
    if len(rows) - 1 != m:
        raise GraphError(f"header announces {m} edges, found {len(rows) - 1}")
    seen = set()
    es = []
    for k, row in enumerate(rows[1:], start=2):
        if len(row) != 2:
            raise GraphError(f"line {k}: expected 'u v'")
        u, v = int(row[0]), int(row[1])
        if u == v:
            raise GraphError(f"line {k}: self-loop")
        if not (0 <= u < v < n):
            raise GraphError(f"line {k}: need 0 <= u < v < n")
        if (u, v) in seen:
            raise GraphError(f"line {k}: duplicate edge {u} {v}")
        seen.add((u, v))
        es.append((u, v))
    return Graph(n, es)


def read_graph(path) -> Graph:
    with open(path) as fh:
        return parse_edge_list(fh.read())


def write_graph(g: Graph, path) -> None:
    with open(path, "w") as fh:
        fh.write(format_edge_list(g))
