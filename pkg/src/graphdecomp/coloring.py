"""Edge-colorings, clustering statistics and the deterministic 3-colorings."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .decomposition import (
    DecompositionError, TreePartition, exact_treewidth, tree_partition,
    treewidth_upper, validate_tree_partition,
)
from .graph import Graph, GraphError, _norm, weak_diameter


class ColoringError(GraphError):
    pass


@dataclass(frozen=True)
class EdgeColoring:
    host: Graph
    color: Mapping[tuple[int, int], int] = field(hash=False)
    h: int

    def __post_init__(self):
        if set(self.color) != set(self.host.edges):
            raise ColoringError("coloring must cover exactly the host edges")
        for e, c in self.color.items():
            if not 0 <= c < self.h:
                raise ColoringError(f"color {c} of edge {e} outside [0, {self.h})")

    def of(self, u: int, v: int) -> int:
        return self.color[_norm(u, v)]

    def used(self) -> list[int]:
        return sorted(set(self.color.values()))

    def classes(self) -> list[list[tuple[int, int]]]:
        out: list[list[tuple[int, int]]] = [[] for _ in range(self.h)]
        for e in sorted(self.color):
            out[self.color[e]].append(e)
        return out

    def class_graph(self, c: int) -> Graph:
        """The spanning subgraph ``(V, F_c)``."""
        return Graph(self.host.n, [e for e, x in self.color.items() if x == c])


def monochromatic(g: Graph, c: int = 0, h: int | None = None) -> EdgeColoring:
    return EdgeColoring(g, {e: c for e in g.edges}, max(c + 1, h or 0))


def mono_components(c: EdgeColoring) -> list[tuple[int, list[int]]]:
    """(color, sorted vertex list) for every monochromatic component with an edge."""
    out = []
    for col in range(c.h):
        sub = c.class_graph(col)
        for comp in sub.components():
            if len(comp) > 1:
                out.append((col, sorted(comp)))
    return out


@dataclass(frozen=True)
class ColorStats:
    color: int
    components: int
    max_size: int
    max_weak_diameter: int


@dataclass(frozen=True)
class ClusteringReport:
    per_color: tuple[ColorStats, ...]
    clustering: int

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["color", "components", "max_size", "max_weak_diameter"])
        for s in self.per_color:
            w.writerow([s.color, s.components, s.max_size, s.max_weak_diameter])
        return buf.getvalue()


def verify_clustering(c: EdgeColoring, diameters: bool = True) -> ClusteringReport:
    """Exact per-color component statistics.

    Components are counted among those carrying at least one edge. The
    clustering is the largest monochromatic component, and at least 1 on a
    nonempty host because every vertex sits in some component.
    """
    stats = []
    for col in range(c.h):
        comps = [comp for comp in c.class_graph(col).components() if len(comp) > 1]
        size = max((len(x) for x in comps), default=0)
        diam = 0
        if diameters:
            for comp in comps:
                diam = max(diam, int(weak_diameter(c.host, comp, cutoff=len(comp))))
        stats.append(ColorStats(col, len(comps), size, diam))
    best = max((s.max_size for s in stats), default=0)
    if c.host.n:
        best = max(best, 1)
    return ClusteringReport(tuple(stats), best)


def format_coloring(c: EdgeColoring) -> str:
    return "".join(f"{u} {v} {c.color[(u, v)]}\n" for u, v in c.host.sorted_edges())


def parse_coloring(text: str, host: Graph, h: int | None = None) -> EdgeColoring:
    color = {}
    for k, ln in enumerate(text.splitlines(), start=1):
        parts = ln.split()
        if not parts:
            continue
        if len(parts) != 3:
            raise ColoringError(f"line {k}: expected 'u v c'")
        u, v, col = map(int, parts)
        e = _norm(u, v)
        if not host.has_edge(*e):
            raise ColoringError(f"line {k}: {u} {v} is not a host edge")
        if e in color:
            raise ColoringError(f"line {k}: edge colored twice")
        color[e] = col
    if h is None:
        h = max(color.values(), default=-1) + 1
    return EdgeColoring(host, color, h)


def tree_partition_coloring(g: Graph, tp: TreePartition) -> EdgeColoring:
    """3 colors: 2 inside a part, else the depth parity of the shallower part."""
    rep = validate_tree_partition(g, tp)
    if not rep:
        raise ColoringError(f"invalid tree-partition: {rep.violation}")
    idx = tp.parts.index()
    color = {}
    for u, v in g.edges:
        a, b = idx[u], idx[v]
        color[(u, v)] = 2 if a == b else min(tp.depth[a], tp.depth[b]) % 2
    return EdgeColoring(g, color, 3)


def product_coloring(g: Graph, embedding: Mapping[int, tuple[int, int]],
                     factor: Graph | None = None) -> EdgeColoring:
    """3-coloring of a subgraph of ``factor`` times a path.

    ``embedding[v] = (x, i)`` places ``v`` at factor vertex ``x`` and path
    index ``i``. Edges inside one path index get color 2, the others
    ``min(i, j) mod 2``. When ``factor`` is given the factor coordinate is
    checked too.
    """
    if set(embedding) != set(g.vertices()):
        raise ColoringError("embedding must place every vertex")
    if len(set(embedding.values())) != g.n:
        raise ColoringError("embedding is not injective")
    color = {}
    for u, v in g.sorted_edges():
        (x, i), (y, j) = embedding[u], embedding[v]
        ok = abs(i - j) <= 1
        if factor is not None:
            ok = ok and (x == y or factor.has_edge(x, y))
        if not ok:
            raise ColoringError(f"edge {u} {v} violates the product structure")
        color[(u, v)] = 2 if i == j else min(i, j) % 2
    return EdgeColoring(g, color, 3)


def refine_product(c1: EdgeColoring, c2: EdgeColoring) -> EdgeColoring:
    """Color each edge by the pair of input colors, re-indexed by first appearance."""
    if c1.host != c2.host:
        raise ColoringError("colorings live on different hosts")
    index: dict[tuple[int, int], int] = {}
    color = {}
    for e in c1.host.sorted_edges():
        key = (c1.color[e], c2.color[e])
        if key not in index:
            index[key] = len(index)
        color[e] = index[key]
    return EdgeColoring(c1.host, color, max(len(index), 1) if c1.host.m else 0)


def _class_decomposition(sub: Graph, t: int | None, exact_limit: int):
    """Tree decomposition of a color class, exact per component when small."""
    big = max((len(c) for c in sub.components()), default=0)
    if big <= exact_limit:
        w, td = exact_treewidth(sub, budget=max(exact_limit, sub.n))
        if t is not None and w > t:
            raise ColoringError(f"color class has treewidth {w} > {t}")
        return td
    return treewidth_upper(sub)[1]


def bounded_tw_coloring(g: Graph, c1: EdgeColoring, t: int | None = None,
                        exact_limit: int = 24) -> tuple[EdgeColoring, int]:
    """Recolor each class by a tree-partition 3-coloring and refine with ``c1``.

    Returns the coloring and the largest tree-partition width used, which
    bounds the clustering by ``width * (Delta + 1)``.
    """
    if c1.host != g:
        raise ColoringError("coloring is not on g")
    inner = {}
    width = 0
    for col in range(c1.h):
        sub = c1.class_graph(col)
        if not sub.m:
            continue
        comps = [comp for comp in sub.components() if len(comp) > 1]
        keep = sorted(v for comp in comps for v in comp)
        small, back = sub.induced(keep)
        try:
            td = _class_decomposition(small, t, exact_limit)
        except DecompositionError:
            td = treewidth_upper(small)[1]
        tp = tree_partition(small, td)
        width = max(width, tp.width)
        local = tree_partition_coloring(small, tp)
        for (a, b), x in local.color.items():
            inner[_norm(back[a], back[b])] = x
    c2 = EdgeColoring(g, inner, 3)
    return refine_product(c1, c2), width
