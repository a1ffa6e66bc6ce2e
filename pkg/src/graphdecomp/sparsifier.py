"""Contract color classes, pick a subcubic high-treewidth subgraph of the
quotient, and pull it back to an induced subgraph of bounded class degree."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .coloring import EdgeColoring
from .decomposition import exact_treewidth, treewidth_lower, treewidth_upper
from .generators import wall
from .graph import Graph, GraphError, VertexPartition, _norm, bfs_distances, contract_partition
from .minors import MINOR, BudgetExhausted, MinorModel, find_minor, validate_model

STRATEGIES = ("exact_small", "wall_minor", "greedy", "auto")
EXACT_LIMIT = 16


class SparsifyError(GraphError):
    pass


def color_components(g: Graph, f: Iterable[Sequence[int]]) -> VertexPartition:
    """Vertex sets of the components of ``(V(g), f)``; isolated vertices are singletons."""
    es = [_norm(*e) for e in f]
    for e in es:
        if not g.has_edge(*e):
            raise SparsifyError(f"edge {e} is not in the graph")
    sub = Graph(g.n, es)
    return VertexPartition.of(sub.components())


@dataclass(frozen=True)
class SubcubicExtraction:
    graph: Graph  # same vertex labels as the input, max degree <= 3
    width: int  # treewidth estimate of ``graph``
    strategy: str
    exact: bool = False  # width is exact and maximal over subcubic subgraphs


def _exact_width(g: Graph) -> int:
    return exact_treewidth(g)[0] if g.n <= 32 else treewidth_lower(g)


def _subcubic_exact(g: Graph, budget: int) -> SubcubicExtraction:
    """Best subcubic subgraph by branching over the edges at an overfull vertex."""
    best_graph, best = None, -2
    seen: set[frozenset] = set()
    nodes = 0
    exhaustive = True
    stack = [frozenset(g.edges)]
    while stack:
        es = stack.pop()
        if es in seen:
            continue
        seen.add(es)
        nodes += 1
        if nodes > budget:
            exhaustive = False
            break
        cur = Graph(g.n, es)
        if treewidth_upper(cur)[0] <= best:
            continue
        heavy = [v for v in cur.vertices() if cur.degree(v) > 3]
        if not heavy:
            w = exact_treewidth(cur)[0]
            if w > best:
                best, best_graph = w, cur
            continue
        v = heavy[0]
        for u in sorted(cur.neighbors(v), reverse=True):
            stack.append(es - {_norm(u, v)})
    return SubcubicExtraction(best_graph, best, "exact_small", exhaustive)


def _steiner(g: Graph, part: set[int], terminals: list[int]) -> set[tuple[int, int]]:
    """Tree edges inside ``part`` joining up to three terminals."""
    ts = sorted(set(terminals))
    edges: set[tuple[int, int]] = set()
    if len(ts) <= 1:
        return edges
    tree = {ts[0]}
    for t in ts[1:]:
        if t in tree:
            continue
        # walk from t toward the closest tree vertex
        dist = bfs_distances(g, sorted(tree), within=part)
        x = t
        while x not in tree:
            y = min(w for w in g.neighbors(x) if w in part and dist.get(w, -1) == dist[x] - 1)
            edges.add(_norm(x, y))
            tree.add(x)
            x = y
    return edges


def _subdivision_from_model(g: Graph, m: MinorModel) -> Graph:
    """Subgraph of ``g`` realizing a subcubic minor model as a subdivision-like tree union."""
    sets = [set(s) for s in m.branch_sets]
    owner = {v: i for i, s in enumerate(sets) for v in s}
    chosen: set[tuple[int, int]] = set()
    terminals: list[list[int]] = [[] for _ in sets]
    for a, b in m.pattern.sorted_edges():
        u, v = min((x, y) for x in sorted(sets[a]) for y in g.neighbors(x) if owner.get(y) == b)
        chosen.add(_norm(u, v))
        terminals[a].append(u)
        terminals[b].append(v)
    for i, s in enumerate(sets):
        chosen |= _steiner(g, s, terminals[i])
    return Graph(g.n, chosen)


def _subcubic_wall(g: Graph, budget: int) -> SubcubicExtraction:
    best = None
    n = 1
    while True:
        try:
            m = find_minor(g, wall(n), budget=budget)
        except BudgetExhausted:
            break
        if m is None:
            break
        best = m
        n += 1
    if best is None:
        return _subcubic_greedy(g)
    sub = _subdivision_from_model(g, best)
    return SubcubicExtraction(sub, treewidth_lower(sub), "wall_minor")


def _subcubic_greedy(g: Graph) -> SubcubicExtraction:
    es = set(g.edges)
    while True:
        cur = Graph(g.n, es)
        heavy = {v for v in cur.vertices() if cur.degree(v) > 3}
        if not heavy:
            break
        cands = sorted(e for e in es if e[0] in heavy or e[1] in heavy)
        both = [e for e in cands if e[0] in heavy and e[1] in heavy]
        cands = both or cands

        def score(e):
            return treewidth_lower(Graph(g.n, es - {e}))
        pick = max(cands, key=lambda e: (score(e), [-x for x in e]))
        es.discard(pick)
    cur = Graph(g.n, es)
    return SubcubicExtraction(cur, treewidth_lower(cur), "greedy")


def extract_subcubic(g: Graph, strategy: str = "auto", budget: int = 20000) -> SubcubicExtraction:
    """Subgraph of ``g`` with maximum degree at most 3 and high treewidth.

    ``exact_small`` (at most 16 vertices) maximizes exact treewidth,
    ``wall_minor`` realizes the largest wall minor it can find,
    ``greedy`` deletes edges at overfull vertices keeping the lower bound
    high, and ``auto`` picks ``exact_small`` when it applies.
    """
    if strategy not in STRATEGIES:
        raise SparsifyError(f"unknown strategy {strategy!r}")
    if g.max_degree() <= 3:
        exact = g.n <= 32
        return SubcubicExtraction(g, _exact_width(g), strategy, exact)
    if strategy == "auto":
        strategy = "exact_small" if g.n <= EXACT_LIMIT else "greedy"
    if strategy == "exact_small":
        if g.n > EXACT_LIMIT:
            raise SparsifyError(f"exact_small handles at most {EXACT_LIMIT} vertices")
        return _subcubic_exact(g, budget)
    if strategy == "wall_minor":
        return _subcubic_wall(g, budget * 50)
    return _subcubic_greedy(g)


@dataclass
class SparsifyTrace:
    graph: Graph
    f: frozenset[tuple[int, int]]
    parts: VertexPartition
    contracted: Graph
    extraction: SubcubicExtraction
    kept: list[int]  # part indices used by the extracted subgraph
    reduced: dict[int, frozenset[int]]  # part index -> minimal subset P'
    output: Graph
    vertex_map: list[int]  # output label -> label in ``graph``
    model: MinorModel  # model of the extracted subgraph in ``output``
    notes: list[str] = field(default_factory=list)

    def summary(self) -> str:
        return (f"|V|={self.output.n} |E|={self.output.m} max_degree={self.output.max_degree()} "
                f"max_part={self.parts.max_size()} width_estimate={self.extraction.width} "
                f"extractor={self.extraction.strategy}")


def _connected_in(f_adj: dict[int, set[int]], verts: set[int]) -> bool:
    if not verts:
        return False
    start = min(verts)
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in f_adj[x]:
            if y in verts and y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(verts)


def _minimal_subset(part: frozenset[int], terminals: set[int], f_adj: dict[int, set[int]]) -> frozenset[int]:
    """Inclusion-minimal subset of ``part`` containing ``terminals`` and
    connected through class edges; deletions try smallest labels first."""
    if not terminals:
        return frozenset([min(part)])
    cur = set(part)
    changed = True
    while changed:
        changed = False
        for v in sorted(cur):
            if v in terminals:
                continue
            cur.discard(v)
            if _connected_in(f_adj, cur):
                changed = True
            else:
                cur.add(v)
    return frozenset(cur)


def sparsify_once(g: Graph, f: Iterable[Sequence[int]], strategy: str = "auto",
                  budget: int = 20000) -> SparsifyTrace:
    """One contraction-uncontraction round for the class ``f``.

    The output is an induced subgraph of ``g`` in which every vertex meets
    at most three edges of ``f``, and contracting its ``f``-components
    gives back the extracted subcubic subgraph (checked via a minor model).
    """
    fs = frozenset(_norm(*e) for e in f)
    parts = color_components(g, fs)
    quotient = contract_partition(g, parts)
    ext = extract_subcubic(quotient, strategy, budget)
    h = ext.graph
    kept = sorted(v for v in h.vertices() if h.degree(v) > 0)
    if not kept:
        kept = [0] if quotient.n else []
    f_adj: dict[int, set[int]] = {v: set() for v in g.vertices()}
    for u, v in fs:
        f_adj[u].add(v)
        f_adj[v].add(u)
    idx = parts.index()
    terminals: dict[int, set[int]] = {a: set() for a in kept}
    for a, b in h.sorted_edges():
        pa, pb = parts.parts[a], parts.parts[b]
        u, v = min((x, y) for x in pa for y in g.neighbors(x) if idx[y] == b)
        terminals[a].add(u)
        terminals[b].add(v)
    reduced = {a: _minimal_subset(parts.parts[a], terminals[a], f_adj) for a in kept}
    keep = sorted(v for a in kept for v in reduced[a])
    out, back = g.induced(keep)

    pos = {old: new for new, old in enumerate(back)}
    for a in kept:
        for v in reduced[a]:
            if len(f_adj[v] & reduced[a]) > 3:
                raise SparsifyError(f"vertex {v} keeps more than three class edges")
    pattern, _ = h.induced(kept)
    sets = tuple(frozenset(pos[v] for v in reduced[a]) for a in kept)
    model = MinorModel(out, pattern, sets, MINOR)
    rep = validate_model(model)
    if not rep:
        raise SparsifyError(f"pulled-back model invalid: {rep.violation} {rep.witness}")
    return SparsifyTrace(g, fs, parts, quotient, ext, kept, reduced, out, back, model)


@dataclass
class SparsifyResult:
    graph: Graph
    vertex_map: list[int]  # label in ``graph`` -> label in the input
    traces: list[SparsifyTrace]
    h: int


def sparsify_all(g: Graph, c: EdgeColoring, strategy: str = "auto", budget: int = 20000) -> SparsifyResult:
    """Apply :func:`sparsify_once` class by class to the surviving subgraph.

    Every class keeps degree at most 3, so the result has maximum degree at
    most ``3 * h``.
    """
    if c.host != g:
        raise SparsifyError("coloring is not on g")
    cur = g
    back = list(g.vertices())
    traces = []
    for col in range(c.h):
        f = [e for e in cur.edges if c.color[_norm(back[e[0]], back[e[1]])] == col]
        tr = sparsify_once(cur, f, strategy, budget)
        traces.append(tr)
        back = [back[v] for v in tr.vertex_map]
        cur = tr.output
    if cur.max_degree() > 3 * max(c.h, 0):
        raise SparsifyError("degree bound violated")
    return SparsifyResult(cur, back, traces, c.h)


def is_induced_in(sub: Graph, host: Graph, vertex_map: Sequence[int]) -> bool:
    """Edge-identity check: ``sub`` is exactly ``host`` induced on the mapped vertices."""
    if len(set(vertex_map)) != sub.n:
        return False
    for a in range(sub.n):
        for b in range(a + 1, sub.n):
            if sub.has_edge(a, b) != host.has_edge(vertex_map[a], vertex_map[b]):
                return False
    return True
