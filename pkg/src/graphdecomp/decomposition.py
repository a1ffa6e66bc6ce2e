"""Tree decompositions, treewidth oracles and tree-partitions."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .graph import Graph, GraphError, VertexPartition, bfs_layering


class DecompositionError(GraphError):
    pass


@dataclass(frozen=True)
class TreeDecomposition:
    tree: Graph
    bags: tuple[frozenset[int], ...]

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1


@dataclass(frozen=True)
class Report:
    """Outcome of a validator: ``ok`` or the first violation with a witness."""

    ok: bool
    violation: str = ""
    witness: tuple = ()

    def __bool__(self) -> bool:
        return self.ok


OK = Report(True)


def _is_tree(t: Graph) -> bool:
    return t.n >= 1 and t.m == t.n - 1 and t.is_connected()


def validate_tree_decomposition(g: Graph, td: TreeDecomposition) -> Report:
    if len(td.bags) != td.tree.n:
        return Report(False, "bag count differs from tree size", (len(td.bags), td.tree.n))
    if g.n and not _is_tree(td.tree):
        return Report(False, "not a tree")
    where: dict[int, list[int]] = {v: [] for v in g.vertices()}
    for i, bag in enumerate(td.bags):
        for v in bag:
            if v not in where:
                return Report(False, "unknown vertex", (i, v))
            where[v].append(i)
    for v in g.vertices():
        if not where[v]:
            return Report(False, "vertex uncovered", (v,))
    for u, v in g.sorted_edges():
        if not any(u in td.bags[i] for i in where[v]):
            return Report(False, "edge uncovered", (u, v))
    for v in g.vertices():
        if len(where[v]) > 1 and not td.tree.is_connected_set(where[v]):
            return Report(False, "bags of vertex not connected", (v,))
    return OK


# ---------------------------------------------------------------------------
# elimination orderings

def _bitadj(g: Graph) -> list[int]:
    adj = [0] * g.n
    for u, v in g.edges:
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    return adj


def _bits(x: int) -> Iterable[int]:
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def decomposition_from_ordering(g: Graph, order: Sequence[int]) -> TreeDecomposition:
    """Tree decomposition induced by eliminating vertices in ``order``."""
    if g.n == 0:
        return TreeDecomposition(Graph(1), (frozenset(),))
    pos = {v: i for i, v in enumerate(order)}
    adj = _bitadj(g)
    bags = []
    higher = []
    for v in order:
        nb = adj[v]
        bags.append(frozenset([v, *_bits(nb)]))
        higher.append(nb)
        for u in _bits(nb):
            adj[u] = (adj[u] | nb) & ~(1 << u) & ~(1 << v)
        for u in _bits(nb):
            adj[u] &= ~(1 << v)
    edges = []
    roots = []
    for i, v in enumerate(order):
        if higher[i]:
            j = min(pos[u] for u in _bits(higher[i]))
            edges.append((i, j))
        else:
            roots.append(i)
    edges.extend(zip(roots, roots[1:]))
    return _compress(TreeDecomposition(Graph(len(bags), edges), tuple(bags)))


def _compress(td: TreeDecomposition) -> TreeDecomposition:
    """Merge bags contained in a neighboring bag."""
    bags = {i: b for i, b in enumerate(td.bags)}
    nbrs = {i: set(td.tree.neighbors(i)) for i in range(td.tree.n)}
    changed = True
    while changed:
        changed = False
        for i in sorted(bags):
            for j in sorted(nbrs[i]):
                if bags[i] <= bags[j]:
                    for k in nbrs[i]:
                        if k != j:
                            nbrs[k].discard(i)
                            nbrs[k].add(j)
                            nbrs[j].add(k)
                    nbrs[j].discard(i)
                    del bags[i], nbrs[i]
                    changed = True
                    break
    keep = sorted(bags)
    idx = {b: k for k, b in enumerate(keep)}
    es = {(min(idx[i], idx[j]), max(idx[i], idx[j])) for i in keep for j in nbrs[i]}
    return TreeDecomposition(Graph(len(keep), es), tuple(bags[i] for i in keep))


def _eliminate(adj: list[int], v: int) -> list[int]:
    nb = adj[v]
    new = adj[:]
    for u in _bits(nb):
        new[u] = (new[u] | nb) & ~(1 << u) & ~(1 << v)
    new[v] = 0
    return new


def _heuristic_order(g: Graph, heuristic: str) -> tuple[int, list[int]]:
    adj = _bitadj(g)
    remaining = set(g.vertices())
    width = -1 if g.n == 0 else 0
    order = []
    while remaining:
        def fill(v):
            nb = list(_bits(adj[v]))
            missing = 0
            for i, a in enumerate(nb):
                missing += len(nb) - 1 - i - bin(adj[a] & sum(1 << b for b in nb[i + 1:])).count("1")
            return missing

        if heuristic == "min_degree":
            v = min(remaining, key=lambda x: (bin(adj[x]).count("1"), x))
        elif heuristic == "min_fill":
            v = min(remaining, key=lambda x: (fill(x), bin(adj[x]).count("1"), x))
        else:
            raise DecompositionError(f"unknown heuristic {heuristic!r}")
        width = max(width, bin(adj[v]).count("1"))
        adj = _eliminate(adj, v)
        remaining.discard(v)
        order.append(v)
    return width, order


def treewidth_upper(g: Graph, heuristic: str = "min_fill") -> tuple[int, TreeDecomposition]:
    """Greedy elimination (``min_fill`` or ``min_degree``), ties to smallest label."""
    width, order = _heuristic_order(g, heuristic)
    td = decomposition_from_ordering(g, order)
    return td.width, td


def _degeneracy(adj: list[int], remaining: int) -> int:
    adj = adj[:]
    best = 0
    while remaining:
        v = min(_bits(remaining), key=lambda x: (bin(adj[x] & remaining).count("1"), x))
        best = max(best, bin(adj[v] & remaining).count("1"))
        remaining &= ~(1 << v)
    return best


def _minor_min_width(adj: list[int], remaining: int) -> int:
    """Contraction degeneracy heuristic (min-d vertex contracted into min-d neighbor)."""
    adj = [a & remaining for a in adj]
    best = 0
    while remaining:
        v = min(_bits(remaining), key=lambda x: (bin(adj[x]).count("1"), x))
        d = bin(adj[v]).count("1")
        best = max(best, d)
        if d == 0:
            remaining &= ~(1 << v)
            continue
        u = min(_bits(adj[v]), key=lambda x: (bin(adj[x] & adj[v]).count("1"), x))
        # contract v into u
        nb = adj[v] & ~(1 << u)
        adj[u] = (adj[u] | nb) & ~(1 << v)
        for w in _bits(nb):
            adj[w] = (adj[w] & ~(1 << v)) | (1 << u)
        remaining &= ~(1 << v)
        adj[v] = 0
    return best


def treewidth_lower(g: Graph) -> int:
    """Max of the degeneracy and minor-min-width lower bounds."""
    if g.n == 0:
        return -1
    adj = _bitadj(g)
    full = (1 << g.n) - 1
    return max(_degeneracy(adj, full), _minor_min_width(adj, full))


class _Search:
    """Decision search ``tw <= k`` over elimination sets with memoization."""

    def __init__(self, adj: list[int], k: int):
        self.k = k
        self.failed: set[int] = set()
        self.adj0 = adj

    def run(self, remaining: int) -> list[int] | None:
        return self._go(remaining, self.adj0)

    def _go(self, remaining: int, adj: list[int]) -> list[int] | None:
        k = self.k
        order: list[int] = []
        # forced moves: simplicial / almost simplicial vertices of degree <= k
        while True:
            if bin(remaining).count("1") <= k + 1:
                return order + list(_bits(remaining))
            forced = None
            for v in _bits(remaining):
                nb = adj[v]
                d = bin(nb).count("1")
                if d > k:
                    continue
                missing = [u for u in _bits(nb) if (adj[u] | (1 << u)) & nb != nb]
                if not missing:
                    forced = v
                    break
                if len(missing) == 1 or self._almost(adj, nb, missing):
                    forced = v
                    break
            if forced is None:
                break
            order.append(forced)
            adj = _eliminate(adj, forced)
            remaining &= ~(1 << forced)
        if remaining in self.failed:
            return None
        if _minor_min_width(adj, remaining) > k:
            self.failed.add(remaining)
            return None
        cands = sorted((bin(adj[v]).count("1"), v) for v in _bits(remaining))
        for d, v in cands:
            if d > k:
                break
            sub = self._go(remaining & ~(1 << v), _eliminate(adj, v))
            if sub is not None:
                return order + [v] + sub
        self.failed.add(remaining)
        return None

    @staticmethod
    def _almost(adj: list[int], nb: int, missing: list[int]) -> bool:
        # all but one neighbor w form a clique
        for w in missing:
            rest = nb & ~(1 << w)
            if all((adj[u] | (1 << u)) & rest == rest for u in _bits(rest)):
                return True
        return False


def exact_treewidth(g: Graph, budget: int = 32) -> tuple[int, TreeDecomposition]:
    """Exact treewidth with a witnessing decomposition (graphs up to ``budget`` vertices)."""
    if g.n > budget:
        raise DecompositionError(f"too large for exact oracle ({g.n} > {budget} vertices)")
    if g.n == 0:
        return -1, decomposition_from_ordering(g, [])
    order: list[int] = []
    width = 0
    for comp in g.components():
        sub, back = g.induced(comp)
        w, o = _component_treewidth(sub)
        width = max(width, w)
        order.extend(back[v] for v in o)
    td = decomposition_from_ordering(g, order)
    assert td.width == width, (td.width, width)
    return width, td


def _component_treewidth(g: Graph) -> tuple[int, list[int]]:
    ub, ub_order = _heuristic_order(g, "min_fill")
    ub2, order2 = _heuristic_order(g, "min_degree")
    if ub2 < ub:
        ub, ub_order = ub2, order2
    lb = treewidth_lower(g)
    adj = _bitadj(g)
    full = (1 << g.n) - 1
    for k in range(max(lb, 0), ub):
        found = _Search(adj, k).run(full)
        if found is not None:
            return k, found
    return ub, ub_order


# ---------------------------------------------------------------------------
# tree-partitions

@dataclass(frozen=True)
class TreePartition:
    tree: Graph
    parts: VertexPartition
    root: int
    depth: tuple[int, ...]

    @property
    def width(self) -> int:
        return self.parts.max_size()


def validate_tree_partition(g: Graph, tp: TreePartition) -> Report:
    try:
        tp.parts.check(g)
    except GraphError as exc:
        return Report(False, str(exc))
    if tp.tree.n != len(tp.parts) or (g.n and not _is_tree(tp.tree)):
        return Report(False, "not a tree over the parts")
    idx = tp.parts.index()
    for u, v in g.sorted_edges():
        a, b = idx[u], idx[v]
        if a != b and not tp.tree.has_edge(a, b):
            return Report(False, "edge joins non-adjacent parts", (u, v))
    if tp.tree.n:
        lay = bfs_layering(tp.tree, tp.root).layer_of()
        for x in range(tp.tree.n):
            if tp.depth[x] != lay[x]:
                return Report(False, "depth mismatch", (x,))
    return OK


def _rooted(tree_edges: list[tuple[int, int]], parts: list[frozenset[int]], g: Graph) -> TreePartition:
    tree = Graph(len(parts), tree_edges)
    root = 0
    for i, p in enumerate(parts):
        if 0 in p:
            root = i
    lay = bfs_layering(tree, root).layer_of() if parts else {}
    return TreePartition(tree, VertexPartition.of(parts), root, tuple(lay[i] for i in range(len(parts))))


def tree_partition(g: Graph, td: TreeDecomposition) -> TreePartition:
    """Tree-partition from BFS layers, refined by separators taken from ``td``.

    Parts are grown outward from the smallest label of each component. The
    part handed down to a component ``C`` is its boundary ``N(R) & C`` where
    ``R`` is the parent part. When a boundary ``T`` exceeds ``k + 1``
    vertices (``k`` the width of ``td``), bags of ``td`` are added to the
    part so that every remaining component touches at most ``k + 1``
    vertices of ``T`` and at most two of the added bags. This keeps every
    boundary at most ``3 * Delta * (k + 1)`` and every part below
    ``9 * Delta * (k + 1)``; without heavy boundaries it is exactly the
    layered partition into BFS layers split by components of deeper layers.
    """
    rep = validate_tree_decomposition(g, td)
    if not rep:
        raise DecompositionError(f"invalid tree decomposition: {rep.violation}")
    if g.n == 0:
        return TreePartition(Graph(0), VertexPartition(()), 0, ())
    k = max(td.width, 0)
    where: dict[int, list[int]] = {v: [] for v in g.vertices()}
    for i, bag in enumerate(td.bags):
        for v in bag:
            where[v].append(i)

    parts: list[frozenset[int]] = []
    edges: list[tuple[int, int]] = []
    roots = []
    # work items: (boundary, vertex set of the component, parent part index)
    stack = []
    for comp in g.components():
        stack.append((frozenset([comp[0]]), frozenset(comp), None))
    while stack:
        boundary, comp, parent = stack.pop()
        if len(boundary) > k + 1:
            extra = _separator(td, where, boundary, comp, k + 1)
        else:
            extra = frozenset()
        part = boundary | extra
        me = len(parts)
        parts.append(part)
        if parent is None:
            roots.append(me)
        else:
            edges.append((parent, me))
        rest = comp - part
        children = []
        for c in g.components(rest):
            cs = frozenset(c)
            b = frozenset(v for v in cs if any(u in part for u in g.neighbors(v)))
            children.append((b, cs, me))
        stack.extend(reversed(children))
    edges.extend(zip(roots, roots[1:]))
    # renumber parts in BFS order from the root for readability
    return _canonical(g, parts, edges)


def _canonical(g: Graph, parts, edges) -> TreePartition:
    tree = Graph(len(parts), edges)
    root = next(i for i, p in enumerate(parts) if 0 in p)
    lay = bfs_layering(tree, root)
    order = [x for layer in lay.layers for x in layer]
    pos = {x: i for i, x in enumerate(order)}
    new_parts = [parts[x] for x in order]
    new_edges = [(pos[a], pos[b]) for a, b in edges]
    return _rooted(new_edges, new_parts, g)


def _separator(td: TreeDecomposition, where, boundary: frozenset[int], comp: frozenset[int],
               cap: int) -> frozenset[int]:
    """Union of bags (restricted to ``comp``) splitting ``boundary`` into pieces of <= cap."""
    tree = td.tree
    root = min(where[min(boundary)])
    lay = bfs_layering(tree, root)
    depth = lay.layer_of()
    # each boundary vertex is charged to its topmost bag
    charge = {}
    for v in boundary:
        top = min(where[v], key=lambda i: (depth[i], i))
        charge[top] = charge.get(top, 0) + 1
    post = [x for layer in reversed(lay.layers) for x in layer]
    residual = {}
    cuts = set()
    for x in post:
        r = charge.get(x, 0) + sum(residual[c] for c in tree.neighbors(x) if lay.parent.get(c) == x)
        if r > cap:
            cuts.add(x)
            r = 0
        residual[x] = r
    # close under lowest common ancestors
    pre = {x: i for i, x in enumerate(_preorder(tree, lay))}
    ordered = sorted(cuts, key=pre.get)
    closed = set(cuts)
    for a, b in zip(ordered, ordered[1:]):
        closed.add(_lca(lay, depth, a, b))
    return frozenset(v for x in closed for v in td.bags[x] if v in comp)


def _preorder(tree: Graph, lay) -> list[int]:
    out = []
    stack = [lay.root]
    while stack:
        x = stack.pop()
        out.append(x)
        kids = sorted((c for c in tree.neighbors(x) if lay.parent.get(c) == x), reverse=True)
        stack.extend(kids)
    return out


def _lca(lay, depth, a: int, b: int) -> int:
    while depth[a] > depth[b]:
        a = lay.parent[a]
    while depth[b] > depth[a]:
        b = lay.parent[b]
    while a != b:
        a, b = lay.parent[a], lay.parent[b]
    return a


# ---------------------------------------------------------------------------
# PACE-style text format

def format_pace(td: TreeDecomposition, n: int) -> str:
    lines = [f"s td {len(td.bags)} {td.width + 1} {n}"]
    for i, bag in enumerate(td.bags, start=1):
        lines.append(" ".join(["b", str(i)] + [str(v + 1) for v in sorted(bag)]))
    for a, b in td.tree.sorted_edges():
        lines.append(f"{a + 1} {b + 1}")
    return "\n".join(lines) + "\n"


def parse_pace(text: str) -> tuple[int, TreeDecomposition]:
    """Parse a PACE ``.td`` file; returns the host vertex count and decomposition."""
    header = None
    bags: dict[int, frozenset[int]] = {}
    edges = []
    for ln in text.splitlines():
        tok = ln.split()
        if not tok or tok[0] == "c":
            continue
        if tok[0] == "s":
            if tok[1] != "td":
                raise DecompositionError("expected 's td' header")
            header = (int(tok[2]), int(tok[3]), int(tok[4]))
        elif tok[0] == "b":
            bags[int(tok[1]) - 1] = frozenset(int(x) - 1 for x in tok[2:])
        else:
            edges.append((int(tok[0]) - 1, int(tok[1]) - 1))
    if header is None:
        raise DecompositionError("missing 's td' header")
    nb, _, n = header
    if sorted(bags) != list(range(nb)):
        raise DecompositionError("bag numbering must be 1..count")
    return n, TreeDecomposition(Graph(nb, edges), tuple(bags[i] for i in range(nb)))
