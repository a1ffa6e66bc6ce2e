"""Iterated BFS slicing, the recursive clustered edge-coloring built on it, and
extraction of subdivided-biclique induced minors from overly deep branches."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .coloring import EdgeColoring, mono_components
from .decomposition import Report, OK
from .generators import biclique
from .graph import (
    INF, BfsLayering, Graph, GraphError, bfs_distances, bfs_layering,
    shortest_path, subdivide, weak_diameter,
)
from .minors import INDUCED, MinorModel, validate_model


class KprError(GraphError):
    pass


@dataclass(frozen=True)
class KprParams:
    p: int
    q: int
    h: int
    d: int

    def __post_init__(self):
        if self.p < 2 or self.q < 1 or self.h < 1 or self.d < 0:
            raise KprError(f"invalid parameters {self}")

    @classmethod
    def for_witness(cls, p: int, q: int, h: int) -> "KprParams":
        """Threshold under which a deep branch forces a subdivided K_{p,q}."""
        return cls(p, q, h, ((8 * h + 2) * q + 4 * h + 6) * (p - 1))

    @classmethod
    def for_coloring(cls, p: int, q: int) -> "KprParams":
        return cls(p, q, 2, 18 * (q + 1) * (p - 1) - 1)

    @property
    def separation(self) -> int:
        """Pairwise distance of the base points of a witness."""
        return (8 * self.h + 2) * self.q + 4 * self.h + 6

    @property
    def moat(self) -> int:
        """Length of every vertical path used by the witness."""
        return 4 * self.h + 2


LEAF = "leaf"
SPLIT = "split"
TRUNCATED = "truncated"
DEGENERATE = "degenerate"


@dataclass
class BfsNode:
    id: int
    vertices: frozenset[int]
    depth: int
    parent: int | None
    slice_index: int | None
    weak_diameter: float
    status: str = LEAF
    layering: BfsLayering | None = None
    children: list[int] = field(default_factory=list)


@dataclass
class IteratedBfsTree:
    graph: Graph
    params: KprParams
    nodes: list[BfsNode]
    roots: list[int]
    max_depth: int

    @property
    def depth(self) -> int:
        return max((x.depth for x in self.nodes), default=0)

    @property
    def truncated(self) -> bool:
        return any(x.status == TRUNCATED for x in self.nodes)

    def leaves(self) -> list[BfsNode]:
        return [x for x in self.nodes if not x.children]

    def branch(self, node_id: int) -> list[BfsNode]:
        """Nodes from the component root down to ``node_id``."""
        out = []
        cur: int | None = node_id
        while cur is not None:
            out.append(self.nodes[cur])
            cur = self.nodes[cur].parent
        return out[::-1]

    def to_text(self) -> str:
        """Indented audit log, one node per line in preorder."""
        lines = [f"# iterated bfs p={self.params.p} q={self.params.q} "
                 f"h={self.params.h} d={self.params.d} depth={self.depth}"]

        def walk(i: int):
            x = self.nodes[i]
            diam = "inf" if x.weak_diameter == INF else int(x.weak_diameter)
            sl = "-" if x.slice_index is None else x.slice_index
            flag = "" if x.status in (LEAF, SPLIT) else f" [{x.status}]"
            lines.append(f"{'  ' * x.depth}node {x.id}: depth={x.depth} size={len(x.vertices)} "
                         f"slice={sl} weak_diameter={diam}{flag}")
            for c in x.children:
                walk(c)
        for r in self.roots:
            walk(r)
        return "\n".join(lines) + "\n"


def _slices(lay: BfsLayering, h: int) -> list[tuple[int, list[int]]]:
    """``(i, L_i + ... + L_{i+h-1})`` for every full window of ``h`` layers.

    With fewer than ``h`` layers a single window takes all of them.
    """
    s = lay.depth
    if s + 1 <= h:
        return [(0, [v for layer in lay.layers for v in layer])]
    return [(i, [v for layer in lay.layers[i:i + h] for v in layer]) for i in range(s - h + 2)]


def iterated_bfs(g: Graph, params: KprParams, max_depth: int | None = None) -> IteratedBfsTree:
    """Slice every component by ``h`` consecutive BFS layers until the weak
    diameter (measured in ``g``) is at most ``d``.

    Components of ``g`` are the depth-0 nodes. Children are listed by
    slice index, then by smallest label. Branches still too wide at
    ``max_depth`` (default ``q + 2``) are marked truncated.
    """
    if max_depth is None:
        max_depth = params.q + 2
    nodes: list[BfsNode] = []
    roots: list[int] = []

    def visit(verts: frozenset[int], depth: int, parent: int | None, sl: int | None):
        diam = weak_diameter(g, verts, cutoff=params.d)
        node = BfsNode(len(nodes), verts, depth, parent, sl, diam)
        nodes.append(node)
        if diam <= params.d:
            return node.id
        if depth >= max_depth:
            node.status = TRUNCATED
            return node.id
        lay = bfs_layering(g, within=verts)
        node.layering = lay
        windows = _slices(lay, params.h)
        if len(windows) == 1 and len(windows[0][1]) == len(verts):
            node.status = DEGENERATE
            return node.id
        node.status = SPLIT
        for i, window in windows:
            for comp in g.components(window):
                node.children.append(visit(frozenset(comp), depth + 1, node.id, i))
        return node.id

    for comp in g.components():
        roots.append(visit(frozenset(comp), 0, None, None))
    return IteratedBfsTree(g, params, nodes, roots, max_depth)


def check_orthogonality(g: Graph, outer: BfsLayering, inner_host: Iterable[int],
                        inner: BfsLayering, h: int) -> Report:
    """Compare the outer BFS-tree path to each inner vertex with the inner layers.

    For ``w`` in inner layer ``l`` the path may only meet inner layers
    ``l-h+1 .. l+h-1`` and only its last ``h`` vertices may lie in the
    inner host, forming a suffix of the path.
    """
    host = set(inner_host)
    out_layer = outer.layer_of()
    spots = {out_layer.get(v) for v in host}
    if None in spots or max(spots) - min(spots) >= h:
        raise KprError("inner host is not inside h consecutive outer layers")
    in_layer = inner.layer_of()
    limit = outer.depth + 1
    for w in sorted(host):
        if w not in in_layer:
            continue
        ell = in_layer[w]
        path = [w]
        while path[-1] != outer.root:
            nxt = outer.parent.get(path[-1])
            if nxt is None or len(path) > limit or not g.has_edge(path[-1], nxt):
                return Report(False, "outer parent map is not a BFS tree", (w,))
            path.append(nxt)
        path.reverse()
        inside = [k for k, v in enumerate(path) if v in host]
        if len(inside) > h or inside != list(range(len(path) - len(inside), len(path))):
            return Report(False, "path enters inner host before its last h vertices", (w,))
        for k in inside:
            if abs(in_layer.get(path[k], -10 ** 9) - ell) > h - 1:
                return Report(False, "path meets a far inner layer", (w, path[k]))
    return OK


def audit_orthogonality(tree: IteratedBfsTree) -> Report:
    """Run :func:`check_orthogonality` for every parent/child pair of ``tree``."""
    for x in tree.nodes:
        if x.parent is None:
            continue
        par = tree.nodes[x.parent]
        inner = x.layering or bfs_layering(tree.graph, within=x.vertices)
        rep = check_orthogonality(tree.graph, par.layering, x.vertices, inner, tree.params.h)
        if not rep:
            return rep
    return OK


# ---------------------------------------------------------------------------
# coloring

@dataclass
class KprColoring:
    coloring: EdgeColoring
    tree: IteratedBfsTree
    leaf_of_edge: dict[tuple[int, int], int]
    depth_bound_exceeded: bool


def kpr_coloring(g: Graph, p: int, q: int, max_depth: int | None = None) -> KprColoring:
    """Color with ``2**depth`` colors so that every monochromatic component
    stays inside one leaf of the width-2 iterated BFS.

    A split node hands its even slices the lower half of its palette and
    its odd slices the upper half. An edge inside a single layer sits in
    two slices and follows the even one.
    """
    params = KprParams.for_coloring(p, q)
    tree = iterated_bfs(g, params, max_depth)
    top = tree.depth
    color: dict[tuple[int, int], int] = {}
    leaf_of: dict[tuple[int, int], int] = {}
    owner: dict[tuple[int, int], int] = {}

    # map every (node, slice, vertex) to the child holding that vertex
    child_at: dict[tuple[int, int, int], int] = {}
    for x in tree.nodes:
        for c in x.children:
            ch = tree.nodes[c]
            for v in ch.vertices:
                child_at[(x.id, ch.slice_index, v)] = c

    offset = {r: 0 for r in tree.roots}
    comp_of = {v: r for r in tree.roots for v in tree.nodes[r].vertices}
    for e in g.sorted_edges():
        owner[e] = comp_of[e[0]]
    pending = {r: [] for r in tree.roots}
    for e, r in owner.items():
        pending[r].append(e)
    for x in tree.nodes:  # preorder: parents come first
        edges = pending.pop(x.id, [])
        if not x.children:
            for e in edges:
                color[e] = offset[x.id]
                leaf_of[e] = x.id
            continue
        lay = x.layering.layer_of()
        last = x.layering.depth - 1
        half = 1 << (top - x.depth - 1)
        for c in x.children:
            ch = tree.nodes[c]
            offset[c] = offset[x.id] + (half if ch.slice_index % 2 else 0)
            pending[c] = []
        for u, v in edges:
            a, b = sorted((lay[u], lay[v]))
            if a == b:
                i = a if a % 2 == 0 and a <= last else max(a - 1, 0)
                i = min(i, last)
            else:
                i = a
            pending[child_at[(x.id, i, u)]].append((u, v))
    h = 1 << top
    col = EdgeColoring(g, color, h)
    return KprColoring(col, tree, leaf_of, top > q + 1)


def audit_kpr_coloring(res: KprColoring) -> Report:
    """Every monochromatic component lies in one leaf spanning at most two
    consecutive layers of its parent's BFS."""
    tree = res.tree
    layers: dict[int, dict[int, int]] = {}
    for col, comp in mono_components(res.coloring):
        members = set(comp)
        u = comp[0]
        w = min(tree.graph.neighbors(u) & members)
        leaf = tree.nodes[res.leaf_of_edge[(min(u, w), max(u, w))]]
        if not members <= leaf.vertices:
            return Report(False, "monochromatic component leaves its leaf", (col, leaf.id))
        if leaf.parent is not None:
            if leaf.parent not in layers:
                layers[leaf.parent] = tree.nodes[leaf.parent].layering.layer_of()
            lay = layers[leaf.parent]
            spread = {lay[v] for v in comp}
            if max(spread) - min(spread) > 1:
                return Report(False, "monochromatic component spans more than two layers", (col, leaf.id))
    return OK


# ---------------------------------------------------------------------------
# witness extraction

class WitnessError(KprError):
    def __init__(self, level: int, item: int | str, detail: str = ""):
        super().__init__(f"level {level}: invariant item {item} failed {detail}".rstrip())
        self.level = level
        self.item = item


@dataclass
class InducedMinorWitness:
    """Branch sets of a 1-subdivided ``K_{p,q}`` plus the per-level paths."""

    params: KprParams
    a_sets: list[frozenset[int]]
    b_sets: list[frozenset[int]]
    z_sets: dict[tuple[int, int], int]  # (left j, right k) -> subdivision vertex
    paths: dict[int, list[list[int]]]  # level -> vertical paths P_j(level)
    checks: list[tuple[int, int]] = field(default_factory=list)  # (level, item) asserted

    def model(self, host: Graph) -> MinorModel:
        p, q = self.params.p, self.params.q
        pattern = subdivide(biclique(p, q), 1)
        sets: list[frozenset[int]] = list(self.a_sets) + list(self.b_sets)
        for j, k in biclique(p, q).sorted_edges():
            sets.append(frozenset([self.z_sets[(j, k - p)]]))
        return MinorModel(host, pattern, tuple(sets), INDUCED)


def _far_pair(g: Graph, verts: frozenset[int], need: int) -> tuple[int, int] | None:
    """Two vertices of ``verts`` more than ``need`` apart in ``g``."""
    start = min(verts)
    for _ in range(2):  # double sweep first
        dist = bfs_distances(g, [start])
        far = max(sorted(verts), key=lambda v: dist.get(v, INF))
        if dist.get(far, INF) > need:
            return start, far
        start = far
    for u in sorted(verts):
        dist = bfs_distances(g, [u], cutoff=need + 1)
        for v in sorted(verts):
            if dist.get(v, INF) > need:
                return u, v
    return None


def _base_points(g: Graph, verts: frozenset[int], p: int, sep: int) -> list[int]:
    """``p`` vertices of ``verts`` pairwise at least ``sep`` apart in ``g``.

    Walk a path inside ``verts`` between two far vertices; the distance
    from its start changes by at most one per step, so it passes every
    multiple of ``sep`` along the way.
    """
    pair = _far_pair(g, verts, sep * (p - 1))
    if pair is None:
        raise WitnessError(0, "base", "(weak diameter too small)")
    u, v = pair
    route = shortest_path(g, u, v, within=set(verts))
    dist = bfs_distances(g, [u])
    points = []
    for k in range(p):
        points.append(next(x for x in route if dist[x] >= k * sep))
    return points


def _vertical(lay: BfsLayering, bottom: int, length: int) -> list[int]:
    """Vertical path of ``length`` edges ending at ``bottom``, listed top-down."""
    path = [bottom]
    for _ in range(length):
        if path[-1] == lay.root:
            raise KprError("vertex too close to the BFS root for a vertical path")
        path.append(lay.parent[path[-1]])
    return path[::-1]


def _touches(g: Graph, a: Iterable[int], b: set[int]) -> bool:
    return any(v in b or g.neighbors(v) & b for v in a)


def extract_witness(tree: IteratedBfsTree, deep_node: int | BfsNode,
                    params: KprParams | None = None) -> InducedMinorWitness:
    """Induced minor model of the 1-subdivided ``K_{p,q}`` from a node at depth
    ``q`` whose weak diameter exceeds ``d``.

    The model is grown bottom-up along the branch to the component root.
    At each level the vertical paths of length ``4h+2`` are checked against
    the six invariant items; a failure raises :class:`WitnessError`.
    """
    params = params or tree.params
    g = tree.graph
    node = tree.nodes[deep_node] if isinstance(deep_node, int) else deep_node
    p, q, h = params.p, params.q, params.h
    if node.depth != q:
        raise KprError(f"node must sit at depth {q}, found {node.depth}")
    if weak_diameter(g, node.vertices, cutoff=params.d) <= params.d:
        raise KprError("node has weak diameter at most d")
    chain = tree.branch(node.id)  # chain[k] is the branch node at depth k, i.e. level k + 1
    moat = params.moat

    def lay_of(level: int) -> BfsLayering:
        # BFS of the branch node at a 1-based level
        lay = chain[level - 1].layering
        if lay is None:
            lay = bfs_layering(g, within=chain[level - 1].vertices)
        return lay

    points = _base_points(g, node.vertices, p, params.separation)
    a_sets = [frozenset([x]) for x in points]
    b_sets: list[frozenset[int]] = []
    z_sets: dict[tuple[int, int], int] = {}
    paths: dict[int, list[list[int]]] = {}
    wit = InducedMinorWitness(params, a_sets, b_sets, z_sets, paths)
    try:
        cur = [_vertical(lay_of(q), x, moat) for x in points]
    except KprError as exc:
        raise WitnessError(q + 1, 2, str(exc)) from None

    for i in range(q + 1, 1, -1):
        paths[i] = cur
        _check_level(g, wit, i, cur)
        lay = lay_of(i - 1)
        zs = [path[0] for path in cur]
        x_set: set[int] = set()
        for z in zs:
            x_set.update(lay.tree_path(z))
        k = q + 1 - i  # index of the new right-hand branch set
        b_sets.append(frozenset(x_set - set(zs)))
        for j, z in enumerate(zs):
            z_sets[(j, k)] = z
            a_sets[j] = (a_sets[j] | frozenset(cur[j])) - {z}
        if i > 2:
            mids = [path[len(path) // 2] for path in cur]
            try:
                cur = [_vertical(lay_of(i - 2), m, moat) for m in mids]
            except KprError as exc:
                raise WitnessError(i - 1, 2, str(exc)) from None
    model = wit.model(g)
    rep = validate_model(model)
    if not rep:
        raise WitnessError(1, "model", f"{rep.violation} {rep.witness}")
    return wit


def _check_level(g: Graph, wit: InducedMinorWitness, i: int, paths: list[list[int]]):
    """Assert the six invariant items for the paths ``P_j(i)``."""
    params = wit.params
    p, q, h = params.p, params.q, params.h
    a_sets = wit.a_sets
    others = list(wit.b_sets) + [frozenset([z]) for z in wit.z_sets.values()]
    branch_sets = list(a_sets) + others
    for j, path in enumerate(paths):
        if len(path) != params.moat + 1 or len(set(path)) != len(path):
            raise WitnessError(i, "length", f"(P_{j} has {len(path) - 1} edges)")
        hits = [k for k, s in enumerate(branch_sets) if s & set(path)]
        if hits != [j]:
            raise WitnessError(i, 1, f"(P_{j} meets branch sets {hits})")
        if path[-1] not in a_sets[j] or path[0] in a_sets[j]:
            raise WitnessError(i, 2, f"(endpoints of P_{j})")
    wit.checks += [(i, 1), (i, 2)]
    for j in range(p):
        for j2 in range(j + 1, p):
            if _touches(g, paths[j], set(paths[j2])):
                raise WitnessError(i, 3, f"(P_{j} touches P_{j2})")
    wit.checks.append((i, 3))
    for j, path in enumerate(paths):
        for k, s in enumerate(branch_sets):
            if k != j and _touches(g, path, set(s)):
                raise WitnessError(i, 4, f"(P_{j} next to branch set {k})")
    wit.checks.append((i, 4))
    cap = (4 * h + 1) * (q + 1 - i) + 1
    for j, s in enumerate(a_sets):
        if len(s) > cap:
            raise WitnessError(i, 5, f"(|A_{j}| = {len(s)} > {cap})")
    wit.checks.append((i, 5))
    need = (8 * h + 2) * (i - 1) + 4 * h + 6
    for j in range(p):
        dist = bfs_distances(g, a_sets[j], cutoff=need)
        for j2 in range(j + 1, p):
            if any(dist.get(v, INF) < need for v in a_sets[j2]):
                raise WitnessError(i, 6, f"(A_{j} and A_{j2} closer than {need})")
    wit.checks.append((i, 6))


def deep_nodes(tree: IteratedBfsTree) -> list[BfsNode]:
    """Nodes at depth ``q`` whose weak diameter still exceeds ``d``."""
    q, d = tree.params.q, tree.params.d
    return [x for x in tree.nodes if x.depth == q and x.weak_diameter > d]


def format_witness(wit: InducedMinorWitness, host: Graph) -> str:
    from .minors import format_model
    return format_model(wit.model(host))
