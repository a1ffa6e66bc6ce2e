"""Minor and induced-minor models: validation and exhaustive search."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .decomposition import Report, OK
from .graph import Graph, GraphError

MINOR = "minor"
INDUCED = "induced_minor"


class BudgetExhausted(RuntimeError):
    """The search expanded more nodes than allowed without reaching a verdict."""

    def __init__(self, expanded: int):
        super().__init__(f"budget exhausted after {expanded} search nodes")
        self.expanded = expanded


@dataclass(frozen=True)
class MinorModel:
    host: Graph
    pattern: Graph
    branch_sets: tuple[frozenset[int], ...]
    kind: str = INDUCED

    def touching_pairs(self) -> set[tuple[int, int]]:
        return _touching(self.host, self.branch_sets)


def _touching(host: Graph, sets: Sequence[Iterable[int]]) -> set[tuple[int, int]]:
    owner = {}
    for i, s in enumerate(sets):
        for v in s:
            owner[v] = i
    pairs = set()
    for a, b in host.edges:
        i, j = owner.get(a), owner.get(b)
        if i is not None and j is not None and i != j:
            pairs.add((min(i, j), max(i, j)))
    return pairs


def validate_model(m: MinorModel) -> Report:
    """Check disjointness, connectivity and the adjacency requirement of ``m.kind``."""
    if m.kind not in (MINOR, INDUCED):
        return Report(False, f"unknown model kind {m.kind!r}")
    if len(m.branch_sets) != m.pattern.n:
        return Report(False, "wrong number of branch sets", (len(m.branch_sets), m.pattern.n))
    seen: dict[int, int] = {}
    for i, s in enumerate(m.branch_sets):
        if not s:
            return Report(False, "empty branch set", (i,))
        for v in s:
            if not 0 <= v < m.host.n:
                return Report(False, "vertex not in host", (i, v))
            if v in seen:
                return Report(False, "overlapping branch sets", (seen[v], i))
            seen[v] = i
        if not m.host.is_connected_set(s):
            return Report(False, "branch set not connected", (i,))
    touch = m.touching_pairs()
    for a, b in m.pattern.sorted_edges():
        if (a, b) not in touch:
            return Report(False, "missing adjacency", (a, b))
    if m.kind == INDUCED:
        for a, b in sorted(touch):
            if not m.pattern.has_edge(a, b):
                return Report(False, "extra adjacency", (a, b))
    return OK


def format_model(m: MinorModel) -> str:
    return "".join(f"{v}: {' '.join(map(str, sorted(s)))}\n" for v, s in enumerate(m.branch_sets))


def parse_model(text: str, host: Graph, pattern: Graph, kind: str = INDUCED) -> MinorModel:
    sets: dict[int, frozenset[int]] = {}
    for k, ln in enumerate(text.splitlines(), start=1):
        if not ln.strip():
            continue
        head, sep, tail = ln.partition(":")
        if not sep:
            raise GraphError(f"line {k}: expected 'v: u1 u2 ...'")
        v = int(head)
        if v in sets:
            raise GraphError(f"line {k}: pattern vertex {v} listed twice")
        sets[v] = frozenset(int(x) for x in tail.split())
    if sorted(sets) != list(range(pattern.n)):
        raise GraphError("model must list every pattern vertex exactly once")
    return MinorModel(host, pattern, tuple(sets[v] for v in range(pattern.n)), kind)


# ---------------------------------------------------------------------------
# search

def _bits(x: int) -> Iterator[int]:
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def _cut_vertices(adj: list[int], s: int) -> set[int]:
    """Cut vertices of the connected induced subgraph on ``s``."""
    verts = list(_bits(s))
    if len(verts) <= 2:
        return set()
    disc: dict[int, int] = {}
    low: dict[int, int] = {}
    cut = set()
    root = verts[0]
    timer = 0
    disc[root] = low[root] = 0
    stack = [(root, -1, iter(list(_bits(adj[root] & s))))]
    root_children = 0
    while stack:
        v, parent, it = stack[-1]
        advanced = False
        for w in it:
            if w == parent:
                continue
            if w in disc:
                low[v] = min(low[v], disc[w])
            else:
                timer += 1
                disc[w] = low[w] = timer
                if v == root:
                    root_children += 1
                stack.append((w, v, iter(list(_bits(adj[w] & s)))))
                advanced = True
                break
        if advanced:
            continue
        stack.pop()
        if stack:
            u = stack[-1][0]
            low[u] = min(low[u], low[v])
            if u != root and low[v] >= disc[u]:
                cut.add(u)
    if root_children > 1:
        cut.add(root)
    return cut


def _noncut_count(adj: list[int], s: int) -> int:
    """Number of non-cut vertices of the connected induced subgraph on ``s``."""
    return bin(s).count("1") - len(_cut_vertices(adj, s))


def _automorphism_exists(pat: Graph, fixed: list[int], src: int, dst: int) -> bool:
    """Is there an automorphism of ``pat`` fixing ``fixed`` pointwise and sending ``src`` to ``dst``?"""
    if pat.degree(src) != pat.degree(dst):
        return False
    image = {v: v for v in fixed}
    image[src] = dst
    used = set(image.values())
    if len(used) != len(image):
        return False
    for a in image:
        for b in image:
            if a < b and pat.has_edge(a, b) != pat.has_edge(image[a], image[b]):
                return False
    rest = [v for v in pat.vertices() if v not in image]

    def extend(k: int) -> bool:
        if k == len(rest):
            return True
        v = rest[k]
        for w in pat.vertices():
            if w in used or pat.degree(w) != pat.degree(v):
                continue
            if all(pat.has_edge(v, a) == pat.has_edge(w, image[a]) for a in image):
                image[v] = w
                used.add(w)
                if extend(k + 1):
                    return True
                del image[v]
                used.discard(w)
        return False
    return extend(0)


class _Search:
    def __init__(self, host: Graph, pattern: Graph, induced: bool, budget: int):
        self.host = host
        self.pattern = pattern
        self.induced = induced
        self.budget = budget
        self.expanded = 0
        self.adj = [0] * host.n
        for u, v in host.edges:
            self.adj[u] |= 1 << v
            self.adj[v] |= 1 << u
        self.full = (1 << host.n) - 1
        self.order = self._order()
        self.mates = self._orbit_mates()
        self.floor: dict[int, int] = {}  # pattern vertex -> labels below are forbidden

    def _order(self) -> list[int]:
        pat = self.pattern
        left = set(pat.vertices())
        order: list[int] = []
        while left:
            placed = set(order)
            v = min(left, key=lambda x: (-len(pat.neighbors(x) & placed), -pat.degree(x), x))
            order.append(v)
            left.discard(v)
        return order

    def _orbit_mates(self) -> dict[int, list[int]]:
        """Later pattern vertices interchangeable with each vertex of the order.

        Along the stabilizer chain of the search order, a vertex can be
        required to own the smallest host label among its orbit mates, since
        any model can be permuted by a pattern automorphism to satisfy this.
        """
        pat = self.pattern
        mates: dict[int, list[int]] = {}
        if pat.n > 12:
            return mates
        for k, v in enumerate(self.order):
            fixed = self.order[:k]
            mates[v] = [w for w in self.order[k + 1:] if _automorphism_exists(pat, fixed, v, w)]
        return mates

    def _nbhd(self, s: int) -> int:
        out = s
        for v in _bits(s):
            out |= self.adj[v]
        return out

    def _component_of(self, start: int, allowed: int) -> int:
        comp = 1 << start
        frontier = comp
        while frontier:
            nxt = 0
            for v in _bits(frontier):
                nxt |= self.adj[v]
            nxt &= allowed & ~comp
            comp |= nxt
            frontier = nxt
        return comp

    def _tick(self):
        self.expanded += 1
        if self.expanded > self.budget:
            raise BudgetExhausted(self.expanded)

    def _available(self, w: int, sets: dict[int, int], used: int) -> int:
        avail = self.full & ~used
        if w in self.floor:
            avail &= ~((1 << self.floor[w]) - 1)
        if self.induced:
            for x, s in sets.items():
                if x != w and not self.pattern.has_edge(w, x):
                    avail &= ~self._nbhd(s)
        return avail

    def _feasible(self, w: int, sets: dict[int, int], used: int) -> bool:
        avail = self._available(w, sets, used)
        if not avail:
            return False
        need = [self._nbhd(sets[x]) & ~sets[x] for x in self.pattern.neighbors(w) if x in sets]
        if not need:
            return True
        first = need[0] & avail
        seen = 0
        for r in _bits(first):
            if seen >> r & 1:
                continue
            comp = self._component_of(r, avail)
            seen |= comp
            if all(comp & nb for nb in need):
                return True
        return False

    def _connected_sets(self, root: int, avail: int, limit: int) -> Iterator[int]:
        """Connected subsets of ``avail`` containing ``root`` with <= limit non-cut vertices."""
        adj = self.adj
        max_size = 1 if limit <= 1 else bin(avail).count("1")

        def grow(s: int, size: int, cand: int, excl: int) -> Iterator[int]:
            self._tick()
            yield s
            if size >= max_size:
                return
            c = cand
            while c:
                low = c & -c
                c ^= low
                u = low.bit_length() - 1
                s2 = s | low
                if _noncut_count(adj, s2) <= limit:
                    new_cand = (c | (adj[u] & avail)) & ~s2 & ~excl
                    yield from grow(s2, size + 1, new_cand, excl)
                excl |= low
        r = 1 << root
        yield from grow(r, 1, adj[root] & avail & ~r, 0)

    def run(self) -> list[int] | None:
        sets: dict[int, int] = {}
        if self._place(0, sets, 0):
            return [sets[v] for v in self.pattern.vertices()]
        return None

    def _place(self, idx: int, sets: dict[int, int], used: int) -> bool:
        if idx == len(self.order):
            return True
        v = self.order[idx]
        pat = self.pattern
        avail = self._available(v, sets, used)
        placed_nbrs = [x for x in pat.neighbors(v) if x in sets]
        need = [self._nbhd(sets[x]) & ~sets[x] for x in placed_nbrs]
        limit = max(pat.degree(v), 1)
        if need:
            anchor = need[0] & avail
            roots = list(_bits(anchor))
        else:
            anchor = avail
            roots = list(_bits(avail))
        future = self.order[idx + 1:]
        open_nbrs = sum(1 for x in pat.neighbors(v) if x not in sets)
        mates = self.mates.get(v, [])
        for r in roots:
            # the root is the smallest anchor vertex in the branch set
            region = avail & ~(anchor & ((1 << r) - 1))
            for s in self._connected_sets(r, region, limit):
                if any(not (s & nb) for nb in need):
                    continue
                if not self._minimal_enough(s, need, open_nbrs):
                    continue
                used2 = used | s
                sets[v] = s
                saved = {w: self.floor.get(w) for w in mates}
                low = (s & -s).bit_length()  # one past the smallest label of s
                for w in mates:
                    self.floor[w] = max(self.floor.get(w, 0), low)
                if all(self._feasible(w, sets, used2) for w in future):
                    if self._place(idx + 1, sets, used2):
                        return True
                for w, f in saved.items():
                    if f is None:
                        self.floor.pop(w, None)
                    else:
                        self.floor[w] = f
                del sets[v]
        return False

    def _minimal_enough(self, s: int, need: list[int], open_nbrs: int) -> bool:
        """Necessary condition for ``s`` in a vertex-minimal model.

        In such a model every non-cut vertex of a branch set is its only
        contact with some neighboring branch set. Non-cut vertices that are
        not the sole contact with an already placed neighbor must be served
        by distinct unplaced neighbors.
        """
        if s & (s - 1) == 0:
            return True
        verts = list(_bits(s))
        cut = _cut_vertices(self.adj, s)
        sole = 0
        for nb in need:
            touch = s & nb
            if touch & (touch - 1) == 0:
                sole |= touch
        spare = sum(1 for x in verts if x not in cut and not (sole >> x & 1))
        return spare <= open_nbrs


def _quick_absent(host: Graph, pattern: Graph) -> bool:
    if pattern.n > host.n or pattern.m > host.m:
        return True
    if host.is_forest() and not pattern.is_forest():
        return True
    return False


def _walk_order(pattern: Graph) -> tuple[str, list[int]] | None:
    """("path" | "cycle", vertices in walking order) if ``pattern`` is one of those."""
    n = pattern.n
    if not pattern.is_connected() or pattern.max_degree() > 2:
        return None
    if pattern.m == n - 1:
        shape = "path"
        start = min(v for v in pattern.vertices() if pattern.degree(v) <= 1)
    elif pattern.m == n and n >= 3:
        shape, start = "cycle", 0
    else:
        return None
    order, prev = [start], None
    while len(order) < n:
        nxt = min(x for x in pattern.neighbors(order[-1]) if x != prev and x not in order[-2:])
        prev = order[-1]
        order.append(nxt)
    return shape, order


def _induced_walk(host: Graph, shape: str, k: int, budget: int) -> list[int] | None:
    """Induced path on ``k`` vertices, or induced cycle of length >= ``k``.

    A path or cycle pattern is an induced minor exactly when such a walk exists,
    so this replaces the general search for those patterns.
    """
    adj = [0] * host.n
    for u, v in host.edges:
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    closed = [a | (1 << v) for v, a in enumerate(adj)]
    ticks = 0

    def candidates(walk: list[int], blocked: int) -> int:
        cand = adj[walk[-1]] & ~blocked
        if shape == "cycle":
            cand &= ~((1 << (walk[0] + 1)) - 1)  # the first vertex is the smallest
        return cand

    for s in host.vertices():
        # depth-first over induced walks, kept on an explicit stack since
        # walks can be as long as the host
        walk = [s]
        blocked = [1 << s]  # blocked[i]: vertices no longer allowed after walk[:i+1]
        cands = [candidates(walk, blocked[0])]
        while cands:
            ticks += 1
            if ticks > budget:
                raise BudgetExhausted(ticks)
            if shape == "path" and len(walk) == k:
                return walk
            c = cands[-1]
            if not c:
                cands.pop()
                blocked.pop()
                walk.pop()
                continue
            low = c & -c
            cands[-1] = c ^ low
            x = low.bit_length() - 1
            if shape == "cycle" and len(walk) >= 2 and adj[x] >> walk[0] & 1:
                if len(walk) + 1 >= k:
                    return walk + [x]
                continue
            # once we step past the tip, everything next to it is off limits;
            # neighbors of the first vertex stay open to close a cycle
            last = walk[-1]
            nb = closed[last] if len(walk) >= 2 or shape == "path" else 1 << last
            walk.append(x)
            blocked.append(blocked[-1] | nb)
            cands.append(candidates(walk, blocked[-1]))
    return None


def _find(host: Graph, pattern: Graph, induced: bool, budget: int) -> MinorModel | None:
    kind = INDUCED if induced else MINOR
    if pattern.n == 0:
        return MinorModel(host, pattern, (), kind)
    if _quick_absent(host, pattern):
        return None
    walk = _walk_order(pattern) if induced else None
    if walk is not None:
        shape, order = walk
        got = _induced_walk(host, shape, pattern.n, budget)
        if got is None:
            return None
        sets = [frozenset([x]) for x in got[:pattern.n - 1]] + [frozenset(got[pattern.n - 1:])]
        by_vertex = dict(zip(order, sets))
        model = MinorModel(host, pattern, tuple(by_vertex[v] for v in pattern.vertices()), kind)
        rep = validate_model(model)
        assert rep.ok, rep
        return model
    found = _Search(host, pattern, induced, budget).run()
    if found is None:
        return None
    sets = tuple(frozenset(_bits(s)) for s in found)
    model = MinorModel(host, pattern, sets, kind)
    rep = validate_model(model)
    assert rep.ok, rep
    return model


def find_induced_minor(host: Graph, pattern: Graph, budget: int = 10 ** 7) -> MinorModel | None:
    """Induced minor model of ``pattern`` in ``host``, or ``None`` if there is none.

    Raises :class:`BudgetExhausted` when the search gives up.
    """
    return _find(host, pattern, True, budget)


def find_minor(host: Graph, pattern: Graph, budget: int = 10 ** 7) -> MinorModel | None:
    """Like :func:`find_induced_minor` but extra adjacencies are allowed."""
    return _find(host, pattern, False, budget)
