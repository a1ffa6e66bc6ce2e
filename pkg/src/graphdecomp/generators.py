"""Deterministic generators for the graph families used throughout."""
from __future__ import annotations

import random

from .graph import Graph, GraphError, subdivide, strong_product


def _positive(**dims):
    for name, val in dims.items():
        if int(val) < 1:
            raise GraphError(f"{name} must be positive, got {val}")


def path(n: int) -> Graph:
    _positive(n=n)
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> Graph:
    if n < 3:
        raise GraphError("cycle needs at least 3 vertices")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def clique(n: int) -> Graph:
    _positive(n=n)
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def biclique(p: int, q: int) -> Graph:
    """K_{p,q}; left side ``0..p-1``, right side ``p..p+q-1``."""
    _positive(p=p, q=q)
    return Graph(p + q, [(i, p + j) for i in range(p) for j in range(q)])


def star(k: int) -> Graph:
    return biclique(1, k)


def subdivided_biclique(p: int, q: int, s: int = 1) -> Graph:
    return subdivide(biclique(p, q), s)


def grid(n: int, m: int) -> Graph:
    """``n`` rows by ``m`` columns; vertex ``(r, c)`` is ``r * m + c``."""
    _positive(n=n, m=m)
    es = []
    for r in range(n):
        for c in range(m):
            v = r * m + c
            if c + 1 < m:
                es.append((v, v + 1))
            if r + 1 < n:
                es.append((v, v + m))
    return Graph(n * m, es)


def king(n: int, m: int) -> Graph:
    """King's graph, i.e. the strong product of two paths."""
    return strong_product(path(n), path(m))


def wall(n: int) -> Graph:
    """Elementary wall with ``n`` rows of bricks (wall(1) is a 6-cycle)."""
    _positive(n=n)
    rows, cols = n + 1, 2 * n + 2
    es = set()
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                es.add(((r, c), (r, c + 1)))
            if r + 1 < rows and (c - r) % 2 == 0:
                es.add(((r, c), (r + 1, c)))
    verts = {x for e in es for x in e}
    # strip dangling corners
    while True:
        deg = {v: 0 for v in verts}
        for a, b in es:
            deg[a] += 1
            deg[b] += 1
        low = {v for v, d in deg.items() if d <= 1}
        if not low:
            break
        verts -= low
        es = {e for e in es if e[0] in verts and e[1] in verts}
    index = {v: i for i, v in enumerate(sorted(verts))}
    return Graph(len(index), [(index[a], index[b]) for a, b in es])


def pohoata_davies(n: int) -> Graph:
    """n x n grid without vertical edges, plus one apex per column.

    Grid vertex ``(r, c)`` is ``r * n + c``; the apex of column ``c`` is
    ``n * n + c``.
    """
    _positive(n=n)
    es = []
    for r in range(n):
        for c in range(n - 1):
            es.append((r * n + c, r * n + c + 1))
    for c in range(n):
        for r in range(n):
            es.append((n * n + c, r * n + c))
    return Graph(n * n + n, es)


def random_gnp(n: int, p: float, seed: int = 0) -> Graph:
    _positive(n=n)
    if not 0.0 <= p <= 1.0:
        raise GraphError("edge probability must lie in [0, 1]")
    rng = random.Random(seed)
    es = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return Graph(n, es)


def random_tree(n: int, seed: int = 0) -> Graph:
    _positive(n=n)
    rng = random.Random(seed)
    return Graph(n, [(rng.randrange(i), i) for i in range(1, n)])


def random_connected(n: int, p: float, seed: int = 0) -> Graph:
    """Random spanning tree plus G(n, p) noise: always connected."""
    t = random_tree(n, seed)
    g = random_gnp(n, p, seed + 1) if n > 1 else Graph(1)
    return Graph(n, set(t.edges) | set(g.edges))


def chained_king(m: int = 32, trunk: int = 8, chain: int = 7) -> Graph:
    """King grid hung below a root so that it forms a single BFS layer.

    Vertex 0 is the root with two trunks of length ``trunk``. Every grid
    vertex ``(x, y)`` gets a private chain of ``chain`` vertices up to the end
    of trunk A when ``x >= y`` and trunk B otherwise, so the grid sits at
    distance ``trunk + chain + 1`` from the root. Grid vertex ``(x, y)`` is
    labeled ``1 + 2 * trunk + x * m + y``; chain vertices come last.
    """
    _positive(m=m, trunk=trunk, chain=chain)
    es = []
    a = list(range(1, trunk + 1))
    b = list(range(trunk + 1, 2 * trunk + 1))
    for leg in (a, b):
        es.append((0, leg[0]))
        es.extend(zip(leg, leg[1:]))
    base = 1 + 2 * trunk
    nxt = base + m * m
    for x in range(m):
        for y in range(m):
            v = base + x * m + y
            for dx in (0, 1):
                for dy in (-1, 0, 1):
                    if (dx, dy) <= (0, 0):
                        continue
                    x2, y2 = x + dx, y + dy
                    if 0 <= x2 < m and 0 <= y2 < m:
                        es.append((v, base + x2 * m + y2))
            top = a[-1] if x >= y else b[-1]
            links = list(range(nxt, nxt + chain))
            nxt += chain
            seq = [top] + links + [v]
            es.extend(zip(seq, seq[1:]))
    return Graph(nxt, es)


def fanned_king(m: int = 32, leg: int = 15) -> Graph:
    """King grid whose halves hang off two shared fan vertices.

    Like :func:`chained_king` but each half of the grid is joined directly to
    the last vertex of its leg, so many grid vertices share one BFS parent.
    """
    _positive(m=m, leg=leg)
    es = []
    a = list(range(1, leg + 1))
    b = list(range(leg + 1, 2 * leg + 1))
    for lg in (a, b):
        es.append((0, lg[0]))
        es.extend(zip(lg, lg[1:]))
    base = 1 + 2 * leg
    for x in range(m):
        for y in range(m):
            v = base + x * m + y
            for dx in (0, 1):
                for dy in (-1, 0, 1):
                    if (dx, dy) <= (0, 0):
                        continue
                    x2, y2 = x + dx, y + dy
                    if 0 <= x2 < m and 0 <= y2 < m:
                        es.append((v, base + x2 * m + y2))
            es.append((a[-1] if x >= y else b[-1], v))
    return Graph(base + m * m, es)


FAMILIES = {
    "grid": grid,
    "path": path,
    "cycle": cycle,
    "clique": clique,
    "biclique": biclique,
    "star": star,
    "subdivided_biclique": subdivided_biclique,
    "wall": wall,
    "king": king,
    "pohoata_davies": pohoata_davies,
    "random_gnp": random_gnp,
    "random_tree": random_tree,
    "random_connected": random_connected,
    "chained_king": chained_king,
    "fanned_king": fanned_king,
}


def generate(family: str, *args, **kwargs) -> Graph:
    try:
        fn = FAMILIES[family]
    except KeyError:
        raise GraphError(f"unknown family {family!r}") from None
    return fn(*args, **kwargs)
