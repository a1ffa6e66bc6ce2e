import pytest
import networkx as nx

from oracles import to_nx
from graphdecomp import generators as gen
from graphdecomp.graph import (
    INF, Graph, GraphError, VertexPartition, bfs_distances, bfs_layering, contract_partition,
    distance, format_edge_list, parse_edge_list, read_graph, shortest_path, strong_product,
    subdivide, weak_diameter, write_graph,
)


def test_edges_are_normalized_and_deduplicated():
    g = Graph(3, [(2, 0), (0, 2), (1, 2)])
    assert g.sorted_edges() == [(0, 2), (1, 2)]
    assert g.m == 2 and g.degree(2) == 2


@pytest.mark.parametrize("n, edges", [(2, [(0, 0)]), (2, [(0, 2)]), (-1, [])])
def test_bad_graphs_are_rejected(n, edges):
    with pytest.raises(GraphError):
        Graph(n, edges)


def test_edge_list_round_trip(tmp_path):
    g = gen.king(3, 4)
    assert parse_edge_list(format_edge_list(g)) == g
    write_graph(g, tmp_path / "k.txt")
    assert read_graph(tmp_path / "k.txt") == g


@pytest.mark.parametrize("text", [
    "", "3 2\n0 1\n", "3 1\n1 1\n", "3 1\n1 0\n", "3 2\n0 1\n0 1\n", "x y\n", "3 1\n0 5\n",
])
def test_malformed_edge_lists(text):
    with pytest.raises(GraphError):
        parse_edge_list(text)


def test_empty_graph_round_trip():
    assert parse_edge_list("0 0\n") == Graph(0)


def test_bfs_layering_on_grid():
    g = gen.grid(3, 3)
    lay = bfs_layering(g)
    assert lay.root == 0
    assert lay.layers == ((0,), (1, 3), (2, 4, 6), (5, 7), (8,))
    # parent is the smallest neighbor one layer up
    assert lay.parent[4] == 1 and lay.parent[8] == 5
    assert lay.tree_path(8) == [0, 1, 2, 5, 8]
    assert lay.ancestor(8, 2) == 2


def test_bfs_layering_within_subset():
    g = gen.cycle(6)
    lay = bfs_layering(g, within=[2, 3, 4, 5])
    assert lay.root == 2 and lay.depth == 3


def test_distances_match_networkx():
    g = gen.random_connected(25, 0.1, seed=3)
    ref = dict(nx.all_pairs_shortest_path_length(to_nx(g)))
    for u in (0, 7, 19):
        assert bfs_distances(g, [u]) == ref[u]
    assert distance(g, 0, 19) == ref[0][19]
    path = shortest_path(g, 0, 19)
    assert len(path) - 1 == ref[0][19]


def test_distance_disconnected():
    g = Graph(4, [(0, 1), (2, 3)])
    assert distance(g, 0, 3) == INF
    assert shortest_path(g, 0, 3) is None


def test_weak_diameter_uses_host_distances():
    g = gen.cycle(10)
    s = [0, 1, 9]  # path 9-0-1 in the cycle
    assert weak_diameter(g, s) == 2
    # {0, 5} is disconnected as an induced subgraph but has weak diameter 5
    assert weak_diameter(g, [0, 5]) == 5
    assert weak_diameter(g, [0, 5], cutoff=3) == 4
    assert weak_diameter(g, []) == 0 and weak_diameter(g, [4]) == 0
    assert weak_diameter(Graph(2), [0, 1]) == INF


def test_contract_partition():
    g = gen.path(6)
    q = contract_partition(g, VertexPartition.of([[0, 1], [2, 3, 4], [5]]))
    assert q == gen.path(3)
    with pytest.raises(GraphError):
        contract_partition(g, VertexPartition.of([[0, 2], [1, 3, 4, 5]]))
    with pytest.raises(GraphError):
        contract_partition(g, VertexPartition.of([[0, 1]]))


def test_strong_product_matches_networkx():
    h, p = gen.cycle(5), gen.path(4)
    g = strong_product(h, p)
    assert nx.is_isomorphic(to_nx(g), nx.strong_product(to_nx(h), to_nx(p)))
    # label u * |P| + i
    assert g.has_edge(0 * 4 + 0, 1 * 4 + 1)


def test_subdivide():
    g = subdivide(gen.clique(3), 2)
    assert g.n == 9 and g.m == 9 and g.max_degree() == 2
    assert gen.subdivided_biclique(2, 2) == subdivide(gen.biclique(2, 2), 1)


@pytest.mark.parametrize("family, args, n, m", [
    ("path", (5,), 5, 4), ("cycle", (5,), 5, 5), ("clique", (5,), 5, 10),
    ("biclique", (2, 3), 5, 6), ("star", (4,), 5, 4), ("grid", (3, 4), 12, 17),
    ("king", (3, 3), 9, 20), ("pohoata_davies", (3,), 12, 15),
])
def test_generator_sizes(family, args, n, m):
    g = gen.generate(family, *args)
    assert (g.n, g.m) == (n, m)


def test_pohoata_davies_has_no_vertical_grid_edges():
    n = 4
    g = gen.pohoata_davies(n)
    for r in range(n - 1):
        for c in range(n):
            assert not g.has_edge(r * n + c, (r + 1) * n + c)
    assert all(g.degree(n * n + c) == n for c in range(n))


def test_wall_is_subcubic_and_planar():
    for k in (1, 2, 3, 4):
        w = gen.wall(k)
        assert w.max_degree() <= 3 and w.is_connected()
        assert nx.check_planarity(to_nx(w))[0]


def test_random_generators_are_seeded():
    assert gen.random_gnp(20, 0.3, seed=5) == gen.random_gnp(20, 0.3, seed=5)
    assert gen.random_connected(20, 0.1, seed=5).is_connected()
    t = gen.random_tree(30, seed=2)
    assert t.is_forest() and t.is_connected()


def test_generator_argument_errors():
    with pytest.raises(GraphError):
        gen.cycle(2)
    with pytest.raises(GraphError):
        gen.grid(0, 3)
    with pytest.raises(GraphError):
        gen.generate("nonsense")
