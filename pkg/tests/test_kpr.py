from dataclasses import replace

import pytest

from graphdecomp import generators as gen
from graphdecomp.coloring import verify_clustering
from graphdecomp.graph import Graph, bfs_layering, subdivide
from graphdecomp.kpr import (
    DEGENERATE, KprError, KprParams, TRUNCATED, WitnessError, _slices, audit_kpr_coloring,
    audit_orthogonality, check_orthogonality, deep_nodes, extract_witness, iterated_bfs,
    kpr_coloring,
)
from graphdecomp.minors import find_induced_minor, validate_model


def test_parameter_formulas():
    assert KprParams.for_coloring(2, 2).d == 53
    w = KprParams.for_witness(2, 1, 2)
    assert w.d == 32 and w.moat == 10 and w.separation == 32
    with pytest.raises(KprError):
        KprParams(1, 1, 1, 0)


def test_single_vertex_is_depth_zero():
    tree = iterated_bfs(Graph(1), KprParams.for_coloring(2, 2))
    assert tree.depth == 0 and len(tree.nodes) == 1


def test_short_path_is_depth_zero():
    tree = iterated_bfs(gen.path(9), KprParams.for_coloring(2, 2))
    assert tree.depth == 0 and tree.nodes[0].weak_diameter == 8


def test_long_path_is_depth_one():
    tree = iterated_bfs(gen.path(100), KprParams.for_coloring(2, 2))
    assert tree.depth == 1
    for leaf in tree.leaves():
        assert leaf.weak_diameter <= 1


def test_slices_cover_consecutive_layer_pairs():
    lay = bfs_layering(gen.path(5))
    assert _slices(lay, 2) == [(0, [0, 1]), (1, [1, 2]), (2, [2, 3]), (3, [3, 4])]
    assert _slices(bfs_layering(gen.path(2)), 3) == [(0, [0, 1])]


def test_every_component_is_a_root():
    g = Graph(7, [(0, 1), (2, 3), (3, 4)])
    tree = iterated_bfs(g, KprParams.for_coloring(2, 1))
    assert len(tree.roots) == 4


def test_truncation_flag():
    tree = iterated_bfs(gen.grid(30, 30), KprParams(2, 1, 2, 2), max_depth=1)
    assert tree.truncated
    assert any(x.status == TRUNCATED for x in tree.nodes)


def test_degenerate_slice_is_marked():
    # a star has two BFS layers, fewer than h = 3, so slicing cannot shrink it
    g = gen.star(6)
    tree = iterated_bfs(g, KprParams(2, 1, 3, 1))
    assert tree.nodes[0].status == DEGENERATE


def test_iterated_bfs_is_deterministic():
    g = gen.random_connected(200, 0.01, seed=8)
    a = iterated_bfs(g, KprParams.for_witness(2, 1, 1)).to_text()
    b = iterated_bfs(g, KprParams.for_witness(2, 1, 1)).to_text()
    assert a == b and a.startswith("# iterated bfs")


def test_orthogonality_on_grid_slices():
    g = gen.grid(5, 5)
    outer = bfs_layering(g)
    for _, window in _slices(outer, 2):
        for comp in g.components(window):
            inner = bfs_layering(g, within=comp)
            assert check_orthogonality(g, outer, comp, inner, 2)


def test_orthogonality_of_single_edge():
    g = gen.path(2)
    outer = bfs_layering(g)
    assert check_orthogonality(g, outer, [0, 1], bfs_layering(g), 2)


def test_orthogonality_catches_corrupted_parent_map():
    g = gen.grid(5, 5)
    outer = bfs_layering(g)
    bad = dict(outer.parent)
    bad[24] = 0  # not even a neighbor
    corrupt = replace(outer, parent=bad)
    comp = [v for v in g.vertices() if outer.layer_of()[v] >= 7]
    rep = check_orthogonality(g, corrupt, comp, bfs_layering(g, within=comp), 2)
    assert not rep and rep.violation == "outer parent map is not a BFS tree"


def test_orthogonality_rejects_wide_inner_host():
    g = gen.path(6)
    with pytest.raises(KprError):
        check_orthogonality(g, bfs_layering(g), [0, 1, 2], bfs_layering(g), 2)


def test_audit_orthogonality_on_trees():
    for g in (gen.grid(20, 20), gen.random_connected(300, 0.008, seed=2)):
        assert audit_orthogonality(iterated_bfs(g, KprParams(2, 1, 2, 6)))


def test_kpr_coloring_small_cases():
    assert kpr_coloring(Graph(5), 2, 2).coloring.used() == []
    assert kpr_coloring(gen.path(9), 2, 2).coloring.used() == [0]


def test_kpr_coloring_of_long_path():
    res = kpr_coloring(gen.path(200), 2, 2)
    assert len(res.coloring.used()) <= 2
    assert audit_kpr_coloring(res)
    assert verify_clustering(res.coloring).clustering <= 3


def test_kpr_coloring_components_stay_in_leaves():
    for g in (gen.grid(25, 25), gen.random_connected(400, 0.006, seed=11)):
        res = kpr_coloring(g, 2, 1)
        assert audit_kpr_coloring(res)
        assert len(res.coloring.used()) <= 2 ** res.tree.depth
        biggest = max(len(x.vertices) for x in res.tree.leaves())
        assert verify_clustering(res.coloring, diameters=False).clustering <= biggest


def test_deep_recursion_is_flagged():
    res = kpr_coloring(gen.grid(30, 30), 2, 1, max_depth=5)
    assert res.depth_bound_exceeded == (res.tree.depth > 2)


def test_large_trees_stay_shallow():
    # forests have no cycles, so the 1-subdivided K_{2,2} (an 8-cycle) is
    # excluded and the iterated BFS may not go deeper than q + 1
    c8 = subdivide(gen.biclique(2, 2), 1)
    for seed in (1, 2):
        g = gen.random_tree(1500, seed=seed)
        assert find_induced_minor(g, c8) is None
        for h in (1, 2):
            assert iterated_bfs(g, KprParams.for_witness(2, 2, h)).depth <= 3


def test_grid_witness():
    g = gen.grid(40, 40)
    tree = iterated_bfs(g, KprParams.for_witness(2, 1, 2))
    wit = extract_witness(tree, deep_nodes(tree)[0])
    assert validate_model(wit.model(g))
    assert {item for _, item in wit.checks} == {1, 2, 3, 4, 5, 6}
    assert all(len(s) >= 1 for s in wit.a_sets + wit.b_sets)


def test_chained_king_gives_eight_cycle_witness():
    g = gen.chained_king()
    tree = iterated_bfs(g, KprParams.for_witness(2, 2, 1))
    deep = deep_nodes(tree)
    assert deep and tree.depth >= 2
    wit = extract_witness(tree, deep[0])
    model = wit.model(g)
    assert validate_model(model)
    assert model.pattern == subdivide(gen.biclique(2, 2), 1)
    assert {lvl for lvl, _ in wit.checks} == {2, 3}


def test_witness_preconditions():
    g = gen.grid(40, 40)
    tree = iterated_bfs(g, KprParams.for_witness(2, 1, 2))
    shallow = next(x for x in tree.nodes if x.depth == 1 and x.weak_diameter <= tree.params.d)
    with pytest.raises(KprError):
        extract_witness(tree, shallow)
    with pytest.raises(KprError):
        extract_witness(tree, tree.roots[0])


def test_witness_error_carries_level_and_item():
    err = WitnessError(3, 4, "(detail)")
    assert err.level == 3 and err.item == 4 and "item 4" in str(err)
