"""Property-based checks over small random graphs."""
import random

from hypothesis import HealthCheck, given, settings, strategies as st

from oracles import random_connected_partition
from graphdecomp.coloring import tree_partition_coloring, verify_clustering
from graphdecomp.decomposition import (
    exact_treewidth, tree_partition, treewidth_lower, treewidth_upper,
    validate_tree_decomposition, validate_tree_partition,
)
from graphdecomp.graph import Graph, contract_partition, format_edge_list, parse_edge_list
from graphdecomp.kpr import KprParams, audit_kpr_coloring, audit_orthogonality, iterated_bfs, kpr_coloring
from graphdecomp.minors import find_induced_minor, validate_model

SETTINGS = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@st.composite
def graphs(draw, max_n=10, min_n=1):
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph(n, chosen)


@SETTINGS
@given(graphs())
def test_edge_list_round_trip(g):
    assert parse_edge_list(format_edge_list(g)) == g


@SETTINGS
@given(graphs())
def test_treewidth_sandwich(g):
    lo = treewidth_lower(g)
    hi, td_hi = treewidth_upper(g)
    w, td = exact_treewidth(g)
    assert lo <= w <= hi
    assert validate_tree_decomposition(g, td) and validate_tree_decomposition(g, td_hi)


@SETTINGS
@given(graphs(), st.integers(0, 10 ** 6))
def test_contraction_never_raises_treewidth(g, seed):
    part = random_connected_partition(g, random.Random(seed))
    q = contract_partition(g, part)
    assert exact_treewidth(q)[0] <= exact_treewidth(g)[0]
    assert exact_treewidth(g)[0] + 1 <= part.max_size() * (exact_treewidth(q)[0] + 1)


@SETTINGS
@given(graphs(max_n=14))
def test_tree_partition_coloring_bound(g):
    tp = tree_partition(g, treewidth_upper(g)[1])
    assert validate_tree_partition(g, tp)
    c = tree_partition_coloring(g, tp)
    assert verify_clustering(c, diameters=False).clustering <= max(tp.width * (g.max_degree() + 1), 1)


@SETTINGS
@given(graphs(max_n=9, min_n=2), st.data())
def test_induced_subgraphs_are_induced_minors(g, data):
    keep = data.draw(st.lists(st.sampled_from(range(g.n)), unique=True, min_size=1, max_size=min(g.n, 6)))
    sub, _ = g.induced(sorted(keep))
    m = find_induced_minor(g, sub)
    assert m is not None and validate_model(m)


@SETTINGS
@given(graphs(max_n=40), st.integers(1, 3), st.integers(0, 6))
def test_iterated_bfs_invariants(g, h, d):
    tree = iterated_bfs(g, KprParams(2, 1, h, d))
    assert audit_orthogonality(tree)
    covered = set()
    for r in tree.roots:
        covered |= tree.nodes[r].vertices
    assert covered == set(g.vertices())
    for x in tree.nodes:
        for c in x.children:
            assert tree.nodes[c].vertices <= x.vertices


@SETTINGS
@given(graphs(max_n=40))
def test_kpr_coloring_audit(g):
    res = kpr_coloring(g, 2, 1)
    assert audit_kpr_coloring(res)
    assert len(res.coloring.used()) <= max(2 ** res.tree.depth, 1)
