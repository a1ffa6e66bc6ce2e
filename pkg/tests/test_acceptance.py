"""Acceptance criteria 1-9. Each test records one PASS/FAIL line that is
printed in the terminal summary (and with ``-s`` as it runs)."""
import random
import time

import pytest

from conftest import ACCEPTANCE
from oracles import (
    atlas_connected, connected8, contraction_closure_has, dp_treewidth,
    random_connected_partition,
)
from graphdecomp import generators as gen
from graphdecomp.coloring import product_coloring, tree_partition_coloring, verify_clustering
from graphdecomp.decomposition import (
    exact_treewidth, tree_partition, treewidth_lower, treewidth_upper,
    validate_tree_decomposition, validate_tree_partition,
)
from graphdecomp.graph import contract_partition, strong_product, subdivide
from graphdecomp.kpr import (
    KprParams, audit_kpr_coloring, deep_nodes, extract_witness, iterated_bfs, kpr_coloring,
)
from graphdecomp.minors import INDUCED, find_induced_minor, validate_model
from graphdecomp.sparsifier import is_induced_in, sparsify_all

# exact treewidth of pohoata_davies(n) for n = 2..5, frozen from the exact
# solver; n <= 4 also agrees with the subset dynamic program (n = 4 takes
# about a minute there, so the test below only repeats n <= 3)
PD_TREEWIDTH = {2: 2, 3: 3, 4: 4, 5: 5}


def record(k: int, ok: bool, detail: str):
    ACCEPTANCE[k] = (ok, detail)
    print(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")


def test_criterion_1_oracle_consistency():
    start = time.perf_counter()
    rng = random.Random(101)
    graphs = connected8() + atlas_connected(7)
    graphs += [gen.random_gnp(rng.randint(1, 12), rng.random(), seed=rng.randrange(10 ** 6))
               for _ in range(200)]
    bad = []
    for g in graphs:
        lo = treewidth_lower(g)
        hi, td_hi = treewidth_upper(g)
        w, td = exact_treewidth(g)
        if not (lo <= w <= hi and td.width == w
                and validate_tree_decomposition(g, td) and validate_tree_decomposition(g, td_hi)):
            bad.append(g)
    secs = time.perf_counter() - start
    ok = not bad and secs < 300
    record(1, ok, f"{len(graphs)} graphs, {len(bad)} violations, {secs:.1f}s (limit 300s)")
    assert ok, bad[:3]


def test_criterion_2_tree_partition_coloring():
    rng = random.Random(202)
    worst = 0.0
    bad = []
    for _ in range(100):
        n = rng.randint(2, 25)
        g = gen.random_connected(n, rng.choice([0.08, 0.15, 0.25]), seed=rng.randrange(10 ** 6))
        tp = tree_partition(g, exact_treewidth(g)[1])
        assert validate_tree_partition(g, tp)
        c = tree_partition_coloring(g, tp)
        rep = verify_clustering(c, diameters=False)
        bound = tp.width * (g.max_degree() + 1)
        worst = max(worst, rep.clustering / bound)
        if len(c.used()) > 3 or rep.clustering > bound:
            bad.append((g, rep.clustering, bound))
    record(2, not bad, f"100 graphs, {len(bad)} violations, max clustering/(width*(delta+1)) = {worst:.2f}")
    assert not bad, bad[:3]


def test_criterion_3_sparsifier_assertions():
    bad = []
    hosts = [gen.pohoata_davies(n) for n in (3, 4, 5)] + [gen.grid(n, n) for n in (3, 4, 5)]
    for g in hosts:
        c = tree_partition_coloring(g, tree_partition(g, exact_treewidth(g)[1]))
        res = sparsify_all(g, c)
        if res.graph.max_degree() > 3 * res.h:
            bad.append((g, "degree"))
        if not is_induced_in(res.graph, g, res.vertex_map):
            bad.append((g, "not induced"))
        for tr in res.traces:
            if not validate_model(tr.model):
                bad.append((g, "model"))
            if not is_induced_in(tr.output, tr.graph, tr.vertex_map):
                bad.append((g, "stage not induced"))
    record(3, not bad, f"{len(hosts)} hosts, {len(bad)} violations")
    assert not bad, bad


def _criterion_4_corpus():
    out = list(connected8()[::7]) + atlas_connected(7)
    out += [gen.path(n) for n in (10, 20, 30)]
    out += [gen.cycle(n) for n in (7, 8, 9, 12, 20, 30)]
    out += [gen.star(k) for k in (10, 29)] + [gen.clique(n) for n in (6, 8)]
    out += [gen.grid(a, b) for a, b in ((2, 10), (2, 15), (3, 6), (3, 10), (4, 4), (5, 5), (5, 6))]
    out += [gen.king(a, b) for a, b in ((2, 8), (2, 15), (3, 10), (5, 5))]
    out += [gen.wall(k) for k in (1, 2, 3)] + [gen.pohoata_davies(n) for n in (2, 3, 4, 5)]
    out += [gen.biclique(2, 3), gen.biclique(4, 5), gen.subdivided_biclique(2, 2)]
    out += [gen.random_tree(n, seed=n) for n in (10, 20, 30)]
    out += [gen.random_connected(n, p, seed=n) for n in (12, 18, 24, 30) for p in (0.05, 0.1, 0.15, 0.4)]
    return out


def test_criterion_4_depth_soundness():
    checked = violations = 0
    deepest = 0
    for g in _criterion_4_corpus():
        for p, q in ((2, 1), (2, 2)):
            if find_induced_minor(g, subdivide(gen.biclique(p, q), 1)) is not None:
                continue
            for h in (1, 2):
                tree = iterated_bfs(g, KprParams.for_witness(p, q, h))
                checked += 1
                deepest = max(deepest, tree.depth)
                if tree.depth > q + 1:
                    violations += 1
    record(4, violations == 0 and checked > 0,
           f"{checked} excluded (graph, p, q, h) cases, {violations} violations, deepest tree {deepest}")
    assert violations == 0 and checked > 0


def test_criterion_5_kpr_coloring_on_paths():
    start = time.perf_counter()
    bad = []
    most = 0
    for n in (2, 10, 100, 1000, 10 ** 4):
        res = kpr_coloring(gen.path(n), 2, 2)
        most = max(most, len(res.coloring.used()))
        if len(res.coloring.used()) > 8 or not audit_kpr_coloring(res):
            bad.append(n)
    secs = time.perf_counter() - start
    ok = not bad and secs < 30
    record(5, ok, f"max colors {most} (limit 8), failing n = {bad}, {secs:.1f}s (limit 30s)")
    assert ok


def test_criterion_6_grid_witness():
    g = gen.grid(40, 40)
    tree = iterated_bfs(g, KprParams.for_witness(2, 1, 2))
    deep = deep_nodes(tree)
    assert deep
    wit = extract_witness(tree, deep[0])
    model = wit.model(g)
    rep = validate_model(model)
    items = sorted({item for _, item in wit.checks})
    ok = bool(rep) and model.kind == INDUCED and items == [1, 2, 3, 4, 5, 6] \
        and model.pattern == subdivide(gen.biclique(2, 1), 1)
    record(6, ok, f"model valid: {bool(rep)}, items checked {items}")
    assert ok


def test_criterion_7_product_coloring():
    bad = []
    p4 = gen.path(4)
    for name, h in (("P_3", gen.path(3)), ("K_1,3", gen.star(3)), ("C_5", gen.cycle(5))):
        g = strong_product(h, p4)
        emb = {v: divmod(v, p4.n) for v in g.vertices()}
        c = product_coloring(g, emb, factor=h)
        tw_h = exact_treewidth(h)[0]
        for col in c.used():
            w = exact_treewidth(c.class_graph(col))[0]
            if w > 2 * tw_h:
                bad.append((name, col, w, tw_h))
    record(7, not bad, f"3 factors, {len(bad)} color classes above 2*tw(H)")
    assert not bad, bad


def test_criterion_8_pohoata_davies_anchor():
    values = {n: exact_treewidth(gen.pohoata_davies(n))[0] for n in (2, 3, 4, 5)}
    increasing = all(values[n] < values[n + 1] for n in (2, 3, 4))
    host, pattern = gen.pohoata_davies(3), gen.grid(3, 3)
    m = find_induced_minor(host, pattern)
    agree = (m is not None) == contraction_closure_has(host, pattern)
    valid = m is None or bool(validate_model(m))
    ok = increasing and values == PD_TREEWIDTH and agree and valid
    record(8, ok, f"tw = {values}, grid(3,3) model found: {m is not None}, enumerator agrees: {agree}")
    assert ok


def _contraction_sample():
    rng = random.Random(909)
    for _ in range(100):
        n = rng.randint(2, 14)
        g = gen.random_connected(n, rng.choice([0.2, 0.35, 0.5]), seed=rng.randrange(10 ** 6))
        part = random_connected_partition(g, rng)
        yield g, part, exact_treewidth(g)[0], exact_treewidth(contract_partition(g, part))[0]


def test_criterion_9_contraction_monotone():
    rows = list(_contraction_sample())
    mono = [r for r in rows if r[3] > r[2]]
    # provable form of the ratio bound: tw(G) + 1 <= p * (tw(G/P) + 1)
    ratio = [r for r in rows if r[2] + 1 > r[1].max_size() * (r[3] + 1)]
    assert not mono and not ratio


@pytest.mark.xfail(strict=True, reason="tw(G/P) >= tw(G)/p fails, e.g. K_2 contracted to one vertex")
def test_criterion_9_literal_ratio_bound():
    rows = list(_contraction_sample())
    mono = [r for r in rows if r[3] > r[2]]
    literal = [r for r in rows if r[3] < r[2] / r[1].max_size()]
    corrected = [r for r in rows if r[2] + 1 > r[1].max_size() * (r[3] + 1)]
    detail = (f"100 graphs: monotonicity {len(mono)} violations; literal tw(G/P) >= tw(G)/p "
              f"{len(literal)} violations; tw(G)+1 <= p*(tw(G/P)+1) {len(corrected)} violations")
    if literal:
        g, part, a, b = next(r for r in literal if r[0].n > 3)
        detail += f"; e.g. n={g.n} m={g.m} parts {[len(x) for x in part]}: tw {a} -> {b}"
    record(9, not mono and not literal, detail)
    assert not mono and not literal


def test_pohoata_davies_treewidth_matches_dynamic_program():
    for n in (2, 3):
        assert dp_treewidth(gen.pohoata_davies(n)) == PD_TREEWIDTH[n]
