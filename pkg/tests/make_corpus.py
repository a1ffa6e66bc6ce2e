"""Regenerate tests/data/connected8.g6: every connected graph on 8 vertices
up to isomorphism, grown from the 7-vertex atlas by adding a vertex."""
from pathlib import Path

import networkx as nx
from networkx.generators.atlas import graph_atlas_g


def connected_graphs(n: int):
    prev = [g for g in graph_atlas_g() if g.number_of_nodes() == n - 1 and nx.is_connected(g)]
    buckets: dict[str, list[nx.Graph]] = {}
    for base in prev:
        for mask in range(1, 1 << (n - 1)):
            g = base.copy()
            g.add_node(n - 1)
            g.add_edges_from((i, n - 1) for i in range(n - 1) if mask >> i & 1)
            key = nx.weisfeiler_lehman_graph_hash(g, iterations=4)
            same = buckets.setdefault(key, [])
            if not any(nx.is_isomorphic(g, h) for h in same):
                same.append(g)
    return [g for gs in buckets.values() for g in gs]


if __name__ == "__main__":
    out = Path(__file__).parent / "data" / "connected8.g6"
    graphs = connected_graphs(8)
    lines = sorted(nx.to_graph6_bytes(g, header=False).decode().strip() for g in graphs)
    out.write_text("\n".join(lines) + "\n")
    print(len(lines), "graphs")
