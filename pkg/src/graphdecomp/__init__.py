"""Graph decompositions, clustered edge-colorings and induced-minor witnesses."""
from .graph import Graph, GraphError, VertexPartition, bfs_layering, weak_diameter
from .decomposition import (
    TreeDecomposition, TreePartition, exact_treewidth, tree_partition,
    treewidth_lower, treewidth_upper,
)
from .minors import MinorModel, find_induced_minor, find_minor, validate_model
from .coloring import EdgeColoring, verify_clustering
from .kpr import KprParams, iterated_bfs, kpr_coloring, extract_witness
from .sparsifier import sparsify_once, sparsify_all

__version__ = "0.1.0"
