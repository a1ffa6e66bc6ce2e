"""Experiment pipelines and their CSV output."""
from __future__ import annotations

import csv
import logging
import math
import time
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Callable

from . import generators
from .coloring import (
    EdgeColoring, bounded_tw_coloring, product_coloring, tree_partition_coloring,
    verify_clustering,
)
from .decomposition import exact_treewidth, tree_partition, treewidth_lower, treewidth_upper
from .graph import Graph, GraphError, read_graph, strong_product
from .kpr import KprParams, deep_nodes, extract_witness, iterated_bfs, kpr_coloring
from .sparsifier import STRATEGIES, sparsify_all

log = logging.getLogger(__name__)

PIPELINES = ("kpr_color", "tree_partition_color", "product_color", "sparsify", "bound_check", "witness")
COLUMNS = ("graph_id", "family", "n", "m", "delta", "tw_lo", "tw_hi", "colors",
           "clustering", "depth", "pipeline", "ms")
BOUND_COLUMNS = ("graph_id", "h", "clustering", "tw_g", "tw_sparse", "ratio", "clustering_pow_h",
                 "degree_grid_log2", "biclique_free_log2", "clustered_log2", "label")


class ConfigError(GraphError):
    def __init__(self, key: str, msg: str):
        super().__init__(f"{key}: {msg}")
        self.key = key


@dataclass
class ExperimentConfig:
    family: str = ""
    sizes: list[int] = field(default_factory=list)
    input: str = ""
    pipeline: str = "tree_partition_color"
    p: int = 2
    q: int = 1
    h: int = 2  # slice width for the witness pipeline
    t: int = -1  # class treewidth bound, -1 when unchecked
    strategy: str = "auto"
    coloring: str = "tree_partition"  # first coloring for sparsify / bound_check
    factor: str = "path:3"  # H for product_color, family:size
    edge_p: float = 0.3  # edge probability for random families
    seed: int = 0
    output: str = ""
    exact_limit: int = 30
    timing: bool = True
    plot: bool = True

    def validate(self):
        if self.pipeline not in PIPELINES:
            raise ConfigError("pipeline", f"unknown pipeline {self.pipeline!r}")
        if self.input:
            if not Path(self.input).is_file():
                raise ConfigError("input", f"no such file {self.input}")
        elif self.family and self.family not in generators.FAMILIES:
            raise ConfigError("family", f"unknown family {self.family!r}")
        if self.strategy not in STRATEGIES:
            raise ConfigError("strategy", f"unknown strategy {self.strategy!r}")
        if self.coloring not in ("tree_partition", "kpr", "monochromatic"):
            raise ConfigError("coloring", f"unknown coloring {self.coloring!r}")
        if self.p < 2:
            raise ConfigError("p", "must be at least 2")
        if self.q < 1:
            raise ConfigError("q", "must be at least 1")
        if self.h < 1:
            raise ConfigError("h", "must be at least 1")
        if any(s < 1 for s in self.sizes):
            raise ConfigError("sizes", "sizes must be positive")
        if not 0.0 <= self.edge_p <= 1.0:
            raise ConfigError("edge_p", "must lie in [0, 1]")
        fam, _, size = self.factor.partition(":")
        if fam not in generators.FAMILIES or not size.isdigit():
            raise ConfigError("factor", f"expected family:size, got {self.factor!r}")
        return self


def _coerce(name: str, raw: str, current):
    raw = raw.strip()
    if isinstance(current, bool):
        if raw.lower() in ("1", "true", "yes", "on"):
            return True
        if raw.lower() in ("0", "false", "no", "off"):
            return False
        raise ConfigError(name, f"expected a boolean, got {raw!r}")
    try:
        if isinstance(current, list):
            return [int(x) for x in raw.replace(",", " ").split()]
        if isinstance(current, int):
            return int(raw)
        if isinstance(current, float):
            return float(raw)
    except ValueError:
        raise ConfigError(name, f"cannot parse {raw!r}") from None
    return raw


def parse_config(text: str = "", overrides: list[str] = ()) -> ExperimentConfig:
    """Flat ``key=value`` lines (``#`` comments allowed), then overrides."""
    cfg = ExperimentConfig()
    known = {f.name for f in fields(cfg)}
    lines = [ln.split("#", 1)[0] for ln in text.splitlines()] + list(overrides)
    for ln in lines:
        if not ln.strip():
            continue
        key, sep, val = ln.partition("=")
        key = key.strip()
        if not sep:
            raise ConfigError(key or "?", "expected key=value")
        if key not in known:
            raise ConfigError(key, "unknown key")
        setattr(cfg, key, _coerce(key, val, getattr(cfg, key)))
    return cfg.validate()


@dataclass
class ResultRow:
    graph_id: str
    family: str
    n: int
    m: int
    delta: int
    tw_lo: int
    tw_hi: int
    colors: int
    clustering: int
    depth: int
    pipeline: str
    ms: int

    def __post_init__(self):
        assert self.tw_lo <= self.tw_hi, (self.tw_lo, self.tw_hi)


@dataclass(frozen=True)
class BoundFormula:
    """Shape of an asymptotic bound; unknown constants are named placeholders.

    Only the base-2 logarithm of the shape is evaluated, with every
    placeholder set to 1. Values are for qualitative comparison only.
    """

    name: str
    expression: str
    placeholders: tuple[str, ...]
    log2_shape: Callable[..., float] = field(compare=False)

    def evaluate(self, **kw) -> float:
        return self.log2_shape(**kw)


def _lg(x: float) -> float:
    return math.log2(x) if x > 0 else 0.0


DEGREE_GRID = BoundFormula("degree_grid", "k^gamma * 2^(Delta^5)", ("gamma",),
                           lambda k, delta, **_: _lg(k) + delta ** 5)
BICLIQUE_FREE = BoundFormula("biclique_free", "k^O(1) * Delta^f(q)", ("O(1)", "f(q)=2^O(q)"),
                             lambda k, delta, q, **_: _lg(k) + 2 ** q * _lg(delta))
CLUSTERED = BoundFormula("clustered", "k^O(1) * 2^O(h^5 + h log c)", ("O(1)",),
                         lambda k, h, c, **_: _lg(k) + h ** 5 + h * _lg(c))
FORMULAS = (DEGREE_GRID, BICLIQUE_FREE, CLUSTERED)


def _graphs(cfg: ExperimentConfig) -> list[tuple[str, str, Graph]]:
    if cfg.input:
        return [("g000-input", "input", read_graph(cfg.input))]
    out = []
    for k, s in enumerate(cfg.sizes):
        fam = cfg.family
        if fam in ("grid", "king", "biclique", "subdivided_biclique"):
            args, g = (s, s), generators.generate(fam, s, s)
        elif fam in ("random_gnp", "random_connected"):
            args, g = (s,), generators.generate(fam, s, cfg.edge_p, seed=cfg.seed + k)
        elif fam == "random_tree":
            args, g = (s,), generators.generate(fam, s, seed=cfg.seed + k)
        else:
            args, g = (s,), generators.generate(fam, s)
        gid = f"g{k:03d}-{fam}-{'x'.join(map(str, args))}"
        out.append((gid, fam, g))
    return out


def tw_bounds(g: Graph, exact_limit: int) -> tuple[int, int]:
    if max((len(c) for c in g.components()), default=0) <= exact_limit:
        w = exact_treewidth(g, budget=max(exact_limit, g.n))[0]
        return w, w
    log.warning("graph with %d vertices exceeds the exact oracle limit; reporting bounds", g.n)
    return treewidth_lower(g), treewidth_upper(g)[0]


def _decomposition(g: Graph, exact_limit: int):
    if max((len(c) for c in g.components()), default=0) <= exact_limit:
        return exact_treewidth(g, budget=max(exact_limit, g.n))[1]
    return treewidth_upper(g)[1]


def first_coloring(g: Graph, cfg: ExperimentConfig) -> EdgeColoring:
    if cfg.coloring == "kpr":
        return kpr_coloring(g, cfg.p, cfg.q).coloring
    if cfg.coloring == "monochromatic":
        return EdgeColoring(g, {e: 0 for e in g.edges}, 1)
    tp = tree_partition(g, _decomposition(g, cfg.exact_limit))
    return tree_partition_coloring(g, tp)


@dataclass
class PipelineOutput:
    rows: list[ResultRow]
    bounds: list[dict]


def _factor(cfg: ExperimentConfig) -> Graph:
    fam, _, size = cfg.factor.partition(":")
    return generators.generate(fam, int(size))


def _run_one(gid: str, fam: str, g: Graph, cfg: ExperimentConfig, bounds: list[dict]) -> ResultRow:
    colors = clustering = depth = 0
    lo, hi = tw_bounds(g, cfg.exact_limit) if cfg.pipeline != "witness" else (-1, -1)
    host = g
    if cfg.pipeline == "kpr_color":
        res = kpr_coloring(g, cfg.p, cfg.q)
        colors = len(res.coloring.used())
        clustering = verify_clustering(res.coloring, diameters=False).clustering
        depth = res.tree.depth
    elif cfg.pipeline == "tree_partition_color":
        tp = tree_partition(g, _decomposition(g, cfg.exact_limit))
        c = tree_partition_coloring(g, tp)
        colors = len(c.used())
        clustering = verify_clustering(c, diameters=False).clustering
        depth = max(tp.depth, default=0)
    elif cfg.pipeline == "product_color":
        factor = _factor(cfg)
        host = strong_product(factor, g)
        emb = {v: divmod(v, g.n) for v in host.vertices()}
        c = product_coloring(host, emb, factor)
        colors = len(c.used())
        clustering = verify_clustering(c, diameters=False).clustering
        lo, hi = tw_bounds(host, cfg.exact_limit)
    elif cfg.pipeline in ("sparsify", "bound_check"):
        c = first_coloring(g, cfg)
        if cfg.t >= 0:
            c, _ = bounded_tw_coloring(g, c, cfg.t)
        rep = verify_clustering(c, diameters=False)
        res = sparsify_all(g, c, cfg.strategy)
        sparse = res.graph
        s_lo, s_hi = tw_bounds(sparse, cfg.exact_limit)
        if sparse.max_degree() > 3 * c.h:
            raise GraphError(f"{gid}: sparsified degree exceeds 3h")
        if cfg.pipeline == "sparsify":
            host, lo, hi = sparse, s_lo, s_hi
        else:
            if s_lo > hi:
                raise GraphError(f"{gid}: sparsified treewidth exceeds the original")
            k = max(s_hi, 1)
            delta = max(g.max_degree(), 2)
            bounds.append({
                "graph_id": gid, "h": c.h, "clustering": rep.clustering, "tw_g": hi,
                "tw_sparse": s_hi, "ratio": f"{hi / max(s_hi, 1):.6g}",
                "clustering_pow_h": rep.clustering ** c.h,
                "degree_grid_log2": f"{DEGREE_GRID.evaluate(k=k, delta=delta):.6g}",
                "biclique_free_log2": f"{BICLIQUE_FREE.evaluate(k=k, delta=delta, q=cfg.q):.6g}",
                "clustered_log2": f"{CLUSTERED.evaluate(k=k, h=c.h, c=rep.clustering):.6g}",
                "label": "qualitative",
            })
        colors = len(c.used())
        clustering = rep.clustering
    elif cfg.pipeline == "witness":
        params = KprParams.for_witness(cfg.p, cfg.q, cfg.h)
        tree = iterated_bfs(g, params)
        depth = tree.depth
        deep = deep_nodes(tree)
        if deep:
            wit = extract_witness(tree, deep[0])
            colors = len(wit.b_sets)
            clustering = max(len(a) for a in wit.a_sets)
        lo, hi = treewidth_lower(g), treewidth_upper(g)[0]
    return ResultRow(gid, fam, host.n, host.m, host.max_degree(), lo, hi, colors,
                     clustering, depth, cfg.pipeline, 0)


def run_pipeline(cfg: ExperimentConfig) -> PipelineOutput:
    """One row per graph, sorted by graph id; ``bound_check`` also fills the bound table."""
    cfg.validate()
    rows, bounds = [], []
    for gid, fam, g in _graphs(cfg):
        start = time.perf_counter()
        row = _run_one(gid, fam, g, cfg, bounds)
        if cfg.timing:
            row.ms = int(round((time.perf_counter() - start) * 1000))
        rows.append(row)
    rows.sort(key=lambda r: r.graph_id)
    bounds.sort(key=lambda b: b["graph_id"])
    return PipelineOutput(rows, bounds)


def emit_csv(rows: list[ResultRow], path) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(COLUMNS)
            for r in rows:
                d = asdict(r)
                w.writerow([d[c] for c in COLUMNS])
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror}") from exc
    return path


def emit_bounds(bounds: list[dict], path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=BOUND_COLUMNS)
        w.writeheader()
        w.writerows(bounds)
    return path


def read_csv(path) -> list[ResultRow]:
    with Path(path).open(newline="") as fh:
        rd = csv.DictReader(fh)
        if tuple(rd.fieldnames or ()) != COLUMNS:
            raise GraphError(f"{path}: unexpected header")
        out = []
        for rec in rd:
            vals = {k: (v if k in ("graph_id", "family", "pipeline") else int(v)) for k, v in rec.items()}
            out.append(ResultRow(**vals))
        return out
