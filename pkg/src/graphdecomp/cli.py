"""Command-line front end: ``graphdecomp <subcommand> [options]``."""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import generators
from .coloring import (
    bounded_tw_coloring, format_coloring, parse_coloring, product_coloring,
    tree_partition_coloring, verify_clustering,
)
from .decomposition import exact_treewidth, format_pace, tree_partition, treewidth_lower, treewidth_upper
from .experiments import emit_bounds, emit_csv, parse_config, run_pipeline
from .graph import Graph, GraphError, format_edge_list, parse_edge_list
from .kpr import KprParams, deep_nodes, extract_witness, iterated_bfs, kpr_coloring
from .minors import INDUCED, MINOR, BudgetExhausted, find_induced_minor, find_minor, format_model, parse_model, validate_model
from .sparsifier import STRATEGIES, sparsify_all

log = logging.getLogger("graphdecomp")


def _read_text(path: str | None) -> str:
    if path in (None, "-"):
        return sys.stdin.read()
    return Path(path).read_text()


def _graph(args) -> Graph:
    return parse_edge_list(_read_text(args.input))


def _emit(args, text: str):
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _number(tok: str):
    try:
        return int(tok)
    except ValueError:
        return float(tok)


def cmd_generate(args) -> int:
    vals = [_number(x) for x in args.params]
    kw = {"seed": args.seed} if args.family.startswith("random") else {}
    try:
        g = generators.generate(args.family, *vals, **kw)
    except TypeError as exc:
        raise GraphError(f"bad parameters for {args.family}: {exc}") from None
    _emit(args, format_edge_list(g))
    return 0


def cmd_treewidth(args) -> int:
    g = _graph(args)
    if args.mode == "bounds":
        lo, (hi, td) = treewidth_lower(g), treewidth_upper(g)
        text = f"{lo} {hi}\n"
    else:
        w, td = exact_treewidth(g, budget=args.budget)
        text = f"{w}\n"
    if args.format == "pace":
        text = format_pace(td, g.n)
    _emit(args, text)
    return 0


def cmd_color(args) -> int:
    g = _graph(args)
    if args.method == "kpr":
        res = kpr_coloring(g, args.p, args.q)
        c = res.coloring
        if args.log:
            Path(args.log).write_text(res.tree.to_text())
        if res.depth_bound_exceeded:
            log.warning("recursion depth %d exceeds q+1", res.tree.depth)
    elif args.method == "tree_partition":
        td = exact_treewidth(g, budget=max(g.n, 1))[1] if g.n <= 30 else treewidth_upper(g)[1]
        c = tree_partition_coloring(g, tree_partition(g, td))
    elif args.method == "product":
        if not args.embedding:
            raise GraphError("--embedding is required for the product coloring")
        emb = {}
        for ln in _read_text(args.embedding).splitlines():
            if ln.strip():
                v, x, i = map(int, ln.split())
                emb[v] = (x, i)
        c = product_coloring(g, emb)
    else:
        if not args.coloring:
            raise GraphError("--coloring is required for the bounded_tw method")
        c1 = parse_coloring(_read_text(args.coloring), g)
        c, _ = bounded_tw_coloring(g, c1, args.t if args.t >= 0 else None)
    _emit(args, format_coloring(c))
    return 0


def cmd_verify(args) -> int:
    g = _graph(args)
    c = parse_coloring(_read_text(args.coloring), g)
    rep = verify_clustering(c)
    if args.format == "text":
        text = "".join(f"color {s.color}: {s.components} components, max size {s.max_size}, "
                       f"max weak diameter {s.max_weak_diameter}\n" for s in rep.per_color)
        text += f"clustering {rep.clustering}\n"
    else:
        text = rep.to_csv()
    _emit(args, text)
    return 0


def cmd_sparsify(args) -> int:
    g = _graph(args)
    c = parse_coloring(_read_text(args.coloring), g)
    res = sparsify_all(g, c, args.strategy)
    lines = [f"input |V|={g.n} |E|={g.m} max_degree={g.max_degree()} colors={c.h}"]
    for k, tr in enumerate(res.traces):
        lines.append(f"stage {k}: {tr.summary()}")
    lines.append("vertex map: " + " ".join(map(str, res.vertex_map)))
    sys.stdout.write("\n".join(lines) + "\n")
    if args.output:
        Path(args.output).write_text(format_edge_list(res.graph))
    return 0


def cmd_minor(args) -> int:
    g = _graph(args)
    pattern = parse_edge_list(_read_text(args.pattern))
    search = find_minor if args.kind == MINOR else find_induced_minor
    try:
        m = search(g, pattern, budget=args.budget)
    except BudgetExhausted as exc:
        log.warning("%s", exc)
        _emit(args, "unknown\n")
        return 0
    _emit(args, "none\n" if m is None else format_model(m))
    return 0


def cmd_validate_model(args) -> int:
    g = _graph(args)
    pattern = parse_edge_list(_read_text(args.pattern))
    m = parse_model(_read_text(args.model), g, pattern, args.kind)
    rep = validate_model(m)
    if rep:
        _emit(args, "ok\n")
        return 0
    _emit(args, f"violation: {rep.violation} {' '.join(map(str, rep.witness))}\n")
    return 1


def cmd_witness(args) -> int:
    g = _graph(args)
    params = KprParams.for_witness(args.p, args.q, args.h)
    tree = iterated_bfs(g, params)
    if args.log:
        Path(args.log).write_text(tree.to_text())
    deep = deep_nodes(tree)
    if not deep:
        _emit(args, f"no node at depth {args.q} with weak diameter above {params.d}\n")
        return 0
    wit = extract_witness(tree, deep[0])
    _emit(args, format_model(wit.model(g)))
    return 0


def cmd_experiment(args) -> int:
    text = _read_text(args.config) if args.config else ""
    overrides = list(args.overrides)
    if args.output:
        overrides.append(f"output={args.output}")
    if args.input:
        overrides.append(f"input={args.input}")
    if args.seed is not None:
        overrides.append(f"seed={args.seed}")
    cfg = parse_config(text, overrides)
    out = run_pipeline(cfg)
    if not cfg.output:
        from .experiments import COLUMNS
        from dataclasses import asdict
        sys.stdout.write(",".join(COLUMNS) + "\n")
        for r in out.rows:
            d = asdict(r)
            sys.stdout.write(",".join(str(d[c]) for c in COLUMNS) + "\n")
        return 0
    path = emit_csv(out.rows, cfg.output)
    if cfg.pipeline == "bound_check":
        emit_bounds(out.bounds, path.with_name(path.stem + "_bounds.csv"))
    if cfg.plot:
        from .plotting import plot_bounds, plot_rows
        plot_rows(out.rows, path.with_suffix(".png"))
        if cfg.pipeline == "bound_check":
            plot_bounds(out.bounds, path.with_name(path.stem + "_bounds.png"))
    return 0


def _global_flags(default) -> argparse.ArgumentParser:
    # accepted before and after the subcommand; the copy on the subcommands
    # suppresses defaults so it does not clobber values given up front
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", default=default, help="graph edge-list file ('-' for stdin)")
    common.add_argument("--output", default=default, help="write results here instead of stdout")
    common.add_argument("--seed", type=int, default=default)
    common.add_argument("--format", choices=("text", "csv", "pace"), default=default)
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _global_flags(argparse.SUPPRESS)
    ap = argparse.ArgumentParser(prog="graphdecomp", parents=[_global_flags(None)],
                                 description="Graph decompositions, clustered colorings and minor witnesses.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", parents=[common], help="write a generated graph")
    p.add_argument("family", choices=sorted(generators.FAMILIES))
    p.add_argument("params", nargs="*")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("treewidth", parents=[common], help="exact treewidth or bounds")
    p.add_argument("--mode", choices=("exact", "bounds"), default="exact")
    p.add_argument("--budget", type=int, default=32, help="largest graph for the exact oracle")
    p.set_defaults(func=cmd_treewidth)

    p = sub.add_parser("color", parents=[common], help="compute an edge-coloring")
    p.add_argument("--method", choices=("kpr", "tree_partition", "product", "bounded_tw"), default="kpr")
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--q", type=int, default=1)
    p.add_argument("--t", type=int, default=-1)
    p.add_argument("--embedding", help="lines 'v x i' placing v at factor vertex x, path index i")
    p.add_argument("--coloring", help="input coloring for bounded_tw")
    p.add_argument("--log", help="write the iterated BFS audit log here")
    p.set_defaults(func=cmd_color)

    p = sub.add_parser("verify", parents=[common], help="clustering report of a coloring")
    p.add_argument("--coloring", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sparsify", parents=[common], help="contract-extract-uncontract every color class")
    p.add_argument("--coloring", required=True)
    p.add_argument("--strategy", choices=STRATEGIES, default="auto")
    p.set_defaults(func=cmd_sparsify)

    p = sub.add_parser("minor", parents=[common], help="search for an (induced) minor model")
    p.add_argument("--pattern", required=True)
    p.add_argument("--kind", choices=(INDUCED, MINOR), default=INDUCED)
    p.add_argument("--budget", type=int, default=10 ** 7)
    p.set_defaults(func=cmd_minor)

    p = sub.add_parser("validate-model", parents=[common], help="check a minor model file")
    p.add_argument("--pattern", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--kind", choices=(INDUCED, MINOR), default=INDUCED)
    p.set_defaults(func=cmd_validate_model)

    p = sub.add_parser("witness", parents=[common], help="extract a subdivided biclique from a deep branch")
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--q", type=int, default=1)
    p.add_argument("--h", type=int, default=2)
    p.add_argument("--log", help="write the iterated BFS audit log here")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("experiment", parents=[common], help="run a pipeline and write CSV (plus PNG)")
    p.add_argument("--config", help="key=value file")
    p.add_argument("overrides", nargs="*", help="extra key=value settings")
    p.set_defaults(func=cmd_experiment)
    return ap


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (GraphError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
