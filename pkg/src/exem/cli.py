"""Command-line front end (``exem <subcommand>``)."""
from __future__ import annotations

import argparse
import logging
import os
import re
import sys
from pathlib import Path

import numpy as np

from .config import OUTPUT_ENV, parse_config
from .domset import find_dominating_set, read_dominating_set, write_dominating_set
from .estimator import ExEm
from .evaluation import (EDGE_OPERATORS, evaluate_classification, evaluate_link_prediction,
                         ndcg_at_k, nearest, recommend)
from .graph import Graph, SbmSpec, generate_sbm, load_graph, load_labels, write_graph, write_labels
from .pipeline import run_pipeline
from .skipgram import TrainConfig, combine, read_embeddings, train, write_embeddings
from .walker import MODES, WalkConfig, generate_walks, write_corpus

logger = logging.getLogger("exem")


def _default_out(name: str) -> str:
    return str(Path(os.environ.get(OUTPUT_ENV, ".")) / name)


def _read_sentences(path):
    with open(path, encoding="utf-8") as fh:
        return [line.split() for line in fh if line.strip()]


def _names_graph(names) -> Graph:
    return Graph.from_edges(list(names), [])


def _emit_report(report, out):
    print(report.format_table())
    if out:
        report.write(out)


def cmd_synth(args):
    graph, labels = generate_sbm(SbmSpec(args.n, args.k, args.p_in, args.p_out, args.seed))
    write_graph(graph, args.output)
    if args.labels_out:
        write_labels(labels, graph, args.labels_out)
    print(f"{graph.node_count} nodes, {graph.edge_count} edges -> {args.output}")


def cmd_doms(args):
    graph = load_graph(args.graph)
    ds = find_dominating_set(graph, args.seed)
    write_dominating_set(ds, graph, args.output)
    print(f"{len(ds)} dominating nodes of {graph.node_count} -> {args.output}")


def cmd_walk(args):
    graph = load_graph(args.graph)
    cfg = WalkConfig(args.walks_per_start, args.length, args.mode, args.seed, args.walks_total,
                     args.workers)
    ds = None
    if cfg.is_exem:
        ds = read_dominating_set(args.doms, graph) if args.doms else find_dominating_set(graph, args.seed)
    corpus = generate_walks(graph, ds, cfg)
    write_corpus(corpus, graph, args.output)
    print(f"{len(corpus)} walks, {corpus.token_count} tokens -> {args.output}")


def cmd_train(args):
    cfg = TrainConfig(dim=args.dim, window=args.window, epochs=args.epochs,
                      negatives=args.negatives, learning_rate=args.learning_rate,
                      min_ngram=args.min_ngram, max_ngram=args.max_ngram, buckets=args.buckets,
                      seed=args.seed, workers=args.workers)
    emb = train(_read_sentences(args.corpus), cfg, args.mode)
    write_embeddings(emb, args.output)
    print(f"{len(emb)} x {emb.dimension} ({emb.mode}) -> {args.output}")


def cmd_combine(args):
    emb = combine(read_embeddings(args.a, "w2v"), read_embeddings(args.b, "ft"), args.scheme)
    write_embeddings(emb, args.output)
    print(f"{len(emb)} x {emb.dimension} ({emb.mode}) -> {args.output}")


def cmd_eval_classify(args):
    emb = read_embeddings(args.embeddings)
    labels = load_labels(args.labels, _names_graph(emb.names))
    report = evaluate_classification(emb, labels, args.train_ratio, args.reps, args.seed,
                                     decision=args.decision)
    _emit_report(report, args.output)


def cmd_eval_linkpred(args):
    graph = load_graph(args.graph)
    est = ExEm(variant=args.variant, walk_mode=args.mode, walks_per_start=args.walks_per_start,
               walk_length=args.length, walks_total=args.walks_total, dim=args.dim,
               window=args.window, epochs=args.epochs, negatives=args.negatives, seed=args.seed,
               workers=args.workers)
    report = evaluate_link_prediction(graph, est, args.op, args.hide_ratio, args.reps, args.seed)
    _emit_report(report, args.output)


def cmd_eval_recommend(args):
    emb = read_embeddings(args.embeddings)
    labels = load_labels(args.labels, _names_graph(emb.names))
    ranked = recommend(emb, labels, args.topic, args.k, candidates=args.candidates)
    for rank, (node, score) in enumerate(ranked, 1):
        print(f"{rank}\t{node}\t{score:.6f}")
    if args.relevance:
        rel = {}
        with open(args.relevance, encoding="utf-8") as fh:
            for line in fh:
                parts = line.split()
                if parts:
                    rel[parts[0]] = float(parts[1])
        print(f"ndcg@{args.k}={ndcg_at_k(ranked, rel, args.k):.6f}")


_TERM = re.compile(r"([+-]?)\s*([^\s+-]+)")


def parse_query(expr: str, emb) -> tuple[np.ndarray, list[str]]:
    """Vector for an expression such as ``"12 + 40 - 7"`` over node ids."""
    terms = _TERM.findall(expr)
    if not terms:
        raise ValueError(f"empty query {expr!r}")
    q = np.zeros(emb.dimension)
    for sign, name in terms:
        if name not in emb:
            raise KeyError(f"query node {name!r} has no embedding")
        q = q - emb[name] if sign == "-" else q + emb[name]
    return q, [name for _, name in terms]


def cmd_nearest(args):
    emb = read_embeddings(args.embeddings)
    q, names = parse_query(args.query, emb)
    ranked = nearest(emb, q, args.k, exclude=names if args.exclude_query else ())
    for rank, (node, score) in enumerate(ranked, 1):
        print(f"{rank}\t{node}\t{score:.6f}")


_PIPELINE_KEYS = ("graph", "labels", "output_dir", "variant", "mode", "walks_per_start", "length",
                  "walks_total", "dim", "window", "epochs", "negatives", "seed", "workers", "eval",
                  "train_ratio", "reps", "op", "hide_ratio", "topic", "k")


def cmd_pipeline(args):
    overrides = {k: getattr(args, k) for k in _PIPELINE_KEYS}
    cfg = parse_config(args.config, overrides)
    result = run_pipeline(cfg, force=args.force)
    for name, path in result.artifacts.items():
        state = "reused" if name in result.reused else "written"
        print(f"{name}\t{state}\t{path}")
    for report in result.reports.values():
        print(report.format_table())


def _global_flags(seed=0, workers=1) -> argparse.ArgumentParser:
    # a fresh parent per use: argparse shares parent actions, so defaults would leak
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=seed)
    common.add_argument("--workers", type=int, default=workers)
    common.add_argument("--force", action="store_true", help="rebuild existing artifacts")
    common.add_argument("-v", "--verbose", action="store_true")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _global_flags()

    walk = argparse.ArgumentParser(add_help=False)
    walk.add_argument("--mode", choices=MODES, default="exem-relaxed")
    walk.add_argument("--walks-per-start", type=int, default=10)
    walk.add_argument("--length", type=int, default=80)
    walk.add_argument("--walks-total", type=int, default=None)

    sg = argparse.ArgumentParser(add_help=False)
    sg.add_argument("--dim", type=int, default=128)
    sg.add_argument("--window", type=int, default=10)
    sg.add_argument("--epochs", type=int, default=5)
    sg.add_argument("--negatives", type=int, default=5)

    p = argparse.ArgumentParser(prog="exem", description="Dominating-set walk embeddings.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("synth", parents=[common], help="sample a stochastic block model graph")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--p-in", type=float, required=True)
    s.add_argument("--p-out", type=float, required=True)
    s.add_argument("-o", "--output", default=_default_out("graph.txt"))
    s.add_argument("--labels-out")
    s.set_defaults(func=cmd_synth)

    s = sub.add_parser("doms", parents=[common], help="find a dominating set")
    s.add_argument("graph")
    s.add_argument("-o", "--output", default=_default_out("dominating_set.txt"))
    s.set_defaults(func=cmd_doms)

    s = sub.add_parser("walk", parents=[common, walk], help="sample the walk corpus")
    s.add_argument("graph")
    s.add_argument("--doms", help="dominating set file; computed from --seed when omitted")
    s.add_argument("-o", "--output", default=_default_out("walks.txt"))
    s.set_defaults(func=cmd_walk)

    s = sub.add_parser("train", parents=[common, sg], help="train skip-gram embeddings")
    s.add_argument("corpus")
    s.add_argument("--mode", choices=("w2v", "ft"), default="w2v")
    s.add_argument("--learning-rate", type=float, default=0.025)
    s.add_argument("--min-ngram", type=int, default=3)
    s.add_argument("--max-ngram", type=int, default=6)
    s.add_argument("--buckets", type=int, default=2**21)
    s.add_argument("-o", "--output", default=_default_out("embedding.txt"))
    s.set_defaults(func=cmd_train)

    s = sub.add_parser("combine", parents=[common], help="merge two embeddings")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("--scheme", choices=("concat", "sum", "avg"), default="concat")
    s.add_argument("-o", "--output", default=_default_out("embedding_combined.txt"))
    s.set_defaults(func=cmd_combine)

    s = sub.add_parser("eval-classify", parents=[common], help="multi-label classification")
    s.add_argument("embeddings")
    s.add_argument("labels")
    s.add_argument("--train-ratio", type=float, default=0.5)
    s.add_argument("--reps", type=int, default=10)
    s.add_argument("--decision", choices=("top-k", "threshold"), default="top-k")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_eval_classify)

    s = sub.add_parser("eval-linkpred", parents=[common, walk, sg], help="link prediction AUC")
    s.add_argument("graph")
    s.add_argument("--variant", choices=("w2v", "ft", "com", "sum", "avg"), default="w2v")
    s.add_argument("--op", choices=EDGE_OPERATORS, default="hadamard")
    s.add_argument("--hide-ratio", type=float, default=0.5)
    s.add_argument("--reps", type=int, default=10)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_eval_linkpred)

    s = sub.add_parser("eval-recommend", parents=[common], help="rank experts for a topic")
    s.add_argument("embeddings")
    s.add_argument("labels")
    s.add_argument("--topic", required=True)
    s.add_argument("--k", type=int, default=10)
    s.add_argument("--candidates", choices=("cluster", "all"), default="cluster")
    s.add_argument("--relevance", help="'node_id score' file; prints nDCG@k")
    s.set_defaults(func=cmd_eval_recommend)

    s = sub.add_parser("nearest", parents=[common], help="nearest nodes to a vector expression")
    s.add_argument("embeddings")
    s.add_argument("--query", required=True, help="node ids joined by + or -, e.g. '12+40-7'")
    s.add_argument("--k", type=int, default=10)
    s.add_argument("--exclude-query", action="store_true")
    s.set_defaults(func=cmd_nearest)

    # seed/workers only override the config file when given explicitly
    s = sub.add_parser("pipeline", parents=[_global_flags(None, None)],
                       help="run every stage end to end")
    s.add_argument("--config", help="key=value file; flags override it")
    s.add_argument("--graph")
    s.add_argument("--labels")
    s.add_argument("--output-dir")
    s.add_argument("--variant", choices=("w2v", "ft", "com", "sum", "avg"))
    s.add_argument("--mode", choices=MODES)
    s.add_argument("--walks-per-start", type=int)
    s.add_argument("--length", type=int)
    s.add_argument("--walks-total", type=int)
    s.add_argument("--dim", type=int)
    s.add_argument("--window", type=int)
    s.add_argument("--epochs", type=int)
    s.add_argument("--negatives", type=int)
    s.add_argument("--eval", help="comma list of classify,linkpred,recommend")
    s.add_argument("--train-ratio", type=float)
    s.add_argument("--reps", type=int)
    s.add_argument("--op", choices=EDGE_OPERATORS)
    s.add_argument("--hide-ratio", type=float)
    s.add_argument("--topic")
    s.add_argument("--k", type=int)
    s.set_defaults(func=cmd_pipeline)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except Exception as exc:  # noqa: BLE001 - one-line diagnostics for every failure
        msg = " ".join(str(exc).split()) or type(exc).__name__
        print(f"exem {args.command}: error: {msg}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
