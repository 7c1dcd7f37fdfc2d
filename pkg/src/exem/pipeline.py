"""End-to-end orchestration: graph -> dominating set -> walks -> embeddings -> reports.

Each stage writes a plain-text artifact next to a ``.meta`` fingerprint of
its parameters and inputs. A rerun reuses an artifact whose fingerprint
still matches unless ``force`` is set. Output is written to ``<name>.partial``
first and renamed on success, so a failed stage leaves only the partial file.
"""
from __future__ import annotations

import hashlib
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path

from .config import PipelineConfig, config_lines
from .domset import find_dominating_set, read_dominating_set, write_dominating_set
from .estimator import ExEm
from .evaluation import evaluate_classification, evaluate_link_prediction, recommend
from .graph import load_graph, load_labels
from .skipgram import combine, corpus_sentences, cover_nodes, read_embeddings, train, write_embeddings
from .walker import generate_walks, read_corpus, write_corpus

logger = logging.getLogger(__name__)

_SCHEME = {"com": "concat", "sum": "sum", "avg": "avg"}


class PipelineError(RuntimeError):
    def __init__(self, stage: str, cause: BaseException):
        super().__init__(f"stage {stage!r} failed: {cause}")
        self.stage = stage
        self.cause = cause


@dataclass
class PipelineResult:
    artifacts: dict = field(default_factory=dict)
    reports: dict = field(default_factory=dict)
    reused: list = field(default_factory=list)


def file_digest(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()


def _fingerprint(params: dict, inputs: list) -> str:
    h = hashlib.sha256()
    for key in sorted(params):
        h.update(f"{key}={params[key]}\n".encode())
    for path in inputs:
        h.update(file_digest(path).encode())
    return h.hexdigest()


class _Stage:
    def __init__(self, name: str, path: Path, params: dict, inputs: list, force: bool):
        self.name = name
        self.path = path
        self.meta = path.with_name(path.name + ".meta")
        self.partial = path.with_name(path.name + ".partial")
        self.fingerprint = _fingerprint(params, inputs)
        self.force = force

    def is_current(self) -> bool:
        if self.force or not self.path.exists() or not self.meta.exists():
            return False
        return self.meta.read_text(encoding="utf-8").strip() == self.fingerprint

    def commit(self):
        os.replace(self.partial, self.path)
        self.meta.write_text(self.fingerprint + "\n", encoding="utf-8")


def run_pipeline(config: PipelineConfig, force: bool = False) -> PipelineResult:
    config.validate()
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    result = PipelineResult()

    def stage(name, filename, params, inputs, build):
        st = _Stage(name, out / filename, params, inputs, force)
        result.artifacts[name] = st.path
        if st.is_current():
            logger.info("stage %s: reusing %s", name, st.path)
            result.reused.append(name)
            return st.path
        try:
            build(st.partial)
        except Exception as exc:
            raise PipelineError(name, exc) from exc
        st.commit()
        return st.path

    try:
        graph = load_graph(config.graph)
        labels = load_labels(config.labels, graph) if config.labels else None
    except Exception as exc:
        raise PipelineError("load", exc) from exc

    wcfg = config.walk_config()
    ds = None
    corpus_inputs = [config.graph]
    if wcfg.is_exem:
        ds_path = stage("doms", "dominating_set.txt", {"seed": config.seed}, [config.graph],
                        lambda p: write_dominating_set(find_dominating_set(graph, config.seed),
                                                       graph, p))
        ds = read_dominating_set(ds_path, graph)
        corpus_inputs.append(ds_path)

    walk_params = {k: getattr(wcfg, k) for k in ("walks_per_start", "walk_length", "mode",
                                                  "seed", "walks_total")}
    corpus_path = stage("walk", "walks.txt", walk_params, corpus_inputs,
                        lambda p: write_corpus(generate_walks(graph, ds, wcfg), graph, p))

    tcfg = config.train_config()
    train_params = {k: getattr(tcfg, k) for k in ("dim", "window", "epochs", "negatives",
                                                  "learning_rate", "min_ngram", "max_ngram",
                                                  "buckets", "sample", "seed", "workers")}
    sentences = None

    def build_embedding(mode):
        def build(p):
            nonlocal sentences
            if sentences is None:
                sentences = corpus_sentences(read_corpus(corpus_path, graph), graph)
            write_embeddings(cover_nodes(train(sentences, tcfg, mode), graph.node_names), p)
        return build

    base_paths = {}
    for mode in config.base_modes:
        base_paths[mode] = stage(f"train-{mode}", f"embedding_{mode}.txt",
                                 {**train_params, "mode": mode}, [corpus_path],
                                 build_embedding(mode))
    if config.variant in _SCHEME:
        emb_path = stage(
            f"combine-{config.variant}", f"embedding_{config.variant}.txt",
            {"scheme": _SCHEME[config.variant]}, [base_paths["w2v"], base_paths["ft"]],
            lambda p: write_embeddings(combine(read_embeddings(base_paths["w2v"], "w2v"),
                                               read_embeddings(base_paths["ft"], "ft"),
                                               _SCHEME[config.variant]), p))
    else:
        emb_path = base_paths[config.variant]
    result.artifacts["embedding"] = emb_path
    embedding = read_embeddings(emb_path, config.variant)

    label_inputs = [emb_path, config.labels] if config.labels else [emb_path]
    if "classify" in config.eval:
        def build_cls(p):
            rep = evaluate_classification(embedding, labels, config.train_ratio, config.reps,
                                          config.seed)
            rep.write(p)
            result.reports["classify"] = rep
        stage("eval-classify", "report_classify.txt",
              {"train_ratio": config.train_ratio, "reps": config.reps, "seed": config.seed},
              label_inputs, build_cls)
    if "linkpred" in config.eval:
        def build_lp(p):
            est = ExEm(variant=config.variant, walk_mode=config.walk_mode,
                       walks_per_start=config.walks_per_start, walk_length=config.walk_length,
                       walks_total=config.walks_total, **{k: v for k, v in train_params.items()})
            rep = evaluate_link_prediction(graph, est, config.op, config.hide_ratio, config.reps,
                                           config.seed)
            rep.write(p)
            result.reports["linkpred"] = rep
        stage("eval-linkpred", "report_linkpred.txt",
              {**walk_params, **train_params, "variant": config.variant, "op": config.op,
               "hide_ratio": config.hide_ratio, "reps": config.reps},
              [config.graph], build_lp)
    if "recommend" in config.eval:
        def build_rec(p):
            ranked = recommend(embedding, labels, config.topic, config.k)
            with open(p, "w", encoding="utf-8") as fh:
                for rank, (node, score) in enumerate(ranked, 1):
                    fh.write(f"{rank}\t{node}\t{score!r}\n")
        stage("eval-recommend", "recommend.txt", {"topic": config.topic, "k": config.k},
              label_inputs, build_rec)

    (out / "config.txt").write_text("\n".join(config_lines(config)) + "\n", encoding="utf-8")
    return result
