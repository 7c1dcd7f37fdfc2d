import logging

import numpy as np
import pytest

from exem.domset import DominatingSet, find_dominating_set
from exem.graph import Graph
from exem.walker import (WalkConfig, WalkCorpus, generate_walks, read_corpus,
                         update_walks_incremental, walk_stats, write_corpus)

from conftest import make_graph, random_graph


def edges_ok(graph, corpus):
    return all(graph.has_edge(int(a), int(b)) for w in corpus.walks for a, b in zip(w[:-1], w[1:]))


def test_isolated_dominating_node():
    g = make_graph([], n=1)
    ds = find_dominating_set(g, 0)
    corpus = generate_walks(g, ds, WalkConfig(walks_per_start=4, walk_length=10))
    assert [w.tolist() for w in corpus.walks] == [[0]] * 4


def test_path_relaxed(path3):
    ds = DominatingSet({1}, 3)
    corpus = generate_walks(path3, ds, WalkConfig(walks_per_start=10, walk_length=5, seed=3))
    assert len(corpus) == 10
    for w in corpus.walks:
        assert len(w) == 5
        assert w[0] == 1 and w[2] == 1 and w[4] == 1
        assert set(w[1::2].tolist()) <= {0, 2}


def test_path_strict_warns(path3, caplog):
    ds = DominatingSet({1}, 3)
    with caplog.at_level(logging.WARNING):
        corpus = generate_walks(path3, ds, WalkConfig(walks_per_start=3, walk_length=5,
                                                      mode="exem-strict"))
    # the walk revisits node 1, which counts as a second dominating occurrence
    assert corpus.warned == frozenset()
    star = Graph.from_edges(["c", "a", "b"], [(0, 1), (0, 2)])
    with caplog.at_level(logging.WARNING):
        corpus = generate_walks(star, DominatingSet({0}, 3),
                                WalkConfig(walks_per_start=3, walk_length=2, mode="exem-strict"))
    assert corpus.warned == frozenset({0, 1, 2})
    assert "without a second dominating node" in caplog.text


def test_second_position_never_dominating():
    rng = np.random.default_rng(1)
    for trial in range(30):
        g = random_graph(rng, 40, 0.15)
        ds = find_dominating_set(g, trial)
        corpus = generate_walks(g, ds, WalkConfig(walks_per_start=3, walk_length=12, seed=trial))
        for w in corpus.walks:
            assert w[0] in ds
            if len(w) > 1:
                assert w[1] not in ds


def test_uniform_mode_starts_every_node_k_times():
    g = random_graph(np.random.default_rng(2), 30, 0.2)
    corpus = generate_walks(g, None, WalkConfig(walks_per_start=4, walk_length=6, mode="uniform"))
    assert np.bincount(corpus.starts(), minlength=30).tolist() == [4] * 30
    assert edges_ok(g, corpus)


def test_walks_total_distributes_exactly():
    g = random_graph(np.random.default_rng(4), 50, 0.1)
    ds = find_dominating_set(g, 0)
    corpus = generate_walks(g, ds, WalkConfig(walk_length=5, walks_total=101))
    assert len(corpus) == 101
    counts = np.bincount(corpus.starts())[ds.sorted_members()]
    assert counts.max() - counts.min() <= 1


def test_determinism_and_worker_independence():
    g = random_graph(np.random.default_rng(5), 60, 0.1)
    ds = find_dominating_set(g, 0)
    cfg = WalkConfig(walks_per_start=5, walk_length=20, seed=11)
    a = generate_walks(g, ds, cfg)
    b = generate_walks(g, ds, cfg)
    c = generate_walks(g, ds, WalkConfig(5, 20, seed=11, workers=2))
    as_bytes = lambda corpus: b"|".join(w.tobytes() for w in corpus.walks)
    assert as_bytes(a) == as_bytes(b) == as_bytes(c)


def test_errors(path3):
    with pytest.raises(ValueError):
        generate_walks(path3, None, WalkConfig())
    with pytest.raises(ValueError):
        generate_walks(path3, DominatingSet(set(), 3), WalkConfig())
    with pytest.raises(OverflowError):
        generate_walks(make_graph([], n=3), None, WalkConfig(walks_per_start=2**30, mode="uniform"))
    with pytest.raises(ValueError):
        WalkConfig(walk_length=0)


def test_walk_stats_recount(path3):
    mask_ds = DominatingSet({0, 2}, 3)
    corpus = WalkCorpus((np.array([0, 1, 2]), np.array([2, 1]), np.array([0])), WalkConfig())
    stats = walk_stats(corpus, mask_ds)
    assert stats.fraction_with_second_dominating == pytest.approx(1 / 3)
    assert stats.mean_length == pytest.approx(2.0)
    assert stats.start_coverage == 1.0
    assert walk_stats(WalkCorpus((np.array([0]),) * 3, WalkConfig()),
                      mask_ds).fraction_with_second_dominating == 0.0
    with pytest.raises(ValueError):
        walk_stats(WalkCorpus((), WalkConfig()), mask_ds)


def test_walk_stats_all_hit(path3):
    corpus = WalkCorpus((np.array([1, 0, 1]),) * 5, WalkConfig())
    assert walk_stats(corpus, DominatingSet({1}, 3)).fraction_with_second_dominating == 1.0


def test_incremental_identity(path3):
    ds = DominatingSet({1}, 3)
    corpus = generate_walks(path3, ds, WalkConfig(walks_per_start=2, walk_length=4))
    out, ds2 = update_walks_incremental(corpus, path3, ds, set())
    assert out is corpus and ds2 is ds


def test_incremental_leaf_on_dominating_node(path3):
    ds = DominatingSet({1}, 3)
    cfg = WalkConfig(walks_per_start=3, walk_length=4)
    corpus = generate_walks(path3, ds, cfg)
    grown = path3.with_edges([("2", "4")])
    leaf = grown.index_of("4")
    out, ds2 = update_walks_incremental(corpus, grown, ds, {leaf}, cfg)
    assert ds2.members == ds.members
    assert out.walks[:len(corpus)] == corpus.walks
    new = out.walks[len(corpus):]
    assert len(new) == 3 and all(w[0] == 1 for w in new)
    # fresh RNG generation: the new walks are not copies of the old ones
    assert edges_ok(grown, out)


def test_incremental_isolated_node_joins(path3):
    ds = DominatingSet({1}, 3)
    cfg = WalkConfig(walks_per_start=2, walk_length=4)
    corpus = generate_walks(path3, ds, cfg)
    grown = Graph.from_edges(list(path3.node_names) + ["9"], path3.edges().tolist())
    out, ds2 = update_walks_incremental(corpus, grown, ds, {3}, cfg)
    assert 3 in ds2
    assert [w.tolist() for w in out.walks[len(corpus):]] == [[3], [3]]


def test_incremental_rejects_unknown_node(path3):
    ds = DominatingSet({1}, 3)
    corpus = generate_walks(path3, ds, WalkConfig(walks_per_start=1, walk_length=3))
    with pytest.raises(IndexError):
        update_walks_incremental(corpus, path3, ds, {7})


def test_corpus_file_round_trip(tmp_path, coauthor_graph):
    ds = find_dominating_set(coauthor_graph, 0)
    corpus = generate_walks(coauthor_graph, ds, WalkConfig(walks_per_start=2, walk_length=6))
    write_corpus(corpus, coauthor_graph, tmp_path / "w.txt")
    first = (tmp_path / "w.txt").read_text().splitlines()[0].split(" ")
    assert first[0] in {coauthor_graph.node_names[m] for m in ds.members}
    back = read_corpus(tmp_path / "w.txt", coauthor_graph)
    assert [w.tolist() for w in back.walks] == [w.tolist() for w in corpus.walks]
