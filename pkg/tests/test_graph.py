import numpy as np
import pytest

from exem.graph import (Graph, GraphFormatError, SbmSpec, generate_sbm, load_graph, load_labels,
                        sbm_expected_edges, write_graph, write_labels)


def write(tmp_path, text, name="g.txt"):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return p


def test_load_simple_edge_list(tmp_path):
    g = load_graph(write(tmp_path, "0 1\n1 2\n"))
    assert g.node_count == 3
    assert g.edge_count == 2
    assert g.degree[g.index_of("1")] == 2


def test_load_normalizes_duplicates_and_self_loops(tmp_path):
    g = load_graph(write(tmp_path, "0 1\n1 0\n3 3\n"))
    assert set(g.node_names) == {"0", "1", "3"}
    assert g.edge_count == 1
    assert g.degree[g.index_of("3")] == 0


def test_load_ignores_weights_comments_and_tabs(tmp_path):
    g = load_graph(write(tmp_path, "# header\n\na\tb 0.5\nb  \t c 2\n"))
    assert g.node_names == ("a", "b", "c")
    assert g.has_edge(0, 1) and g.has_edge(1, 2) and not g.has_edge(0, 2)


@pytest.mark.parametrize("text", ["0\n", "0 1 2 3\n"])
def test_malformed_line_reports_line_number(tmp_path, text):
    with pytest.raises(GraphFormatError, match=r":1:"):
        load_graph(write(tmp_path, text))


def test_malformed_line_number_counts_comments(tmp_path):
    with pytest.raises(GraphFormatError, match=r":3:"):
        load_graph(write(tmp_path, "# c\n0 1\nbad\n"))


def test_empty_file(tmp_path):
    with pytest.raises(GraphFormatError, match="no edges or nodes"):
        load_graph(write(tmp_path, "# nothing\n"))


def test_adjacency_invariants(tmp_path):
    rng = np.random.default_rng(3)
    lines = [f"{a} {b}" for a, b in rng.integers(0, 30, size=(200, 2))]
    g = load_graph(write(tmp_path, "\n".join(lines)))
    assert g.is_symmetric()
    for u in range(g.node_count):
        nbrs = g.neighbors(u)
        assert np.all(np.diff(nbrs) > 0)
        assert u not in nbrs


def test_round_trip(tmp_path):
    g, _ = generate_sbm(SbmSpec(60, 3, 0.2, 0.02, seed=5))
    path = tmp_path / "rt.txt"
    write_graph(g, path)
    h = load_graph(path)
    assert h.node_names == g.node_names
    assert np.array_equal(h.indptr, g.indptr)
    assert np.array_equal(h.indices, g.indices)


def test_round_trip_keeps_isolated_nodes(tmp_path):
    g = Graph.from_edges(["x", "y", "z"], [(0, 2)])
    write_graph(g, tmp_path / "iso.txt")
    h = load_graph(tmp_path / "iso.txt")
    assert h.node_names == ("x", "y", "z") and h.degree.tolist() == [1, 0, 1]


def test_load_labels(tmp_path):
    g = load_graph(write(tmp_path, "7 8\n"))
    labels = load_labels(write(tmp_path, "7 COMP,ENGI\n8\tMATH\n", "l.txt"), g)
    names = {labels.vocabulary[i] for i in labels.labels[g.index_of("7")]}
    assert names == {"COMP", "ENGI"}
    assert labels.name_of(g.index_of("8")) == "8"


def test_labels_unknown_node(tmp_path):
    g = load_graph(write(tmp_path, "7 8\n"))
    with pytest.raises(GraphFormatError, match="'9'"):
        load_labels(write(tmp_path, "9 COMP\n", "l.txt"), g)


def test_labels_empty_list(tmp_path):
    g = load_graph(write(tmp_path, "7 8\n"))
    with pytest.raises(GraphFormatError, match="empty label list"):
        load_labels(write(tmp_path, "7 ,\n", "l.txt"), g)


def test_labels_round_trip(tmp_path):
    g, labels = generate_sbm(SbmSpec(20, 4, 0.5, 0.1, seed=1))
    write_labels(labels, g, tmp_path / "l.txt")
    assert load_labels(tmp_path / "l.txt", g).labels == labels.labels


def test_sbm_two_cliques(two_cliques):
    g, labels = two_cliques
    assert g.edge_count == 2 * (50 * 49 // 2)
    assert (g.degree == 49).all()
    assert sorted(len(labels.nodes_with(c)) for c in range(2)) == [50, 50]
    for u, v in g.edges():
        assert labels.labels[u] == labels.labels[v]


def test_sbm_edgeless():
    g, _ = generate_sbm(SbmSpec(30, 3, 0.0, 0.0))
    assert g.node_count == 30 and g.edge_count == 0


def test_sbm_near_equal_blocks():
    _, labels = generate_sbm(SbmSpec(10, 3, 0.5, 0.1))
    sizes = sorted(len(labels.nodes_with(c)) for c in range(3))
    assert sizes == [3, 3, 4]


def test_sbm_expected_edge_count():
    spec = SbmSpec(1000, 4, 0.1, 0.005)
    # 4 * C(250, 2) * 0.1 + 6 * 250 * 250 * 0.005
    assert sbm_expected_edges(spec) == pytest.approx(14325.0)
    for seed in range(3):
        g, _ = generate_sbm(SbmSpec(1000, 4, 0.1, 0.005, seed=seed))
        assert abs(g.edge_count - 14325) <= 0.05 * 14325


def test_sbm_deterministic():
    a, _ = generate_sbm(SbmSpec(300, 3, 0.1, 0.01, seed=9))
    b, _ = generate_sbm(SbmSpec(300, 3, 0.1, 0.01, seed=9))
    assert a.edges().tobytes() == b.edges().tobytes()


@pytest.mark.parametrize("kwargs", [dict(n=2, k=3, p_in=0.1, p_out=0.1),
                                    dict(n=5, k=0, p_in=0.1, p_out=0.1),
                                    dict(n=5, k=2, p_in=1.5, p_out=0.1),
                                    dict(n=5, k=2, p_in=0.5, p_out=-0.1)])
def test_sbm_spec_validation(kwargs):
    with pytest.raises(ValueError):
        SbmSpec(**kwargs)
