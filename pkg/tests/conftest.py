import numpy as np
import pytest

from exem.graph import Graph, SbmSpec, generate_sbm

_ACCEPTANCE = []


def record_criterion(number, title, ok, detail=""):
    _ACCEPTANCE.append((number, title, bool(ok), detail))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, ok, detail in sorted(_ACCEPTANCE):
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"[{status}] {number:>2}. {title} {detail}".rstrip())


def make_graph(edges, n=None, names=None):
    if names is None:
        n = n if n is not None else (max(max(e) for e in edges) + 1 if edges else 0)
        names = [str(i) for i in range(n)]
    return Graph.from_edges(names, edges)


@pytest.fixture
def path3():
    # nodes "1" - "2" - "3"
    return Graph.from_edges(["1", "2", "3"], [(0, 1), (1, 2)])


@pytest.fixture
def k5():
    return make_graph([(i, j) for i in range(5) for j in range(i + 1, 5)])


@pytest.fixture
def coauthor_graph():
    # six authors, five co-author edges; A3 and A5 head their neighbourhoods
    names = ["A1", "A2", "A3", "A4", "A5", "A6"]
    idx = {n: i for i, n in enumerate(names)}
    edges = [("A1", "A3"), ("A2", "A3"), ("A3", "A4"), ("A4", "A5"), ("A5", "A6")]
    return Graph.from_edges(names, [(idx[a], idx[b]) for a, b in edges])


@pytest.fixture(scope="session")
def two_cliques():
    return generate_sbm(SbmSpec(100, 2, 1.0, 0.0, seed=0))


def random_graph(rng, n, p):
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(len(iu)) < p
    return make_graph(list(zip(iu[keep].tolist(), ju[keep].tolist())), n=n)
