import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from exem.evaluation import auc, dcg_at_k, f1_scores, ndcg_at_k
from exem.evaluation.tasks import RankedList
from oracles import auc_oracle, f1_oracle, ndcg_oracle


def test_auc_worked_example():
    assert auc([0.9, 0.4], [0.5, 0.1]) == 0.75


def test_auc_extremes():
    assert auc([3, 4], [1, 2]) == 1.0
    assert auc([1, 1], [1, 1, 1]) == 0.5
    assert auc([0], [1]) == 0.0


def test_auc_empty():
    with pytest.raises(ValueError):
        auc([], [1])
    with pytest.raises(ValueError):
        auc([1], [])


scores = st.lists(st.integers(0, 6).map(lambda x: x / 2), min_size=1, max_size=40)


@settings(max_examples=200, deadline=None)
@given(scores, scores)
def test_auc_matches_pairwise_oracle(pos, neg):
    assert abs(auc(pos, neg) - auc_oracle(pos, neg)) < 1e-12


def test_f1_worked_example():
    micro, macro = f1_scores([{"a"}, {"a", "b"}, {"b"}], [{"a"}, {"a"}, {"a"}])
    assert micro == pytest.approx(4 / 7, abs=1e-12)
    assert macro == pytest.approx(0.4, abs=1e-12)


def test_f1_identity_and_empty_predictions():
    truth = [{"x"}, {"y", "z"}]
    assert f1_scores(truth, truth) == (1.0, 1.0)
    assert f1_scores(truth, [set(), set()]) == (0.0, 0.0)


def test_f1_mappings():
    micro, macro = f1_scores({"n1": {"a"}, "n2": {"b"}}, {"n2": {"b"}, "n1": {"b"}})
    assert micro == 0.5 and macro == pytest.approx(1 / 3)
    with pytest.raises(ValueError):
        f1_scores({"n1": {"a"}}, {"n2": {"a"}})


def test_f1_errors():
    with pytest.raises(ValueError):
        f1_scores([], [])
    with pytest.raises(ValueError):
        f1_scores([{"a"}], [{"a"}, {"a"}])


label_sets = st.sets(st.sampled_from("abcde"), max_size=3)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(label_sets, label_sets), min_size=1, max_size=30))
def test_f1_matches_confusion_oracle(rows):
    true = [t for t, _ in rows]
    pred = [p for _, p in rows]
    labels = sorted(set().union(*true, *pred)) or ["a"]
    micro, macro = f1_scores(true, pred, labels)
    om, oM = f1_oracle(true, pred, labels)
    assert abs(micro - om) < 1e-12 and abs(macro - oM) < 1e-12
    assert 0 <= micro <= 1 and 0 <= macro <= 1


def test_dcg_discount():
    assert dcg_at_k([1, 1]) == 2.0
    assert dcg_at_k([2, 0, 3]) == pytest.approx(2 + 3 / math.log2(3))


def test_ndcg_worked_example():
    rel = {"n1": 3, "n2": 0, "n3": 2}
    value = ndcg_at_k(["n3", "n2", "n1"], rel, 3)
    assert value == pytest.approx((2 + 3 / math.log2(3)) / 5, abs=1e-12)
    assert value == pytest.approx(0.7786, abs=1e-4)


def test_ndcg_ideal_and_zero():
    rel = {"a": 3, "b": 2, "c": 1}
    assert ndcg_at_k(["a", "b", "c"], rel, 3) == 1.0
    assert ndcg_at_k(["x", "y"], {"x": 0, "y": 0}, 2) == 0.0


def test_ndcg_accepts_ranked_list():
    ranked = RankedList.from_scores(["a", "b", "c"], [0.1, 0.9, 0.5])
    assert ranked.ids == ["b", "c", "a"]
    assert ndcg_at_k(ranked, {"b": 2, "c": 1}, 2) == 1.0


def test_ndcg_truncates_with_warning(caplog):
    assert ndcg_at_k(["a"], {"a": 1}, 5) == 1.0
    assert "truncating" in caplog.text


def test_ndcg_errors():
    with pytest.raises(ValueError):
        ndcg_at_k(["a"], {"a": -1}, 1)
    with pytest.raises(ValueError):
        ndcg_at_k(["a"], {"a": 1}, 0)


relevances = st.lists(st.integers(0, 4), min_size=1, max_size=25)


@settings(max_examples=200, deadline=None)
@given(relevances, st.integers(1, 30), st.randoms(use_true_random=False))
def test_ndcg_properties(rels, k, rnd):
    ids = [f"n{i}" for i in range(len(rels))]
    rel = dict(zip(ids, rels))
    order = ids[:]
    rnd.shuffle(order)
    value = ndcg_at_k(order, rel, k)
    assert abs(value - ndcg_oracle(order, rel, k)) < 1e-9
    assert -1e-12 <= value <= 1 + 1e-12
    kk = min(k, len(order))
    ideal = sorted(order, key=lambda x: -rel[x])
    assert ndcg_at_k(ideal, rel, k) == pytest.approx(1.0) or sum(rels) == 0
    # fixing an adjacent inversion never lowers the score
    for i in range(len(order) - 1):
        if rel[order[i]] < rel[order[i + 1]]:
            fixed = order[:]
            fixed[i], fixed[i + 1] = fixed[i + 1], fixed[i]
            assert ndcg_at_k(fixed, rel, k) >= value - 1e-12
    # value 1 only when the top k is relevance-descending, allowing the
    # equally weighted first two positions to be swapped
    if sum(rels) > 0 and value >= 1 - 1e-12:
        top = [rel[x] for x in order[:kk]]
        swapped = top[:]
        if kk >= 2:
            swapped[0], swapped[1] = swapped[1], swapped[0]
        want = sorted(rels, reverse=True)[:kk]
        assert top == want or swapped == want
