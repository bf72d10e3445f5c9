import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import binary_metrics_oracle, confusion_oracle
from sleepbench.errors import (
    BadClass,
    DegenerateSplit,
    EmptyInput,
    LengthMismatch,
)
from sleepbench.evaluate import (
    ConfusionMatrix,
    accuracy,
    confusion,
    headline,
    precision_recall,
    report,
    split,
)
from sleepbench.features import Dataset
from sleepbench.stages import STAGES, SleepStage

W, S1, S2, S3, S4, R = (int(s) for s in STAGES)


def _binary_cm(tp, tn, fp, fn):
    # positive class W: counts rows are true, columns predicted
    return ConfusionMatrix(
        counts=np.array([[tp, fn], [fp, tn]]),
        class_list=(SleepStage.WAKE, SleepStage.S1),
    )


# --- split

def _toy_dataset(labels):
    labels = np.asarray(labels, dtype=np.int64)
    X = np.arange(labels.size, dtype=np.float64)[:, None]
    return Dataset(X=X, y=labels, feature_names=("f0",))


def test_split_proportions_preserved():
    labels = [W] * 50 + [S1] * 30 + [R] * 20
    train, test = split(_toy_dataset(labels), 0.8, seed=0)
    assert train.n_rows == 80 and test.n_rows == 20
    for code, count in ((W, 50), (S1, 30), (R, 20)):
        got = int(np.sum(train.y == code))
        assert abs(got - 0.8 * count) < 1, (code, got)


def test_split_deterministic():
    labels = [W] * 40 + [S2] * 40
    data = _toy_dataset(labels)
    a_train, a_test = split(data, 0.75, seed=9)
    b_train, b_test = split(data, 0.75, seed=9)
    np.testing.assert_array_equal(a_train.X, b_train.X)
    np.testing.assert_array_equal(a_test.X, b_test.X)
    c_train, _ = split(data, 0.75, seed=10)
    assert not np.array_equal(a_train.X, c_train.X)


def test_split_sides_are_disjoint_and_complete():
    labels = [W] * 13 + [S1] * 7
    data = _toy_dataset(labels)
    train, test = split(data, 0.6, seed=3)
    merged = np.sort(np.concatenate([train.X[:, 0], test.X[:, 0]]))
    np.testing.assert_array_equal(merged, data.X[:, 0])


def test_split_degenerate():
    with pytest.raises(DegenerateSplit):
        split(_toy_dataset([W]), 0.8, seed=0)
    with pytest.raises(DegenerateSplit):
        split(_toy_dataset([W, S1, S2]), 0.05, seed=0)  # train side rounds to 0
    with pytest.raises(ValueError):
        split(_toy_dataset([W, S1]), 1.0, seed=0)


# --- confusion

def test_confusion_perfect_is_diagonal():
    cm = confusion([W, S1, S2], [W, S1, S2])
    np.testing.assert_array_equal(cm.counts, np.eye(3, dtype=int))
    assert accuracy(cm) == 1.0


def test_confusion_direct_count():
    cm = confusion([W, W, S1], [W, S1, S1])
    np.testing.assert_array_equal(cm.counts, [[1, 1], [0, 1]])


def test_confusion_matches_brute_force_oracle(rng):
    true = rng.integers(0, 6, size=1000)
    pred = rng.integers(0, 6, size=1000)
    cm = confusion(true, pred, class_list=STAGES)
    oracle = confusion_oracle(true.tolist(), pred.tolist(), [int(s) for s in STAGES])
    np.testing.assert_array_equal(cm.counts, oracle)


def test_confusion_errors():
    with pytest.raises(LengthMismatch):
        confusion([W, S1], [W])
    with pytest.raises(EmptyInput):
        confusion([], [])
    with pytest.raises(BadClass):
        confusion([W, S2], [W, W], class_list=(SleepStage.WAKE,))


def test_confusion_permutation_equivariance(rng):
    true = rng.integers(0, 3, size=200)
    pred = rng.integers(0, 3, size=200)
    base = confusion(true, pred, class_list=(W, S1, S2))
    perm = confusion(true, pred, class_list=(S2, W, S1))
    # class at position i of the permuted list is perm_order[i]
    reorder = [2, 0, 1]  # positions of (S2, W, S1) in (W, S1, S2)
    np.testing.assert_array_equal(
        perm.counts, base.counts[np.ix_(reorder, reorder)]
    )


# --- metrics

def test_binary_hand_example():
    cm = _binary_cm(tp=3, tn=4, fp=1, fn=2)
    assert accuracy(cm) == 0.7
    m = precision_recall(cm, SleepStage.WAKE)
    assert m.precision == 0.75
    assert m.recall == 0.6


def test_zero_diagonal_accuracy():
    cm = ConfusionMatrix(
        counts=np.array([[0, 2], [3, 0]]), class_list=(SleepStage.WAKE, SleepStage.S1)
    )
    assert accuracy(cm) == 0.0


def test_undefined_precision_flagged():
    # predictor never emits W although W is present
    cm = confusion([W, W, S1], [S1, S1, S1], class_list=(W, S1))
    m = precision_recall(cm, SleepStage.WAKE)
    assert not m.precision_defined and m.precision == 0.0
    assert m.recall_defined and m.recall == 0.0


def test_perfect_predictions_per_class():
    cm = confusion([W, S1, S2] * 5, [W, S1, S2] * 5)
    for stage in cm.class_list:
        m = precision_recall(cm, stage)
        assert (m.precision, m.recall) == (1.0, 1.0)


def test_bad_class():
    cm = confusion([W, S1], [W, S1])
    with pytest.raises(BadClass):
        precision_recall(cm, SleepStage.REM)


@settings(max_examples=200)
@given(
    tp=st.integers(0, 50),
    tn=st.integers(0, 50),
    fp=st.integers(0, 50),
    fn=st.integers(0, 50),
)
def test_binary_equations_match_oracle(tp, tn, fp, fn):
    if tp + tn + fp + fn == 0:
        return
    cm = _binary_cm(tp, tn, fp, fn)
    acc_oracle, prec_oracle, rec_oracle = binary_metrics_oracle(tp, tn, fp, fn)
    assert accuracy(cm) == float(acc_oracle)
    m = precision_recall(cm, SleepStage.WAKE)
    if prec_oracle is None:
        assert not m.precision_defined
    else:
        assert m.precision == float(prec_oracle)
    if rec_oracle is None:
        assert not m.recall_defined
    else:
        assert m.recall == float(rec_oracle)


@settings(max_examples=100)
@given(st.integers(0, 2 ** 32 - 1), st.integers(2, 6))
def test_micro_identity(seed, k):
    rng = np.random.default_rng(seed)
    true = rng.integers(0, k, size=200)
    pred = rng.integers(0, k, size=200)
    rep = report(confusion(true, pred, class_list=tuple(range(k))))
    assert rep.micro_precision == rep.accuracy
    assert rep.micro_recall == rep.accuracy


def test_report_macro_hand_computation():
    cm = _binary_cm(tp=3, tn=4, fp=1, fn=2)
    rep = report(cm)
    assert rep.accuracy == 0.7
    # W: P=3/4 R=3/5; S1 (positive=S1): P=4/6, R=4/5
    assert rep.macro_precision == (0.75 + 4 / 6) / 2
    assert rep.macro_recall == (0.6 + 0.8) / 2
    assert headline(rep, "macro") == (rep.macro_precision, rep.macro_recall)
    assert headline(rep, "micro") == (rep.micro_precision, rep.micro_recall)


def test_report_single_class():
    cm = confusion([S3, S3], [S3, S3])
    rep = report(cm)
    assert rep.accuracy == 1.0
    assert rep.macro_precision == 1.0 and rep.macro_recall == 1.0


def test_tp_fp_fn_tn_partition():
    rng = np.random.default_rng(5)
    true = rng.integers(0, 6, size=300)
    pred = rng.integers(0, 6, size=300)
    cm = confusion(true, pred, class_list=STAGES)
    for stage in STAGES:
        tp, fp, fn, tn = cm.one_vs_rest(stage)
        assert tp + fp + fn + tn == cm.total
        assert min(tp, fp, fn, tn) >= 0
