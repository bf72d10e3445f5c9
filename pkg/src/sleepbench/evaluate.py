"""Train/test splitting, confusion matrices, and accuracy/precision/recall.

Accuracy generalizes the binary (TN+TP)/(TN+TP+FN+FP) to trace/total.
Per-class precision TP/(TP+FP) and recall TP/(TP+FN) are marginalized
one-vs-rest from the confusion counts; zero-denominator values are
reported as 0.0 with a defined=False flag instead of being dropped.
Micro averages pool the counts (and therefore equal accuracy exactly);
macro averages are unweighted means over classes with defined values.
"""

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    BadClass,
    DegenerateSplit,
    EmptyInput,
    LengthMismatch,
)
from .features import Dataset
from .stages import SleepStage


def split(data: Dataset, train_fraction: float, seed: int) -> tuple[Dataset, Dataset]:
    """Stratified, seeded train/test split.

    The train side gets round(train_fraction * N) rows overall, and each
    class contributes within one row of its proportional share (largest
    remainder rounding). Row order within each side is by original index.
    """
    if not 0.0 < train_fraction < 1.0:
        raise ValueError("train_fraction must be in (0, 1)")
    if data.n_rows < 2:
        raise DegenerateSplit(f"cannot split {data.n_rows} row(s)")

    target = int(math.floor(train_fraction * data.n_rows + 0.5))
    if target == 0 or target == data.n_rows:
        raise DegenerateSplit(
            f"fraction {train_fraction} leaves one side of {data.n_rows} rows empty"
        )

    class_codes = np.unique(data.y)
    quotas = {}
    remainders = []
    for code in class_codes:
        count = int(np.sum(data.y == code))
        exact = train_fraction * count
        quotas[code] = int(math.floor(exact))
        remainders.append((-(exact - quotas[code]), int(code)))
    short = target - sum(quotas.values())
    for _, code in sorted(remainders)[:short]:
        quotas[code] += 1

    rng = np.random.default_rng(seed)
    train_idx, test_idx = [], []
    for code in class_codes:
        rows = np.nonzero(data.y == code)[0]
        shuffled = rows[rng.permutation(rows.size)]
        take = quotas[int(code)]
        train_idx.extend(shuffled[:take])
        test_idx.extend(shuffled[take:])

    train_idx = np.sort(np.asarray(train_idx, dtype=np.int64))
    test_idx = np.sort(np.asarray(test_idx, dtype=np.int64))
    if train_idx.size == 0 or test_idx.size == 0:
        raise DegenerateSplit("a split side would be empty")

    def take_rows(idx):
        return Dataset(X=data.X[idx], y=data.y[idx], feature_names=data.feature_names)

    return take_rows(train_idx), take_rows(test_idx)


@dataclass(eq=False)
class ConfusionMatrix:
    """K x K counts: rows are true classes, columns predicted classes."""

    counts: np.ndarray
    class_list: tuple[SleepStage, ...]

    def __post_init__(self):
        self.counts = np.asarray(self.counts, dtype=np.int64)
        k = len(self.class_list)
        if self.counts.shape != (k, k):
            raise ValueError(f"counts shape {self.counts.shape} != ({k}, {k})")
        if (self.counts < 0).any():
            raise ValueError("counts must be nonnegative")

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def index_of(self, label) -> int:
        label = SleepStage(int(label))
        if label not in self.class_list:
            raise BadClass(f"{label!r} not in {self.class_list}")
        return self.class_list.index(label)

    def one_vs_rest(self, label) -> tuple[int, int, int, int]:
        """(TP, FP, FN, TN) for one class."""
        i = self.index_of(label)
        tp = int(self.counts[i, i])
        fp = int(self.counts[:, i].sum()) - tp
        fn = int(self.counts[i, :].sum()) - tp
        tn = self.total - tp - fp - fn
        return tp, fp, fn, tn


def confusion(true_labels, predicted_labels, class_list=None) -> ConfusionMatrix:
    """Tally true/predicted label pairs (labels are stage codes)."""
    true_labels = np.asarray(true_labels, dtype=np.int64)
    predicted_labels = np.asarray(predicted_labels, dtype=np.int64)
    if true_labels.shape != predicted_labels.shape:
        raise LengthMismatch(
            f"{true_labels.size} true labels vs {predicted_labels.size} predictions"
        )
    if true_labels.size == 0:
        raise EmptyInput("cannot tally zero label pairs")

    if class_list is None:
        codes = np.unique(np.concatenate([true_labels, predicted_labels]))
        class_list = tuple(SleepStage(int(c)) for c in codes)
    else:
        class_list = tuple(SleepStage(int(c)) for c in class_list)
        codes = np.array([int(c) for c in class_list], dtype=np.int64)
        if np.unique(codes).size != codes.size:
            raise ValueError("class_list contains duplicates")

    # class_list may be in any order; map codes to their list positions
    position = np.argsort(codes, kind="stable")
    sorted_codes = codes[position]

    def positions(labels: np.ndarray) -> np.ndarray:
        i = np.searchsorted(sorted_codes, labels)
        bad = (i >= sorted_codes.size) | (
            sorted_codes[np.minimum(i, sorted_codes.size - 1)] != labels
        )
        if bad.any():
            raise BadClass("labels outside the supplied class list")
        return position[i]

    k = codes.size
    flat = positions(true_labels) * k + positions(predicted_labels)
    counts = np.bincount(flat, minlength=k * k).reshape(k, k)
    return ConfusionMatrix(counts=counts, class_list=class_list)


def accuracy(cm: ConfusionMatrix) -> float:
    if cm.total == 0:
        raise EmptyInput("confusion matrix has no examples")
    return int(np.trace(cm.counts)) / cm.total


@dataclass(frozen=True)
class ClassMetrics:
    precision: float
    recall: float
    precision_defined: bool
    recall_defined: bool


def precision_recall(cm: ConfusionMatrix, label) -> ClassMetrics:
    if cm.total == 0:
        raise EmptyInput("confusion matrix has no examples")
    tp, fp, fn, _ = cm.one_vs_rest(label)
    precision_defined = tp + fp > 0
    recall_defined = tp + fn > 0
    return ClassMetrics(
        precision=tp / (tp + fp) if precision_defined else 0.0,
        recall=tp / (tp + fn) if recall_defined else 0.0,
        precision_defined=precision_defined,
        recall_defined=recall_defined,
    )


@dataclass(frozen=True)
class MetricsReport:
    accuracy: float
    class_list: tuple[SleepStage, ...]
    per_class: tuple[ClassMetrics, ...]
    macro_precision: float
    macro_recall: float
    micro_precision: float
    micro_recall: float


def report(cm: ConfusionMatrix) -> MetricsReport:
    if cm.total == 0:
        raise EmptyInput("confusion matrix has no examples")
    per_class = tuple(precision_recall(cm, label) for label in cm.class_list)

    defined_p = [m.precision for m in per_class if m.precision_defined]
    defined_r = [m.recall for m in per_class if m.recall_defined]
    macro_p = sum(defined_p) / len(defined_p) if defined_p else 0.0
    macro_r = sum(defined_r) / len(defined_r) if defined_r else 0.0

    pooled = [cm.one_vs_rest(label) for label in cm.class_list]
    tp = sum(t for t, _, _, _ in pooled)
    fp = sum(f for _, f, _, _ in pooled)
    fn = sum(f for _, _, f, _ in pooled)

    return MetricsReport(
        accuracy=accuracy(cm),
        class_list=cm.class_list,
        per_class=per_class,
        macro_precision=macro_p,
        macro_recall=macro_r,
        micro_precision=tp / (tp + fp),
        micro_recall=tp / (tp + fn),
    )


def headline(metrics: MetricsReport, average: str = "macro") -> tuple[float, float]:
    """The (P, R) pair quoted in table-shaped output."""
    if average == "macro":
        return metrics.macro_precision, metrics.macro_recall
    if average == "micro":
        return metrics.micro_precision, metrics.micro_recall
    raise ValueError(f"average must be 'macro' or 'micro', got {average!r}")


def metrics_to_csv(
    metrics: MetricsReport,
    algo: str,
    reduce: str,
    workers: int,
    seconds: float,
    average: str = "macro",
) -> str:
    p, r = headline(metrics, average)
    header = "algo,reduce,workers,A,P,R,seconds"
    row = ",".join([
        algo, reduce, str(workers),
        repr(metrics.accuracy), repr(p), repr(r), repr(seconds),
    ])
    return header + "\n" + row + "\n"


def metrics_to_json(
    metrics: MetricsReport,
    algo: str,
    reduce: str,
    workers: int,
    seconds: float,
    average: str = "macro",
) -> str:
    p, r = headline(metrics, average)
    payload = {
        "algo": algo,
        "reduce": reduce,
        "workers": workers,
        "A": metrics.accuracy,
        "P": p,
        "R": r,
        "seconds": seconds,
        "per_class": {
            stage.token: {
                "precision": m.precision,
                "recall": m.recall,
                "precision_defined": m.precision_defined,
                "recall_defined": m.recall_defined,
            }
            for stage, m in zip(metrics.class_list, metrics.per_class)
        },
        "micro_precision": metrics.micro_precision,
        "micro_recall": metrics.micro_recall,
        "macro_precision": metrics.macro_precision,
        "macro_recall": metrics.macro_recall,
    }
    return json.dumps(payload, indent=2) + "\n"
