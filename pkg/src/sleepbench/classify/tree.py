"""Array-backed CART trees: classification (Gini) and regression (SSE).

Split search is exhaustive: candidate thresholds are midpoints between
consecutive distinct sorted values of each candidate feature, a split
must leave min_samples_leaf rows on each side, and ties break toward the
lower feature index, then the lower threshold. Zero-gain splits are
accepted (an even split can still enable a perfect one a level down).
"""

from dataclasses import dataclass

import numpy as np

from ..errors import EmptyDataset
from ..features import Dataset
from ..stages import SleepStage
from .model import ModelSpec, TrainedModel, resolve_hyperparameters

_NO_FEATURE = -1


@dataclass(eq=False)
class Tree:
    """Nodes as parallel arrays; feature == -1 marks a leaf."""

    feature: np.ndarray    # int32
    threshold: np.ndarray  # float64, nan at leaves
    left: np.ndarray       # int32, -1 at leaves
    right: np.ndarray      # int32, -1 at leaves
    value: np.ndarray      # float64 leaf payload (class index or score)

    @property
    def n_nodes(self) -> int:
        return self.feature.size


class _Builder:
    def __init__(self):
        self.feature: list[int] = []
        self.threshold: list[float] = []
        self.left: list[int] = []
        self.right: list[int] = []
        self.value: list[float] = []

    def reserve(self) -> int:
        self.feature.append(_NO_FEATURE)
        self.threshold.append(np.nan)
        self.left.append(-1)
        self.right.append(-1)
        self.value.append(0.0)
        return len(self.feature) - 1

    def set_leaf(self, node: int, value: float) -> None:
        self.value[node] = float(value)

    def set_split(self, node: int, feature: int, threshold: float,
                  left: int, right: int) -> None:
        self.feature[node] = int(feature)
        self.threshold[node] = float(threshold)
        self.left[node] = left
        self.right[node] = right

    def finish(self) -> Tree:
        return Tree(
            feature=np.asarray(self.feature, dtype=np.int32),
            threshold=np.asarray(self.threshold, dtype=np.float64),
            left=np.asarray(self.left, dtype=np.int32),
            right=np.asarray(self.right, dtype=np.int32),
            value=np.asarray(self.value, dtype=np.float64),
        )


def tree_apply(tree: Tree, X: np.ndarray) -> np.ndarray:
    """Leaf node index reached by each row (rows with x <= threshold go left)."""
    idx = np.zeros(X.shape[0], dtype=np.int64)
    while True:
        active = tree.feature[idx] >= 0
        if not active.any():
            return idx
        rows = np.nonzero(active)[0]
        node = idx[rows]
        go_left = X[rows, tree.feature[node]] <= tree.threshold[node]
        idx[rows] = np.where(go_left, tree.left[node], tree.right[node])


def tree_predict_value(tree: Tree, X: np.ndarray) -> np.ndarray:
    return tree.value[tree_apply(tree, X)]


def _candidate_features(d: int, n_candidates: int | None, rng) -> np.ndarray:
    if n_candidates is None or n_candidates >= d:
        return np.arange(d)
    return np.sort(rng.choice(d, size=n_candidates, replace=False))


def grow_classification_tree(
    X: np.ndarray,
    y_idx: np.ndarray,
    n_classes: int,
    max_depth: int,
    min_samples_leaf: int,
    n_candidate_features: int | None = None,
    rng=None,
) -> Tree:
    builder = _Builder()
    d = X.shape[1]

    def build(idx: np.ndarray, depth: int) -> int:
        node = builder.reserve()
        counts = np.bincount(y_idx[idx], minlength=n_classes)
        majority = int(np.argmax(counts))  # first max = earliest class
        if (
            depth >= max_depth
            or counts[majority] == idx.size
            or idx.size < 2 * min_samples_leaf
        ):
            builder.set_leaf(node, majority)
            return node
        features = _candidate_features(d, n_candidate_features, rng)
        split = _best_gini_split(X, y_idx, idx, counts, min_samples_leaf, features)
        if split is None:
            builder.set_leaf(node, majority)
            return node
        feature, threshold = split
        mask = X[idx, feature] <= threshold
        if mask.all() or not mask.any():  # midpoint collapsed onto an endpoint
            builder.set_leaf(node, majority)
            return node
        left = build(idx[mask], depth + 1)
        right = build(idx[~mask], depth + 1)
        builder.set_split(node, feature, threshold, left, right)
        return node

    build(np.arange(X.shape[0]), 0)
    return builder.finish()


def _best_gini_split(X, y_idx, idx, counts, min_leaf, features):
    n = idx.size
    parent = 1.0 - float(np.sum((counts / n) ** 2))
    labels = y_idx[idx]
    best_gain = -np.inf
    best = None
    for f in features:
        col = X[idx, f]
        order = np.argsort(col, kind="stable")
        xs = col[order]
        cut = np.nonzero(xs[:-1] < xs[1:])[0]
        if cut.size == 0:
            continue
        n_left = cut + 1
        n_right = n - n_left
        valid = (n_left >= min_leaf) & (n_right >= min_leaf)
        if not valid.any():
            continue
        onehot = labels[order, None] == np.arange(counts.size)
        left_counts = np.cumsum(onehot, axis=0)[cut]
        right_counts = counts - left_counts
        gini_left = 1.0 - np.sum((left_counts / n_left[:, None]) ** 2, axis=1)
        gini_right = 1.0 - np.sum((right_counts / n_right[:, None]) ** 2, axis=1)
        gain = parent - (n_left / n) * gini_left - (n_right / n) * gini_right
        gain[~valid] = -np.inf
        j = int(np.argmax(gain))  # first max = lowest threshold
        if gain[j] > best_gain:
            best_gain = float(gain[j])
            best = (int(f), float((xs[cut[j]] + xs[cut[j] + 1]) / 2.0))
    return best


def grow_regression_tree(
    X: np.ndarray,
    targets: np.ndarray,
    max_depth: int,
    min_samples_leaf: int,
) -> Tree:
    builder = _Builder()

    def build(idx: np.ndarray, depth: int) -> int:
        node = builder.reserve()
        r = targets[idx]
        mean = float(np.mean(r))
        if depth >= max_depth or idx.size < 2 * min_samples_leaf or np.ptp(r) == 0.0:
            builder.set_leaf(node, mean)
            return node
        split = _best_sse_split(X, targets, idx, min_samples_leaf)
        if split is None:
            builder.set_leaf(node, mean)
            return node
        feature, threshold = split
        mask = X[idx, feature] <= threshold
        if mask.all() or not mask.any():
            builder.set_leaf(node, mean)
            return node
        left = build(idx[mask], depth + 1)
        right = build(idx[~mask], depth + 1)
        builder.set_split(node, feature, threshold, left, right)
        return node

    build(np.arange(X.shape[0]), 0)
    return builder.finish()


def _best_sse_split(X, targets, idx, min_leaf):
    n = idx.size
    r = targets[idx]
    total = float(np.sum(r))
    base = total * total / n
    best_gain = -np.inf
    best = None
    for f in range(X.shape[1]):
        col = X[idx, f]
        order = np.argsort(col, kind="stable")
        xs = col[order]
        cut = np.nonzero(xs[:-1] < xs[1:])[0]
        if cut.size == 0:
            continue
        n_left = cut + 1
        n_right = n - n_left
        valid = (n_left >= min_leaf) & (n_right >= min_leaf)
        if not valid.any():
            continue
        sum_left = np.cumsum(r[order])[cut]
        sum_right = total - sum_left
        gain = sum_left ** 2 / n_left + sum_right ** 2 / n_right - base
        gain[~valid] = -np.inf
        j = int(np.argmax(gain))
        if gain[j] > best_gain:
            best_gain = float(gain[j])
            best = (int(f), float((xs[cut[j]] + xs[cut[j] + 1]) / 2.0))
    return best


def tree_to_nodes(tree: Tree, leaf_key: str) -> list[dict]:
    """Node-record list for the JSON model payload."""
    nodes = []
    for i in range(tree.n_nodes):
        if tree.feature[i] == _NO_FEATURE:
            nodes.append({
                "feature": -1, "threshold": None, "left": -1, "right": -1,
                leaf_key: _leaf_value(tree.value[i], leaf_key),
            })
        else:
            nodes.append({
                "feature": int(tree.feature[i]),
                "threshold": float(tree.threshold[i]),
                "left": int(tree.left[i]),
                "right": int(tree.right[i]),
                leaf_key: None,
            })
    return nodes


def _leaf_value(value: float, leaf_key: str):
    return int(value) if leaf_key == "leaf_class" else float(value)


def tree_from_nodes(nodes: list[dict], leaf_key: str) -> Tree:
    builder = _Builder()
    for record in nodes:
        node = builder.reserve()
        if record["feature"] == _NO_FEATURE:
            builder.set_leaf(node, record[leaf_key])
        else:
            builder.set_split(
                node, record["feature"], record["threshold"],
                record["left"], record["right"],
            )
    return builder.finish()


def dt_fit(data: Dataset, spec: ModelSpec | None = None) -> TrainedModel:
    """CART classifier over the stages present in the data."""
    spec = spec or ModelSpec("dt")
    if spec.algorithm != "dt":
        raise ValueError(f"expected a 'dt' spec, got {spec.algorithm!r}")
    if data.n_rows == 0:
        raise EmptyDataset("decision tree fit requires at least one row")
    params = resolve_hyperparameters(spec)

    class_codes = np.unique(data.y)
    y_idx = np.searchsorted(class_codes, data.y)
    tree = grow_classification_tree(
        data.X, y_idx, class_codes.size,
        max_depth=params["max_depth"],
        min_samples_leaf=params["min_samples_leaf"],
    )
    return TrainedModel(
        spec=spec,
        class_list=tuple(SleepStage(int(c)) for c in class_codes),
        parameters={"tree": tree, "n_features": data.n_features},
    )


def dt_predict(model: TrainedModel, X: np.ndarray) -> np.ndarray:
    class_codes = np.array([int(s) for s in model.class_list], dtype=np.int64)
    leaf = tree_predict_value(model.parameters["tree"], X).astype(np.int64)
    return class_codes[leaf]
