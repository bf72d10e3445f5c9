"""Gradient-boosted trees, lifted to multiclass one-vs-rest.

Each class gets a binary ensemble on +/-1 targets under the logistic
loss ln(1 + exp(-2 t F)): depth-limited regression trees are fit to the
negative gradient and their leaf values replaced by a Newton step
(denominator floored at 1e-12). Scores start from the class log-odds, so
a zero-stage model predicts the majority class. Prediction is the argmax
of the per-class scores, ties to the earlier class.
"""

import numpy as np

from ..errors import EmptyDataset
from ..features import Dataset
from ..parallel import parallel_map
from ..stages import SleepStage
from .model import ModelSpec, TrainedModel, resolve_hyperparameters
from .tree import grow_regression_tree, tree_apply, tree_predict_value

_NEWTON_FLOOR = 1e-12
_PRIOR_CLIP = 1e-12
_EXP_CLIP = 700.0


def _fit_binary_ensemble(task) -> dict:
    X, targets, params = task
    positive_rate = float(np.clip(np.mean(targets == 1.0), _PRIOR_CLIP, 1.0 - _PRIOR_CLIP))
    init = 0.5 * np.log(positive_rate / (1.0 - positive_rate))
    scores = np.full(X.shape[0], init)

    trees = []
    for _ in range(params["stages"]):
        margin = np.clip(2.0 * targets * scores, -_EXP_CLIP, _EXP_CLIP)
        residuals = 2.0 * targets / (1.0 + np.exp(margin))
        tree = grow_regression_tree(
            X, residuals,
            max_depth=params["max_depth"],
            min_samples_leaf=params["min_samples_leaf"],
        )
        _newton_leaf_values(tree, X, residuals)
        scores += params["learning_rate"] * tree_predict_value(tree, X)
        trees.append(tree)
    return {"init": init, "trees": trees}


def _newton_leaf_values(tree, X, residuals) -> None:
    leaf_of = tree_apply(tree, X)
    for leaf in np.unique(leaf_of):
        r = residuals[leaf_of == leaf]
        denominator = max(float(np.sum(np.abs(r) * (2.0 - np.abs(r)))), _NEWTON_FLOOR)
        tree.value[leaf] = float(np.sum(r)) / denominator


def gbt_fit(data: Dataset, spec: ModelSpec | None = None, workers: int = 1) -> TrainedModel:
    spec = spec or ModelSpec("gbt")
    if spec.algorithm != "gbt":
        raise ValueError(f"expected a 'gbt' spec, got {spec.algorithm!r}")
    if data.n_rows == 0:
        raise EmptyDataset("gradient boosting fit requires at least one row")
    params = resolve_hyperparameters(spec)

    class_codes = np.unique(data.y)
    tasks = [
        (data.X, np.where(data.y == code, 1.0, -1.0), params)
        for code in class_codes
    ]
    ensembles = parallel_map(
        _fit_binary_ensemble, tasks, workers=min(workers, len(tasks))
    )

    return TrainedModel(
        spec=spec,
        class_list=tuple(SleepStage(int(c)) for c in class_codes),
        parameters={
            "learning_rate": params["learning_rate"],
            "ensembles": ensembles,
            "n_features": data.n_features,
        },
    )


def gbt_predict(model: TrainedModel, X: np.ndarray) -> np.ndarray:
    p = model.parameters
    scores = np.empty((X.shape[0], len(p["ensembles"])))
    for i, ensemble in enumerate(p["ensembles"]):
        total = np.full(X.shape[0], ensemble["init"])
        for tree in ensemble["trees"]:
            total += p["learning_rate"] * tree_predict_value(tree, X)
        scores[:, i] = total
    class_codes = np.array([int(s) for s in model.class_list], dtype=np.int64)
    return class_codes[np.argmax(scores, axis=1)]
