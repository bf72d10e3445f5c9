"""Random forest: bagged CARTs with per-split feature subsampling.

Each tree's randomness comes from a sub-seed derived from (spec.seed,
tree index), so training is reproducible and independent of how trees
are scheduled across workers. Prediction is a majority vote with ties
going to the earlier class.
"""

import math

import numpy as np

from ..errors import EmptyDataset
from ..features import Dataset
from ..parallel import parallel_map, split_indices
from ..stages import SleepStage
from .model import ModelSpec, TrainedModel, resolve_hyperparameters
from .tree import grow_classification_tree, tree_predict_value


def tree_sub_seeds(seed: int, num_trees: int) -> list[int]:
    """Deterministic 64-bit sub-seed per tree index."""
    return [
        int(np.random.SeedSequence([seed, t]).generate_state(1, np.uint64)[0])
        for t in range(num_trees)
    ]


def _fit_tree_batch(task) -> list:
    X, y_idx, n_classes, params, sub_seeds = task
    n = X.shape[0]
    trees = []
    for sub_seed in sub_seeds:
        rng = np.random.default_rng(sub_seed)
        if params["bootstrap"]:
            rows = rng.integers(0, n, size=n)
        else:
            rows = np.arange(n)
        trees.append(
            grow_classification_tree(
                X[rows], y_idx[rows], n_classes,
                max_depth=params["max_depth"],
                min_samples_leaf=params["min_samples_leaf"],
                n_candidate_features=params["n_candidate_features"],
                rng=rng,
            )
        )
    return trees


def rf_fit(data: Dataset, spec: ModelSpec | None = None, workers: int = 1) -> TrainedModel:
    spec = spec or ModelSpec("rf")
    if spec.algorithm != "rf":
        raise ValueError(f"expected an 'rf' spec, got {spec.algorithm!r}")
    if data.n_rows == 0:
        raise EmptyDataset("random forest fit requires at least one row")
    params = dict(resolve_hyperparameters(spec))

    max_features = params.pop("max_features")
    if max_features == "sqrt":
        params["n_candidate_features"] = max(1, math.floor(math.sqrt(data.n_features)))
    elif max_features == "all":
        params["n_candidate_features"] = None
    else:
        params["n_candidate_features"] = min(int(max_features), data.n_features)

    class_codes = np.unique(data.y)
    y_idx = np.searchsorted(class_codes, data.y)
    seeds = tree_sub_seeds(spec.seed, params["num_trees"])

    tasks = [
        (data.X, y_idx, class_codes.size, params, [seeds[t] for t in chunk])
        for chunk in split_indices(params["num_trees"], workers * 2)
    ]
    trees = [tree for batch in parallel_map(_fit_tree_batch, tasks, workers=workers)
             for tree in batch]

    return TrainedModel(
        spec=spec,
        class_list=tuple(SleepStage(int(c)) for c in class_codes),
        parameters={
            "trees": trees,
            "tree_seeds": seeds,
            "n_features": data.n_features,
        },
    )


def rf_predict(model: TrainedModel, X: np.ndarray) -> np.ndarray:
    class_codes = np.array([int(s) for s in model.class_list], dtype=np.int64)
    votes = np.zeros((X.shape[0], class_codes.size), dtype=np.int64)
    rows = np.arange(X.shape[0])
    for tree in model.parameters["trees"]:
        votes[rows, tree_predict_value(tree, X).astype(np.int64)] += 1
    return class_codes[np.argmax(votes, axis=1)]  # first max = earliest class
