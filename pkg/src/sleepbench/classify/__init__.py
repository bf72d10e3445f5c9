"""Five from-scratch classifiers sharing a fit/predict contract."""

from functools import partial

import numpy as np

from ..errors import DimensionMismatch
from ..features import Dataset
from ..parallel import parallel_map, split_indices
from .boosting import gbt_fit, gbt_predict
from .forest import rf_fit, rf_predict
from .logistic import lr_fit, lr_predict
from .model import (
    ALGORITHMS,
    DEFAULT_HYPERPARAMETERS,
    ModelSpec,
    TrainedModel,
    model_from_dict,
    model_to_dict,
    resolve_hyperparameters,
)
from .naive_bayes import nb_fit, nb_predict
from .tree import dt_fit, dt_predict

_PREDICTORS = {
    "nb": nb_predict,
    "lr": lr_predict,
    "dt": dt_predict,
    "rf": rf_predict,
    "gbt": gbt_predict,
}


def fit_model(data: Dataset, spec: ModelSpec, workers: int = 1) -> TrainedModel:
    """Dispatch to the right fit; workers only parallelize RF/GBT trees."""
    if spec.algorithm == "nb":
        return nb_fit(data, spec)
    if spec.algorithm == "lr":
        return lr_fit(data, spec)
    if spec.algorithm == "dt":
        return dt_fit(data, spec)
    if spec.algorithm == "rf":
        return rf_fit(data, spec, workers=workers)
    return gbt_fit(data, spec, workers=workers)


def _predict_rows(X_chunk: np.ndarray, model: TrainedModel) -> np.ndarray:
    return _PREDICTORS[model.spec.algorithm](model, X_chunk)


def predict_batch(model: TrainedModel, X, workers: int = 1) -> np.ndarray:
    """Row-wise stage-code predictions, identical for any worker count."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != model.n_features:
        raise DimensionMismatch(
            f"model expects {model.n_features} features, got shape {X.shape}"
        )
    if X.shape[0] == 0:
        return np.empty(0, dtype=np.int64)
    if workers == 1:
        return _predict_rows(X, model)
    chunks = [X[r.start:r.stop] for r in split_indices(X.shape[0], workers * 2)]
    parts = parallel_map(partial(_predict_rows, model=model), chunks, workers=workers)
    return np.concatenate(parts)


__all__ = [
    "ALGORITHMS",
    "DEFAULT_HYPERPARAMETERS",
    "ModelSpec",
    "TrainedModel",
    "resolve_hyperparameters",
    "model_to_dict",
    "model_from_dict",
    "fit_model",
    "predict_batch",
    "nb_fit",
    "lr_fit",
    "dt_fit",
    "rf_fit",
    "gbt_fit",
]
