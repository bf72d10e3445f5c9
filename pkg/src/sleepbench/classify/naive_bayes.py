"""Gaussian naive Bayes.

Moments are accumulated with exact (compensated) summation, so fits are
invariant to row duplication and input order. Per-class variances are
floored at 1e-9 * (global feature variance + 1e-12) to keep the log
densities finite on constant features.
"""

import math

import numpy as np

from ..errors import EmptyDataset
from ..features import Dataset
from ..stages import SleepStage
from .model import ModelSpec, TrainedModel

_VARIANCE_FLOOR_SCALE = 1e-9
_VARIANCE_FLOOR_BIAS = 1e-12


def _exact_mean_var(column: np.ndarray) -> tuple[float, float]:
    values = column.tolist()
    mean = math.fsum(values) / len(values)
    var = math.fsum((v - mean) ** 2 for v in values) / len(values)
    return mean, var


def nb_fit(data: Dataset, spec: ModelSpec | None = None) -> TrainedModel:
    spec = spec or ModelSpec("nb")
    if spec.algorithm != "nb":
        raise ValueError(f"expected an 'nb' spec, got {spec.algorithm!r}")
    if data.n_rows == 0:
        raise EmptyDataset("naive Bayes fit requires at least one row")

    class_codes = np.unique(data.y)
    k, d = class_codes.size, data.n_features

    global_var = np.array(
        [_exact_mean_var(data.X[:, j])[1] for j in range(d)]
    )
    floor = _VARIANCE_FLOOR_SCALE * (global_var + _VARIANCE_FLOOR_BIAS)

    priors = np.empty(k)
    means = np.empty((k, d))
    variances = np.empty((k, d))
    for i, code in enumerate(class_codes):
        rows = data.X[data.y == code]
        priors[i] = rows.shape[0] / data.n_rows
        for j in range(d):
            means[i, j], variances[i, j] = _exact_mean_var(rows[:, j])
    variances = np.maximum(variances, floor)

    return TrainedModel(
        spec=spec,
        class_list=tuple(SleepStage(int(c)) for c in class_codes),
        parameters={
            "priors": priors,
            "means": means,
            "variances": variances,
            "n_features": d,
        },
    )


def nb_predict(model: TrainedModel, X: np.ndarray) -> np.ndarray:
    p = model.parameters
    k = p["priors"].size
    scores = np.empty((X.shape[0], k))
    log_prior = np.log(p["priors"])
    for i in range(k):
        mean, var = p["means"][i], p["variances"][i]
        log_density = -0.5 * (np.log(2.0 * np.pi * var) + (X - mean) ** 2 / var)
        scores[:, i] = log_prior[i] + np.sum(log_density, axis=1)
    class_codes = np.array([int(s) for s in model.class_list], dtype=np.int64)
    return class_codes[np.argmax(scores, axis=1)]  # first max = earliest class
