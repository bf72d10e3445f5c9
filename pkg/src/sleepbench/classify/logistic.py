"""Multinomial logistic regression via full-batch gradient descent.

Features are standardized internally (training mean/std, std floored at
1e-12); the learned weights are folded back into raw-feature space, so
the stored parameter is a single K x (D+1) matrix with the bias in the
last column. Rows are put into a canonical order before training, making
the fit exactly invariant to input permutation. Weights start at zero.
"""

import numpy as np

from ..errors import EmptyDataset, SingleClass
from ..features import Dataset
from ..stages import SleepStage
from .model import ModelSpec, TrainedModel, resolve_hyperparameters

_STD_FLOOR = 1e-12


def lr_fit(data: Dataset, spec: ModelSpec | None = None) -> TrainedModel:
    spec = spec or ModelSpec("lr")
    if spec.algorithm != "lr":
        raise ValueError(f"expected an 'lr' spec, got {spec.algorithm!r}")
    if data.n_rows == 0:
        raise EmptyDataset("logistic regression fit requires at least one row")
    class_codes = np.unique(data.y)
    if class_codes.size < 2:
        raise SingleClass("logistic regression needs at least two classes")
    params = resolve_hyperparameters(spec)

    order = np.lexsort(np.vstack([data.X.T[::-1], data.y[None, :]]))
    X = data.X[order]
    y_idx = np.searchsorted(class_codes, data.y[order])
    n, d = X.shape
    k = class_codes.size

    mu = X.mean(axis=0)
    sigma = np.maximum(X.std(axis=0), _STD_FLOOR)
    Z = np.column_stack([(X - mu) / sigma, np.ones(n)])

    onehot = np.zeros((n, k))
    onehot[np.arange(n), y_idx] = 1.0

    lam = params["l2"]
    step = params["learning_rate"]
    weights = np.zeros((k, d + 1))
    losses = []
    for _ in range(params["iterations"]):
        scores = Z @ weights.T
        scores -= scores.max(axis=1, keepdims=True)
        probs = np.exp(scores)
        probs /= probs.sum(axis=1, keepdims=True)

        true_probs = np.maximum(probs[np.arange(n), y_idx], 1e-300)
        loss = -float(np.mean(np.log(true_probs)))
        loss += 0.5 * lam * float(np.sum(weights[:, :d] ** 2))
        losses.append(loss)

        grad = (probs - onehot).T @ Z / n
        grad[:, :d] += lam * weights[:, :d]
        weights -= step * grad

    # Fold the standardization into the weights: w.z + b with
    # z = (x - mu)/sigma equals (w/sigma).x + (b - w.(mu/sigma)).
    folded = np.empty_like(weights)
    folded[:, :d] = weights[:, :d] / sigma
    folded[:, d] = weights[:, d] - weights[:, :d] @ (mu / sigma)

    return TrainedModel(
        spec=spec,
        class_list=tuple(SleepStage(int(c)) for c in class_codes),
        parameters={
            "weights": folded,
            "loss_history": losses,
            "n_features": d,
        },
    )


def lr_predict(model: TrainedModel, X: np.ndarray) -> np.ndarray:
    weights = model.parameters["weights"]
    d = model.parameters["n_features"]
    scores = X @ weights[:, :d].T + weights[:, d]
    class_codes = np.array([int(s) for s in model.class_list], dtype=np.int64)
    return class_codes[np.argmax(scores, axis=1)]
