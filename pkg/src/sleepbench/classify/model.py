"""Model containers shared by the five classifiers, plus JSON round-trip."""

from dataclasses import dataclass, field

import numpy as np

from ..stages import SleepStage, TOKEN_TO_STAGE

ALGORITHMS = ("nb", "lr", "dt", "rf", "gbt")

DEFAULT_HYPERPARAMETERS: dict[str, dict] = {
    "nb": {},
    "lr": {"l2": 1e-4, "learning_rate": 0.1, "iterations": 500},
    "dt": {"max_depth": 10, "min_samples_leaf": 5},
    "rf": {
        "num_trees": 100,
        "max_depth": 10,
        "min_samples_leaf": 5,
        "bootstrap": True,
        "max_features": "sqrt",
    },
    "gbt": {
        "stages": 50,
        "learning_rate": 0.1,
        "max_depth": 3,
        "min_samples_leaf": 1,
    },
}


@dataclass(frozen=True)
class ModelSpec:
    """Algorithm choice, hyperparameter overrides, and the fit seed."""

    algorithm: str
    hyperparameters: dict = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        unknown = set(self.hyperparameters) - set(
            DEFAULT_HYPERPARAMETERS[self.algorithm]
        )
        if unknown:
            raise ValueError(
                f"unknown hyperparameters for {self.algorithm}: {sorted(unknown)}"
            )


def resolve_hyperparameters(spec: ModelSpec) -> dict:
    """Defaults overlaid with the ModelSpec's overrides, range-checked."""
    merged = {**DEFAULT_HYPERPARAMETERS[spec.algorithm], **spec.hyperparameters}
    _validate(spec.algorithm, merged)
    return merged


def _validate(algorithm: str, params: dict) -> None:
    def positive_int(key):
        if not isinstance(params[key], int) or params[key] < 1:
            raise ValueError(f"{algorithm}.{key} must be a positive integer")

    if algorithm == "lr":
        if params["l2"] < 0:
            raise ValueError("lr.l2 must be >= 0")
        if params["learning_rate"] <= 0:
            raise ValueError("lr.learning_rate must be > 0")
        if not isinstance(params["iterations"], int) or params["iterations"] < 0:
            raise ValueError("lr.iterations must be a nonnegative integer")
    elif algorithm in ("dt", "rf"):
        positive_int("max_depth")
        positive_int("min_samples_leaf")
        if algorithm == "rf":
            positive_int("num_trees")
            mf = params["max_features"]
            if mf not in ("sqrt", "all") and not (isinstance(mf, int) and mf >= 1):
                raise ValueError("rf.max_features must be 'sqrt', 'all', or an int >= 1")
    elif algorithm == "gbt":
        if not isinstance(params["stages"], int) or params["stages"] < 0:
            raise ValueError("gbt.stages must be a nonnegative integer")
        if params["learning_rate"] <= 0:
            raise ValueError("gbt.learning_rate must be > 0")
        positive_int("max_depth")
        positive_int("min_samples_leaf")


@dataclass(eq=False)
class TrainedModel:
    """A fitted classifier: spec, class order, and algorithm payload."""

    spec: ModelSpec
    class_list: tuple[SleepStage, ...]
    parameters: dict

    @property
    def n_features(self) -> int:
        return self.parameters["n_features"]


def model_to_dict(model: TrainedModel) -> dict:
    """JSON-safe envelope {spec, class_list, parameters}."""
    from .tree import tree_to_nodes  # local import avoids a cycle

    alg = model.spec.algorithm
    p = model.parameters
    if alg == "nb":
        parameters = {
            "priors": p["priors"].tolist(),
            "means": p["means"].tolist(),
            "variances": p["variances"].tolist(),
        }
    elif alg == "lr":
        parameters = {
            "weights": p["weights"].tolist(),
            "loss_history": list(p["loss_history"]),
        }
    elif alg == "dt":
        parameters = {"nodes": tree_to_nodes(p["tree"], "leaf_class")}
    elif alg == "rf":
        parameters = {
            "trees": [tree_to_nodes(t, "leaf_class") for t in p["trees"]],
            "tree_seeds": list(p["tree_seeds"]),
        }
    else:  # gbt
        parameters = {
            "learning_rate": p["learning_rate"],
            "ensembles": [
                {"init": e["init"], "trees": [tree_to_nodes(t, "value") for t in e["trees"]]}
                for e in p["ensembles"]
            ],
        }
    parameters["n_features"] = p["n_features"]

    return {
        "spec": {
            "algorithm": model.spec.algorithm,
            "hyperparameters": model.spec.hyperparameters,
            "seed": model.spec.seed,
        },
        "class_list": [stage.token for stage in model.class_list],
        "parameters": parameters,
    }


def model_from_dict(payload: dict) -> TrainedModel:
    from .tree import tree_from_nodes

    spec = ModelSpec(
        algorithm=payload["spec"]["algorithm"],
        hyperparameters=dict(payload["spec"]["hyperparameters"]),
        seed=int(payload["spec"]["seed"]),
    )
    class_list = tuple(TOKEN_TO_STAGE[token] for token in payload["class_list"])

    raw = payload["parameters"]
    alg = spec.algorithm
    if alg == "nb":
        parameters = {
            "priors": np.asarray(raw["priors"], dtype=np.float64),
            "means": np.asarray(raw["means"], dtype=np.float64),
            "variances": np.asarray(raw["variances"], dtype=np.float64),
        }
    elif alg == "lr":
        parameters = {
            "weights": np.asarray(raw["weights"], dtype=np.float64),
            "loss_history": list(raw["loss_history"]),
        }
    elif alg == "dt":
        parameters = {"tree": tree_from_nodes(raw["nodes"], "leaf_class")}
    elif alg == "rf":
        parameters = {
            "trees": [tree_from_nodes(n, "leaf_class") for n in raw["trees"]],
            "tree_seeds": list(raw["tree_seeds"]),
        }
    else:  # gbt
        parameters = {
            "learning_rate": raw["learning_rate"],
            "ensembles": [
                {"init": e["init"], "trees": [tree_from_nodes(n, "value") for n in e["trees"]]}
                for e in raw["ensembles"]
            ],
        }
    parameters["n_features"] = int(raw["n_features"])
    return TrainedModel(spec=spec, class_list=class_list, parameters=parameters)
