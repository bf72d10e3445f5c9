"""PCA and truncated-SVD bases for shrinking feature matrices.

Both are computed from a LAPACK singular decomposition (deterministic,
orthonormal to well below 1e-10). PCA centers the data and reports
sample-covariance eigenvalues; the SVD variant works on the uncentered
matrix and reports squared singular values. Component signs are fixed so
the largest-magnitude entry of each row is positive.
"""

from dataclasses import dataclass

import numpy as np

from .errors import BadK, DimensionMismatch

DEFAULT_K = 30


@dataclass(frozen=True, eq=False)
class ReducedBasis:
    """A fitted projection: rows of `components` are orthonormal."""

    kind: str  # "pca" | "svd"
    k: int
    mean: np.ndarray        # (D,); zeros for kind="svd"
    components: np.ndarray  # (k, D)
    explained: np.ndarray   # (k,), non-increasing

    @property
    def n_features(self) -> int:
        return self.components.shape[1]


def pca_fit(X, k: int) -> ReducedBasis:
    """Top-k eigenvectors of the sample covariance of centered X."""
    X = np.asarray(X, dtype=np.float64)
    n, d = X.shape
    if not 1 <= k <= min(n - 1, d):
        raise BadK(f"k={k} outside [1, {min(n - 1, d)}] for shape {X.shape}")
    mean = X.mean(axis=0)
    _, singular, vt = np.linalg.svd(X - mean, full_matrices=False)
    return ReducedBasis(
        kind="pca",
        k=k,
        mean=mean,
        components=_fix_signs(vt[:k]),
        explained=singular[:k] ** 2 / (n - 1),
    )


def svd_reduce_fit(X, k: int) -> ReducedBasis:
    """Top-k right singular vectors of uncentered X."""
    X = np.asarray(X, dtype=np.float64)
    n, d = X.shape
    if not 1 <= k <= min(n, d):
        raise BadK(f"k={k} outside [1, {min(n, d)}] for shape {X.shape}")
    _, singular, vt = np.linalg.svd(X, full_matrices=False)
    return ReducedBasis(
        kind="svd",
        k=k,
        mean=np.zeros(d),
        components=_fix_signs(vt[:k]),
        explained=singular[:k] ** 2,
    )


def _fix_signs(components: np.ndarray) -> np.ndarray:
    out = components.copy()
    for row in out:
        if row[np.argmax(np.abs(row))] < 0:
            row *= -1.0
    return out


def transform(basis: ReducedBasis, X) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != basis.n_features:
        raise DimensionMismatch(
            f"expected {basis.n_features} columns, got shape {X.shape}"
        )
    return (X - basis.mean) @ basis.components.T


def inverse_transform(basis: ReducedBasis, Z) -> np.ndarray:
    Z = np.asarray(Z, dtype=np.float64)
    if Z.ndim != 2 or Z.shape[1] != basis.k:
        raise DimensionMismatch(f"expected {basis.k} columns, got shape {Z.shape}")
    return Z @ basis.components + basis.mean


def basis_to_dict(basis: ReducedBasis) -> dict:
    return {
        "kind": basis.kind,
        "k": basis.k,
        "mean": basis.mean.tolist(),
        "components": basis.components.tolist(),
        "explained": basis.explained.tolist(),
    }


def basis_from_dict(payload: dict) -> ReducedBasis:
    return ReducedBasis(
        kind=payload["kind"],
        k=int(payload["k"]),
        mean=np.asarray(payload["mean"], dtype=np.float64),
        components=np.asarray(payload["components"], dtype=np.float64),
        explained=np.asarray(payload["explained"], dtype=np.float64),
    )
