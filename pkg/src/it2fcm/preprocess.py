"""Fitted, invertible preprocessing: median imputation, MinMax scaling to
[0, 1], and PCA keeping a configured fraction of variance (default 0.95).

Everything here is deterministic: identical input bytes produce an
identical pipeline.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .data import Dataset

SCHEMA_VERSION = 1


class PreprocessError(ValueError):
    pass


@dataclass(frozen=True)
class FittedPipeline:
    """Per-feature medians and min/max ranges plus a PCA basis.

    ``pca_components`` rows are orthonormal principal directions sorted by
    eigenvalue descending; sign is fixed so each row's largest-magnitude
    element is positive.
    """

    feature_names: tuple[str, ...]
    medians: np.ndarray         # (d,)
    feature_mins: np.ndarray    # (d,)
    feature_maxs: np.ndarray    # (d,)
    pca_mean: np.ndarray        # (d,) mean of the scaled training data
    pca_components: np.ndarray  # (k, d)
    pca_eigenvalues: np.ndarray  # (k,) non-increasing, >= 0
    retained_variance: float
    variance_threshold: float

    @property
    def n_features(self) -> int:
        return len(self.feature_names)

    @property
    def n_components(self) -> int:
        return self.pca_components.shape[0]


def fit_impute_median(data: Dataset) -> np.ndarray:
    """Per-feature median over non-missing entries.

    Even-count median is the mean of the two central order statistics.
    """
    medians = np.empty(data.n_features)
    for j in range(data.n_features):
        col = data.values[~data.missing_mask[:, j], j]
        if col.size == 0:
            raise PreprocessError(
                f"feature entirely missing: {data.feature_names[j]!r}"
            )
        medians[j] = np.median(col)
    return medians


def impute(data: Dataset, medians: np.ndarray) -> np.ndarray:
    filled = data.values.copy()
    for j in range(data.n_features):
        filled[data.missing_mask[:, j], j] = medians[j]
    return filled


def fit_minmax(values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Column mins and maxs of an already-imputed matrix."""
    return values.min(axis=0), values.max(axis=0)


def apply_minmax(values: np.ndarray, mins: np.ndarray, maxs: np.ndarray) -> np.ndarray:
    # Constant features map to 0 rather than dividing by zero.
    span = maxs - mins
    safe = np.where(span > 0, span, 1.0)
    out = (values - mins) / safe
    out[:, span == 0] = 0.0
    return out


def fit_pca(values: np.ndarray, variance_threshold: float = 0.95):
    """Eigendecomposition of the sample covariance (divisor n-1).

    Returns (mean, components, eigenvalues, k) where k is the smallest
    component count whose cumulative eigenvalue fraction reaches the
    threshold.
    """
    if values.shape[0] < 2:
        raise PreprocessError("PCA requires at least 2 rows")
    if not np.all(np.isfinite(values)):
        raise PreprocessError("PCA input must be finite")
    mean = values.mean(axis=0)
    centered = values - mean
    cov = centered.T @ centered / (values.shape[0] - 1)
    eigvals, eigvecs = np.linalg.eigh(cov)
    order = np.argsort(eigvals)[::-1]
    eigvals = np.clip(eigvals[order], 0.0, None)
    components = eigvecs[:, order].T  # rows are directions

    # Reproducible sign: largest-|element| of each row made positive.
    for row in components:
        pivot = np.argmax(np.abs(row))
        if row[pivot] < 0:
            row *= -1.0

    total = eigvals.sum()
    if total <= 0:
        k = 1
    else:
        frac = np.cumsum(eigvals) / total
        k = int(np.searchsorted(frac, variance_threshold - 1e-12) + 1)
        k = min(k, len(eigvals))
    return mean, components[:k], eigvals[:k], k


def fit_pipeline(
    data: Dataset, variance_threshold: float = 0.95
) -> FittedPipeline:
    medians = fit_impute_median(data)
    filled = impute(data, medians)
    mins, maxs = fit_minmax(filled)
    scaled = apply_minmax(filled, mins, maxs)
    mean, components, eigvals, k = fit_pca(scaled, variance_threshold)

    cov = (scaled - mean).T @ (scaled - mean) / max(scaled.shape[0] - 1, 1)
    total = np.trace(cov)
    retained = float(eigvals.sum() / total) if total > 0 else 1.0
    return FittedPipeline(
        feature_names=data.feature_names,
        medians=medians,
        feature_mins=mins,
        feature_maxs=maxs,
        pca_mean=mean,
        pca_components=components,
        pca_eigenvalues=eigvals,
        retained_variance=retained,
        variance_threshold=variance_threshold,
    )


def transform(pipeline: FittedPipeline, data: Dataset) -> np.ndarray:
    """Impute, scale, center, and project rows into PCA space."""
    if data.feature_names != pipeline.feature_names:
        raise PreprocessError("feature names do not match the fitted pipeline")
    filled = impute(data, pipeline.medians)
    scaled = apply_minmax(filled, pipeline.feature_mins, pipeline.feature_maxs)
    return (scaled - pipeline.pca_mean) @ pipeline.pca_components.T


def inverse_transform(pipeline: FittedPipeline, points: np.ndarray) -> np.ndarray:
    """Map PCA-space points back to original feature units (lossy if k < d)."""
    points = np.atleast_2d(points)
    if points.shape[1] != pipeline.n_components:
        raise PreprocessError(
            f"expected {pipeline.n_components} components, got {points.shape[1]}"
        )
    scaled = points @ pipeline.pca_components + pipeline.pca_mean
    span = pipeline.feature_maxs - pipeline.feature_mins
    return scaled * span + pipeline.feature_mins


def inverse_to_scaled(pipeline: FittedPipeline, points: np.ndarray) -> np.ndarray:
    """Inverse projection stopping at the normalized [0, 1] scale."""
    points = np.atleast_2d(points)
    return points @ pipeline.pca_components + pipeline.pca_mean


def to_json(pipeline: FittedPipeline) -> str:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "kind": "fitted_pipeline",
        "feature_names": list(pipeline.feature_names),
        "medians": pipeline.medians.tolist(),
        "feature_mins": pipeline.feature_mins.tolist(),
        "feature_maxs": pipeline.feature_maxs.tolist(),
        "pca_mean": pipeline.pca_mean.tolist(),
        "pca_components": pipeline.pca_components.tolist(),
        "pca_eigenvalues": pipeline.pca_eigenvalues.tolist(),
        "retained_variance": pipeline.retained_variance,
        "variance_threshold": pipeline.variance_threshold,
    }
    return json.dumps(doc, indent=2)


def from_json(text: str) -> FittedPipeline:
    doc = json.loads(text)
    if doc.get("kind") != "fitted_pipeline":
        raise PreprocessError("not a fitted_pipeline document")
    return FittedPipeline(
        feature_names=tuple(doc["feature_names"]),
        medians=np.asarray(doc["medians"]),
        feature_mins=np.asarray(doc["feature_mins"]),
        feature_maxs=np.asarray(doc["feature_maxs"]),
        pca_mean=np.asarray(doc["pca_mean"]),
        pca_components=np.asarray(doc["pca_components"]),
        pca_eigenvalues=np.asarray(doc["pca_eigenvalues"]),
        retained_variance=doc["retained_variance"],
        variance_threshold=doc["variance_threshold"],
    )
