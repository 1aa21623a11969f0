"""Kernel backend selection.

The compiled extension (``it2fcm._ckernels``) is used when it imported
cleanly; otherwise the NumPy implementations below are selected. Set
``IT2FCM_FORCE_PY=1`` to force the fallback (used by the kernel benchmark
and by tests that exercise both paths).
"""
from __future__ import annotations

import os

import numpy as np


def py_pairwise_distances(data: np.ndarray, centers: np.ndarray) -> np.ndarray:
    """Euclidean distances between rows of data and centers, shape (c, n)."""
    diff = data[None, :, :] - centers[:, None, :]
    return np.sqrt(np.einsum("cnk,cnk->cn", diff, diff))


def py_memberships_from_distances(dist: np.ndarray, m: float) -> np.ndarray:
    """Fuzzy membership update u = d^(-2/(m-1)) normalized per column."""
    zero_cols = (dist == 0.0).any(axis=0)
    with np.errstate(divide="ignore"):
        w = np.where(dist > 0, dist, 1.0) ** (-2.0 / (m - 1.0))
    u = w / w.sum(axis=0, keepdims=True)
    if zero_cols.any():
        cols = np.nonzero(zero_cols)[0]
        u[:, cols] = 0.0
        first_zero = np.argmax(dist[:, cols] == 0.0, axis=0)
        u[first_zero, cols] = 1.0
    return u


def py_weighted_centers(weights: np.ndarray, data: np.ndarray):
    """Weighted centers and the per-cluster weight mass."""
    mass = weights.sum(axis=1)
    centers = weights @ data
    nonzero = mass > 0
    centers[nonzero] /= mass[nonzero, None]
    return centers, mass


if os.environ.get("IT2FCM_FORCE_PY") == "1":
    _ck = None
else:
    try:
        from . import _ckernels as _ck
    except ImportError:
        _ck = None

if _ck is not None:
    BACKEND = "compiled"

    def pairwise_distances(data, centers):
        return _ck.pairwise_distances(
            np.ascontiguousarray(data, dtype=np.float64),
            np.ascontiguousarray(centers, dtype=np.float64),
        )

    def memberships_from_distances(dist, m):
        return _ck.memberships_from_distances(
            np.ascontiguousarray(dist, dtype=np.float64), float(m)
        )

    def weighted_centers(weights, data):
        return _ck.weighted_centers(
            np.ascontiguousarray(weights, dtype=np.float64),
            np.ascontiguousarray(data, dtype=np.float64),
        )

else:
    BACKEND = "python"
    pairwise_distances = py_pairwise_distances
    memberships_from_distances = py_memberships_from_distances
    weighted_centers = py_weighted_centers
