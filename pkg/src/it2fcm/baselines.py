"""Crisp comparison methods: density-based clustering (DBSCAN) and
agglomerative hierarchical clustering.

Both are deterministic. DBSCAN is written out directly because the spec of
its tie-breaking matters for reproducibility: clusters are grown in row
order and a border point reachable from several clusters joins the one
discovered first. Agglomerative clustering delegates the merge sequence to
``scipy.cluster.hierarchy`` (ties broken by smallest index pair).
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass

import numpy as np
from scipy.cluster.hierarchy import fcluster, linkage
from scipy.spatial.distance import cdist, pdist

NOISE = -1

SCHEMA_VERSION = 1


class BaselineError(ValueError):
    pass


@dataclass(frozen=True)
class CrispPartition:
    """Hard labels; NOISE (-1) marks unclustered points."""

    labels: np.ndarray
    n_clusters: int

    def __post_init__(self):
        bad = (self.labels < NOISE) | (self.labels >= self.n_clusters)
        if bad.any():
            raise ValueError("labels outside {NOISE} u [0, n_clusters)")


def dbscan(data: np.ndarray, eps: float = 0.5, min_pts: int = 5,
           chunk: int = 1024) -> CrispPartition:
    """Density-based clustering.

    A core point has at least ``min_pts`` neighbors within ``eps``
    (counting itself). Clusters are the connected components of core
    points plus density-reachable border points.
    """
    data = np.atleast_2d(np.asarray(data, dtype=np.float64))
    if not np.all(np.isfinite(data)):
        raise BaselineError("data must be finite")
    if eps <= 0:
        raise BaselineError("eps must be > 0")
    n = data.shape[0]

    neighbors: list[np.ndarray] = []
    for start in range(0, n, chunk):
        block = cdist(data[start:start + chunk], data)
        for row in block:
            neighbors.append(np.nonzero(row <= eps)[0])
    core = np.array([len(nb) >= min_pts for nb in neighbors])

    labels = np.full(n, NOISE, dtype=np.int64)
    cluster = 0
    for i in range(n):
        if not core[i] or labels[i] != NOISE:
            continue
        labels[i] = cluster
        queue = deque(neighbors[i])
        while queue:
            j = queue.popleft()
            if labels[j] == NOISE:
                labels[j] = cluster
                if core[j]:
                    queue.extend(neighbors[j])
        cluster += 1
    return CrispPartition(labels=labels, n_clusters=cluster)


def suggest_eps(data: np.ndarray, min_pts: int = 5) -> float:
    """k-distance elbow heuristic: the knee of the sorted distances to each
    point's (min_pts)-th nearest neighbor. Reported only, never auto-applied.
    """
    data = np.atleast_2d(np.asarray(data, dtype=np.float64))
    n = data.shape[0]
    k = min(min_pts, n - 1)
    kdist = np.empty(n)
    for start in range(0, n, 1024):
        block = cdist(data[start:start + 1024], data)
        block.sort(axis=1)
        kdist[start:start + block.shape[0]] = block[:, k]
    kdist.sort()
    # Knee = point of maximum distance to the chord of the sorted curve.
    x = np.linspace(0.0, 1.0, n)
    y = (kdist - kdist[0]) / (kdist[-1] - kdist[0] + 1e-300)
    return float(kdist[np.argmax(np.abs(y - x))])


_LINKAGES = ("single", "complete", "average")


def agglomerative(data: np.ndarray, c: int, linkage_method: str = "average") -> CrispPartition:
    """Greedy bottom-up merging of the closest pair until c clusters remain."""
    data = np.atleast_2d(np.asarray(data, dtype=np.float64))
    n = data.shape[0]
    if linkage_method not in _LINKAGES:
        raise BaselineError(f"unknown linkage {linkage_method!r}")
    if not 1 <= c <= n:
        raise BaselineError(f"cluster count {c} outside [1, {n}]")
    if c == n:
        return CrispPartition(labels=np.arange(n, dtype=np.int64), n_clusters=n)
    tree = linkage(pdist(data), method=linkage_method)
    raw = fcluster(tree, t=c, criterion="maxclust")
    # Renumber clusters by first appearance so labels are scan-order stable.
    labels = np.empty(n, dtype=np.int64)
    mapping: dict[int, int] = {}
    for i, r in enumerate(raw):
        if r not in mapping:
            mapping[r] = len(mapping)
        labels[i] = mapping[r]
    return CrispPartition(labels=labels, n_clusters=len(mapping))


def to_json(partition: CrispPartition) -> str:
    return json.dumps({
        "schema_version": SCHEMA_VERSION,
        "kind": "crisp_partition",
        "labels": partition.labels.tolist(),
        "n_clusters": partition.n_clusters,
        "noise_label": NOISE,
    })


def from_json(text: str) -> CrispPartition:
    doc = json.loads(text)
    if doc.get("kind") != "crisp_partition":
        raise BaselineError("not a crisp_partition document")
    return CrispPartition(
        labels=np.asarray(doc["labels"], dtype=np.int64),
        n_clusters=doc["n_clusters"],
    )
