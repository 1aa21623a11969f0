"""Clustering-quality and fairness metrics: silhouette (overall, per
cluster, per point) and assignment entropy, plus the method-comparison
table assembly.
"""
from __future__ import annotations

import io
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.distance import cdist

NOISE = -1

COMPARISON_HEADER = "method,silhouette,entropy,coverage,runtime_seconds"


class MetricsError(ValueError):
    pass


@dataclass(frozen=True)
class MetricsReport:
    method: str
    silhouette_overall: float
    silhouette_per_cluster: tuple[float, ...]
    entropy: float
    entropy_normalized: float
    n_evaluated: int
    runtime_seconds: float
    coverage: float | None = None  # best-rule coverage; None for crisp methods
    params: dict = field(default_factory=dict)


def silhouette(data: np.ndarray, labels: np.ndarray, chunk: int = 512):
    """Silhouette s(i) = (b - a) / max(a, b).

    a(i) is the mean distance to same-cluster points (excluding self), b(i)
    the smallest mean distance to another cluster. Points in singleton
    clusters score 0; noise-labeled points (label < 0) are excluded.

    Distances are accumulated in row chunks so the full n x n matrix is
    never materialized.

    Returns (overall, per_cluster dict, per_point array over evaluated
    points).
    """
    data = np.asarray(data, dtype=np.float64)
    labels = np.asarray(labels)
    evaluated = labels >= 0
    data = data[evaluated]
    labels = labels[evaluated]
    uniq = np.unique(labels)
    if len(uniq) < 2:
        raise MetricsError("silhouette undefined: fewer than 2 clusters")

    n = len(labels)
    sizes = {int(c): int(np.sum(labels == c)) for c in uniq}
    members = {int(c): labels == c for c in uniq}
    # Mean distance from every point to every cluster, shape (n, n_clusters).
    mean_to = np.empty((n, len(uniq)))
    for start in range(0, n, chunk):
        stop = min(start + chunk, n)
        block = cdist(data[start:stop], data)
        for idx, c in enumerate(uniq):
            mean_to[start:stop, idx] = block[:, members[int(c)]].mean(axis=1)

    s = np.zeros(n)
    for idx, c in enumerate(uniq):
        sz = sizes[int(c)]
        mine = labels == c
        if sz == 1:
            continue
        a = mean_to[mine, idx] * sz / (sz - 1)  # exclude the zero self-distance
        others = np.delete(mean_to[mine], idx, axis=1)
        b = others.min(axis=1)
        s[mine] = (b - a) / np.maximum(a, b)

    per_cluster = {int(c): float(s[labels == c].mean()) for c in uniq}
    return float(s.mean()), per_cluster, s


def assignment_entropy(labels: np.ndarray) -> tuple[float, float]:
    """Shannon entropy (natural log) of the cluster-size distribution.

    Noise labels (< 0) are excluded. Returns (entropy, normalized) with
    normalized = H / ln(n_clusters), or 0 for a single cluster.
    """
    labels = np.asarray(labels)
    labels = labels[labels >= 0]
    if labels.size == 0:
        raise MetricsError("no evaluated points")
    _, counts = np.unique(labels, return_counts=True)
    p = counts / counts.sum()
    h = float(-np.sum(p * np.log(p)))
    norm = h / math.log(len(counts)) if len(counts) > 1 else 0.0
    return h, norm


def build_report(method: str, data: np.ndarray, labels: np.ndarray,
                 runtime_seconds: float, coverage: float | None = None,
                 params: dict | None = None) -> MetricsReport:
    overall, per_cluster, _ = silhouette(data, labels)
    h, norm = assignment_entropy(labels)
    return MetricsReport(
        method=method,
        silhouette_overall=overall,
        silhouette_per_cluster=tuple(per_cluster[c] for c in sorted(per_cluster)),
        entropy=h,
        entropy_normalized=norm,
        n_evaluated=int(np.sum(np.asarray(labels) >= 0)),
        runtime_seconds=runtime_seconds,
        coverage=coverage,
        params=dict(params or {}),
    )


def _disambiguate(reports) -> list[tuple[str, MetricsReport]]:
    seen: dict[str, int] = {}
    rows = []
    names = [r.method for r in reports]
    for r in reports:
        if names.count(r.method) > 1:
            seen[r.method] = seen.get(r.method, 0) + 1
            rows.append((f"{r.method}#{seen[r.method]}", r))
        else:
            rows.append((r.method, r))
    return rows


def compare_methods_csv(reports) -> str:
    """Comparison table as CSV with a fixed column order."""
    if not reports:
        raise MetricsError("at least one report required")
    out = io.StringIO()
    out.write(COMPARISON_HEADER + "\n")
    for name, r in _disambiguate(reports):
        cov = "N/A" if r.coverage is None else f"{r.coverage:.6g}"
        out.write(
            f"{name},{r.silhouette_overall:.6g},{r.entropy:.6g},"
            f"{cov},{r.runtime_seconds:.6g}\n"
        )
    return out.getvalue()


def compare_methods_text(reports) -> str:
    """Comparison table as aligned text."""
    rows = [COMPARISON_HEADER.split(",")]
    for name, r in _disambiguate(reports):
        cov = "N/A" if r.coverage is None else f"{r.coverage:.4f}"
        rows.append([
            name,
            f"{r.silhouette_overall:.4f}",
            f"{r.entropy:.4f}",
            cov,
            f"{r.runtime_seconds:.4f}",
        ])
    widths = [max(len(row[i]) for row in rows) for i in range(5)]
    return "\n".join(
        "  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip()
        for row in rows
    ) + "\n"
