"""Type-1 fuzzy c-means and its interval type-2 extension.

The type-2 variant keeps an interval membership [u_lower, u_upper] per
point and cluster. Both bounds start from the same random column-normalized
matrix; each iteration the type-1 membership update is computed from the
current centers and the bounds are re-derived as u_new +/- spread, clipped
to [0, 1]. Centers come from the interval midpoint, and crisp labels from
the midpoint argmax (lowest index wins ties).

Convergence is tested on the lower matrix only: max|U_lower - U_new_lower|
< epsilon. After the loop, memberships are recomputed once against the
final centers so a stored partition is an exact fixed point of
``predict_memberships`` on its own training data.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import kernels

SCHEMA_VERSION = 1

_EMPTY_MASS = 1e-12


class ClusteringError(ValueError):
    pass


@dataclass(frozen=True)
class FcmConfig:
    c: int = 3
    m: float = 2.0
    epsilon: float = 0.005
    max_iter: int = 1000
    spread: float = 0.05
    seed: int = 0
    # Default raises the midpoint weights to the fuzzifier in the center
    # update, consistent with the objective being minimized; set False for
    # the plain-midpoint variant, which measurably degrades separation.
    centers_use_fuzzifier: bool = True

    def __post_init__(self):
        if self.c < 2:
            raise ClusteringError("cluster count must be >= 2")
        if self.m <= 1:
            raise ClusteringError("fuzzifier must be > 1")
        if self.epsilon <= 0:
            raise ClusteringError("epsilon must be > 0")
        if self.max_iter < 1:
            raise ClusteringError("max_iter must be >= 1")
        if not 0 <= self.spread < 0.5:
            raise ClusteringError("spread must be in [0, 0.5)")


@dataclass(frozen=True)
class Type1Partition:
    centers: np.ndarray        # (c, k)
    u: np.ndarray              # (c, n)
    labels: np.ndarray         # (n,)
    iterations_run: int
    objective_trace: tuple[float, ...]
    converged: bool
    config: FcmConfig = field(compare=False, default=FcmConfig())


@dataclass(frozen=True)
class Type2Partition:
    centers: np.ndarray        # (c, k)
    u_lower: np.ndarray        # (c, n)
    u_upper: np.ndarray        # (c, n)
    labels: np.ndarray         # (n,)
    iterations_run: int
    objective_trace: tuple[float, ...]
    converged: bool
    config: FcmConfig = field(compare=False, default=FcmConfig())

    @property
    def u_mid(self) -> np.ndarray:
        return 0.5 * (self.u_lower + self.u_upper)


def compute_distances(data: np.ndarray, centers: np.ndarray) -> np.ndarray:
    """Euclidean distance of every point to every center, shape (c, n)."""
    data = np.atleast_2d(np.asarray(data, dtype=np.float64))
    centers = np.atleast_2d(np.asarray(centers, dtype=np.float64))
    if data.shape[1] != centers.shape[1]:
        raise ClusteringError(
            f"dimension mismatch: data has {data.shape[1]} features, "
            f"centers have {centers.shape[1]}"
        )
    return kernels.pairwise_distances(data, centers)


def update_memberships(distances: np.ndarray, m: float) -> np.ndarray:
    """Membership update from distances; columns sum to 1.

    A zero distance makes the column crisp at the lowest-index zero-distance
    cluster.
    """
    return kernels.memberships_from_distances(np.asarray(distances, dtype=np.float64), m)


def _validate(data: np.ndarray, config: FcmConfig) -> np.ndarray:
    data = np.atleast_2d(np.asarray(data, dtype=np.float64))
    if not np.all(np.isfinite(data)):
        raise ClusteringError("data must be finite")
    if data.shape[0] <= config.c:
        raise ClusteringError(
            f"need more points ({data.shape[0]}) than clusters ({config.c})"
        )
    return data


def _init_membership(c: int, n: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    u = rng.random((c, n)) + 1e-9
    return u / u.sum(axis=0, keepdims=True)


def _labels_from(memberships: np.ndarray) -> np.ndarray:
    # np.argmax ties break at the lowest index.
    return np.argmax(memberships, axis=0)


def _rescue_empty(centers: np.ndarray, mass: np.ndarray, data: np.ndarray,
                  memberships: np.ndarray) -> np.ndarray:
    """Re-seed any empty cluster at the point with the worst best-membership."""
    empty = np.nonzero(mass < _EMPTY_MASS)[0]
    if empty.size == 0:
        return centers
    centers = centers.copy()
    best = memberships.max(axis=0)
    order = np.argsort(best)  # worst-assigned points first
    for slot, i in enumerate(empty):
        centers[i] = data[order[slot % len(order)]]
    return centers


def fcm_type1(data: np.ndarray, config: FcmConfig) -> Type1Partition:
    data = _validate(data, config)
    n = data.shape[0]
    u = _init_membership(config.c, n, config.seed)

    trace: list[float] = []
    converged = False
    iterations = 0
    for iterations in range(1, config.max_iter + 1):
        centers, mass = kernels.weighted_centers(u ** config.m, data)
        centers = _rescue_empty(centers, mass, data, u)
        dist = kernels.pairwise_distances(data, centers)
        u_new = kernels.memberships_from_distances(dist, config.m)
        trace.append(float(np.sum(u_new ** config.m * dist ** 2)))
        delta = np.max(np.abs(u - u_new))
        u = u_new
        if delta < config.epsilon:
            converged = True
            break

    # Final consistency pass: memberships exactly reproduce a prediction
    # against the stored centers.
    centers, mass = kernels.weighted_centers(u ** config.m, data)
    centers = _rescue_empty(centers, mass, data, u)
    u = kernels.memberships_from_distances(
        kernels.pairwise_distances(data, centers), config.m
    )
    return Type1Partition(
        centers=centers,
        u=u,
        labels=_labels_from(u),
        iterations_run=iterations,
        objective_trace=tuple(trace),
        converged=converged,
        config=config,
    )


def _interval_bounds(u_new: np.ndarray, spread: float):
    upper = np.clip(u_new + spread, 0.0, 1.0)
    lower = np.clip(u_new - spread, 0.0, 1.0)
    return lower, upper


def fcm_type2(data: np.ndarray, config: FcmConfig,
              iteration_hook=None) -> Type2Partition:
    """Interval type-2 fuzzy c-means.

    ``iteration_hook``, if given, is called as
    ``hook(iteration, u_lower, u_upper)`` after each membership update;
    used for instrumentation, never for control flow.
    """
    data = _validate(data, config)
    n = data.shape[0]
    u0 = _init_membership(config.c, n, config.seed)
    u_lower = u0.copy()
    u_upper = u0.copy()

    trace: list[float] = []
    converged = False
    iterations = 0
    for iterations in range(1, config.max_iter + 1):
        mid = 0.5 * (u_lower + u_upper)
        weights = mid ** config.m if config.centers_use_fuzzifier else mid
        centers, mass = kernels.weighted_centers(weights, data)
        centers = _rescue_empty(centers, mass, data, mid)
        dist = kernels.pairwise_distances(data, centers)
        u_new = kernels.memberships_from_distances(dist, config.m)
        new_lower, new_upper = _interval_bounds(u_new, config.spread)
        trace.append(
            float(np.sum((0.5 * (new_lower + new_upper)) ** config.m * dist ** 2))
        )
        delta = np.max(np.abs(u_lower - new_lower))
        u_lower, u_upper = new_lower, new_upper
        if iteration_hook is not None:
            iteration_hook(iterations, u_lower, u_upper)
        if delta < config.epsilon:
            converged = True
            break

    mid = 0.5 * (u_lower + u_upper)
    weights = mid ** config.m if config.centers_use_fuzzifier else mid
    centers, mass = kernels.weighted_centers(weights, data)
    centers = _rescue_empty(centers, mass, data, mid)
    u_new = kernels.memberships_from_distances(
        kernels.pairwise_distances(data, centers), config.m
    )
    u_lower, u_upper = _interval_bounds(u_new, config.spread)
    mid = 0.5 * (u_lower + u_upper)
    return Type2Partition(
        centers=centers,
        u_lower=u_lower,
        u_upper=u_upper,
        labels=_labels_from(mid),
        iterations_run=iterations,
        objective_trace=tuple(trace),
        converged=converged,
        config=config,
    )


def predict_memberships(partition: Type1Partition | Type2Partition,
                        new_data: np.ndarray):
    """One membership pass against the frozen centers.

    Returns ``(u, labels)`` for a type-1 partition and
    ``(u_lower, u_upper, labels)`` for a type-2 partition.
    """
    new_data = np.atleast_2d(np.asarray(new_data, dtype=np.float64))
    dist = compute_distances(new_data, partition.centers)
    u_new = kernels.memberships_from_distances(dist, partition.config.m)
    if isinstance(partition, Type2Partition):
        lower, upper = _interval_bounds(u_new, partition.config.spread)
        return lower, upper, _labels_from(0.5 * (lower + upper))
    return u_new, _labels_from(u_new)


def _config_dict(config: FcmConfig) -> dict:
    return {
        "c": config.c,
        "m": config.m,
        "epsilon": config.epsilon,
        "max_iter": config.max_iter,
        "spread": config.spread,
        "seed": config.seed,
        "centers_use_fuzzifier": config.centers_use_fuzzifier,
    }


def to_json(partition: Type1Partition | Type2Partition) -> str:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "centers": partition.centers.tolist(),
        "labels": partition.labels.tolist(),
        "iterations_run": partition.iterations_run,
        "objective_trace": list(partition.objective_trace),
        "converged": partition.converged,
        "config": _config_dict(partition.config),
    }
    if isinstance(partition, Type2Partition):
        doc["kind"] = "type2_partition"
        doc["u_lower"] = partition.u_lower.tolist()
        doc["u_upper"] = partition.u_upper.tolist()
    else:
        doc["kind"] = "type1_partition"
        doc["u"] = partition.u.tolist()
    return json.dumps(doc)


def from_json(text: str) -> Type1Partition | Type2Partition:
    doc = json.loads(text)
    config = FcmConfig(**doc["config"])
    common = dict(
        centers=np.asarray(doc["centers"]),
        labels=np.asarray(doc["labels"], dtype=np.int64),
        iterations_run=doc["iterations_run"],
        objective_trace=tuple(doc["objective_trace"]),
        converged=doc["converged"],
        config=config,
    )
    if doc["kind"] == "type2_partition":
        return Type2Partition(
            u_lower=np.asarray(doc["u_lower"]),
            u_upper=np.asarray(doc["u_upper"]),
            **common,
        )
    if doc["kind"] == "type1_partition":
        return Type1Partition(u=np.asarray(doc["u"]), **common)
    raise ClusteringError(f"unknown partition kind: {doc.get('kind')!r}")
