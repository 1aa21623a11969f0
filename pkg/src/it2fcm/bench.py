"""Experiment harness: train/test split protocol, method comparison,
(fuzzifier, cluster-count) sensitivity sweep, and runtime-vs-size
scalability study.

Every experiment is fully determined by its plan and seeds; only wall-clock
timings vary between runs. Results are written as a directory of plot-ready
CSV files plus a complete ``result.json``.
"""
from __future__ import annotations

import json
import os
import platform
import time
from dataclasses import dataclass, field, asdict

import numpy as np

from . import baselines, clustering, explain, metrics, preprocess
from .data import Dataset, load_csv, load_uci_air_quality

SCHEMA_VERSION = 1

METHOD_DISPLAY = {
    "type2": "Type-2 Fuzzy",
    "type1": "Type-1 Fuzzy",
    "dbscan": "DBSCAN",
    "agglomerative": "Agglomerative",
}


class BenchError(ValueError):
    pass


@dataclass(frozen=True)
class MethodSpec:
    name: str                      # type2 | type1 | dbscan | agglomerative
    params: dict = field(default_factory=dict)


@dataclass(frozen=True)
class ExperimentPlan:
    dataset_path: str
    feature_selection: tuple[str, ...] | None = None
    uci_layout: bool = True
    split_fraction: float = 0.8
    seed: int = 0
    seeds: tuple[int, ...] = (0,)
    methods: tuple[MethodSpec, ...] = ()
    sweep_m: tuple[float, ...] = ()
    sweep_c: tuple[int, ...] = ()
    sizes: tuple[int, ...] = ()
    repetitions: int = 1
    variance_threshold: float = 0.95
    theta: float = 0.5

    def __post_init__(self):
        if not 0.0 < self.split_fraction < 1.0:
            raise BenchError("split_fraction must lie in (0, 1)")
        if self.repetitions < 1:
            raise BenchError("repetitions must be >= 1")


def plan_from_file(path: str) -> ExperimentPlan:
    """Read a plan from a JSON config file."""
    with open(path) as fh:
        doc = json.load(fh)
    methods = tuple(
        MethodSpec(name=m["name"], params=m.get("params", {}))
        if isinstance(m, dict) else MethodSpec(name=m)
        for m in doc.pop("methods", [])
    )
    for key in ("feature_selection", "seeds", "sweep_m", "sweep_c", "sizes"):
        if key in doc and doc[key] is not None:
            doc[key] = tuple(doc[key])
    return ExperimentPlan(methods=methods, **doc)


def load_dataset(plan: ExperimentPlan) -> Dataset:
    sel = list(plan.feature_selection) if plan.feature_selection else None
    if plan.uci_layout:
        return load_uci_air_quality(plan.dataset_path, sel)
    ds = load_csv(plan.dataset_path)
    return ds.select(sel) if sel else ds


def split(data: Dataset, fraction: float, seed: int) -> tuple[Dataset, Dataset]:
    """Seeded shuffle, then prefix split into (train, test)."""
    n = data.n_rows
    if n < 5:
        raise BenchError("need at least 5 rows to split")
    cut = int(round(n * fraction))
    if cut == 0 or cut == n:
        raise BenchError("degenerate split: one side is empty")
    order = np.random.default_rng(seed).permutation(n)
    train, test = order[:cut], order[cut:]

    def take(idx):
        return Dataset(
            values=data.values[idx].copy(),
            feature_names=data.feature_names,
            missing_mask=data.missing_mask[idx].copy(),
        )

    return take(train), take(test)


def _fcm_config(params: dict, seed: int, name: str) -> clustering.FcmConfig:
    defaults = dict(c=3, m=2.0, epsilon=0.005, max_iter=1000,
                    spread=0.05 if name == "type2" else 0.0, seed=seed)
    defaults.update(params)
    return clustering.FcmConfig(**defaults)


def run_method(spec: MethodSpec, train: np.ndarray, test: np.ndarray | None,
               seed: int, theta: float = 0.5,
               pipeline: preprocess.FittedPipeline | None = None) -> dict:
    """Cluster the train matrix with one method and assemble its reports.

    Only the clustering call itself is timed. Returns a cell dict with the
    train (and, for fuzzy methods, test) metrics, plus partition and rules
    for the fuzzy methods.
    """
    name = spec.name
    cell: dict = {"method": name, "seed": seed, "params": dict(spec.params)}
    if name in ("type2", "type1"):
        config = _fcm_config(spec.params, seed, name)
        fit = clustering.fcm_type2 if name == "type2" else clustering.fcm_type1
        start = time.perf_counter()
        part = fit(train, config)
        runtime = time.perf_counter() - start
        rules = None
        if pipeline is not None:
            rules = explain.extract_rules(part, pipeline, theta=theta)
            cell["rules"] = rules
        coverage = rules.best.coverage if rules is not None else None
        cell["partition"] = part
        cell["train"] = metrics.build_report(
            METHOD_DISPLAY[name], train, part.labels, runtime,
            coverage=coverage, params=cell["params"])
        if test is not None and len(test):
            predicted = clustering.predict_memberships(part, test)
            test_labels = predicted[-1]
            cell["test"] = metrics.build_report(
                METHOD_DISPLAY[name], test, test_labels, 0.0,
                coverage=coverage, params=cell["params"])
    elif name == "dbscan":
        eps = spec.params.get("eps", 0.5)
        min_pts = spec.params.get("min_pts", 5)
        start = time.perf_counter()
        part = baselines.dbscan(train, eps=eps, min_pts=min_pts)
        runtime = time.perf_counter() - start
        cell["partition"] = part
        cell["train"] = metrics.build_report(
            METHOD_DISPLAY[name], train, part.labels, runtime,
            params={"eps": eps, "min_pts": min_pts})
        cell["test"] = None  # no predict step for density clustering
    elif name == "agglomerative":
        c = spec.params.get("c", 3)
        linkage_method = spec.params.get("linkage", "average")
        start = time.perf_counter()
        part = baselines.agglomerative(train, c=c, linkage_method=linkage_method)
        runtime = time.perf_counter() - start
        cell["partition"] = part
        cell["train"] = metrics.build_report(
            METHOD_DISPLAY[name], train, part.labels, runtime,
            params={"c": c, "linkage": linkage_method})
        cell["test"] = None
    else:
        raise BenchError(f"unknown method {name!r}")
    return cell


def run_comparison(plan: ExperimentPlan) -> dict:
    """Fit the pipeline on the train split and run every planned method."""
    if not plan.methods:
        raise BenchError("plan has no methods")
    data = load_dataset(plan)
    train_ds, test_ds = split(data, plan.split_fraction, plan.seed)
    pipeline = preprocess.fit_pipeline(train_ds, plan.variance_threshold)
    train = preprocess.transform(pipeline, train_ds)
    test = preprocess.transform(pipeline, test_ds)

    cells = []
    for spec in plan.methods:
        try:
            cells.append(run_method(spec, train, test, plan.seed,
                                    theta=plan.theta, pipeline=pipeline))
        except Exception as exc:  # keep other cells alive
            cells.append({"method": spec.name, "seed": plan.seed,
                          "error": f"{type(exc).__name__}: {exc}"})
    return {
        "kind": "comparison",
        "plan": _plan_dict(plan),
        "pipeline": pipeline,
        "machine": machine_descriptor(),
        "cells": cells,
    }


def run_sensitivity(plan: ExperimentPlan) -> dict:
    """Mean/sd train silhouette over a (m, c) grid, several seeds per cell."""
    if not plan.sweep_m or not plan.sweep_c:
        raise BenchError("plan has no sweep grid")
    data = load_dataset(plan)
    train_ds, _ = split(data, plan.split_fraction, plan.seed)
    pipeline = preprocess.fit_pipeline(train_ds, plan.variance_threshold)
    train = preprocess.transform(pipeline, train_ds)

    grid = []
    for m in plan.sweep_m:
        for c in plan.sweep_c:
            scores = []
            errors = []
            for rep in range(plan.repetitions):
                seed = plan.seed + rep
                try:
                    config = clustering.FcmConfig(c=c, m=m, seed=seed)
                    part = clustering.fcm_type2(train, config)
                    overall, _, _ = metrics.silhouette(train, part.labels)
                    scores.append(overall)
                except Exception as exc:
                    errors.append(f"{type(exc).__name__}: {exc}")
            grid.append({
                "m": m, "c": c,
                "mean": float(np.mean(scores)) if scores else None,
                "sd": float(np.std(scores)) if scores else None,
                "n_ok": len(scores),
                "errors": errors,
            })
    ok = [cell for cell in grid if cell["mean"] is not None]
    best = max(ok, key=lambda cell: cell["mean"]) if ok else None
    return {
        "kind": "sensitivity",
        "plan": _plan_dict(plan),
        "machine": machine_descriptor(),
        "grid": grid,
        "best": best,
    }


def run_scalability(plan: ExperimentPlan, method: MethodSpec | None = None) -> dict:
    """Median clustering runtime per subsample size, with a linear fit."""
    if not plan.sizes:
        raise BenchError("plan has no sizes")
    if list(plan.sizes) != sorted(plan.sizes):
        raise BenchError("sizes must be sorted ascending")
    method = method or MethodSpec("type2")
    data = load_dataset(plan)
    pipeline = preprocess.fit_pipeline(data, plan.variance_threshold)
    full = preprocess.transform(pipeline, data)
    if plan.sizes[-1] > full.shape[0]:
        raise BenchError(
            f"size {plan.sizes[-1]} exceeds dataset rows {full.shape[0]}")

    series = []
    for size in plan.sizes:
        timings = []
        for rep in range(plan.repetitions):
            seed = plan.seed + rep
            idx = np.random.default_rng(seed).choice(full.shape[0], size,
                                                     replace=False)
            sample = full[idx]
            if method.name in ("type2", "type1"):
                config = _fcm_config(method.params, seed, method.name)
                fit = (clustering.fcm_type2 if method.name == "type2"
                       else clustering.fcm_type1)
                start = time.perf_counter()
                fit(sample, config)
                timings.append(time.perf_counter() - start)
            else:
                cell = run_method(method, sample, None, seed)
                timings.append(cell["train"].runtime_seconds)
        series.append({"size": size, "median_seconds": float(np.median(timings)),
                       "timings": timings})

    fit_stats = _linear_fit(
        np.array([s["size"] for s in series], dtype=float),
        np.array([s["median_seconds"] for s in series]),
    )
    return {
        "kind": "scalability",
        "plan": _plan_dict(plan),
        "machine": machine_descriptor(),
        "method": method.name,
        "series": series,
        "fit": fit_stats,
    }


def _linear_fit(x: np.ndarray, y: np.ndarray) -> dict:
    if len(x) < 2:
        return {"slope": None, "intercept": None, "r_squared": None,
                "note": "fit not applicable for a single size"}
    slope, intercept = np.polyfit(x, y, 1)
    predicted = slope * x + intercept
    ss_res = float(np.sum((y - predicted) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return {"slope": float(slope), "intercept": float(intercept),
            "r_squared": float(np.clip(r2, 0.0, 1.0))}


def machine_descriptor() -> dict:
    return {
        "platform": platform.platform(),
        "processor": platform.processor() or platform.machine(),
        "cpu_count": os.cpu_count(),
        "python": platform.python_version(),
    }


def _plan_dict(plan: ExperimentPlan) -> dict:
    doc = asdict(plan)
    doc["methods"] = [asdict(m) for m in plan.methods]
    return doc


# ---------------------------------------------------------------------------
# Result serialization

def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, metrics.MetricsReport):
        return {"__type__": "metrics_report", **_jsonable(vars(obj))}
    if isinstance(obj, (clustering.Type1Partition, clustering.Type2Partition)):
        return {"__type__": "partition",
                "doc": json.loads(clustering.to_json(obj))}
    if isinstance(obj, baselines.CrispPartition):
        return {"__type__": "crisp_partition",
                "doc": json.loads(baselines.to_json(obj))}
    if isinstance(obj, explain.RuleSet):
        return {"__type__": "rule_set",
                "doc": json.loads(explain.render_report(obj, "json"))}
    if isinstance(obj, preprocess.FittedPipeline):
        return {"__type__": "fitted_pipeline",
                "doc": json.loads(preprocess.to_json(obj))}
    return obj


def result_to_json(result: dict) -> str:
    return json.dumps(
        {"schema_version": SCHEMA_VERSION, **_jsonable(result)}, indent=2
    )


def write_comparison_outputs(result: dict, out_dir: str) -> None:
    os.makedirs(out_dir, exist_ok=True)
    reports = [c["train"] for c in result["cells"] if "train" in c]
    with open(os.path.join(out_dir, "comparison.csv"), "w") as fh:
        fh.write(metrics.compare_methods_csv(reports))
    rules_txt = []
    for cell in result["cells"]:
        if cell.get("rules") is not None:
            rules_txt.append(f"# method: {cell['method']}")
            rules_txt.append(explain.render_report(cell["rules"], "text"))
    with open(os.path.join(out_dir, "rules.txt"), "w") as fh:
        fh.write("\n".join(rules_txt) if rules_txt else "no fuzzy method cells\n")
    with open(os.path.join(out_dir, "result.json"), "w") as fh:
        fh.write(result_to_json(result))


def write_sensitivity_outputs(result: dict, out_dir: str) -> None:
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "sensitivity.csv"), "w") as fh:
        fh.write("m,c,mean_silhouette,sd_silhouette,n_ok\n")
        for cell in result["grid"]:
            mean = "" if cell["mean"] is None else f"{cell['mean']:.6g}"
            sd = "" if cell["sd"] is None else f"{cell['sd']:.6g}"
            fh.write(f"{cell['m']:g},{cell['c']},{mean},{sd},{cell['n_ok']}\n")
    with open(os.path.join(out_dir, "result.json"), "w") as fh:
        fh.write(result_to_json(result))


def write_scalability_outputs(result: dict, out_dir: str) -> None:
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "scalability.csv"), "w") as fh:
        fh.write("size,median_seconds\n")
        for s in result["series"]:
            fh.write(f"{s['size']},{s['median_seconds']:.6g}\n")
    with open(os.path.join(out_dir, "result.json"), "w") as fh:
        fh.write(result_to_json(result))
