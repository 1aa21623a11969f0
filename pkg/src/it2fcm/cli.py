"""Command-line entry point.

Subcommands compose through files: ``preprocess`` writes a pipeline JSON,
``cluster`` writes a partition plus metrics, ``explain`` turns a partition
into rules, and ``compare``/``sensitivity``/``scalability`` run whole
experiment plans. Outputs are CSV/JSON only; figures are left to external
plotting tools.
"""
from __future__ import annotations

import json
import os
import sys

import click
import numpy as np

from . import baselines, bench, clustering, explain, kernels, metrics, preprocess
from .data import load_csv, load_uci_air_quality

HISTOGRAM_BINS = 20


def _echo_config(seed: int, params: dict) -> None:
    click.echo(f"seed: {seed}")
    click.echo("config: " + json.dumps(params, sort_keys=True, default=str))


def _load(input_path: str, uci: bool, features: tuple[str, ...]):
    sel = list(features) if features else None
    if uci:
        return load_uci_air_quality(input_path, sel)
    ds = load_csv(input_path)
    return ds.select(sel) if sel else ds


def emit_plot_data(partition, pipeline, data: np.ndarray, out_dir: str) -> None:
    """Write the plot-ready CSV series for a fuzzy partition.

    ``silhouette_per_cluster.csv``, ``membership_histograms.csv`` (20
    uniform bins of midpoint memberships over [0, 1]), and
    ``centers_heatmap.csv`` in original feature units.
    """
    os.makedirs(out_dir, exist_ok=True)
    _, per_cluster, _ = metrics.silhouette(data, partition.labels)
    with open(os.path.join(out_dir, "silhouette_per_cluster.csv"), "w") as fh:
        fh.write("cluster,silhouette\n")
        for c in sorted(per_cluster):
            fh.write(f"{c},{per_cluster[c]:.6g}\n")

    u = (partition.u_mid if isinstance(partition, clustering.Type2Partition)
         else partition.u)
    edges = np.linspace(0.0, 1.0, HISTOGRAM_BINS + 1)
    with open(os.path.join(out_dir, "membership_histograms.csv"), "w") as fh:
        fh.write("cluster,bin_low,bin_high,count\n")
        for i in range(u.shape[0]):
            counts, _ = np.histogram(u[i], bins=edges)
            for b in range(HISTOGRAM_BINS):
                fh.write(f"{i},{edges[b]:.2f},{edges[b + 1]:.2f},{counts[b]}\n")

    original, _ = explain.granulate_centers(partition, pipeline)
    with open(os.path.join(out_dir, "centers_heatmap.csv"), "w") as fh:
        fh.write("cluster," + ",".join(pipeline.feature_names) + "\n")
        for i, row in enumerate(original):
            fh.write(f"{i}," + ",".join(f"{v:.6g}" for v in row) + "\n")


@click.group()
@click.version_option(package_name="it2fcm")
def cli():
    """Interval type-2 fuzzy clustering with linguistic rule extraction."""


input_opt = click.option("--input", "input_path", required=True,
                         type=click.Path(exists=True, dir_okay=False))
uci_opt = click.option("--uci/--generic", "uci", default=True,
                       help="Input layout: UCI air-quality CSV or generic CSV.")
features_opt = click.option("--features", multiple=True,
                            help="Feature subset, in order (repeatable).")
out_opt = click.option("--out", "out_dir", required=True,
                       type=click.Path(file_okay=False))
seed_opt = click.option("--seed", type=int, default=0, show_default=True)


@cli.command("preprocess")
@input_opt
@uci_opt
@features_opt
@click.option("--variance-threshold", type=float, default=0.95, show_default=True)
@out_opt
@seed_opt
def preprocess_cmd(input_path, uci, features, variance_threshold, out_dir, seed):
    """Fit the impute/scale/PCA pipeline and write it plus transformed rows."""
    _echo_config(seed, {"input": input_path, "uci": uci,
                        "variance_threshold": variance_threshold})
    ds = _load(input_path, uci, features)
    pipeline = preprocess.fit_pipeline(ds, variance_threshold)
    transformed = preprocess.transform(pipeline, ds)
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "pipeline.json"), "w") as fh:
        fh.write(preprocess.to_json(pipeline))
    np.savetxt(os.path.join(out_dir, "transformed.csv"), transformed,
               delimiter=",",
               header=",".join(f"pc{i}" for i in range(pipeline.n_components)),
               comments="")
    click.echo(f"components kept: {pipeline.n_components} "
               f"(retained variance {pipeline.retained_variance:.4f})")


@cli.command("cluster")
@input_opt
@uci_opt
@features_opt
@click.option("--method", type=click.Choice(["type2", "type1"]), default="type2",
              show_default=True)
@click.option("--clusters", type=int, default=3, show_default=True)
@click.option("--fuzzifier", type=float, default=2.0, show_default=True)
@click.option("--epsilon", type=float, default=0.005, show_default=True)
@click.option("--max-iter", type=int, default=1000, show_default=True)
@click.option("--spread", type=float, default=0.05, show_default=True)
@click.option("--variance-threshold", type=float, default=0.95, show_default=True)
@out_opt
@seed_opt
def cluster_cmd(input_path, uci, features, method, clusters, fuzzifier, epsilon,
                max_iter, spread, variance_threshold, out_dir, seed):
    """Preprocess and cluster a dataset; write partition, metrics, plot data."""
    params = {"method": method, "clusters": clusters, "fuzzifier": fuzzifier,
              "epsilon": epsilon, "max_iter": max_iter, "spread": spread}
    _echo_config(seed, params)
    ds = _load(input_path, uci, features)
    pipeline = preprocess.fit_pipeline(ds, variance_threshold)
    data = preprocess.transform(pipeline, ds)
    config = clustering.FcmConfig(
        c=clusters, m=fuzzifier, epsilon=epsilon, max_iter=max_iter,
        spread=spread if method == "type2" else 0.0, seed=seed)
    import time as _time
    start = _time.perf_counter()
    part = (clustering.fcm_type2(data, config) if method == "type2"
            else clustering.fcm_type1(data, config))
    runtime = _time.perf_counter() - start

    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "pipeline.json"), "w") as fh:
        fh.write(preprocess.to_json(pipeline))
    with open(os.path.join(out_dir, "partition.json"), "w") as fh:
        fh.write(clustering.to_json(part))
    report = metrics.build_report(method, data, part.labels, runtime,
                                  params=params)
    with open(os.path.join(out_dir, "metrics.json"), "w") as fh:
        json.dump({"schema_version": 1, **vars(report)}, fh,
                  indent=2, default=str)
    emit_plot_data(part, pipeline, data, out_dir)
    click.echo(f"converged: {part.converged} after {part.iterations_run} "
               f"iterations; silhouette {report.silhouette_overall:.4f}")


@cli.command("explain")
@click.option("--partition", "partition_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--pipeline", "pipeline_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--theta", type=float, default=0.5, show_default=True)
@click.option("--top-features", type=int, default=None)
@click.option("--names", "names_path", type=click.Path(exists=True),
              default=None, help="Two-column CSV: cluster index, name.")
@click.option("--format", "fmt", type=click.Choice(["text", "json", "csv"]),
              default="text", show_default=True)
@out_opt
@seed_opt
def explain_cmd(partition_path, pipeline_path, theta, top_features, names_path,
                fmt, out_dir, seed):
    """Extract ranked linguistic rules from a saved partition."""
    _echo_config(seed, {"theta": theta, "top_features": top_features,
                        "format": fmt})
    with open(partition_path) as fh:
        part = clustering.from_json(fh.read())
    with open(pipeline_path) as fh:
        pipeline = preprocess.from_json(fh.read())
    cluster_names = explain.load_cluster_names(names_path) if names_path else None
    rules = explain.extract_rules(part, pipeline, theta=theta,
                                  top_features=top_features,
                                  cluster_names=cluster_names)
    rendered = explain.render_report(rules, fmt)
    os.makedirs(out_dir, exist_ok=True)
    ext = {"text": "txt", "json": "json", "csv": "csv"}[fmt]
    path = os.path.join(out_dir, f"rules.{ext}")
    with open(path, "w") as fh:
        fh.write(rendered)
    click.echo(rendered)


@cli.command("metrics")
@input_opt
@uci_opt
@features_opt
@click.option("--partition", "partition_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--pipeline", "pipeline_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@out_opt
@seed_opt
def metrics_cmd(input_path, uci, features, partition_path, pipeline_path,
                out_dir, seed):
    """Recompute silhouette and entropy for a saved partition."""
    _echo_config(seed, {"input": input_path, "partition": partition_path})
    ds = _load(input_path, uci, features)
    with open(pipeline_path) as fh:
        pipeline = preprocess.from_json(fh.read())
    data = preprocess.transform(pipeline, ds)
    with open(partition_path) as fh:
        text = fh.read()
    try:
        part = clustering.from_json(text)
        labels = part.labels
        method = "type2" if isinstance(part, clustering.Type2Partition) else "type1"
    except clustering.ClusteringError:
        crisp = baselines.from_json(text)
        labels, method = crisp.labels, "crisp"
    report = metrics.build_report(method, data, labels, 0.0)
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "metrics.json"), "w") as fh:
        json.dump(vars(report), fh, indent=2, default=str)
    click.echo(f"silhouette {report.silhouette_overall:.4f}, "
               f"entropy {report.entropy:.4f}")


def _plan(config_path: str, seed: int | None) -> bench.ExperimentPlan:
    plan = bench.plan_from_file(config_path)
    if seed is not None:
        plan = bench.ExperimentPlan(**{**bench._plan_dict(plan),
                                       "seed": seed,
                                       "methods": plan.methods})
    return plan


config_opt = click.option("--config", "config_path", required=True,
                          type=click.Path(exists=True, dir_okay=False))


@cli.command("compare")
@config_opt
@out_opt
@click.option("--seed", type=int, default=None, help="Override the plan seed.")
def compare_cmd(config_path, out_dir, seed):
    """Run the method-comparison experiment from a plan file."""
    plan = _plan(config_path, seed)
    _echo_config(plan.seed, {"config": config_path})
    result = bench.run_comparison(plan)
    bench.write_comparison_outputs(result, out_dir)
    reports = [c["train"] for c in result["cells"] if "train" in c]
    click.echo(metrics.compare_methods_text(reports))
    for cell in result["cells"]:
        if "error" in cell:
            click.echo(f"cell {cell['method']} failed: {cell['error']}", err=True)


@cli.command("sensitivity")
@config_opt
@out_opt
@click.option("--seed", type=int, default=None, help="Override the plan seed.")
def sensitivity_cmd(config_path, out_dir, seed):
    """Run the (fuzzifier, cluster-count) sensitivity sweep."""
    plan = _plan(config_path, seed)
    _echo_config(plan.seed, {"config": config_path})
    result = bench.run_sensitivity(plan)
    bench.write_sensitivity_outputs(result, out_dir)
    best = result["best"]
    if best:
        click.echo(f"best cell: m={best['m']:g}, c={best['c']} "
                   f"(mean silhouette {best['mean']:.4f})")


@cli.command("scalability")
@config_opt
@out_opt
@click.option("--seed", type=int, default=None, help="Override the plan seed.")
def scalability_cmd(config_path, out_dir, seed):
    """Run the runtime-vs-size scalability study."""
    plan = _plan(config_path, seed)
    _echo_config(plan.seed, {"config": config_path, "backend": kernels.BACKEND})
    result = bench.run_scalability(plan)
    bench.write_scalability_outputs(result, out_dir)
    fit = result["fit"]
    if fit["r_squared"] is not None:
        click.echo(f"linear fit: slope {fit['slope']:.3g} s/row, "
                   f"R^2 {fit['r_squared']:.4f}")


def main(argv=None):
    try:
        return cli.main(args=argv, standalone_mode=False)
    except click.UsageError as exc:
        exc.show(file=sys.stderr)
        sys.exit(2)
    except click.exceptions.Exit as exc:
        sys.exit(exc.exit_code)
    except click.Abort:
        sys.exit(1)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        sys.exit(1)


if __name__ == "__main__":
    main()
