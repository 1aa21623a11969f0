import json

import numpy as np
import pytest
from click.testing import CliRunner

from it2fcm.cli import cli, main


@pytest.fixture
def runner():
    return CliRunner()


def run_ok(runner, args):
    result = runner.invoke(cli, args, catch_exceptions=False)
    assert result.exit_code == 0, result.output
    return result


class TestPreprocess:
    def test_writes_pipeline_and_transformed(self, runner, small_uci_csv,
                                             tmp_path):
        out = tmp_path / "pre"
        result = run_ok(runner, [
            "preprocess", "--input", str(small_uci_csv), "--out", str(out)])
        assert "seed: 0" in result.output
        assert "components kept:" in result.output
        doc = json.loads((out / "pipeline.json").read_text())
        assert doc["kind"] == "fitted_pipeline"
        rows = (out / "transformed.csv").read_text().strip().split("\n")
        assert rows[0].startswith("pc0")
        assert len(rows) == 1 + 1200  # header + data rows in the small file

    def test_feature_subset(self, runner, small_uci_csv, tmp_path):
        out = tmp_path / "pre"
        run_ok(runner, [
            "preprocess", "--input", str(small_uci_csv), "--out", str(out),
            "--features", "CO(GT)", "--features", "NO2(GT)"])
        doc = json.loads((out / "pipeline.json").read_text())
        assert doc["feature_names"] == ["CO(GT)", "NO2(GT)"]


class TestCluster:
    def test_full_artifact_set(self, runner, small_uci_csv, tmp_path):
        out = tmp_path / "clu"
        result = run_ok(runner, [
            "cluster", "--input", str(small_uci_csv), "--out", str(out)])
        assert "silhouette" in result.output
        for name in ("pipeline.json", "partition.json", "metrics.json",
                     "silhouette_per_cluster.csv",
                     "membership_histograms.csv", "centers_heatmap.csv"):
            assert (out / name).exists(), name

        part = json.loads((out / "partition.json").read_text())
        assert part["kind"] == "type2_partition"
        met = json.loads((out / "metrics.json").read_text())
        assert met["method"] == "type2"
        assert len(met["silhouette_per_cluster"]) == 3

    def test_plot_data_invariants(self, runner, small_uci_csv, tmp_path):
        out = tmp_path / "clu"
        run_ok(runner, [
            "cluster", "--input", str(small_uci_csv), "--out", str(out)])
        sil = (out / "silhouette_per_cluster.csv").read_text().strip().split("\n")
        assert sil[0] == "cluster,silhouette"
        assert len(sil) == 4

        hist = (out / "membership_histograms.csv").read_text().strip().split("\n")
        assert hist[0] == "cluster,bin_low,bin_high,count"
        counts = {}
        for line in hist[1:]:
            c, _, _, n = line.split(",")
            counts[c] = counts.get(c, 0) + int(n)
        # each cluster's histogram covers every row exactly once
        assert set(counts.values()) == {1200}

        heat = (out / "centers_heatmap.csv").read_text().strip().split("\n")
        assert heat[0].startswith("cluster,")
        assert len(heat) == 4

    def test_type1_method(self, runner, small_uci_csv, tmp_path):
        out = tmp_path / "t1"
        run_ok(runner, [
            "cluster", "--input", str(small_uci_csv), "--out", str(out),
            "--method", "type1", "--clusters", "2"])
        part = json.loads((out / "partition.json").read_text())
        assert part["kind"] == "type1_partition"

    def test_deterministic_across_runs(self, runner, small_uci_csv, tmp_path):
        outs = []
        for name in ("a", "b"):
            out = tmp_path / name
            run_ok(runner, [
                "cluster", "--input", str(small_uci_csv), "--out", str(out),
                "--seed", "11"])
            outs.append(out)
        for fname in ("partition.json", "pipeline.json",
                      "membership_histograms.csv", "centers_heatmap.csv"):
            assert (outs[0] / fname).read_bytes() == (outs[1] / fname).read_bytes()
        # metrics.json differs only in the runtime field
        a = json.loads((outs[0] / "metrics.json").read_text())
        b = json.loads((outs[1] / "metrics.json").read_text())
        a.pop("runtime_seconds"), b.pop("runtime_seconds")
        assert a == b

    def test_seed_changes_nothing_structural_but_is_echoed(
            self, runner, small_uci_csv, tmp_path):
        out = tmp_path / "s"
        result = run_ok(runner, [
            "cluster", "--input", str(small_uci_csv), "--out", str(out),
            "--seed", "42"])
        assert "seed: 42" in result.output


class TestExplainAndMetrics:
    @pytest.fixture
    def clustered(self, runner, small_uci_csv, tmp_path):
        out = tmp_path / "clu"
        run_ok(runner, [
            "cluster", "--input", str(small_uci_csv), "--out", str(out)])
        return out

    def test_explain_text(self, runner, clustered, tmp_path):
        out = tmp_path / "exp"
        result = run_ok(runner, [
            "explain", "--partition", str(clustered / "partition.json"),
            "--pipeline", str(clustered / "pipeline.json"),
            "--out", str(out)])
        assert "IF " in result.output and "THEN cluster" in result.output
        assert (out / "rules.txt").exists()

    def test_explain_json_with_names(self, runner, clustered, tmp_path):
        names = tmp_path / "names.csv"
        names.write_text("0,calm\n1,busy\n2,peak\n")
        out = tmp_path / "exp"
        run_ok(runner, [
            "explain", "--partition", str(clustered / "partition.json"),
            "--pipeline", str(clustered / "pipeline.json"),
            "--names", str(names), "--format", "json", "--out", str(out)])
        doc = json.loads((out / "rules.json").read_text())
        assert doc["cluster_names"] == {"0": "calm", "1": "busy", "2": "peak"}

    def test_metrics_recompute(self, runner, clustered, small_uci_csv,
                               tmp_path):
        out = tmp_path / "met"
        result = run_ok(runner, [
            "metrics", "--input", str(small_uci_csv),
            "--partition", str(clustered / "partition.json"),
            "--pipeline", str(clustered / "pipeline.json"),
            "--out", str(out)])
        assert "silhouette" in result.output
        recomputed = json.loads((out / "metrics.json").read_text())
        original = json.loads((clustered / "metrics.json").read_text())
        assert recomputed["silhouette_overall"] == pytest.approx(
            original["silhouette_overall"], abs=1e-12)


class TestExperimentCommands:
    def _plan_file(self, tmp_path, small_uci_csv, **extra):
        doc = {"dataset_path": str(small_uci_csv), "uci_layout": True,
               "seed": 0, **extra}
        p = tmp_path / "plan.json"
        p.write_text(json.dumps(doc))
        return p

    def test_compare(self, runner, small_uci_csv, tmp_path):
        plan = self._plan_file(
            tmp_path, small_uci_csv,
            methods=["type2", {"name": "agglomerative", "params": {"c": 3}}])
        out = tmp_path / "cmp"
        result = run_ok(runner, [
            "compare", "--config", str(plan), "--out", str(out)])
        assert "Type-2 Fuzzy" in result.output
        assert (out / "comparison.csv").exists()
        assert (out / "rules.txt").exists()

    def test_sensitivity(self, runner, small_uci_csv, tmp_path):
        plan = self._plan_file(tmp_path, small_uci_csv,
                               sweep_m=[2.0], sweep_c=[2, 3], repetitions=1)
        out = tmp_path / "sens"
        result = run_ok(runner, [
            "sensitivity", "--config", str(plan), "--out", str(out)])
        assert "best cell:" in result.output
        assert (out / "sensitivity.csv").exists()

    def test_scalability_with_seed_override(self, runner, small_uci_csv,
                                            tmp_path):
        plan = self._plan_file(tmp_path, small_uci_csv,
                               sizes=[200, 400], repetitions=1)
        out = tmp_path / "scal"
        result = run_ok(runner, [
            "scalability", "--config", str(plan), "--out", str(out),
            "--seed", "3"])
        assert "seed: 3" in result.output
        assert (out / "scalability.csv").exists()


class TestExitCodes:
    def test_missing_required_option_exits_2(self, capsys, tmp_path):
        with pytest.raises(SystemExit) as exc:
            main(["preprocess", "--out", str(tmp_path)])
        assert exc.value.code == 2

    def test_nonexistent_input_exits_2(self, capsys, tmp_path):
        with pytest.raises(SystemExit) as exc:
            main(["preprocess", "--input", "/no/such/file.csv",
                  "--out", str(tmp_path)])
        assert exc.value.code == 2

    def test_runtime_error_exits_1(self, capsys, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("not;a;valid;uci;file\n")
        with pytest.raises(SystemExit) as exc:
            main(["preprocess", "--input", str(bad), "--out",
                  str(tmp_path / "o")])
        assert exc.value.code == 1
        assert "error:" in capsys.readouterr().err

    def test_help_succeeds(self, capsys):
        try:
            code = main(["--help"])
        except SystemExit as exc:
            code = exc.code
        assert not code
        assert "Commands:" in capsys.readouterr().out
