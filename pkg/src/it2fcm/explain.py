"""Granulation of cluster centers into linguistic terms and extraction of
ranked human-readable rules.

A center in PCA space is inverse-projected to the normalized [0, 1] feature
scale, each coordinate is mapped to low/medium/high by tertile, and the
resulting conjunction becomes one rule per cluster. Coverage counts the
points whose (midpoint) membership exceeds a threshold theta; significance
averages the memberships of those points. Because memberships are interval
valued, the coverage implied by the lower and upper bounds is reported as a
range alongside the midpoint value.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np

from .clustering import Type1Partition, Type2Partition
from .preprocess import FittedPipeline, inverse_to_scaled, inverse_transform

SCHEMA_VERSION = 1

TERMS = ("low", "medium", "high")


class ExplainError(ValueError):
    pass


@dataclass(frozen=True)
class LinguisticTerm:
    feature: str
    term: str               # low | medium | high
    normalized_value: float


@dataclass(frozen=True)
class Rule:
    cluster: int
    antecedents: tuple[LinguisticTerm, ...]
    coverage: float
    significance: float
    coverage_lower: float   # from u_lower (type-2 only; equals coverage otherwise)
    coverage_upper: float
    text: str


@dataclass(frozen=True)
class RuleSet:
    rules: tuple[Rule, ...]
    theta: float
    center_table: np.ndarray = field(compare=False)   # (c, d) original units
    feature_names: tuple[str, ...] = ()
    cluster_names: dict = field(default_factory=dict, compare=False)

    @property
    def average_coverage(self) -> float:
        return float(np.mean([r.coverage for r in self.rules]))

    @property
    def best(self) -> Rule:
        return self.rules[0]


def granulate_centers(partition, pipeline: FittedPipeline):
    """Cluster centers in original feature units and on the normalized
    [0, 1] scale (clamped after the lossy inverse projection)."""
    centers = partition.centers
    if centers.shape[1] != pipeline.n_components:
        raise ExplainError(
            f"partition has {centers.shape[1]}-dimensional centers but the "
            f"pipeline produces {pipeline.n_components} components"
        )
    original = inverse_transform(pipeline, centers)
    normalized = np.clip(inverse_to_scaled(pipeline, centers), 0.0, 1.0)
    return original, normalized


def assign_terms(normalized_center: np.ndarray,
                 feature_names) -> tuple[LinguisticTerm, ...]:
    """Tertile mapping: < 1/3 low, [1/3, 2/3) medium, >= 2/3 high."""
    terms = []
    for name, v in zip(feature_names, normalized_center):
        v = float(v)
        if v < 1.0 / 3.0:
            t = "low"
        elif v < 2.0 / 3.0:
            t = "medium"
        else:
            t = "high"
        terms.append(LinguisticTerm(feature=name, term=t, normalized_value=v))
    return tuple(terms)


def _membership_rows(partition):
    if isinstance(partition, Type2Partition):
        return partition.u_mid, partition.u_lower, partition.u_upper
    u = partition.u
    return u, u, u


def _coverage_significance(memberships: np.ndarray, theta: float):
    satisfied = memberships > theta
    cov = float(satisfied.mean()) if memberships.size else 0.0
    sig = float(memberships[satisfied].mean()) if satisfied.any() else 0.0
    return cov, sig


def _render(antecedents, cluster: int, cluster_names: dict) -> str:
    consequent = cluster_names.get(cluster, f"cluster {cluster}")
    if not antecedents:
        return f"THEN {consequent}"
    clause = " AND ".join(f"{t.feature} is {t.term}" for t in antecedents)
    return f"IF {clause} THEN {consequent}"


def extract_rules(partition, pipeline: FittedPipeline, theta: float = 0.5,
                  top_features: int | None = None,
                  cluster_names: dict | None = None) -> RuleSet:
    """One ranked rule per cluster.

    Antecedents cover the ``top_features`` most extreme features (largest
    |normalized - 0.5|), or all features if unset. Rules sort by coverage
    descending, then significance descending, then cluster index.
    """
    if not 0.0 < theta < 1.0:
        raise ExplainError("theta must lie in (0, 1)")
    cluster_names = cluster_names or {}
    original, normalized = granulate_centers(partition, pipeline)
    mid, lower, upper = _membership_rows(partition)

    rules = []
    for i in range(original.shape[0]):
        order = np.arange(len(pipeline.feature_names))
        if top_features is not None:
            extremity = np.abs(normalized[i] - 0.5)
            order = np.argsort(-extremity, kind="stable")[:top_features]
            order = np.sort(order)  # keep original feature order in the text
        terms = assign_terms(
            normalized[i][order],
            [pipeline.feature_names[j] for j in order],
        )
        cov, sig = _coverage_significance(mid[i], theta)
        cov_lo, _ = _coverage_significance(lower[i], theta)
        cov_hi, _ = _coverage_significance(upper[i], theta)
        rules.append(Rule(
            cluster=i,
            antecedents=terms,
            coverage=cov,
            significance=sig,
            coverage_lower=cov_lo,
            coverage_upper=cov_hi,
            text=_render(terms, i, cluster_names),
        ))
    rules.sort(key=lambda r: (-r.coverage, -r.significance, r.cluster))
    return RuleSet(
        rules=tuple(rules),
        theta=theta,
        center_table=original,
        feature_names=pipeline.feature_names,
        cluster_names=dict(cluster_names),
    )


def load_cluster_names(path: str) -> dict[int, str]:
    """Two-column CSV mapping cluster index to a display name."""
    names: dict[int, str] = {}
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or not row[0].strip():
                continue
            names[int(row[0])] = row[1].strip()
    return names


def _rule_dict(rule: Rule) -> dict:
    return {
        "cluster": rule.cluster,
        "antecedents": [
            {"feature": t.feature, "term": t.term,
             "normalized_value": t.normalized_value}
            for t in rule.antecedents
        ],
        "coverage": rule.coverage,
        "significance": rule.significance,
        "coverage_lower": rule.coverage_lower,
        "coverage_upper": rule.coverage_upper,
        "text": rule.text,
    }


def render_report(rules: RuleSet, format: str = "text") -> str:
    if format == "json":
        return json.dumps({
            "schema_version": SCHEMA_VERSION,
            "kind": "rule_set",
            "theta": rules.theta,
            "average_coverage": rules.average_coverage,
            "feature_names": list(rules.feature_names),
            "cluster_names": {str(k): v for k, v in rules.cluster_names.items()},
            "center_table": rules.center_table.tolist(),
            "rules": [_rule_dict(r) for r in rules.rules],
        }, indent=2)

    if format == "csv":
        out = io.StringIO()
        writer = csv.writer(out)
        writer.writerow([
            "cluster", "coverage", "significance",
            "coverage_lower", "coverage_upper", "antecedents", "text",
        ])
        for r in rules.rules:
            writer.writerow([
                r.cluster, f"{r.coverage:.6g}", f"{r.significance:.6g}",
                f"{r.coverage_lower:.6g}", f"{r.coverage_upper:.6g}",
                "; ".join(f"{t.feature}={t.term}" for t in r.antecedents),
                r.text,
            ])
        return out.getvalue()

    if format == "text":
        lines = [f"Rules (theta={rules.theta:g}, "
                 f"average coverage={rules.average_coverage:.3f})"]
        for rank, r in enumerate(rules.rules, start=1):
            lines.append(
                f"{rank}. {r.text}"
                f"  [coverage={r.coverage:.3f} "
                f"({r.coverage_lower:.3f}-{r.coverage_upper:.3f}), "
                f"significance={r.significance:.3f}]"
            )
        return "\n".join(lines) + "\n"

    raise ExplainError(f"unknown format {format!r}")


def ruleset_from_json(text: str) -> RuleSet:
    doc = json.loads(text)
    if doc.get("kind") != "rule_set":
        raise ExplainError("not a rule_set document")
    rules = tuple(
        Rule(
            cluster=r["cluster"],
            antecedents=tuple(
                LinguisticTerm(a["feature"], a["term"], a["normalized_value"])
                for a in r["antecedents"]
            ),
            coverage=r["coverage"],
            significance=r["significance"],
            coverage_lower=r["coverage_lower"],
            coverage_upper=r["coverage_upper"],
            text=r["text"],
        )
        for r in doc["rules"]
    )
    return RuleSet(
        rules=rules,
        theta=doc["theta"],
        center_table=np.asarray(doc["center_table"]),
        feature_names=tuple(doc["feature_names"]),
        cluster_names={int(k): v for k, v in doc["cluster_names"].items()},
    )
