"""Interval type-2 fuzzy c-means clustering with linguistic rule
extraction, fairness metrics, crisp baselines, and an experiment harness.
"""
from .data import Dataset, load_csv, load_uci_air_quality
from .preprocess import FittedPipeline, fit_pipeline, transform, inverse_transform
from .clustering import (
    FcmConfig,
    Type1Partition,
    Type2Partition,
    fcm_type1,
    fcm_type2,
    predict_memberships,
)
from .baselines import CrispPartition, agglomerative, dbscan
from .explain import RuleSet, extract_rules, render_report
from .metrics import MetricsReport, assignment_entropy, silhouette
from .kernels import BACKEND as KERNEL_BACKEND

__version__ = "0.1.0"

__all__ = [
    "Dataset", "load_csv", "load_uci_air_quality",
    "FittedPipeline", "fit_pipeline", "transform", "inverse_transform",
    "FcmConfig", "Type1Partition", "Type2Partition",
    "fcm_type1", "fcm_type2", "predict_memberships",
    "CrispPartition", "agglomerative", "dbscan",
    "RuleSet", "extract_rules", "render_report",
    "MetricsReport", "assignment_entropy", "silhouette",
    "KERNEL_BACKEND",
]
