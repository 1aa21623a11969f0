import os

import numpy as np
import pytest

from it2fcm import synthetic
from it2fcm.data import load_uci_air_quality


def three_blobs(n_per=50, seed=0, sigma=0.3):
    """Blobs at (0,0), (5,0), (0,5); returns (points, generating labels)."""
    rng = np.random.default_rng(seed)
    centers = np.array([[0.0, 0.0], [5.0, 0.0], [0.0, 5.0]])
    points = np.vstack([
        c + sigma * rng.standard_normal((n_per, 2)) for c in centers
    ])
    labels = np.repeat(np.arange(3), n_per)
    return points, labels


@pytest.fixture(scope="session")
def small_uci_csv(tmp_path_factory):
    """A small UCI-layout synthetic file for module and CLI tests."""
    path = tmp_path_factory.mktemp("data") / "air_small.csv"
    synthetic.write_uci_layout(str(path), n_rows=1200, seed=7, n_empty_rows=10)
    return str(path)


@pytest.fixture(scope="session")
def small_dataset(small_uci_csv):
    return load_uci_air_quality(small_uci_csv)


def resolve_acceptance_csv(tmp_path_factory):
    """Path to the hourly air-quality CSV used by the acceptance suite.

    Prefers a real UCI Air Quality export (IT2FCM_UCI_PATH env var, or
    data/AirQualityUCI.csv in the repo root); falls back to the bundled
    synthetic surrogate in the same layout. Returns (path, is_real).
    """
    env = os.environ.get("IT2FCM_UCI_PATH")
    if env and os.path.exists(env):
        return env, True
    repo_default = os.path.join(
        os.path.dirname(os.path.dirname(os.path.abspath(__file__))),
        "data", "AirQualityUCI.csv",
    )
    if os.path.exists(repo_default):
        return repo_default, True
    path = tmp_path_factory.mktemp("acceptance") / "air_synthetic.csv"
    synthetic.write_uci_layout(str(path), n_rows=9357, seed=0)
    return str(path), False


@pytest.fixture(scope="session")
def acceptance_csv(tmp_path_factory):
    return resolve_acceptance_csv(tmp_path_factory)
