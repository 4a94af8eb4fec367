import os
from pathlib import Path

import numpy as np
import pytest

from mlne.graph import Graph

REPO_ROOT = Path(__file__).resolve().parents[1]


def dataset_dir():
    return Path(os.environ.get("MLNE_DATA_DIR", REPO_ROOT / "data"))


def require_dataset(name):
    """Return (edges_path, labels_path) for a benchmark dataset, or skip.

    Benchmark files are not redistributable with this repository; place
    them under ./data (or $MLNE_DATA_DIR) as <name>.edges / <name>.labels.
    """
    d = dataset_dir()
    edges = d / f"{name}.edges"
    labels = d / f"{name}.labels"
    if not edges.exists():
        pytest.skip(f"benchmark dataset {name!r} not available: "
                    f"expected {edges} (set MLNE_DATA_DIR)")
    return edges, labels if labels.exists() else None


def random_graph(n, p, seed):
    """Erdos-Renyi G(n, p) over internal indices; retries until non-empty."""
    rng = np.random.default_rng(seed)
    for _ in range(50):
        mask = rng.random((n, n)) < p
        edges = [(str(i), str(j)) for i in range(n) for j in range(i + 1, n)
                 if mask[i, j]]
        if edges:
            return Graph.from_edges(edges)
    raise AssertionError("could not draw a non-empty random graph")


@pytest.fixture
def triangle():
    return Graph.from_edges([("0", "1"), ("1", "2"), ("2", "0")])


@pytest.fixture
def two_triangles():
    return Graph.from_edges([("0", "1"), ("1", "2"), ("2", "0"),
                             ("3", "4"), ("4", "5"), ("5", "3")])


@pytest.fixture
def star5():
    return Graph.from_edges([("hub", "a"), ("hub", "b"),
                             ("hub", "c"), ("hub", "d")])


@pytest.fixture
def path3():
    return Graph.from_edges([("0", "1"), ("1", "2")])
