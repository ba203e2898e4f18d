"""Shared fixtures for the test suite."""

from pathlib import Path

import numpy as np
import pytest

from services import FeatureMatrix, ModalityDataset, PairedCorpus, SpaceKind


def write_text(path: Path, text: str) -> Path:
    path.write_text(text, encoding="utf-8")
    return path


def make_dataset(values, labels=None, space=SpaceKind.EUCLIDEAN) -> ModalityDataset:
    values = np.asarray(values, dtype=float)
    ids = tuple(str(i) for i in range(values.shape[0]))
    if labels is None:
        labels = ids
    return ModalityDataset(FeatureMatrix(values), ids, tuple(labels), space)


@pytest.fixture
def write(tmp_path):
    """Write a text file under tmp_path and return its path."""
    def _write(name: str, text: str) -> Path:
        return write_text(tmp_path / name, text)
    return _write


@pytest.fixture
def rng():
    return np.random.default_rng(42)


@pytest.fixture
def mirrored_corpus(rng):
    """Modality B is an exact copy of A; every object is its own class."""
    values = rng.standard_normal((24, 4))
    data = make_dataset(values)
    return PairedCorpus(data, data, tuple((i, i) for i in range(24)))


@pytest.fixture
def corpus_files(tmp_path, rng):
    """A small paired corpus on disk: 12 objects per modality, three labels."""
    labels = "\n".join(["cat", "dog", "bird"] * 4) + "\n"
    a = rng.standard_normal((12, 3))
    b = rng.standard_normal((12, 2))

    paths = {
        "features_a": tmp_path / "a.csv",
        "labels_a": tmp_path / "a_labels.txt",
        "features_b": tmp_path / "b.csv",
        "labels_b": tmp_path / "b_labels.txt",
        "pairs": tmp_path / "pairs.txt",
    }
    paths["features_a"].write_text(
        "\n".join(",".join(repr(float(v)) for v in row) for row in a) + "\n"
    )
    paths["features_b"].write_text(
        "\n".join(",".join(repr(float(v)) for v in row) for row in b) + "\n"
    )
    paths["labels_a"].write_text(labels)
    paths["labels_b"].write_text(labels)
    paths["pairs"].write_text("\n".join(f"{i},{i}" for i in range(12)) + "\n")
    return paths
