"""Shared fixtures."""

import numpy as np
import pytest

from cogphase.core import ClassLabel, DatasetMetadata, LabeledDataset
from cogphase.dataio import SynthParams, generate_synthetic, save_dataset


@pytest.fixture
def toy_nb_dataset():
    """class1 = {0, 2}, class2 = {10, 12}, one feature."""
    return LabeledDataset.from_matrix(
        np.array([[0.0], [2.0], [10.0], [12.0]]),
        [1, 1, 2, 2],
        DatasetMetadata(subject_id="toy"),
    )


@pytest.fixture
def two_point_svm():
    """(1, 1) -> Class1, (-1, -1) -> Class2."""
    return LabeledDataset.from_matrix(
        np.array([[1.0, 1.0], [-1.0, -1.0]]),
        [ClassLabel.CLASS1, ClassLabel.CLASS2],
    )


@pytest.fixture
def small_synthetic():
    """12 samples x 64 features, cheap enough for full-protocol runs."""
    return generate_synthetic(SynthParams(n_features=64, samples_per_class=6, seed=3))


@pytest.fixture
def small_synthetic_files(tmp_path, small_synthetic):
    csv_path, sidecar = save_dataset(small_synthetic, tmp_path / "small.csv")
    return csv_path, sidecar
