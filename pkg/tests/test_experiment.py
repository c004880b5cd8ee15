"""Tests for configurations C1-C8, LOOCV and repeated evaluation."""

import json

import numpy as np
import pytest

from cogphase.classifiers import ClassifierType, NaiveBayesClassifier
from cogphase.core import ClassLabel, DatasetMetadata, LabeledDataset, RngSeed
from cogphase.dataio import SynthParams, generate_synthetic
from cogphase.errors import ConfigDimensionMismatchError, EmptyClassError, InvalidParamsError
from cogphase.experiment import (
    ConfigId,
    FeatureStage,
    PipelineConfig,
    loocv,
    parse_configs,
    run_all,
    run_pipeline,
    transform_features,
)
from cogphase.sieve import sample_mask
from cogphase.spectral import DhtMode


class CountingNB(NaiveBayesClassifier):
    """Naive Bayes that records the size of every training set."""

    def __init__(self):
        super().__init__()
        self.train_sizes = []

    def fit(self, features, labels):
        self.train_sizes.append(len(labels))
        return super().fit(features, labels)


# =============================================================================
# Configurations
# =============================================================================

def test_config_stage_chain():
    expected = {
        ConfigId.C1: (FeatureStage.RAW, ClassifierType.NAIVE_BAYES),
        ConfigId.C2: (FeatureStage.RAW, ClassifierType.SVM),
        ConfigId.C3: (FeatureStage.SIEVE, ClassifierType.NAIVE_BAYES),
        ConfigId.C4: (FeatureStage.SIEVE, ClassifierType.SVM),
        ConfigId.C5: (FeatureStage.SIEVE_DFT_PHASE, ClassifierType.NAIVE_BAYES),
        ConfigId.C6: (FeatureStage.SIEVE_DFT_PHASE, ClassifierType.SVM),
        ConfigId.C7: (FeatureStage.SIEVE_DHT_PHASE, ClassifierType.NAIVE_BAYES),
        ConfigId.C8: (FeatureStage.SIEVE_DHT_PHASE, ClassifierType.SVM),
    }
    for cid, (stage, clf) in expected.items():
        assert cid.stage is stage
        assert cid.classifier_type is clf


def test_parse_configs():
    assert parse_configs("all") == tuple(ConfigId)
    assert parse_configs("c5,C1") == (ConfigId.C1, ConfigId.C5)
    assert parse_configs(["c8", "c8"]) == (ConfigId.C8,)
    with pytest.raises(InvalidParamsError):
        parse_configs("c9")


# =============================================================================
# LOOCV
# =============================================================================

def test_loocv_four_points():
    # a single remaining class sample has floored variance, so clusters must be tight
    ds = LabeledDataset.from_matrix(np.array([[0.0], [1e-6], [10.0], [10.000001]]), [1, 1, 2, 2])
    accuracy, confusion, folds = loocv(ds, ClassifierType.NAIVE_BAYES)
    assert accuracy == 100.0
    assert confusion.to_list() == [[2, 0], [0, 2]]
    assert [f.index for f in folds] == [0, 1, 2, 3]


def test_loocv_runs_one_fold_per_sample():
    ds = generate_synthetic(SynthParams(n_features=32, samples_per_class=40, harmonics=(3,)))
    clf = CountingNB()
    accuracy, confusion, folds = loocv(ds, clf)
    assert len(folds) == 80
    assert sorted(f.index for f in folds) == list(range(80))
    assert clf.train_sizes == [79] * 80
    assert confusion.row_sums.tolist() == [40, 40]
    assert accuracy == confusion.accuracy


def test_loocv_indistinguishable_classes():
    ds = LabeledDataset.from_matrix(np.ones((6, 3)), [1, 2, 1, 2, 1, 2])
    accuracy, confusion, _ = loocv(ds, ClassifierType.NAIVE_BAYES)
    # held-out class makes the other class the majority, so every fold is wrong
    assert accuracy == 0.0
    assert confusion.row_sums.tolist() == [3, 3]


def test_loocv_needs_two_per_class():
    ds = LabeledDataset.from_matrix(np.array([[0.0], [1.0], [5.0]]), [1, 1, 2])
    with pytest.raises(EmptyClassError):
        loocv(ds, ClassifierType.NAIVE_BAYES)


def test_fold_isolation(toy_nb_dataset):
    """Changing the held-out sample leaves that fold's model untouched."""
    clf = NaiveBayesClassifier()
    x = toy_nb_dataset.feature_matrix.copy()
    y = toy_nb_dataset.label_array
    keep = np.array([True, True, True, False])
    before = clf.fit(x[keep], y[keep])
    x[3, 0] = 1e6
    after = clf.fit(x[keep], y[keep])
    assert np.array_equal(before.means, after.means)
    assert np.array_equal(before.variances, after.variances)


# =============================================================================
# Transforms
# =============================================================================

def test_transform_shares_one_mask(small_synthetic):
    config = PipelineConfig(ConfigId.C3)
    mask = sample_mask(small_synthetic.feature_dim, 20, RngSeed(1))
    out, near_zero = transform_features(config, small_synthetic.feature_matrix, mask)
    assert near_zero is None
    assert np.all(out[:, mask.zero_positions] == 0.0)


@pytest.mark.parametrize("config_id", [ConfigId.C3, ConfigId.C5, ConfigId.C7])
def test_transform_before_or_after_split(small_synthetic, config_id):
    config = PipelineConfig(config_id)
    mask = sample_mask(small_synthetic.feature_dim, 32, RngSeed(2))
    x = small_synthetic.feature_matrix
    whole, _ = transform_features(config, x, mask)
    part, _ = transform_features(config, x[[1, 4, 9]], mask)
    assert np.max(np.abs(np.exp(1j * whole[[1, 4, 9]]) - np.exp(1j * part))) < 1e-9


def test_transform_phase_ranges(small_synthetic):
    mask = sample_mask(small_synthetic.feature_dim, 32, RngSeed(3))
    x = small_synthetic.feature_matrix
    dft_phase, near_zero = transform_features(PipelineConfig(ConfigId.C6), x, mask)
    assert np.all(dft_phase > -np.pi) and np.all(dft_phase <= np.pi)
    assert near_zero >= 0
    literal_config = PipelineConfig(ConfigId.C8, dht_mode=DhtMode.LITERAL)
    literal, _ = transform_features(literal_config, x, mask)
    assert set(np.unique(literal).tolist()) <= {0.0, np.pi}


def test_sieve_config_needs_mask(small_synthetic):
    with pytest.raises(InvalidParamsError):
        transform_features(PipelineConfig(ConfigId.C4), small_synthetic.feature_matrix)


# =============================================================================
# Repetitions and reports
# =============================================================================

def test_raw_configs_run_once(small_synthetic):
    report = run_all(small_synthetic, seed=0, repetitions=50, configs=[ConfigId.C1, ConfigId.C2])
    for c in report.configs:
        assert len(c.repetitions) == 1
        assert c.std_accuracy == 0.0


def test_confusion_rows_match_class_counts(small_synthetic):
    report = run_pipeline(PipelineConfig(ConfigId.C4), small_synthetic, seed=9, repetitions=3)
    config = report.get("c4")
    assert len(config.repetitions) == 3
    for rep in config.repetitions:
        assert rep.confusion.row_sums.tolist() == [6, 6]
        assert rep.accuracy == np.trace(rep.confusion.counts) / 12 * 100
    assert np.allclose(config.mean_confusion.sum(axis=1), [6.0, 6.0])
    assert config.std_accuracy == float(np.std(config.accuracies, ddof=1))


def test_repetition_masks_follow_seed_streams(small_synthetic):
    report = run_pipeline(PipelineConfig(ConfigId.C3, sieve_m=10), small_synthetic, 5, 2)
    reps = report.configs[0].repetitions
    for rep in reps:
        assert rep.mask == sample_mask(64, 10, RngSeed(5, rep.repetition))
    assert reps[0].mask != reps[1].mask


def test_report_is_deterministic_across_thread_counts(small_synthetic):
    kwargs = dict(seed=42, repetitions=3, configs=[ConfigId.C1, ConfigId.C5, ConfigId.C8])
    first = run_all(small_synthetic, n_jobs=1, **kwargs).to_json()
    again = run_all(small_synthetic, n_jobs=1, **kwargs).to_json()
    threaded = run_all(small_synthetic, n_jobs=3, **kwargs).to_json()
    assert first == again == threaded


def test_single_repetition_parallel_folds(small_synthetic):
    kwargs = dict(seed=1, repetitions=1, configs=[ConfigId.C6])
    assert run_all(small_synthetic, n_jobs=1, **kwargs).to_json() == run_all(
        small_synthetic, n_jobs=4, **kwargs
    ).to_json()


def test_report_records_decisions(small_synthetic):
    report = run_all(small_synthetic, seed=7, repetitions=2, configs=[ConfigId.C5],
                     sieve_m=16, export_masks=True)
    data = json.loads(report.to_json())
    decisions = data["decisions"]
    for key in (
        "sieve.replacement", "sieve.m", "sieve.n", "spectral.convention", "spectral.dht_mode",
        "nb.likelihood", "nb.variance", "svm.c_cap", "svm.kkt_tol", "svm.max_passes",
        "experiment.std", "experiment.tie_break", "dataio.normalization",
    ):
        assert key in decisions
    assert decisions["sieve.m"] == 16
    assert decisions["sieve.replacement"] is False
    assert decisions["spectral.convention"] == "zero_based"

    config = data["configs"][0]
    assert config["parameters"]["sieve.m"] == 16
    assert len(config["masks"]) == 2
    assert all(len(mask) == 16 for mask in config["masks"])
    assert len(config["near_zero_bins"]) == 2
    assert data["dataset"]["class_counts"] == {"1": 6, "2": 6}


def test_raw_only_run_ignores_sieve_m(small_synthetic):
    report = run_all(small_synthetic, seed=7, repetitions=2, configs=[ConfigId.C1, ConfigId.C2],
                     sieve_m=1000)
    assert report.decisions["sieve.m"] is None
    assert [len(c.repetitions) for c in report.configs] == [1, 1]

    mixed = run_all(small_synthetic, seed=7, repetitions=1, configs=[ConfigId.C1, ConfigId.C7],
                    sieve_m=20)
    assert mixed.decisions["sieve.m"] == 20


def test_dimension_mismatch_is_rejected(small_synthetic):
    with pytest.raises(ConfigDimensionMismatchError):
        run_pipeline(PipelineConfig(ConfigId.C3, sieve_n=100), small_synthetic, 0, 1)


def test_empty_dataset_fails_before_any_row():
    with pytest.raises(EmptyClassError):
        run_all(LabeledDataset((), (), DatasetMetadata()), seed=0, repetitions=1)


def test_invalid_repetitions(small_synthetic):
    with pytest.raises(InvalidParamsError):
        run_all(small_synthetic, seed=0, repetitions=0)


@pytest.mark.slow
def test_phase_configs_on_default_synthetic_data():
    ds = generate_synthetic()
    report = run_all(ds, seed=42, repetitions=10, n_jobs=4)
    assert [row[0] for row in report.rows()] == [c.value for c in ConfigId]
    accuracy = {c.config_id: c.mean_accuracy for c in report.configs}
    assert accuracy[ConfigId.C1] <= 75.0
    for cid in (ConfigId.C5, ConfigId.C6, ConfigId.C7, ConfigId.C8):
        assert accuracy[cid] >= 90.0
    # each phase config beats its intensity counterpart by at least ten points
    for phase, raw in ((ConfigId.C5, ConfigId.C1), (ConfigId.C6, ConfigId.C2),
                       (ConfigId.C7, ConfigId.C3), (ConfigId.C8, ConfigId.C4)):
        assert accuracy[phase] - accuracy[raw] >= 10.0
    for c in report.configs:
        for rep in c.repetitions:
            assert rep.confusion.row_sums.tolist() == [40, 40]
            assert all(f.true_label is ClassLabel(int(ds.label_array[f.index])) for f in rep.folds)
