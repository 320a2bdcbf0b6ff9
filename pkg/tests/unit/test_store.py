"""
Unit tests for metabase/store.py
"""

import numpy as np
import pytest

from exceptions import DuplicateNameError, MetaBaseError, MetaBaseSchemaError, MetaBaseVersionError
from features.meta_features import FEATURE_NAMES, FeatureConfig, MetaFeatureVector
from metabase.store import HEADER, build_metabase, label_mean, load_metabase, save_metabase
from search.label_search import SweepLabel
from tests.conftest import make_metabase, random_metabase
from utils.files import read_json, sidecar_path, write_json


def _vector(seed=0, **named):
    values = np.random.default_rng(seed).normal(size=len(FEATURE_NAMES))
    for name, value in named.items():
        values[FEATURE_NAMES.index(name)] = value
    return MetaFeatureVector(values, (), FeatureConfig().hash())


def _label(name, count, n_min=1, n_max=300):
    return SweepLabel(name, count, 0.05, n_min, n_max)


class TestBuildMetabase:
    """Tests for build_metabase function."""

    def test_matching_names(self):
        """Test three matching names give three examples."""
        features = [(n, _vector(i)) for i, n in enumerate("abc")]
        metabase = build_metabase(features, [_label(n, 5) for n in "abc"])
        assert metabase.names == ["a", "b", "c"]
        assert metabase.provenance["skipped"] == []

    def test_join_reports_skips(self):
        """Test features {a,b} and sweeps {b,c} give one example and two skips."""
        metabase = build_metabase([("a", _vector(0)), ("b", _vector(1))], [_label("b", 7), _label("c", 9)])
        assert metabase.names == ["b"]
        assert metabase.provenance["skipped"] == ["a", "c"]

    def test_sample_rows(self):
        """Test the two sample rows keep their features and labels."""
        first = _vector(0, n_examples=100, n_attributes=3, n_continuous_with_outliers=0)
        second = _vector(1, n_examples=209, n_attributes=6, n_continuous_with_outliers=5)
        metabase = build_metabase([("p1", first), ("p2", second)], [_label("p1", 4), _label("p2", 32)])
        by_name = {e.dataset_name: e for e in metabase.examples}
        assert by_name["p1"].label == 4
        assert by_name["p2"].label == 32
        assert by_name["p1"].features[FEATURE_NAMES.index("n_examples")] == 100
        assert by_name["p2"].features[FEATURE_NAMES.index("n_attributes")] == 6

    def test_order_insensitive(self):
        """Test shuffled inputs give the same meta-base."""
        names = [f"ds{i}" for i in range(8)]
        features = [(n, _vector(i)) for i, n in enumerate(names)]
        labels = [_label(n, 10 + i) for i, n in enumerate(names)]
        rng = np.random.default_rng(3)
        shuffled_features = [features[i] for i in rng.permutation(8)]
        shuffled_labels = [labels[i] for i in rng.permutation(8)]
        assert build_metabase(shuffled_features, shuffled_labels) == build_metabase(features, labels)

    def test_nothing_shared(self):
        """Test disjoint inputs are an error."""
        with pytest.raises(MetaBaseError):
            build_metabase([("a", _vector())], [_label("b", 3)])

    def test_duplicate_feature_name(self):
        """Test a name listed twice is an error."""
        with pytest.raises(DuplicateNameError):
            build_metabase([("a", _vector(0)), ("a", _vector(1))], [_label("a", 3)])

    def test_mixed_ranges(self):
        """Test labels from different sweep ranges cannot be joined."""
        with pytest.raises(MetaBaseError):
            build_metabase(
                [("a", _vector(0)), ("b", _vector(1))],
                [_label("a", 3), _label("b", 3, n_max=60)],
            )

    def test_other_feature_config(self):
        """Test vectors extracted with another config are rejected."""
        stray = MetaFeatureVector(_vector().values, (), FeatureConfig(outlier_factor=3.0).hash())
        with pytest.raises(MetaBaseError):
            build_metabase([("a", stray)], [_label("a", 3)])

    def test_provenance(self):
        """Test provenance records the extractor config, its hash and the label range."""
        config = FeatureConfig(cv_low=0.4)
        vector = MetaFeatureVector(_vector().values, (), config.hash())
        metabase = build_metabase([("a", vector)], [_label("a", 3, n_max=40)], feature_config=config)
        assert metabase.provenance["feature_config"] == config.to_dict()
        assert metabase.feature_config_hash == config.hash()
        assert metabase.label_range == (1, 40)


class TestPersistence:
    """Tests for save_metabase / load_metabase."""

    def test_round_trip(self, tmp_path):
        """Test 100 random meta-bases read back equal."""
        path = tmp_path / "metabase.csv"
        for trial in range(100):
            metabase = random_metabase(int(2 + trial % 9), seed=trial)
            assert load_metabase(save_metabase(metabase, path)) == metabase

    def test_label_parses_to_int(self, tmp_path):
        """Test the label column '4' reads as the integer 4."""
        metabase = make_metabase(np.zeros((1, len(FEATURE_NAMES))), [4])
        loaded = load_metabase(save_metabase(metabase, tmp_path / "metabase.csv"))
        assert loaded.examples[0].label == 4
        assert isinstance(loaded.examples[0].label, int)

    def test_fifteen_feature_columns(self, tmp_path):
        """Test a row with 15 features is rejected with its line number."""
        path = save_metabase(make_metabase(np.zeros((1, len(FEATURE_NAMES))), [4]), tmp_path / "metabase.csv")
        lines = path.read_text(encoding="utf-8").splitlines()
        lines.append(",".join(["short"] + ["0.0"] * 15 + ["7"]))
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        with pytest.raises(MetaBaseSchemaError) as exc:
            load_metabase(path)
        assert exc.value.row == 3
        assert "15" in exc.value.message

    def test_header_written(self, tmp_path):
        """Test the CSV header lists dataset, the 16 features and label."""
        path = save_metabase(random_metabase(3), tmp_path / "metabase.csv")
        assert path.read_text(encoding="utf-8").splitlines()[0] == ",".join(HEADER)

    def test_version_mismatch(self, tmp_path):
        """Test another schema version is refused."""
        path = save_metabase(random_metabase(3), tmp_path / "metabase.csv")
        meta_path = sidecar_path(path, ".meta.json")
        provenance = read_json(meta_path)
        provenance["schema_version"] = 99
        write_json(meta_path, provenance)
        with pytest.raises(MetaBaseVersionError):
            load_metabase(path)

    def test_missing_sidecar(self, tmp_path):
        """Test a meta-base without its provenance file is refused."""
        path = save_metabase(random_metabase(3), tmp_path / "metabase.csv")
        sidecar_path(path, ".meta.json").unlink()
        with pytest.raises(MetaBaseError):
            load_metabase(path)


class TestLabelMean:
    """Tests for label_mean function."""

    def test_sample_labels(self):
        """Test labels {4, 32, 215, 142} average 98.25."""
        metabase = make_metabase(np.zeros((4, len(FEATURE_NAMES))), [4, 32, 215, 142])
        assert label_mean(metabase) == 98.25

    def test_single_example(self):
        """Test a single example gives its own label."""
        assert label_mean(make_metabase(np.zeros((1, len(FEATURE_NAMES))), [17])) == 17.0

    def test_empty(self):
        """Test an empty meta-base is an error."""
        with pytest.raises(MetaBaseError):
            label_mean(make_metabase(np.zeros((0, len(FEATURE_NAMES))), []))
