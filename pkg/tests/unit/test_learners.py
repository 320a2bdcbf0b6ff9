"""
Unit tests for the learners package
"""

import numpy as np
import pytest

from exceptions import ConfigHashMismatchError, ConfigurationError, MetaLearnerError, ShapeMismatchError, UnknownFamilyError
from features.meta_features import FEATURE_NAMES, MetaFeatureVector
from learners import (
    PRESETS,
    fit,
    fit_arrays,
    load_model,
    predict_raw,
    recommend,
    resolve_learner,
    round_and_clamp,
    save_model,
)
from learners.m5 import M5Params, ModelTreeRegressor, candidate_splits
from learners.svr import SupportVectorRegressor, SvrParams
from tests.conftest import make_metabase, random_metabase

N_FEATURES = len(FEATURE_NAMES)


def _sine_metabase(n=20):
    X = np.zeros((n, N_FEATURES))
    X[:, 0] = np.linspace(0.0, 1.0, n)
    labels = np.rint(150 + 100 * np.sin(2 * np.pi * X[:, 0])).astype(int)
    return make_metabase(X, labels)


class TestPresets:
    """Tests for learner presets and resolution."""

    def test_preset_names(self):
        """Test every documented preset is available."""
        assert set(PRESETS) == {
            "knn1",
            "linear",
            "m5",
            "svr-poly",
            "svr-rbf-0.01",
            "svr-rbf-0.1",
            "svr-rbf-1",
            "mean",
            "heuristic",
        }

    def test_bare_family(self):
        """Test a family name resolves without a preset."""
        assert resolve_learner("svr").family == "svr"

    def test_unknown_family(self):
        """Test an unknown learner is rejected."""
        with pytest.raises(UnknownFamilyError):
            resolve_learner("random-forest")

    def test_bad_parameters(self):
        """Test invalid parameters fail validation."""
        with pytest.raises(ConfigurationError):
            resolve_learner({"family": "svr", "params": {"C": -1}})
        with pytest.raises(ConfigurationError):
            resolve_learner({"family": "m5", "params": {"depth": 3}})

    def test_spec_hash_stable(self):
        """Test a preset hashes the same every time."""
        assert PRESETS["svr-poly"].hash() == resolve_learner("svr-poly").hash()


class TestFitContract:
    """Tests for the shared fit/predict contract."""

    def test_wrong_feature_count(self):
        """Test a 15-column matrix is rejected."""
        with pytest.raises(ShapeMismatchError):
            fit_arrays("linear", np.zeros((5, 15)), np.arange(5.0), (1, 300))

    def test_too_few_examples(self):
        """Test families needing two examples refuse one."""
        with pytest.raises(MetaLearnerError):
            fit_arrays("linear", np.zeros((1, N_FEATURES)), [5.0], (1, 300))

    def test_immutable_after_fit(self, small_metabase):
        """Test a fitted model cannot be changed."""
        model = fit("knn1", None, small_metabase)
        with pytest.raises(AttributeError):
            model.label_range = (1, 10)

    def test_refit_rejected(self, small_metabase):
        """Test fitting a fitted model again is an error."""
        model = fit("mean", None, small_metabase)
        with pytest.raises(MetaLearnerError):
            model.fit(small_metabase.feature_matrix, small_metabase.labels)

    def test_carries_range_and_hash(self, small_metabase):
        """Test the model remembers the meta-base label range and feature hash."""
        model = fit("linear", None, small_metabase)
        assert model.label_range == small_metabase.label_range
        assert model.config_hash == small_metabase.feature_config_hash

    def test_constant_labels_warned(self):
        """Test constant labels are flagged for linear and SVR."""
        metabase = make_metabase(np.random.default_rng(0).normal(size=(6, N_FEATURES)), [9] * 6)
        for name in ("linear", "svr-rbf-0.1"):
            model = fit(name, None, metabase)
            assert "constant_labels" in model.warnings
            assert predict_raw(model, MetaFeatureVector(metabase.feature_matrix[0])) == pytest.approx(9.0, abs=1e-6)

    @pytest.mark.parametrize("name", sorted(PRESETS))
    def test_save_and_load(self, name, tmp_path):
        """Test a reloaded model predicts bit-identically."""
        metabase = random_metabase(30, seed=2)
        model = fit(name, None, metabase)
        restored = load_model(save_model(model, tmp_path / f"{name}.json"))
        queries = np.random.default_rng(3).normal(size=(10, N_FEATURES))
        np.testing.assert_array_equal(restored.predict_raw(queries), model.predict_raw(queries))
        assert restored.to_dict() == model.to_dict()


class TestNearestNeighbor:
    """Tests for the 1-NN learner."""

    def test_single_example(self):
        """Test one training example is predicted everywhere."""
        model = fit_arrays("knn1", np.zeros((1, N_FEATURES)), [42.0], (1, 300))
        queries = np.random.default_rng(1).normal(size=(5, N_FEATURES))
        assert model.predict_raw(queries).tolist() == [42.0] * 5

    def test_training_point_returns_own_label(self, small_metabase):
        """Test every training vector maps to its own label."""
        model = fit("knn1", None, small_metabase)
        np.testing.assert_array_equal(model.predict_raw(small_metabase.feature_matrix), small_metabase.labels)

    def test_tie_goes_to_first(self):
        """Test duplicate vectors resolve to the lowest training index."""
        X = np.zeros((3, N_FEATURES))
        X[2, 0] = 1.0
        model = fit_arrays("knn1", X, [10.0, 20.0, 30.0], (1, 300))
        assert model.predict_raw(X[:1]).tolist() == [10.0]


class TestLinear:
    """Tests for the linear learner."""

    def test_exact_linear_labels(self):
        """Test labels linear in one meta-feature are reproduced."""
        rng = np.random.default_rng(4)
        X = rng.normal(size=(40, N_FEATURES))
        column = FEATURE_NAMES.index("n_examples")
        X[:, column] = rng.integers(100, 5000, size=40)
        y = 3.0 + 0.02 * X[:, column]
        model = fit_arrays("linear", X, y, (1, 300))
        assert np.max(np.abs(model.predict_raw(X) - y)) <= 1e-6
        assert "ridge_fallback" not in model.warnings

    def test_residual_orthogonal(self):
        """Test training residuals are orthogonal to the scaled design."""
        metabase = random_metabase(40, seed=6)
        model = fit("linear", None, metabase)
        Z = model.scaler.transform(metabase.feature_matrix)
        residual = metabase.labels - model.predict_raw(metabase.feature_matrix)
        assert abs(residual.sum()) <= 1e-6
        np.testing.assert_allclose(Z.T @ residual, 0.0, atol=1e-6)

    def test_rank_deficient_falls_back(self, small_metabase):
        """Test fewer examples than coefficients use the ridge fallback."""
        assert "ridge_fallback" in fit("linear", None, small_metabase).warnings


class TestSupportVector:
    """Tests for the SVR learner."""

    def test_poly_degree_one_is_dot_product(self):
        """Test the degree-1 polynomial kernel on (1, 2) and (3, 4) gives 11."""
        model = SupportVectorRegressor("svr-poly", SvrParams(kernel="poly"))
        assert model.kernel(np.array([[1.0, 2.0]]), np.array([[3.0, 4.0]]))[0, 0] == pytest.approx(11.0)

    def test_rbf_beats_mean_on_sine(self):
        """Test an RBF machine fits a sinusoid better than the mean label."""
        metabase = _sine_metabase()
        model = fit("svr", {"kernel": "rbf", "gamma": 10.0}, metabase)
        svr_error = np.abs(model.predict_raw(metabase.feature_matrix) - metabase.labels).sum()
        mean_error = np.abs(metabase.labels.mean() - metabase.labels).sum()
        assert svr_error < 0.5 * mean_error

    def test_kkt_conditions(self):
        """Test the dual solution satisfies the box and tube conditions."""
        metabase = _sine_metabase()
        model = fit("svr", {"kernel": "rbf", "gamma": 10.0, "epsilon": 0.1}, metabase)
        report = model.kkt_report(metabase.feature_matrix, metabase.labels)
        assert report.ok
        assert report.max_abs_coefficient <= 1.0 + 1e-3


class TestModelTree:
    """Tests for the M5 learner."""

    def _check_node(self, node, Z, y, min_leaf):
        if node.is_leaf:
            return
        candidates = candidate_splits(Z, y, min_leaf)
        assert node.sdr >= max(c.sdr for c in candidates) - 1e-12
        goes_left = Z[:, node.split.attribute] <= node.split.threshold
        assert goes_left.sum() >= min_leaf and (~goes_left).sum() >= min_leaf
        self._check_node(node.left, Z[goes_left], y[goes_left], min_leaf)
        self._check_node(node.right, Z[~goes_left], y[~goes_left], min_leaf)

    def test_splits_maximize_sdr(self):
        """Test every split has the largest SDR among its node's candidates."""
        metabase = random_metabase(80, seed=8)
        model = fit("m5", {"prune": False}, metabase)
        assert not model.root.is_leaf
        Z = model.scaler.transform(metabase.feature_matrix)
        self._check_node(model.root, Z, metabase.labels, M5Params().min_leaf)

    def test_single_leaf_is_ols(self):
        """Test a tree too small to split predicts like linear regression."""
        metabase = random_metabase(30, seed=9)
        tree = fit("m5", {"prune": False, "min_leaf": 20}, metabase)
        assert tree.root.is_leaf
        linear = fit("linear", None, metabase)
        np.testing.assert_allclose(
            tree.predict_raw(metabase.feature_matrix),
            linear.predict_raw(metabase.feature_matrix),
            rtol=1e-6,
            atol=1e-6,
        )

    def test_pruning_never_grows_tree(self):
        """Test the pruned tree has no more leaves than the unpruned one."""
        metabase = random_metabase(80, seed=10)
        pruned = fit("m5", None, metabase)
        full = fit("m5", {"prune": False}, metabase)
        assert pruned.root.n_leaves() <= full.root.n_leaves()

    def test_min_leaf_validated(self):
        """Test min_leaf below 2 is rejected."""
        with pytest.raises(ConfigurationError):
            ModelTreeRegressor("m5", M5Params(min_leaf=1))


class TestBaselines:
    """Tests for the mean and heuristic learners."""

    def test_mean(self, small_metabase):
        """Test the mean learner predicts the training mean."""
        model = fit("mean", None, small_metabase)
        assert model.predict_raw(np.zeros((1, N_FEATURES)))[0] == pytest.approx(small_metabase.labels.mean())

    def test_heuristic(self, small_metabase):
        """Test the heuristic halves attributes plus one output."""
        model = fit("heuristic", None, small_metabase)
        values = np.zeros(N_FEATURES)
        values[FEATURE_NAMES.index("n_attributes")] = 9
        assert model.predict_raw(values[None, :])[0] == 5.0


class TestRecommend:
    """Tests for rounding, clamping and recommend."""

    def test_rounds_to_nearest(self):
        """Test 93.4 rounds to 93 and 92.5 rounds up."""
        assert round_and_clamp(93.4, (1, 300)) == 93
        assert round_and_clamp(92.5, (1, 300)) == 93

    def test_clamps(self):
        """Test -12 clamps to 1 and 450 to 300."""
        assert round_and_clamp(-12.0, (1, 300)) == 1
        assert round_and_clamp(450.0, (1, 300)) == 300

    def test_recommend_in_range(self, small_metabase):
        """Test recommendations are integers within the label range."""
        model = fit("linear", None, small_metabase)
        vector = MetaFeatureVector(np.full(N_FEATURES, 50.0), (), small_metabase.feature_config_hash)
        count = recommend(model, vector)
        assert isinstance(count, int)
        assert 1 <= count <= 300

    def test_hash_mismatch(self, small_metabase):
        """Test a vector from another extractor config is refused."""
        model = fit("knn1", None, small_metabase)
        with pytest.raises(ConfigHashMismatchError):
            recommend(model, MetaFeatureVector(np.zeros(N_FEATURES), (), "0000000000000000"))
