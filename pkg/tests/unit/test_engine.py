"""
Unit tests for elm/engine.py
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from elm.engine import (
    ElmModel,
    draw_hidden_layer,
    dump_model,
    fit_elm,
    hidden_activations,
    load_model,
    predict,
    rmse,
    sigmoid,
    solve_output_weights,
    train_elm,
)
from exceptions import ElmTrainingError, ShapeMismatchError
from tools.preprocessing import normalize, split_train_test


def _nonlinear_fixture(n=80, seed=0):
    rng = np.random.default_rng(seed)
    X = rng.uniform(-1, 1, size=(n, 2))
    t = 0.5 + 0.4 * np.sin(3 * X[:, 0]) * np.cos(2 * X[:, 1])
    return X, t


class TestSigmoid:
    """Tests for sigmoid function."""

    def test_zero(self):
        """Test g(0) = 0.5."""
        assert sigmoid(0.0) == 0.5

    def test_saturation(self):
        """Test large inputs saturate without overflow."""
        with np.errstate(over="raise"):
            assert sigmoid(1000.0) == pytest.approx(1.0, abs=1e-12)
            assert sigmoid(-1000.0) == pytest.approx(0.0, abs=1e-12)

    @settings(max_examples=100, deadline=None)
    @given(x=st.floats(min_value=-500, max_value=500))
    def test_symmetry(self, x):
        """Test g(x) + g(-x) = 1."""
        assert sigmoid(x) + sigmoid(-x) == pytest.approx(1.0, abs=1e-12)


class TestHiddenLayer:
    """Tests for the seeded hidden-layer draw."""

    def test_ranges(self):
        """Test weights lie in [-1, 1] and biases in [0, 1]."""
        weights, biases = draw_hidden_layer(200, 4, seed=1)
        assert weights.shape == (200, 4) and biases.shape == (200,)
        assert weights.min() >= -1 and weights.max() <= 1
        assert biases.min() >= 0 and biases.max() <= 1

    def test_nested_prefix(self):
        """Test the first k neurons of a larger layer equal a layer of size k."""
        big_w, big_b = draw_hidden_layer(50, 3, seed=9)
        small_w, small_b = draw_hidden_layer(10, 3, seed=9)
        np.testing.assert_array_equal(big_w[:10], small_w)
        np.testing.assert_array_equal(big_b[:10], small_b)


class TestFitElm:
    """Tests for fit_elm and train_elm."""

    def test_deterministic(self):
        """Test the same inputs and seed give a bitwise-identical model."""
        X, t = _nonlinear_fixture()
        a, b = fit_elm(X, t, 15, seed=3), fit_elm(X, t, 15, seed=3)
        np.testing.assert_array_equal(a.input_weights, b.input_weights)
        np.testing.assert_array_equal(a.output_weights, b.output_weights)

    def test_interpolation(self):
        """Test N = 20 distinct inputs with L = 20 fit to RMSE <= 1e-6."""
        rng = np.random.default_rng(5)
        X = rng.uniform(-1, 1, size=(20, 20))
        t = rng.uniform(0, 1, size=20)
        model = fit_elm(X, t, 20, seed=11)
        assert np.linalg.cond(hidden_activations(X, model.input_weights, model.biases)) < 1e8
        assert rmse(predict(model, X), t).value <= 1e-6

    def test_matches_normal_equations(self):
        """Test beta equals the normal-equation solution on a well-conditioned 5 x 3 system."""
        rng = np.random.default_rng(6)
        X = rng.uniform(-1, 1, size=(5, 8))
        t = rng.uniform(0, 1, size=5)
        model = fit_elm(X, t, 3, seed=2)
        H = hidden_activations(X, model.input_weights, model.biases)
        assert np.linalg.cond(H) < 1e4
        expected = np.linalg.solve(H.T @ H, H.T @ t)
        np.testing.assert_allclose(model.output_weights, expected, rtol=1e-6, atol=1e-8)

    def test_least_squares_optimal(self):
        """Test no random perturbation of beta lowers the residual on 100 fixtures."""
        rng = np.random.default_rng(7)
        for _ in range(100):
            n, L = int(rng.integers(5, 30)), int(rng.integers(1, 40))
            H = rng.uniform(0, 1, size=(n, L))
            t = rng.normal(size=n)
            beta = solve_output_weights(H, t)
            best = np.linalg.norm(H @ beta - t)
            for _ in range(20):
                perturbed = beta + rng.normal(scale=1e-3, size=L)
                assert best <= np.linalg.norm(H @ perturbed - t) + 1e-9

    def test_capacity_on_average(self):
        """Test mean training RMSE at L = 100 is no worse than at L = 10 over 10 seeds."""
        X, t = _nonlinear_fixture(n=120)
        small = np.mean([rmse(predict(fit_elm(X, t, 10, s), X), t).value for s in range(10)])
        large = np.mean([rmse(predict(fit_elm(X, t, 100, s), X), t).value for s in range(10)])
        assert large <= small + 1e-6

    def test_bad_hidden_count(self):
        """Test L < 1 is rejected."""
        X, t = _nonlinear_fixture()
        with pytest.raises(ElmTrainingError):
            fit_elm(X, t, 0, seed=0)

    def test_target_length_mismatch(self):
        """Test targets must match the row count."""
        X, t = _nonlinear_fixture()
        with pytest.raises(ShapeMismatchError):
            fit_elm(X, t[:-1], 5, seed=0)

    def test_train_on_dataset(self, synthetic_dataset):
        """Test train_elm on a normalized split predicts the test partition."""
        train, test = split_train_test(normalize(synthetic_dataset), 0.7, seed=1)
        model = train_elm(train, 10, seed=4)
        assert model.n_inputs == train.feature_matrix().shape[1]
        assert predict(model, test.feature_matrix()).shape == (test.n_rows,)


class TestPredict:
    """Tests for predict function."""

    def test_zero_output_weights(self):
        """Test zero beta gives all-zero outputs."""
        weights, biases = draw_hidden_layer(4, 2, seed=0)
        model = ElmModel(weights, biases, np.zeros(4))
        assert predict(model, np.ones((3, 2))).tolist() == [0.0, 0.0, 0.0]

    def test_repeated_row(self):
        """Test a row repeated k times gives k identical outputs."""
        X, t = _nonlinear_fixture()
        model = fit_elm(X, t, 8, seed=1)
        outputs = predict(model, np.repeat(X[:1], 5, axis=0))
        assert len(set(outputs.tolist())) == 1

    def test_dimension_mismatch(self):
        """Test rows with the wrong width are rejected."""
        X, t = _nonlinear_fixture()
        model = fit_elm(X, t, 8, seed=1)
        with pytest.raises(ShapeMismatchError):
            predict(model, np.ones((2, 3)))

    def test_dump_and_load(self, tmp_path):
        """Test a dumped model predicts identically after loading."""
        X, t = _nonlinear_fixture()
        model = fit_elm(X, t, 6, seed=2)
        restored = load_model(dump_model(model, tmp_path / "elm.json"))
        np.testing.assert_array_equal(predict(restored, X), predict(model, X))


class TestRmse:
    """Tests for rmse function."""

    def test_perfect(self):
        """Test P = T gives 0."""
        assert rmse([1.0, 2.0], [1.0, 2.0]).value == 0.0

    def test_swapped(self):
        """Test P = {0,1}, T = {1,0} gives 1."""
        score = rmse([0.0, 1.0], [1.0, 0.0])
        assert score.value == 1.0
        assert score.n == 2

    def test_oracle(self):
        """Test a random 100-vector pair matches the direct formula."""
        rng = np.random.default_rng(8)
        p, t = rng.normal(size=100), rng.normal(size=100)
        expected = (sum((a - b) ** 2 for a, b in zip(p, t)) / 100) ** 0.5
        assert rmse(p, t).value == pytest.approx(expected, abs=1e-12)

    def test_length_mismatch(self):
        """Test unequal lengths are rejected."""
        with pytest.raises(ShapeMismatchError):
            rmse([1.0], [1.0, 2.0])
