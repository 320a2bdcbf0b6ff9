"""
Unit tests for search/label_search.py
"""

import numpy as np
import pytest

from exceptions import ConfigurationError, DatasetValidationError, SweepError
from search.label_search import (
    CountStats,
    SweepConfig,
    SweepLabel,
    derive_seed,
    label_histogram,
    load_sweep,
    read_summary,
    run_sweep,
    save_sweep,
    select_best_count,
    sweep_corpus,
    write_summary,
)
from tests.conftest import make_dataset
from tools.preprocessing import normalize
from tools.synthetic import make_sinusoid_dataset


@pytest.fixture
def noisy_line():
    """150 rows, one input, linear target with light noise."""
    rng = np.random.default_rng(21)
    x = rng.uniform(-1, 1, size=150)
    y = 3.0 * x + 0.05 * rng.normal(size=150)
    return normalize(make_dataset(x, y, name="line"))


def _labels(*counts, n_min=1, n_max=300):
    return [SweepLabel(f"d{i}", c, 0.1, n_min, n_max) for i, c in enumerate(counts)]


class TestSweepConfig:
    """Tests for SweepConfig validation."""

    def test_inverted_range(self):
        """Test n_min > n_max is rejected."""
        with pytest.raises(ConfigurationError):
            SweepConfig(n_min=10, n_max=5).validate()

    def test_zero_repetitions(self):
        """Test repetitions must be positive."""
        with pytest.raises(ConfigurationError):
            SweepConfig(repetitions=0).validate()

    def test_dict_round_trip(self):
        """Test to_dict / from_dict keeps every field."""
        config = SweepConfig(n_min=2, n_max=9, repetitions=4, train_fraction=0.6, base_seed=5, resplit_per_repetition=True)
        assert SweepConfig.from_dict(config.to_dict()) == config


class TestSeeds:
    """Tests for derive_seed function."""

    def test_stable(self):
        """Test the same key gives the same seed."""
        assert derive_seed(42, "abalone", 10, 3) == derive_seed(42, "abalone", 10, 3)

    def test_every_component_matters(self):
        """Test changing any component changes the seed."""
        seeds = {
            derive_seed(42, "abalone", 10, 3),
            derive_seed(43, "abalone", 10, 3),
            derive_seed(42, "housing", 10, 3),
            derive_seed(42, "abalone", 11, 3),
            derive_seed(42, "abalone", 10, 4),
        }
        assert len(seeds) == 5

    def test_fits_in_64_bits(self):
        """Test seeds are non-negative 64-bit integers."""
        assert 0 <= derive_seed(0, "x", 1, 0) < 2**64


class TestSelectBestCount:
    """Tests for select_best_count function."""

    def test_tie_goes_to_smaller(self):
        """Test equal mean RMSE picks the smaller count."""
        stats = [CountStats(3, 0.2, 0.0, 2), CountStats(1, 0.1, 0.0, 2), CountStats(2, 0.1, 0.0, 2)]
        assert select_best_count(stats) == 1

    def test_excluded_counts_skipped(self):
        """Test counts where every repetition failed are ignored."""
        stats = [CountStats(1, None, None, 0, 3), CountStats(2, 0.5, 0.1, 3)]
        assert select_best_count(stats) == 2

    def test_all_failed(self):
        """Test a sweep with no successful count is an error."""
        with pytest.raises(SweepError):
            select_best_count([CountStats(1, None, None, 0, 2)])


class TestRunSweep:
    """Tests for run_sweep function."""

    def test_single_candidate(self, noisy_line):
        """Test n_min = n_max = k gives k."""
        result = run_sweep(noisy_line, SweepConfig(n_min=7, n_max=7, repetitions=2))
        assert result.best_count == 7
        assert len(result.per_count) == 1

    def test_linear_problem_needs_few_neurons(self, noisy_line):
        """Test a noisy line over [1, 30] picks a small count with low error."""
        result = run_sweep(noisy_line, SweepConfig(n_min=1, n_max=30, repetitions=3))
        assert result.best_count <= 10
        assert result.min_mean_rmse <= 0.02
        assert result.min_mean_rmse == min(c.mean_rmse for c in result.per_count)

    def test_deterministic(self, noisy_line):
        """Test the same dataset and config give the same result."""
        config = SweepConfig(n_min=1, n_max=8, repetitions=2)
        assert run_sweep(noisy_line, config) == run_sweep(noisy_line, config)

    def test_workers_do_not_change_result(self, noisy_line):
        """Test a parallel sweep equals the sequential one."""
        config = SweepConfig(n_min=1, n_max=8, repetitions=2)
        assert run_sweep(noisy_line, config, workers=2) == run_sweep(noisy_line, config, workers=1)

    def test_resplit_per_repetition(self, noisy_line):
        """Test the per-repetition split variant runs and stays in range."""
        result = run_sweep(noisy_line, SweepConfig(n_min=1, n_max=5, repetitions=3, resplit_per_repetition=True))
        assert 1 <= result.best_count <= 5
        assert all(c.n_ok == 3 for c in result.per_count)

    def test_raw_dataset_rejected(self, synthetic_dataset):
        """Test the sweep needs a normalized dataset."""
        with pytest.raises(DatasetValidationError):
            run_sweep(synthetic_dataset, SweepConfig(n_min=1, n_max=2, repetitions=1))

    def test_save_and_load(self, noisy_line, tmp_path):
        """Test a stored sweep reads back equal."""
        result = run_sweep(noisy_line, SweepConfig(n_min=1, n_max=4, repetitions=2))
        assert load_sweep(save_sweep(result, tmp_path / "line.json")) == result


class TestSweepCorpus:
    """Tests for sweep_corpus function."""

    def test_names_match(self):
        """Test three datasets give three results in input order."""
        corpus = [normalize(make_sinusoid_dataset(f"s{i}", n_rows=100, seed=i)) for i in range(3)]
        outcome = sweep_corpus(corpus, SweepConfig(n_min=1, n_max=4, repetitions=1))
        assert [r.dataset_name for r in outcome.results] == ["s0", "s1", "s2"]
        assert outcome.failures == []

    def test_failure_isolated(self):
        """Test one bad dataset among three is recorded and the others are swept."""
        good = [normalize(make_sinusoid_dataset(f"s{i}", n_rows=100, seed=i)) for i in range(2)]
        bad = make_sinusoid_dataset("raw", n_rows=100, seed=9)
        outcome = sweep_corpus([good[0], bad, good[1]], SweepConfig(n_min=1, n_max=3, repetitions=1))
        assert [r.dataset_name for r in outcome.results] == ["s0", "s1"]
        assert [f.dataset_name for f in outcome.failures] == ["raw"]

    def test_input_order_ignored(self):
        """Test a shuffled corpus gives the same labels per dataset."""
        corpus = [normalize(make_sinusoid_dataset(f"s{i}", n_rows=100, seed=i)) for i in range(4)]
        config = SweepConfig(n_min=1, n_max=6, repetitions=2)
        shuffled = [corpus[i] for i in np.random.default_rng(17).permutation(len(corpus))]
        assert [d.name for d in shuffled] != [d.name for d in corpus]
        forward = sweep_corpus(corpus, config)
        backward = sweep_corpus(shuffled, config, workers=2)
        assert {r.label() for r in forward.results} == {r.label() for r in backward.results}
        by_name = {r.dataset_name: r for r in backward.results}
        for result in forward.results:
            assert by_name[result.dataset_name] == result

    def test_empty_corpus(self):
        """Test an empty corpus is an error."""
        with pytest.raises(SweepError):
            sweep_corpus([], SweepConfig())


class TestLabelHistogram:
    """Tests for label_histogram function."""

    def test_sample_labels(self):
        """Test best counts {4, 32, 215, 142} with bin width 50."""
        bins = label_histogram(_labels(4, 32, 215, 142), bin_width=50)
        assert [(b.start, b.end, b.count) for b in bins[:5]] == [
            (1, 50, 2),
            (51, 100, 0),
            (101, 150, 1),
            (151, 200, 0),
            (201, 250, 1),
        ]
        assert sum(b.count for b in bins) == 4
        assert bins[-1].end == 300

    def test_empty(self):
        """Test no results gives all-zero bins over the default range."""
        bins = label_histogram([], bin_width=50)
        assert len(bins) == 6
        assert all(b.count == 0 for b in bins)

    def test_single_bin(self):
        """Test bin width 300 gives one bin with the total."""
        bins = label_histogram(_labels(4, 32, 215, 142), bin_width=300)
        assert [(b.start, b.end, b.count) for b in bins] == [(1, 300, 4)]

    def test_narrow_last_bin(self):
        """Test the last bin is clipped to n_max."""
        bins = label_histogram(_labels(40, n_max=40), bin_width=15)
        assert [(b.start, b.end) for b in bins] == [(1, 15), (16, 30), (31, 40)]
        assert bins[-1].count == 1

    def test_out_of_range(self):
        """Test a label outside the range is rejected."""
        with pytest.raises(ConfigurationError):
            label_histogram(_labels(400), bin_width=50)


class TestSummary:
    """Tests for the sweep summary CSV."""

    def test_round_trip(self, tmp_path):
        """Test summary rows read back equal."""
        labels = _labels(4, 32, 215)
        assert read_summary(write_summary(labels, tmp_path / "summary.csv")) == labels

    def test_wrong_header(self, tmp_path):
        """Test a file with another header is rejected."""
        path = tmp_path / "summary.csv"
        path.write_text("a,b\n1,2\n", encoding="utf-8")
        with pytest.raises(ConfigurationError):
            read_summary(path)
