"""
Unit tests for data-generating processes and the benchmark runner.
"""

import json

import numpy as np
import pandas as pd
import pytest

from src.core.seeds import derive_seed
from src.designs import DesignConfig, ExperimentDesigner, complete_randomization
from src.estimators import cut_edge_weights
from src.errors import ConfigError, UnknownDgp
from src.simulate import (
    BenchmarkConfig,
    DGPType,
    bandwidth_sensitivity,
    generate,
    get_dgp_config,
    run_benchmark,
    run_replication,
    runtime_scaling,
)


class TestDGPs:
    """Tests for the data-generating processes."""

    @pytest.mark.parametrize("dgp,dimension", [
        ("linear", 4), ("quickblock", 2), ("sinusoidal", 4), ("twocircles", 2),
    ])
    def test_shapes(self, dgp, dimension):
        """Test covariate dimension and outcome lengths."""
        data = generate(dgp, 25, seed=1)
        assert data.X.D == dimension
        assert data.n == 25
        assert len(data.y0) == len(data.y1) == len(data.tau) == 25
        assert get_dgp_config(dgp).dimension == dimension

    def test_parse_aliases(self):
        """Test class-style and underscored names resolve."""
        assert DGPType.parse("LinearDGP") is DGPType.LINEAR
        assert DGPType.parse("two_circles") is DGPType.TWOCIRCLES

    def test_unknown(self):
        """Test an unknown name raises UnknownDgp."""
        with pytest.raises(UnknownDgp):
            generate("spiral", 10)

    def test_reproducible(self):
        """Test the same seed gives the same sample."""
        first, second = generate("sinusoidal", 30, seed=4), generate("sinusoidal", 30, seed=4)
        np.testing.assert_array_equal(first.X.values, second.X.values)
        np.testing.assert_array_equal(first.y1.y, second.y1.y)

    def test_noiseless_linear(self):
        """Test y1 - y0 equals the unit effect without noise."""
        data = generate("linear", 40, seed=2, noise_scale=0.0)
        np.testing.assert_allclose(data.y1.y - data.y0.y, 1.0)
        np.testing.assert_allclose(data.y0.y, data.X.values @ data.beta)
        assert data.lipschitz == pytest.approx(np.linalg.norm(data.beta))

    def test_quickblock_shared_noise(self):
        """Test QuickBlock adds exactly 1 under treatment."""
        data = generate("quickblock", 50, seed=3)
        np.testing.assert_allclose(data.y1.y - data.y0.y, 1.0)
        assert np.all((data.X.values >= 0) & (data.X.values <= 10))

    def test_twocircles_radii(self):
        """Test alternating radii around 1 and 2 with no effect."""
        data = generate("twocircles", 400, seed=5)
        r = data.latent["r"]
        assert abs(r[0::2].mean() - 1.0) < 0.05
        assert abs(r[1::2].mean() - 2.0) < 0.05
        assert data.true_ate == 0.0
        np.testing.assert_allclose(np.hypot(*data.X.values.T), np.abs(r))

    def test_reveal(self):
        """Test observed outcomes follow the assignment."""
        data = generate("linear", 10, seed=6)
        a = complete_randomization(10, seed=1)
        y = data.reveal(a)
        np.testing.assert_array_equal(y.y[a.treated], data.y1.y[a.treated])
        np.testing.assert_array_equal(y.y[a.control], data.y0.y[a.control])


class TestReplication:
    """Tests for a single replication."""

    def test_lin_exact_on_noiseless_linear(self):
        """Test regression adjustment has no error on a noiseless linear model."""
        result = run_replication("linear", 40, "complete", "lin", seed=9, noise_scale=0.0)
        assert abs(result.ate_error) < 1e-9
        assert result.ite_mse < 1e-18

    def test_noiseless_softblock_within_bias_sum(self):
        """Test the design estimator's ATE error on noiseless linear data stays under the mean bias term."""
        for seed in range(5):
            data = generate("linear", 80, seed, noise_scale=0.0)
            result = run_replication("linear", 80, "softblock", "design", seed, data=data)
            design = ExperimentDesigner("softblock").design(data.X, derive_seed(seed, 1))
            np.testing.assert_array_equal(design.assignment.a, result.assignment)

            weights = cut_edge_weights(design)
            X = data.X.values
            lengths = np.linalg.norm(X[weights.source] - X[weights.target], axis=1)
            bias = np.bincount(weights.source, weights=weights.weights * lengths, minlength=80)
            assert abs(result.ate_error) <= data.lipschitz * bias.mean() + 1e-12

    def test_fields(self):
        """Test timings and assignment are recorded."""
        result = run_replication("quickblock", 30, "softblock", "design", seed=1)
        assert result.design_ms >= 0 and result.estimate_ms >= 0
        assert len(result.assignment) == 30
        assert len(result.ite_sq_errors) == 30


class TestBenchmark:
    """Tests for the benchmark grid runner."""

    @pytest.fixture
    def config(self):
        return BenchmarkConfig(
            dgps=["linear"],
            methods=["softblock", "complete"],
            estimators=["design", "dim"],
            n_grid=[20],
            reps=2,
            seed=11,
        )

    def test_skips_incompatible(self, config):
        """Test complete x design is skipped, kept as a row, and the rest run."""
        table = run_benchmark(config)
        assert len(table.rows) == 4
        assert table.skipped == [("linear", "complete", "design", 20)]
        assert table.n_failed == 0
        assert table.n_succeeded == 3
        row = table.rows.iloc[2]
        assert (row["method"], row["estimator"], row["reps"]) == ("complete", "design", 0)
        assert row["error"] == "skipped: complete designs have no support graph"
        assert np.isnan(row["mse_ate"])

    def test_skipped_row_written(self, config, tmp_path):
        """Test a trailing skipped cell still reaches the CSV."""
        config.methods = ["softblock", "bernoulli"]
        config.estimators = ["dim", "design"]
        run_benchmark(config, output=tmp_path / "grid.csv")
        frame = pd.read_csv(tmp_path / "grid.csv", keep_default_na=False)
        assert len(frame) == 4
        assert frame["error"].iloc[-1] == "skipped: bernoulli designs have no support graph"

    def test_columns(self, config):
        """Test the CSV has the base columns plus error."""
        table = run_benchmark(config)
        assert list(table.rows.columns) == [
            "dgp", "method", "estimator", "n", "reps", "mse_ate", "mise_ite", "error",
        ]

    def test_reproducible(self, config, tmp_path):
        """Test two runs write identical CSV files."""
        run_benchmark(config, output=tmp_path / "a.csv")
        run_benchmark(config, output=tmp_path / "b.csv")
        assert (tmp_path / "a.csv").read_text() == (tmp_path / "b.csv").read_text()

    def test_dim_under_both_methods(self, config):
        """Test the difference in means runs under both designs."""
        table = run_benchmark(config)
        dim = table.rows[table.rows["estimator"] == "dim"]
        assert set(dim["method"]) == {"softblock", "complete"}
        assert np.all(np.isfinite(dim["mse_ate"]))

    def test_failed_cell_recorded(self):
        """Test an estimator failure is kept as an error row."""
        config = BenchmarkConfig(dgps=["linear"], methods=["complete"], estimators=["knn"], n_grid=[6])
        table = run_benchmark(config)
        assert table.n_failed == 1
        assert table.rows["error"].iloc[0].startswith("ArmTooSmall")

    def test_scaled_and_timing_columns(self, config):
        """Test optional columns appear when requested."""
        config.timings = True
        config.normalize_exponent = 1.0
        table = run_benchmark(config)
        for column in ["mean_design_ms", "mean_estimate_ms", "mse_ate_scaled", "mise_ite_scaled"]:
            assert column in table.rows.columns
        row = table.rows.iloc[0]
        assert row["mse_ate_scaled"] == pytest.approx(row["mse_ate"] * 20)

    @pytest.mark.slow
    def test_parallel_matches_serial(self, config):
        """Test worker processes give the same numbers."""
        serial = run_benchmark(config).rows
        config.n_jobs = 2
        parallel = run_benchmark(config).rows
        pd.testing.assert_frame_equal(serial, parallel)


class TestBenchmarkConfig:
    """Tests for loading benchmark configs."""

    def test_from_json(self, tmp_path):
        """Test a valid config loads and normalizes names."""
        path = tmp_path / "config.json"
        path.write_text(json.dumps({
            "dgps": ["LinearDGP"], "methods": ["SoftBlock"], "estimators": ["design"], "n_grid": [16],
        }))
        config = BenchmarkConfig.from_json(path)
        assert config.dgps == ["linear"]
        assert config.methods == ["softblock"]

    def test_unknown_field(self, tmp_path):
        """Test unknown keys raise ConfigError."""
        path = tmp_path / "config.json"
        path.write_text(json.dumps({
            "dgps": ["linear"], "methods": ["softblock"], "estimators": ["dim"], "n_grid": [16], "repz": 3,
        }))
        with pytest.raises(ConfigError):
            BenchmarkConfig.from_json(path)

    def test_malformed_json(self, tmp_path):
        """Test broken JSON raises ConfigError."""
        path = tmp_path / "config.json"
        path.write_text("{not json")
        with pytest.raises(ConfigError):
            BenchmarkConfig.from_json(path)

    def test_unknown_method(self):
        """Test an unknown method raises ConfigError."""
        with pytest.raises(ConfigError):
            BenchmarkConfig(dgps=["linear"], methods=["blocked"], estimators=["dim"], n_grid=[10])


class TestStudies:
    """Tests for the runtime and bandwidth studies."""

    def test_runtime_scaling(self):
        """Test one timing point per n and a finite slope."""
        result = runtime_scaling("greedy", [50, 100], reps=1)
        assert [n for n, _ in result.points] == [50, 100]
        assert np.isfinite(result.slope)
        assert list(result.to_frame().columns) == ["n", "mean_ms"]

    def test_runtime_grid_ascending(self):
        """Test a descending grid is rejected."""
        with pytest.raises(ConfigError):
            runtime_scaling("softblock", [100, 50])

    def test_bandwidth_sensitivity(self):
        """Test SoftBlock assignments do not change with the bandwidth."""
        frame = bandwidth_sensitivity("linear", 30, [0.5, 5.0], reps=2, seed=3)
        assert list(frame["bandwidth"]) == [0.5, 5.0]
        assert frame["identical_up_to_flip"].all()

    def test_design_config(self):
        """Test the benchmark passes its settings to the designs."""
        config = BenchmarkConfig(
            dgps=["linear"], methods=["rerandomize"], estimators=["dim"], n_grid=[10], accept_frac=0.5,
        )
        assert isinstance(config.design_config(), DesignConfig)
        assert config.design_config().accept_frac == 0.5


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
