"""
Unit tests for ATE/ITE estimators and error bounds.
"""

import json
from dataclasses import replace

import numpy as np
import pytest

from src.core.dataset import standardize
from src.core.sample import Assignment, CovariateMatrix, OutcomeVector
from src.designs import Design, DesignMethod, complete_randomization, matched_pairs, softblock
from src.errors import (
    ArmTooSmall,
    EmptyArm,
    IncompatibleEstimator,
    InvalidInput,
    IsolatedUnit,
    WrongDesignKind,
    ZeroDegreeNode,
)
from src.estimators import (
    BoundInputs,
    EstimatorType,
    cut_edge_weights,
    cut_error_bound,
    design_ate,
    design_ite,
    diff_in_means,
    estimate_effects,
    imputation_error,
    knn_t_learner,
    lin_adjusted_ate,
    matched_pair_ate,
    pair_ite,
    pointwise_error_bound,
    save_effects,
)
from src.graph.distances import SimilarityGraph, gaussian_similarity, pairwise_distances
from src.graph.laplacian import cut_weight
from src.simulate.dgps import generate


def path_design(a, log_weights=(0.0, 0.0)) -> Design:
    """Three units on the path 0 - 1 - 2."""
    return Design(
        assignment=Assignment(a),
        method=DesignMethod.SOFTBLOCK,
        seed=0,
        edges=np.array([[0, 1], [1, 2]]),
        log_weights=np.array(log_weights, dtype=float),
    )


class TestAteEstimators:
    """Tests for difference in means and regression adjustment."""

    def test_diff_in_means(self):
        """Test a hand-computed difference."""
        y = OutcomeVector([3.0, 1.0, 5.0, 2.0])
        assert diff_in_means(y, Assignment([1, 0, 1, 0])) == pytest.approx(2.5)

    def test_diff_in_means_empty_arm(self):
        """Test an empty arm is rejected."""
        with pytest.raises(EmptyArm):
            diff_in_means(OutcomeVector([1.0, 2.0]), Assignment([1, 1]))

    def test_lin_recovers_linear_effect(self, rng):
        """Test a noiseless linear model is fitted exactly."""
        X = CovariateMatrix(rng.standard_normal((40, 2)))
        a = complete_randomization(40, seed=1)
        y = OutcomeVector(2.0 + 3.0 * a.a + X.values @ np.array([1.0, -0.5]))
        result = lin_adjusted_ate(y, a, X)
        assert result.estimate == pytest.approx(3.0, abs=1e-10)
        assert result.se < 1e-6

    def test_lin_constant_covariates_give_dim(self, rng):
        """Test constant covariates reduce to the difference in means."""
        X = CovariateMatrix(np.ones((20, 2)))
        a = complete_randomization(20, seed=2)
        y = OutcomeVector(rng.standard_normal(20) + a.a)
        estimate, se = lin_adjusted_ate(y, a, X)
        assert estimate == pytest.approx(diff_in_means(y, a))
        assert se > 0

    def test_lin_rank_deficient_fallback(self, rng):
        """Test duplicated covariates still give a finite estimate."""
        x = rng.standard_normal(30)
        X = CovariateMatrix(np.column_stack([x, 2 * x]))
        a = complete_randomization(30, seed=3)
        y = OutcomeVector(1.5 * a.a + x)
        result = lin_adjusted_ate(y, a, X)
        assert result.estimate == pytest.approx(1.5, abs=1e-4)
        assert np.isfinite(result.se)


class TestMatchedPairEstimator:
    """Tests for the within-pair estimator."""

    def test_pair_differences(self):
        """Test the mean of treated-minus-control pair differences."""
        X = CovariateMatrix([0.0, 10.0, 0.1, 10.1])
        design = matched_pairs(X, seed=4)
        y = OutcomeVector(np.where(design.assignment.treated, 2.0, 0.0) + np.array([0, 5, 0, 5]))
        assert matched_pair_ate(design, y) == pytest.approx(2.0)

    def test_agrees_with_design_estimator(self, random_covariates, rng):
        """Test the pair mean equals the cut-edge estimator on the matching graph."""
        design = matched_pairs(random_covariates, seed=5)
        y = OutcomeVector(rng.standard_normal(60))
        assert matched_pair_ate(design, y) == pytest.approx(design_ate(design, y), abs=1e-12)
        np.testing.assert_allclose(pair_ite(design, y), design_ite(design, y), atol=1e-12)

    def test_flipping_arms_negates_estimates(self, random_covariates, rng):
        """Test swapping treatment and control negates every pair estimate exactly."""
        design = matched_pairs(random_covariates, seed=6)
        flipped = replace(design, assignment=design.assignment.flipped())
        y = OutcomeVector(rng.standard_normal(60))
        np.testing.assert_array_equal(design_ite(flipped, y), -design_ite(design, y))
        assert matched_pair_ate(flipped, y) == -matched_pair_ate(design, y)

    def test_wrong_design(self, random_covariates):
        """Test a SoftBlock design is rejected."""
        design = softblock(random_covariates, seed=1)
        with pytest.raises(WrongDesignKind):
            matched_pair_ate(design, OutcomeVector(np.zeros(60)))


class TestDesignEstimator:
    """Tests for the cut-edge imputation estimator."""

    def test_path_imputation(self):
        """Test the middle unit imputes from both neighbours."""
        design = path_design([1, 0, 1])
        y = OutcomeVector([4.0, 1.0, 6.0])
        np.testing.assert_allclose(design_ite(design, y), [3.0, 4.0, 5.0])

    def test_weights_normalize_in_log_space(self):
        """Test underflowing similarities still give normalized weights."""
        design = path_design([1, 0, 1], log_weights=(-1000.0, -2000.0))
        row = cut_edge_weights(design).row(1)
        np.testing.assert_allclose(row.weights.sum(), 1.0)
        np.testing.assert_allclose(row.weights[row.neighbors == 0], 1.0)

    def test_zero_weights_fall_back_to_equal(self):
        """Test all -inf log weights get equal shares."""
        design = path_design([1, 0, 1], log_weights=(-np.inf, -np.inf))
        row = cut_edge_weights(design).row(1)
        np.testing.assert_allclose(row.weights, [0.5, 0.5])

    def test_noiseless_error_within_bias_bound(self):
        """Test |tau_hat - tau| <= 2 L sum_j w_ij d_ij on noiseless sinusoidal samples."""
        for seed in range(20):
            data = generate("sinusoidal", 100, seed=seed, noise_scale=0.0)
            design = softblock(data.X, seed=seed)
            weights = cut_edge_weights(design)
            X = data.X.values
            lengths = np.linalg.norm(X[weights.source] - X[weights.target], axis=1)
            bias = np.bincount(weights.source, weights=weights.weights * lengths, minlength=data.n)
            errors = np.abs(design_ite(design, data.reveal(design.assignment)) - data.tau)
            assert np.all(errors <= 2.0 * data.lipschitz * bias + 1e-12)

    def test_isolated_unit(self):
        """Test a unit without a cut edge raises IsolatedUnit."""
        with pytest.raises(IsolatedUnit) as exc:
            design_ite(path_design([1, 1, 0]), OutcomeVector([1.0, 2.0, 3.0]))
        assert exc.value.unit == 0

    def test_constant_effect_is_exact(self, random_covariates):
        """Test a constant baseline plus effect is recovered per unit."""
        design = softblock(random_covariates, seed=8)
        y = OutcomeVector(7.0 + 2.0 * design.assignment.a)
        np.testing.assert_allclose(design_ite(design, y), 2.0)
        assert design_ate(design, y) == pytest.approx(2.0)


class TestKnnTLearner:
    """Tests for the k-NN T-learner."""

    def test_constant_effect(self, random_covariates):
        """Test a constant shift is recovered."""
        a = complete_randomization(60, seed=9)
        y = OutcomeVector(5.0 * a.a)
        np.testing.assert_allclose(knn_t_learner(random_covariates, y, a, k=3), 5.0)

    def test_single_neighbour(self):
        """Test k = 1 uses the closest opposite-arm unit."""
        X = CovariateMatrix([0.0, 0.1, 5.0, 5.1])
        a = Assignment([1, 0, 1, 0])
        y = OutcomeVector([1.0, 0.0, 3.0, 2.0])
        np.testing.assert_allclose(knn_t_learner(X, y, a, k=1), [1.0, 1.0, 1.0, 1.0])

    def test_matches_brute_force_scan(self, rng):
        """Test n = 30, k = 3 against sorting every distance."""
        X = CovariateMatrix(rng.standard_normal((30, 2)))
        a = complete_randomization(30, seed=3)
        y = OutcomeVector(rng.standard_normal(30))

        expected = np.empty(30)
        for i in range(30):
            fitted = {}
            for arm in (0, 1):
                members = np.flatnonzero(a.a == arm)
                dists = np.linalg.norm(X.values[members] - X.values[i], axis=1)
                nearest = members[np.argsort(dists, kind="stable")[:3]]
                fitted[arm] = y.y[i] if a.a[i] == arm else y.y[nearest].mean()
            expected[i] = fitted[1] - fitted[0]

        np.testing.assert_allclose(knn_t_learner(X, y, a, k=3), expected, rtol=0, atol=1e-12)

    def test_arm_too_small(self, random_covariates):
        """Test k above the smaller arm size raises ArmTooSmall."""
        a = Assignment([1] * 2 + [0] * 58)
        with pytest.raises(ArmTooSmall):
            knn_t_learner(random_covariates, OutcomeVector(np.zeros(60)), a, k=5)


class TestBounds:
    """Tests for the error bounds."""

    def test_noise_constant(self):
        """Test C = b sqrt(2 log(2 / delta))."""
        inputs = BoundInputs(L=1.0, b=2.0, delta=0.05)
        assert inputs.C == pytest.approx(2.0 * np.sqrt(2.0 * np.log(40.0)))

    def test_pointwise_bias_only(self):
        """Test a noiseless bound is L times the weighted distance."""
        bound = pointwise_error_bound([0.25, 0.75], [1.0, 2.0], BoundInputs(L=2.0, b=0.0, delta=0.1))
        assert bound == pytest.approx(3.5)

    def test_invalid_delta(self):
        """Test delta outside (0, 1) is rejected."""
        with pytest.raises(InvalidInput):
            BoundInputs(L=1.0, b=1.0, delta=1.0)

    def test_cut_bound_complete_graph(self):
        """Test a hand-computed bound on the unit-weight complete graph."""
        e = SimilarityGraph(np.ones((4, 4)) - np.eye(4))
        assert cut_error_bound(e, Assignment([1, 1, 0, 0])) == pytest.approx(4.0 / 3.0)

    def test_cut_bound_zero_degree(self):
        """Test an isolated node raises ZeroDegreeNode."""
        e = SimilarityGraph.from_edges(3, [(0, 1)], [1.0])
        with pytest.raises(ZeroDegreeNode) as exc:
            cut_error_bound(e, Assignment([1, 0, 1]))
        assert exc.value.unit == 2

    def test_larger_cut_smaller_bound(self, random_covariates):
        """Test the SoftBlock cut gives a smaller bound than a split by the first covariate."""
        e = gaussian_similarity(pairwise_distances(random_covariates), 1.0)
        design = softblock(random_covariates, h=1.0, seed=2, standardize=False)
        split = Assignment((random_covariates.values[:, 0] > np.median(random_covariates.values[:, 0])).astype(int))
        assert cut_error_bound(e, design.assignment) < cut_error_bound(e, split)

    def test_bound_decreases_with_cut(self, rng):
        """Test a larger cut never gives a larger bound across random assignments and graphs."""
        for _ in range(20):
            upper = np.triu(rng.uniform(0.1, 1.0, size=(12, 12)), 1)
            e = SimilarityGraph(upper + upper.T)
            cuts, bounds = [], []
            for seed in range(15):
                a = complete_randomization(12, seed=seed)
                cuts.append(cut_weight(e, a))
                bounds.append(cut_error_bound(e, a))
            order = np.argsort(cuts, kind="stable")
            assert np.all(np.diff(np.asarray(bounds)[order]) <= 1e-12)

    def test_imputation_inequality(self, random_covariates, rng):
        """Test the integrated inequality on outcomes in [0, 1]."""
        e = gaussian_similarity(pairwise_distances(random_covariates), 1.0)
        for seed in range(5):
            a = complete_randomization(60, seed=seed)
            y = OutcomeVector(rng.uniform(size=60))
            assert imputation_error(e, a, y).holds


class TestEstimateEffects:
    """Tests for estimator dispatch and output files."""

    def test_incompatible(self, random_covariates):
        """Test the design estimator needs a support graph."""
        design = Design(assignment=complete_randomization(60, seed=1), method=DesignMethod.COMPLETE, seed=1)
        with pytest.raises(IncompatibleEstimator):
            estimate_effects("design", design, random_covariates, OutcomeVector(np.zeros(60)))

    def test_pairs_needs_matching(self, random_covariates):
        """Test the pairs estimator rejects a SoftBlock design."""
        design = softblock(random_covariates, seed=1)
        with pytest.raises(IncompatibleEstimator):
            estimate_effects(EstimatorType.PAIRS, design, random_covariates, OutcomeVector(np.zeros(60)))

    def test_ate_only_estimators_fill_ite(self, random_covariates, rng):
        """Test dim reports its ATE as every ITE."""
        design = softblock(random_covariates, seed=1)
        effects = estimate_effects("dim", design, random_covariates, OutcomeVector(rng.standard_normal(60)))
        np.testing.assert_allclose(effects.ite, effects.ate)
        assert effects.se is None

    def test_lin_has_se(self, random_covariates, rng):
        """Test lin reports a standard error."""
        design = softblock(random_covariates, seed=1)
        effects = estimate_effects("lin", design, random_covariates, OutcomeVector(rng.standard_normal(60)))
        assert effects.se is not None and effects.se > 0

    def test_knn_searches_standardized_covariates(self, random_covariates, rng):
        """Test the k-NN T-learner ignores column scales unless told not to standardize."""
        X = CovariateMatrix(random_covariates.values * np.array([1000.0, 1.0, 0.001]))
        design = Design(assignment=complete_randomization(60, seed=2), method=DesignMethod.COMPLETE, seed=2)
        y = OutcomeVector(rng.standard_normal(60))

        effects = estimate_effects("knn", design, X, y)
        np.testing.assert_array_equal(effects.ite, knn_t_learner(standardize(X), y, design.assignment))
        assert effects.to_dict()["standardized"] is True

        raw = estimate_effects("knn", design, X, y, standardize=False)
        np.testing.assert_array_equal(raw.ite, knn_t_learner(X, y, design.assignment))
        assert raw.to_dict()["standardized"] is False

    def test_save_effects(self, random_covariates, tmp_path):
        """Test ate.json and ite.csv are written."""
        design = softblock(random_covariates, seed=1)
        y = OutcomeVector(1.0 + design.assignment.a)
        paths = save_effects(estimate_effects("design", design, random_covariates, y), tmp_path)
        assert json.loads(paths["ate"].read_text())["ate"] == pytest.approx(1.0)
        lines = paths["ite"].read_text().splitlines()
        assert lines[0] == "unit_index,tau_hat"
        assert len(lines) == 61


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
