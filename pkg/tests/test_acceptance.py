"""
End-to-end acceptance checks: exact property suites and desk-scale
Monte Carlo comparisons. All are marked slow; run with `pytest -m slow`.
"""

import itertools

import numpy as np
import pytest

from src.balance.statistics import MahalanobisBalance, friedman_rafsky, kernel_imbalance
from src.core.dataset import standardize
from src.core.sample import Assignment, CovariateMatrix
from src.core.seeds import DEFAULT_SEED, derive_seed, make_rng
from src.designs import bernoulli, complete_randomization, rerandomize, softblock, two_color_tree
from src.dpp import enumerate_spanning_trees, tree_log_probability
from src.estimators import cut_error_bound
from src.graph.distances import (
    SimilarityGraph,
    gaussian_similarity,
    gram_matrix,
    median_bandwidth,
    pairwise_distances,
)
from src.graph.laplacian import edge_cut_weight
from src.graph.spanning_tree import SpanningTree, is_forest, maximum_spanning_tree
from src.simulate import generate, run_replication

pytestmark = pytest.mark.slow

MASTER_SEED = 2024


def all_assignments(n: int) -> np.ndarray:
    return np.array(list(itertools.product([0, 1], repeat=n)), dtype=np.int64)


def random_weighted_graph(n: int, rng: np.random.Generator) -> SimilarityGraph:
    upper = np.triu(rng.uniform(size=(n, n)), 1)
    return SimilarityGraph(upper + upper.T)


class TestExactProperties:
    """Exact checks that hold for every instance."""

    def test_tree_maxcut(self):
        """Test 200 random trees reach the exhaustive Maxcut."""
        rng = make_rng(MASTER_SEED)
        for _ in range(200):
            n = int(rng.integers(3, 15))
            edges = np.array([(int(rng.integers(0, i)), i) for i in range(1, n)])
            weights = rng.uniform(0.1, 1.0, size=n - 1)
            tree = SpanningTree(n, edges, weights)
            a = two_color_tree(tree, seed=int(rng.integers(1 << 31)))

            arms = all_assignments(n)
            cuts = (arms[:, tree.edges[:, 0]] != arms[:, tree.edges[:, 1]]) @ tree.weights
            assert edge_cut_weight(tree.edges, tree.weights, a) == pytest.approx(cuts.max(), abs=1e-12)

    def test_maximum_spanning_tree(self):
        """Test 100 random graphs against tree enumeration."""
        rng = make_rng(MASTER_SEED + 1)
        for _ in range(100):
            n = int(rng.integers(4, 8))
            e = random_weighted_graph(n, rng)
            W = np.asarray(e.weights)
            pairs = list(itertools.combinations(range(n), 2))
            best_weight, best_edges = -np.inf, None
            for subset in itertools.combinations(pairs, n - 1):
                edges = np.array(subset)
                if is_forest(n, edges):
                    total = W[edges[:, 0], edges[:, 1]].sum()
                    if total > best_weight:
                        best_weight, best_edges = total, frozenset(subset)
            tree = maximum_spanning_tree(e)
            assert tree.total_weight == pytest.approx(best_weight, abs=1e-12)
            assert tree.edge_set() == best_edges

    def test_softblock_friedman_rafsky(self):
        """Test SoftBlock scores exactly 1 and Bernoulli well below."""
        rng = make_rng(MASTER_SEED + 2)
        bernoulli_scores = []
        for rep in range(50):
            X = CovariateMatrix(rng.standard_normal((100, 2 if rep % 2 else 4)))
            design = softblock(X, seed=rep)
            assert friedman_rafsky(X, design.assignment) == 1.0
            bernoulli_scores.append(friedman_rafsky(X, bernoulli(100, seed=rep)))
        assert np.mean(bernoulli_scores) < 0.7

    def test_tree_distribution_mode(self):
        """Test the maximum spanning tree is the mode and probabilities sum to 1."""
        rng = make_rng(MASTER_SEED + 3)
        for _ in range(50):
            n = int(rng.integers(3, 7))
            e = random_weighted_graph(n, rng)
            trees = enumerate_spanning_trees(e)
            log_p = np.array([tree_log_probability(t, e) for t in trees])
            assert abs(np.exp(log_p).sum() - 1.0) < 1e-9
            mode = trees[int(np.argmax(log_p))]
            assert mode.edge_set() == maximum_spanning_tree(e).edge_set()

    def test_kernel_objective_matches_maxcut(self):
        """Test argmin u'Ku equals argmax cut and u'Ku - u'Gu = trace(K)."""
        rng = make_rng(MASTER_SEED + 4)
        for _ in range(50):
            n = int(rng.integers(4, 11))
            X = CovariateMatrix(rng.standard_normal((n, 2)))
            K = gram_matrix(pairwise_distances(X), float(rng.uniform(0.5, 2.0)))
            G = K - np.diag(np.diag(K))
            U = 2 * all_assignments(n) - 1
            quad = np.einsum("ij,jk,ik->i", U, K, U)
            cut = np.einsum("ij,jk,ik->i", U, G, -U) / 4.0 + G.sum() / 4.0
            assert quad[np.argmax(cut)] == pytest.approx(quad.min(), abs=1e-9)

        X = CovariateMatrix(rng.standard_normal((12, 3)))
        K = gram_matrix(pairwise_distances(X), 1.0)
        G = SimilarityGraph(K - np.diag(np.diag(K)))
        for _ in range(1000):
            a = Assignment(rng.integers(0, 2, size=12))
            gap = (kernel_imbalance(K, a) - kernel_imbalance(G, a)) * 144 / 4.0
            assert gap == pytest.approx(np.trace(K), abs=1e-9)

    def test_bandwidth_robustness(self):
        """Test SoftBlock assignments agree across four orders of magnitude of bandwidth."""
        X = CovariateMatrix(make_rng(MASTER_SEED + 5).standard_normal((200, 3)))
        reference = softblock(X, h=0.01, seed=1).assignment.a
        for h in [0.1, 1.0, 10.0, 100.0]:
            a = softblock(X, h=h, seed=1).assignment.a
            assert np.array_equal(a, reference) or np.array_equal(a, 1 - reference)


class TestMonteCarlo:
    """Direction-level comparisons across replications."""

    def test_lin_unbiased(self):
        """Test Bernoulli with regression adjustment has mean error within 3 standard errors."""
        errors = np.array([
            run_replication("linear", 256, "bernoulli", "lin", derive_seed(MASTER_SEED, rep)).ate_error
            for rep in range(500)
        ])
        assert abs(errors.mean()) < 3 * errors.std(ddof=1) / np.sqrt(len(errors))

    @pytest.mark.parametrize("n", [256, 1024])
    def test_ate_quickblock(self, n):
        """Test SoftBlock with the design estimator beats Bernoulli with difference in means on ATE error."""
        softblock_sq, dim_sq = [], []
        for rep in range(200):
            seed = derive_seed(MASTER_SEED, 8, n, rep)
            softblock_sq.append(run_replication("quickblock", n, "softblock", "design", seed).ate_error ** 2)
            dim_sq.append(run_replication("quickblock", n, "bernoulli", "dim", seed).ate_error ** 2)
        assert np.mean(softblock_sq) < np.mean(dim_sq)

    def test_rerandomization_balance(self):
        """Test accepted draws average under 20% of complete randomization's imbalance."""
        accepted, plain = [], []
        for rep in range(100):
            X = CovariateMatrix(make_rng(derive_seed(MASTER_SEED, 9, rep)).standard_normal((256, 4)))
            balance = MahalanobisBalance(X)
            accepted.append(balance(rerandomize(X, accept_frac=0.01, seed=rep)))
            plain.append(balance(complete_randomization(256, seed=rep)))
        assert np.mean(accepted) < 0.2 * np.mean(plain)

    @pytest.mark.parametrize("dgp", ["sinusoidal", pytest.param("twocircles", marks=pytest.mark.xfail(
        strict=True,
        reason="TwoCircles noise has sd 1 in each arm: imputing from about two tree "
               "neighbours has variance near 1.6 against 1.2 for a 5-neighbour mean",
    ))])
    def test_ite_design_estimator_beats_knn(self, dgp):
        """Test SoftBlock with the design estimator has lower ITE error than Bernoulli with the k-NN T-learner."""
        design_mise, knn_mise = [], []
        for rep in range(100):
            seed = derive_seed(DEFAULT_SEED, rep)
            design_mise.append(run_replication(dgp, 1024, "softblock", "design", seed).ite_mse)
            knn_mise.append(run_replication(dgp, 1024, "bernoulli", "knn", seed, k=5).ite_mse)
        assert np.mean(design_mise) < np.mean(knn_mise)

    def test_softblock_cut_bound_below_bernoulli(self):
        """Test SoftBlock's cut error bound is at most Bernoulli's on at least 95% of TwoCircles samples."""
        wins = 0
        for rep in range(200):
            seed = derive_seed(MASTER_SEED, 10, rep)
            X = standardize(generate("twocircles", 128, seed).X)
            d = pairwise_distances(X)
            e = gaussian_similarity(d, median_bandwidth(d))
            tree_cut = softblock(X, seed=rep, standardize=False).assignment
            coin = bernoulli(128, seed=rep)
            wins += cut_error_bound(e, tree_cut) <= cut_error_bound(e, coin)
        assert wins >= 190

    def test_twocircles_balance_directions(self):
        """Test rerandomization lowers Mahalanobis imbalance and SoftBlock raises Friedman-Rafsky over 200 samples."""
        accepted, plain, tree_fr, coin_fr = [], [], [], []
        for rep in range(200):
            X = generate("twocircles", 128, derive_seed(MASTER_SEED, 11, rep)).X
            balance = MahalanobisBalance(X)
            accepted.append(balance(rerandomize(X, accept_frac=0.01, seed=rep)))
            plain.append(balance(complete_randomization(128, seed=rep)))
            tree_fr.append(friedman_rafsky(X, softblock(X, seed=rep).assignment))
            coin = bernoulli(128, seed=rep)
            if coin.a.min() != coin.a.max():
                coin_fr.append(friedman_rafsky(X, coin))
        assert np.mean(accepted) < np.mean(plain)
        assert np.mean(tree_fr) > np.mean(coin_fr)


if __name__ == "__main__":
    pytest.main([__file__, "-v", "-m", "slow"])
