import numpy as np
import pytest
from scipy.special import expit

from oracles import newton_logistic_oracle

from glmavg import (
    CandidateModel,
    DataError,
    NonConvergenceError,
    ProbVector,
    SingularDesignError,
    full_linear_fit,
    logistic_mle,
    logistic_prob,
    logistic_pseudo_fit,
    ols_fit,
    pseudo_true_linear,
)


class TestOlsFit:
    def test_identity_design(self):
        fit = ols_fit(np.eye(2), np.array([1.0, 2.0]))
        np.testing.assert_allclose(fit.beta, [1.0, 2.0])

    def test_noiseless_recovery(self):
        rng = np.random.default_rng(0)
        X = rng.standard_normal((30, 4))
        beta0 = np.array([1.0, -2.0, 0.5, 3.0])
        fit = ols_fit(X, X @ beta0)
        np.testing.assert_allclose(fit.beta, beta0, atol=1e-10)

    def test_against_normal_equations_oracle(self):
        rng = np.random.default_rng(1)
        X = rng.standard_normal((50, 3))
        y = rng.standard_normal(50)
        oracle = np.linalg.solve(X.T @ X, X.T @ y)
        np.testing.assert_allclose(ols_fit(X, y).beta, oracle, atol=1e-10)

    def test_residual_orthogonality(self):
        rng = np.random.default_rng(2)
        X = rng.standard_normal((80, 5))
        y = rng.standard_normal(80)
        fit = ols_fit(X, y)
        resid = y - X @ fit.beta
        assert np.max(np.abs(X.T @ resid)) <= 1e-8 * np.linalg.norm(X.T @ y)

    def test_rank_deficiency_raises_with_model(self):
        X = np.ones((10, 2))  # duplicated column
        model = CandidateModel((0,), 1)
        with pytest.raises(SingularDesignError) as excinfo:
            ols_fit(X, np.zeros(10), model=model)
        assert excinfo.value.model is model

    def test_more_columns_than_rows(self):
        with pytest.raises(SingularDesignError):
            ols_fit(np.ones((2, 3)), np.zeros(2))

    def test_augmented_consistent(self):
        rng = np.random.default_rng(3)
        X = rng.standard_normal((20, 3))
        model = CandidateModel((1,), 2)
        fit = ols_fit(X, rng.standard_normal(20), model=model, q=2)
        np.testing.assert_array_equal(fit.augmented.values[[0, 1, 3]], fit.beta)
        assert fit.augmented.values[2] == 0.0
        assert fit.dim == 3

    def test_gaussian_profile_loglik(self):
        rng = np.random.default_rng(4)
        X = rng.standard_normal((40, 2))
        y = rng.standard_normal(40)
        fit = ols_fit(X, y)
        rss = np.sum((y - X @ fit.beta) ** 2)
        expected = -0.5 * 40 * (np.log(2 * np.pi * rss / 40) + 1.0)
        assert fit.loglik == pytest.approx(expected, rel=1e-12)

    def test_exact_fit_gives_infinite_loglik(self):
        fit = ols_fit(np.eye(3), np.array([1.0, 2.0, 3.0]))
        assert fit.loglik == np.inf


class TestFullLinearFit:
    def test_exact_fit_zero_sigma2(self):
        rng = np.random.default_rng(5)
        X = rng.standard_normal((20, 3))
        full = full_linear_fit(X, X @ np.array([1.0, 2.0, 3.0]))
        assert full.sigma2 == pytest.approx(0.0, abs=1e-20)

    def test_sigma2_is_projected_noise_with_divisor_n(self):
        rng = np.random.default_rng(6)
        n = 60
        X = rng.standard_normal((n, 4))
        e = rng.standard_normal(n)
        y = X @ np.array([1.0, -1.0, 0.5, 2.0]) + e
        full = full_linear_fit(X, y)
        # projection oracle via pinv, independent of the QR path
        P = X @ np.linalg.pinv(X)
        resid_oracle = e - P @ e
        assert full.sigma2 == pytest.approx(np.sum(resid_oracle**2) / n, rel=1e-10)

    def test_fitted_values(self):
        rng = np.random.default_rng(7)
        X = rng.standard_normal((15, 2))
        y = rng.standard_normal(15)
        full = full_linear_fit(X, y)
        np.testing.assert_allclose(full.fitted, X @ full.beta_full, atol=1e-12)


class TestPseudoTrueLinear:
    def test_full_model_is_identity(self):
        rng = np.random.default_rng(8)
        X = rng.standard_normal((30, 3))
        beta = np.array([1.0, 2.0, -3.0])
        np.testing.assert_allclose(pseudo_true_linear(X, X, beta), beta, atol=1e-12)

    def test_orthogonal_columns_give_subvector(self):
        X = np.kron(np.eye(3), np.ones((4, 1)))  # mutually orthogonal columns
        beta = np.array([1.0, 2.0, 3.0])
        X_k = X[:, [0, 2]]
        np.testing.assert_allclose(
            pseudo_true_linear(X_k, X, beta), [1.0, 3.0], atol=1e-12
        )

    def test_correlated_two_column_design_vs_explicit_inverse(self):
        # X has columns (x1, x2); the sub-model keeps only x1.
        rng = np.random.default_rng(9)
        x1 = rng.standard_normal(50)
        x2 = 0.8 * x1 + 0.6 * rng.standard_normal(50)
        X = np.column_stack([x1, x2])
        beta = np.array([1.5, -2.0])
        # scalar normal equation: (x1'x1)^{-1} x1'(X beta)
        oracle = (x1 @ (X @ beta)) / (x1 @ x1)
        np.testing.assert_allclose(
            pseudo_true_linear(x1[:, None], X, beta), [oracle], atol=1e-10
        )

    def test_plug_in_identity(self):
        # population projection at beta_full equals the data fit of the sub-model
        rng = np.random.default_rng(10)
        X = rng.standard_normal((60, 5))
        y = rng.standard_normal(60)
        full = full_linear_fit(X, y)
        X_k = X[:, :3]
        np.testing.assert_allclose(
            pseudo_true_linear(X_k, X, full.beta_full),
            ols_fit(X_k, y).beta,
            atol=1e-10,
        )


class TestLogisticProb:
    def test_zero_beta_gives_half(self):
        assert logistic_prob(np.ones(3), np.zeros(3)) == 0.5

    @pytest.mark.parametrize(
        "beta3, expected",
        [(0.001, 0.452), (0.5, 0.329)],
    )
    def test_reference_values(self, beta3, expected):
        x = np.array([1.0, -1.86, -1.019, -1.045])
        beta = np.array([0.3, 0.1, 0.3, beta3])
        assert logistic_prob(x, beta) == pytest.approx(expected, abs=5e-4)

    def test_stable_at_extreme_linear_predictors(self):
        with np.errstate(over="raise"):
            hi = logistic_prob(np.array([1.0]), np.array([700.0]))
            lo = logistic_prob(np.array([1.0]), np.array([-700.0]))
        assert hi == pytest.approx(1.0)
        assert lo == pytest.approx(0.0, abs=1e-300)

    def test_symmetry_about_zero(self):
        rng = np.random.default_rng(11)
        x = rng.standard_normal(4)
        beta = rng.standard_normal(4)
        assert logistic_prob(x, beta) + logistic_prob(-x, beta) == pytest.approx(1.0)

    def test_length_mismatch(self):
        with pytest.raises(DataError):
            logistic_prob(np.ones(2), np.ones(3))


class TestLogisticMle:
    def test_intercept_only_closed_form(self):
        y = np.array([1.0] * 30 + [0.0] * 70)
        fit = logistic_mle(np.ones((100, 1)), y)
        assert fit.beta[0] == pytest.approx(np.log(0.3 / 0.7), abs=1e-8)

    def test_balanced_symmetric_design_near_zero(self):
        X = np.column_stack([np.ones(4), [-1.0, -1.0, 1.0, 1.0]])
        y = np.array([0.0, 1.0, 0.0, 1.0])
        fit = logistic_mle(X, y)
        np.testing.assert_allclose(fit.beta, 0.0, atol=1e-7)

    def test_against_independent_newton_oracle(self):
        rng = np.random.default_rng(12)
        X = np.column_stack([np.ones(100), rng.standard_normal(100)])
        y = (rng.random(100) < expit(X @ np.array([0.5, -1.0]))).astype(float)
        oracle = newton_logistic_oracle(X, y)
        fit = logistic_mle(X, y)
        np.testing.assert_allclose(fit.beta, oracle, atol=1e-6)
        assert fit.converged

    def test_score_residual_at_convergence(self):
        rng = np.random.default_rng(13)
        X = np.column_stack([np.ones(150), rng.standard_normal((150, 2))])
        y = (rng.random(150) < expit(X @ np.array([0.2, 0.7, -0.4]))).astype(float)
        fit = logistic_mle(X, y)
        p = expit(X @ fit.beta)
        assert np.max(np.abs(X.T @ (y - p))) <= 1e-8

    def test_separation_raises(self):
        x = np.linspace(-2, 2, 20)
        X = np.column_stack([np.ones(20), x])
        y = (x > 0).astype(float)  # perfectly separated
        with pytest.raises(NonConvergenceError):
            logistic_mle(X, y)

    def test_loglik_recorded(self):
        rng = np.random.default_rng(14)
        X = np.column_stack([np.ones(50), rng.standard_normal(50)])
        y = (rng.random(50) < 0.5).astype(float)
        fit = logistic_mle(X, y)
        eta = X @ fit.beta
        expected = float(y @ eta - np.sum(np.logaddexp(0.0, eta)))
        assert fit.loglik == pytest.approx(expected, rel=1e-12)

    def test_rejects_non_binary_response(self):
        with pytest.raises(DataError):
            logistic_mle(np.ones((3, 1)), np.array([0.0, 0.5, 1.0]))


class TestLogisticPseudoFit:
    def test_recovers_representable_target(self):
        rng = np.random.default_rng(15)
        X = np.column_stack([np.ones(80), rng.standard_normal((80, 2))])
        beta0 = np.array([0.3, -0.7, 1.1])
        fit = logistic_pseudo_fit(X, expit(X @ beta0))
        np.testing.assert_allclose(fit.beta, beta0, atol=1e-8)

    def test_intercept_only_matches_logit_of_mean(self):
        rng = np.random.default_rng(16)
        target = rng.uniform(0.2, 0.8, size=40)
        fit = logistic_pseudo_fit(np.ones((40, 1)), target)
        assert fit.beta[0] == pytest.approx(
            np.log(target.mean() / (1 - target.mean())), abs=1e-8
        )

    def test_score_residual_at_convergence(self):
        rng = np.random.default_rng(17)
        X = np.column_stack([np.ones(60), rng.standard_normal((60, 2))])
        target = rng.uniform(0.1, 0.9, size=60)
        fit = logistic_pseudo_fit(X, target)
        assert np.max(np.abs(X.T @ (target - expit(X @ fit.beta)))) <= 1e-8
        assert fit.iterations >= 1

    def test_accepts_prob_vector_type(self):
        target = ProbVector(np.full(10, 0.4))
        fit = logistic_pseudo_fit(np.ones((10, 1)), target)
        assert fit.beta[0] == pytest.approx(np.log(0.4 / 0.6), abs=1e-8)

    def test_rejects_out_of_range_target(self):
        with pytest.raises(DataError):
            logistic_pseudo_fit(np.ones((3, 1)), np.array([0.2, 1.0, 0.4]))


class TestProbVector:
    def test_validates_open_interval(self):
        with pytest.raises(DataError):
            ProbVector(np.array([0.0, 0.5]))
        with pytest.raises(DataError):
            ProbVector(np.array([0.5, 1.0]))

    def test_frozen(self):
        pv = ProbVector(np.array([0.25, 0.75]))
        with pytest.raises(ValueError):
            pv.probs[0] = 0.5
