"""Estimated asymptotic MSE of the averaging estimator and optimal weights.

For a candidate set of K models and a target functional at x*, the
estimated mean squared error of the weighted-average estimator is the
quadratic form

    Qhat(w) = (b'w)^2 + |A w|^2 = w' (b b' + A'A) w

where ``b[k]`` is model k's estimated bias of the functional relative
to the full-model plug-in, and column k of the Gram factor ``A`` is
chosen so that ``A'A`` reproduces the estimated covariance of the
per-model functional estimates:

* linear family:  b_k = x_k*' beta_k - x*' beta_full and
  a_k = sigma_full X_k (X_k'X_k)^{-1} x_k*, so entry (j, k) of A'A is
  the estimated covariance of the two models' point predictions.
* logistic family: b_k = p_k* - p_full at x*, with p_k* the pseudo-fit
  of model k against the full-model fitted probabilities, and
  a_k = W_full^{1/2} X_k M_k^{-1} x_k* p_k*(1-p_k*) with
  M_k = X_k' diag(p_k(1-p_k)) X_k and W_full = diag(p_full(1-p_full)).

The factored construction keeps Qhat symmetric positive semidefinite by
construction; tests cross-check it entrywise against the literal
double-sum expressions.

Optimal weights minimise w'Qhat w over the probability simplex.  The
program is convex, so an accelerated projected-gradient method (step
1/L, L from power iteration, gradient-based adaptive restart) converges
to the global minimum; an active-set refinement solves the equality-
constrained KKT system on the identified support and is accepted only
after explicit KKT verification.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.linalg import solve_triangular
from scipy.special import expit

from .errors import DataError, NumericalError
from .glm_fit import (
    FitResult,
    _gaussian_profile_loglik,
    full_linear_fit,
    gram_solve,
    logistic_mle,
    logistic_pseudo_fit,
    qr_factor,
)
from .model_space import CandidateModel, subset_columns, subset_point

SOLVER_MAX_ITER = 10_000
SOLVER_GRAD_TOL = 1e-10
_SUPPORT_TOL = 1e-10


@dataclass(frozen=True)
class QuadraticForm:
    """Estimated-MSE quadratic form: bias vector b, Gram factor A, matrix b b' + A'A."""

    bias: np.ndarray
    gram_factor: np.ndarray
    matrix: np.ndarray

    @classmethod
    def from_parts(cls, bias: np.ndarray, gram_factor: np.ndarray) -> "QuadraticForm":
        bias = np.asarray(bias, dtype=float)
        gram_factor = np.asarray(gram_factor, dtype=float)
        if bias.ndim != 1 or gram_factor.ndim != 2 or gram_factor.shape[1] != bias.shape[0]:
            raise DataError("bias must be (K,) and gram_factor (n, K)")
        if bias.shape[0] == 0:
            raise DataError("a quadratic form needs at least one model")
        matrix = np.outer(bias, bias) + gram_factor.T @ gram_factor
        matrix = 0.5 * (matrix + matrix.T)
        for arr in (bias, gram_factor, matrix):
            arr.flags.writeable = False
        return cls(bias=bias, gram_factor=gram_factor, matrix=matrix)

    @property
    def n_models(self) -> int:
        return self.bias.shape[0]


@dataclass(frozen=True)
class WeightSolution:
    """Simplex point returned by the weight solver, with diagnostics."""

    weights: np.ndarray
    objective: float
    iterations: int
    kkt_residual: float

    def __post_init__(self):
        arr = np.array(self.weights, dtype=float)
        arr.flags.writeable = False
        object.__setattr__(self, "weights", arr)


# ---------------------------------------------------------------------------
# Qhat construction
# ---------------------------------------------------------------------------


class LinearQFactory:
    """Per-model factorisations of one (X, y), reusable across many x*.

    Fitting all candidate models costs one QR per model; everything a
    functional needs afterwards (bias entries, Gram-factor columns,
    per-model point estimates) is a pair of triangular solves per model.
    Cross-validation and prediction-band code predicts at many points
    from the same training data, so the split matters there.
    """

    def __init__(self, X: np.ndarray, y: np.ndarray, models: Sequence[CandidateModel]):
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=float)
        full = full_linear_fit(X, y)
        self.models = list(models)
        self.n = X.shape[0]
        self.beta_full = full.beta_full
        self.sigma2 = full.sigma2
        self._parts = []
        for model in self.models:
            X_k = subset_columns(X, model)
            # same solve path as ols_fit, so single-model averaging
            # reproduces the plain fit bit-for-bit
            Q, R = qr_factor(X_k, model=model)
            beta_k = solve_triangular(R, Q.T @ y, lower=False)
            rss = float(np.sum((y - X_k @ beta_k) ** 2))
            self._parts.append((model, X_k, R, beta_k, rss))

    def model_betas(self) -> list[np.ndarray]:
        return [beta_k for (_, _, _, beta_k, _) in self._parts]

    def logliks(self) -> np.ndarray:
        return np.array([_gaussian_profile_loglik(rss, self.n) for (*_, rss) in self._parts])

    def dims(self) -> np.ndarray:
        return np.array([X_k.shape[1] for (_, X_k, _, _, _) in self._parts])

    def per_model_values(self, x_star: np.ndarray) -> np.ndarray:
        """x_k*' beta_k for every candidate (the per-model functional estimates)."""
        x_star = np.asarray(x_star, dtype=float)
        return np.array(
            [float(subset_point(x_star, model) @ beta_k) for (model, _, _, beta_k, _) in self._parts]
        )

    def q_form(self, x_star: np.ndarray) -> QuadraticForm:
        x_star = np.asarray(x_star, dtype=float)
        if x_star.shape[0] != self.beta_full.shape[0]:
            raise DataError("x_star length must match the design's column count")
        mu_full = float(x_star @ self.beta_full)
        sigma = np.sqrt(self.sigma2)
        K = len(self._parts)
        bias = np.empty(K)
        A = np.empty((self.n, K))
        for k, (model, X_k, R, beta_k, _) in enumerate(self._parts):
            x_k = subset_point(x_star, model)
            bias[k] = float(x_k @ beta_k) - mu_full
            A[:, k] = sigma * (X_k @ gram_solve(R, x_k))
        return QuadraticForm.from_parts(bias, A)


def build_q_linear(
    X: np.ndarray,
    y: np.ndarray,
    models: Sequence[CandidateModel],
    x_star: np.ndarray,
) -> QuadraticForm:
    """Estimated-MSE form for a linear functional x*'beta under OLS fits."""
    X = np.asarray(X, dtype=float)
    x_star = np.asarray(x_star, dtype=float)
    if x_star.shape[0] != X.shape[1]:
        raise DataError("x_star length must match the design's column count")
    return LinearQFactory(X, y, models).q_form(x_star)


def build_q_logistic(
    X: np.ndarray,
    y: np.ndarray,
    models: Sequence[CandidateModel],
    x_star: np.ndarray,
) -> QuadraticForm:
    """Estimated-MSE form for the probability functional p(x*'beta) under logistic fits.

    The full-model MLE supplies both the truth plug-in (fitted
    probabilities and their Bernoulli variances) and the target each
    candidate is pseudo-fit against.  Fit failures propagate with the
    offending model attached.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    x_star = np.asarray(x_star, dtype=float)
    if x_star.shape[0] != X.shape[1]:
        raise DataError("x_star length must match the design's column count")

    full_fit = logistic_mle(X, y)
    p_full = expit(X @ full_fit.beta)
    p_full_star = float(expit(x_star @ full_fit.beta))
    sqrt_w_true = np.sqrt(p_full * (1.0 - p_full))

    K = len(models)
    bias = np.empty(K)
    A = np.empty((X.shape[0], K))
    for k, model in enumerate(models):
        X_k = subset_columns(X, model)
        x_k = subset_point(x_star, model)
        pseudo = logistic_pseudo_fit(X_k, p_full, model=model)
        p_k = expit(X_k @ pseudo.beta)
        p_k_star = float(expit(x_k @ pseudo.beta))
        bias[k] = p_k_star - p_full_star
        # M_k^{-1} x_k via the QR of the weighted design sqrt(p(1-p)) X_k.
        _, R = qr_factor(np.sqrt(p_k * (1.0 - p_k))[:, None] * X_k, model=model)
        v = gram_solve(R, x_k)
        A[:, k] = sqrt_w_true * (X_k @ v) * (p_k_star * (1.0 - p_k_star))
    return QuadraticForm.from_parts(bias, A)


# ---------------------------------------------------------------------------
# simplex machinery
# ---------------------------------------------------------------------------


def project_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection onto {w : w >= 0, sum w = 1} by sort and threshold."""
    v = np.asarray(v, dtype=float)
    if v.ndim != 1 or v.shape[0] < 1:
        raise DataError("need a 1-d vector with at least one entry")
    s = np.sort(v)[::-1]
    cumulative = np.cumsum(s) - 1.0
    rho = np.flatnonzero(s * np.arange(1, v.shape[0] + 1) > cumulative)[-1]
    tau = cumulative[rho] / (rho + 1.0)
    return np.maximum(v - tau, 0.0)


def equal_weights(K: int) -> np.ndarray:
    """Uniform baseline weights 1/K."""
    if K < 1:
        raise DataError("K must be at least 1")
    return np.full(K, 1.0 / K)


def aic_weights(fits: Sequence[FitResult]) -> np.ndarray:
    """Smoothed-AIC weights: w_k proportional to exp(-AIC_k / 2).

    AIC_k = -2 loglik + 2 dim, rescaled against the minimum so the
    weights are invariant under a common shift.  Infinitely good fits
    (exact linear interpolation gives loglik = +inf) share the weight
    equally among themselves.
    """
    aic = np.array([-2.0 * f.loglik + 2.0 * f.dim for f in fits])
    if np.any(np.isnan(aic)):
        raise DataError("log-likelihoods must not be NaN")
    best = np.min(aic)
    if best == -np.inf:
        mask = np.isneginf(aic)
        return mask.astype(float) / mask.sum()
    if best == np.inf:
        raise DataError("every model has an infinitely bad fit; AIC weights are undefined")
    w = np.exp(-0.5 * (aic - best))
    return w / w.sum()


# ---------------------------------------------------------------------------
# simplex-constrained quadratic program
# ---------------------------------------------------------------------------


def _power_lambda_max(matvec, K: int, iters: int = 60) -> float:
    v = np.arange(1.0, K + 1.0)
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(iters):
        u = matvec(v)
        norm = np.linalg.norm(u)
        if norm == 0.0:
            return 0.0
        lam = float(v @ u)
        v = u / norm
    return max(lam, float(v @ matvec(v)))


def _kkt_residual(w: np.ndarray, grad: np.ndarray) -> float:
    # 0 iff support sits on the minimal gradient face (complementarity).
    return float(np.max(w * (grad - np.min(grad))))


def _solve_face_kkt(support: np.ndarray, submatrix):
    """Equality-constrained minimiser on one face: gradient constant on the support."""
    m = support.size
    system = np.empty((m + 1, m + 1))
    system[:m, :m] = 2.0 * submatrix(support)
    system[:m, m] = -1.0
    system[m, :m] = 1.0
    system[m, m] = 0.0
    rhs = np.zeros(m + 1)
    rhs[m] = 1.0
    try:
        sol = np.linalg.solve(system, rhs)
    except np.linalg.LinAlgError:
        return None
    return sol[:m]


def _verify_kkt(candidate, support, matvec):
    """Accept a face solution only if the full simplex KKT conditions hold."""
    grad = 2.0 * matvec(candidate)
    level = float(candidate @ grad)
    scale = max(1.0, float(np.max(np.abs(grad))))
    if np.max(np.abs(grad[support] - level)) > 1e-8 * scale:
        return False
    return bool(np.min(grad) >= level - 1e-10 * scale)


def _polish_active_set(w, matvec, submatrix, K):
    """Solve the KKT system on w's support; return the point only if KKT-verified."""
    support = np.flatnonzero(w > _SUPPORT_TOL)
    if support.size == 0:
        return None
    w_support = _solve_face_kkt(support, submatrix)
    if w_support is None or np.min(w_support) < -1e-9:
        return None
    candidate = np.zeros(K)
    candidate[support] = np.maximum(w_support, 0.0)
    candidate /= candidate.sum()
    if _verify_kkt(candidate, support, matvec):
        return candidate
    return None


def _active_set_solve(matvec, submatrix, diag_vec, K):
    """Pivoting fast path: grow/shrink a support until the exact KKT point appears.

    Every candidate it returns has been verified against the full KKT
    conditions, so a wrong pivot sequence can only cost time, never
    correctness; cycling or a singular face system bails out to the
    accelerated projected-gradient path.
    """
    support = [int(np.argmin(diag_vec))]
    max_pivots = min(4 * K + 16, 512)
    for pivot in range(max_pivots):
        idx = np.array(sorted(support))
        w_support = _solve_face_kkt(idx, submatrix)
        if w_support is None:
            return None, pivot
        if np.min(w_support) < -1e-12:
            if len(support) == 1:
                return None, pivot
            support.remove(int(idx[int(np.argmin(w_support))]))
            continue
        candidate = np.zeros(K)
        candidate[idx] = np.maximum(w_support, 0.0)
        candidate /= candidate.sum()
        grad = 2.0 * matvec(candidate)
        level = float(candidate @ grad)
        scale = max(1.0, float(np.max(np.abs(grad))))
        if np.max(np.abs(grad[idx] - level)) > 1e-8 * scale:
            return None, pivot
        slack = grad - (level - 1e-10 * scale)
        slack[idx] = np.inf
        worst = int(np.argmin(slack))
        if slack[worst] >= 0.0:
            return candidate, pivot + 1
        support.append(worst)
    return None, max_pivots


def solve_simplex_qp(
    q: QuadraticForm | np.ndarray,
    *,
    max_iter: int = SOLVER_MAX_ITER,
    grad_tol: float = SOLVER_GRAD_TOL,
) -> WeightSolution:
    """Minimise w'Qw over the probability simplex.

    Accepts either a ``QuadraticForm`` (whose factored structure makes
    gradients O(K(n+1)) instead of O(K^2) and is PSD by construction)
    or a raw symmetric matrix, which is symmetrised and, if roundoff
    pushed an eigenvalue below zero, lifted by ``max(0, -lambda_min) I``
    (a uniform diagonal shift changes every simplex objective by the
    same constant, so the minimiser is preserved).
    """
    if isinstance(q, QuadraticForm):
        b, A = q.bias, q.gram_factor
        if not (np.all(np.isfinite(b)) and np.all(np.isfinite(A))):
            raise NumericalError("non-finite entries in the quadratic form")
        K = q.n_models
        diag_vec = b * b + np.sum(A * A, axis=0)

        def matvec(w):
            return b * (b @ w) + A.T @ (A @ w)

        def submatrix(idx):
            cols = A[:, idx]
            return np.outer(b[idx], b[idx]) + cols.T @ cols

    else:
        Q = np.asarray(q, dtype=float)
        if Q.ndim != 2 or Q.shape[0] != Q.shape[1] or Q.shape[0] == 0:
            raise DataError("Q must be a non-empty square matrix")
        if not np.all(np.isfinite(Q)):
            raise NumericalError("non-finite entries in the quadratic form")
        Q = 0.5 * (Q + Q.T)
        lam_min = float(np.linalg.eigvalsh(Q)[0])
        if lam_min < 0.0:
            Q = Q + (-lam_min) * np.eye(Q.shape[0])
        K = Q.shape[0]
        diag_vec = np.diag(Q).copy()

        def matvec(w):
            return Q @ w

        def submatrix(idx):
            return Q[np.ix_(idx, idx)]

    if K == 1:
        w = np.ones(1)
        return WeightSolution(w, float(matvec(w)[0]), 0, 0.0)

    fast, pivots = _active_set_solve(matvec, submatrix, diag_vec, K)
    if fast is not None:
        grad = 2.0 * matvec(fast)
        return WeightSolution(
            weights=fast,
            objective=float(fast @ matvec(fast)),
            iterations=pivots,
            kkt_residual=_kkt_residual(fast, grad),
        )

    lam_max = _power_lambda_max(matvec, K)
    L = 2.0 * lam_max * 1.01 + 1e-30

    w = np.full(K, 1.0 / K)
    z = w.copy()
    t = 1.0
    iterations = 0
    for iterations in range(1, max_iter + 1):
        grad_z = 2.0 * matvec(z)
        w_new = project_simplex(z - grad_z / L)
        if (z - w_new) @ (w_new - w) > 0.0:
            # adaptive restart: momentum is pointing uphill
            t = 1.0
            z = w_new
        else:
            t_new = 0.5 * (1.0 + np.sqrt(1.0 + 4.0 * t * t))
            z = w_new + ((t - 1.0) / t_new) * (w_new - w)
            t = t_new
        w = w_new

        if iterations % 10 == 0 or iterations == max_iter:
            grad_w = 2.0 * matvec(w)
            mapping = (w - project_simplex(w - grad_w / L)) * L
            if np.linalg.norm(mapping) <= grad_tol:
                break
            if iterations % 50 == 0:
                polished = _polish_active_set(w, matvec, submatrix, K)
                if polished is not None:
                    w = polished
                    break

    polished = _polish_active_set(w, matvec, submatrix, K)
    if polished is not None and float(polished @ matvec(polished)) <= float(w @ matvec(w)):
        w = polished

    w = np.maximum(w, 0.0)
    w /= w.sum()
    grad = 2.0 * matvec(w)
    return WeightSolution(
        weights=w,
        objective=float(w @ matvec(w)),
        iterations=iterations,
        kkt_residual=_kkt_residual(w, grad),
    )
