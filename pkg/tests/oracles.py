"""Independent reference implementations used by the test suite.

Everything here recomputes a quantity along a different code path than
the library (explicit inverses, literal double sums, brute-force
enumeration, exhaustive grids, plain full-step Newton), so agreement is
evidence of correctness rather than self-confirmation.
"""

import itertools

import numpy as np
from scipy.special import expit

from glmavg import (
    full_linear_fit,
    logistic_mle,
    logistic_pseudo_fit,
    subset_columns,
    subset_point,
)


def q_linear_double_sum(X, y, models, x_star):
    """Literal double-sum of the estimated-MSE form (explicit inverses)."""
    full = full_linear_fit(X, y)
    mu_full = x_star @ full.beta_full
    K = len(models)
    bias = np.zeros(K)
    Q = np.zeros((K, K))
    for k, m in enumerate(models):
        Xk = subset_columns(X, m)
        xk = subset_point(x_star, m)
        beta_k = np.linalg.solve(Xk.T @ Xk, Xk.T @ y)
        bias[k] = xk @ beta_k - mu_full
    for k, mk in enumerate(models):
        Xk = subset_columns(X, mk)
        xk = subset_point(x_star, mk)
        for kp, mkp in enumerate(models):
            Xkp = subset_columns(X, mkp)
            xkp = subset_point(x_star, mkp)
            variance = full.sigma2 * (
                xk
                @ np.linalg.inv(Xk.T @ Xk)
                @ (Xk.T @ Xkp)
                @ np.linalg.inv(Xkp.T @ Xkp)
                @ xkp
            )
            Q[k, kp] = bias[k] * bias[kp] + variance
    return Q


def q_logistic_double_sum(X, y, models, x_star):
    """Literal double-sum for the logistic probability functional."""
    full = logistic_mle(X, y)
    p_full = expit(X @ full.beta)
    p_full_star = expit(x_star @ full.beta)
    W_true = np.diag(p_full * (1.0 - p_full))
    parts = []
    for m in models:
        Xk = subset_columns(X, m)
        xk = subset_point(x_star, m)
        pf = logistic_pseudo_fit(Xk, p_full)
        pk_vec = expit(Xk @ pf.beta)
        pk_star = expit(xk @ pf.beta)
        Mk = Xk.T @ np.diag(pk_vec * (1.0 - pk_vec)) @ Xk
        parts.append((Xk, xk, pk_star, Mk))
    K = len(models)
    Q = np.zeros((K, K))
    for k, (Xk, xk, pks, Mk) in enumerate(parts):
        for kp, (Xkp, xkp, pkps, Mkp) in enumerate(parts):
            bias_term = (pks - p_full_star) * (pkps - p_full_star)
            variance = (
                pks
                * (1 - pks)
                * (xk @ np.linalg.inv(Mk) @ (Xk.T @ W_true @ Xkp) @ np.linalg.inv(Mkp) @ xkp)
                * pkps
                * (1 - pkps)
            )
            Q[k, kp] = bias_term + variance
    return Q


def project_simplex_kkt_oracle(v):
    """Simplex projection by brute force over support sets (exact KKT enumeration)."""
    K = len(v)
    best = None
    for size in range(1, K + 1):
        for support in itertools.combinations(range(K), size):
            tau = (sum(v[list(support)]) - 1.0) / size
            w = np.zeros(K)
            w[list(support)] = v[list(support)] - tau
            if np.min(w[list(support)]) < -1e-12:
                continue
            if any(v[i] - tau > 1e-12 for i in range(K) if i not in support):
                continue
            candidate = np.maximum(w, 0.0)
            dist = np.sum((candidate - v) ** 2)
            if best is None or dist < best[0]:
                best = (dist, candidate)
    return best[1]


def grid_min_objective(Q, step=1e-3):
    """Exhaustive simplex-grid minimum of w'Qw for K in {1, 2, 3}."""
    K = Q.shape[0]
    if K == 1:
        return float(Q[0, 0])
    grid = np.arange(0.0, 1.0 + step / 2, step)
    if K == 2:
        W = np.column_stack([grid, 1.0 - grid])
    else:
        w1, w2 = np.meshgrid(grid, grid, indexing="ij")
        keep = w1 + w2 <= 1.0 + 1e-12
        W = np.column_stack([w1[keep], w2[keep], 1.0 - w1[keep] - w2[keep]])
    return float(np.min(np.einsum("ij,jk,ik->i", W, Q, W)))


def newton_logistic_oracle(X, y, tol=1e-12, iters=500):
    """Independent plain Newton logistic solver (full steps, explicit solve)."""
    beta = np.zeros(X.shape[1])
    for _ in range(iters):
        p = 1.0 / (1.0 + np.exp(-(X @ beta)))
        score = X.T @ (y - p)
        if np.max(np.abs(score)) < tol:
            break
        H = X.T @ (X * (p * (1.0 - p))[:, None])
        beta = beta + np.linalg.solve(H, score)
    return beta


def random_psd(rng, K, n=None):
    """Random PSD matrix with the bias-outer-product + Gram structure."""
    n = n if n is not None else K + 3
    b = rng.standard_normal(K)
    A = rng.standard_normal((n, K))
    return np.outer(b, b) + A.T @ A
