"""The model-averaging estimator itself, and subsample prediction bands.

An averaged estimate is a convex combination of per-model functional
estimates: each candidate is fit to the data, the functional is
evaluated on its padded coefficient vector, and the weights come from
one of three schemes:

* ``optimal`` — minimise the estimated asymptotic MSE over the simplex,
* ``aic``     — smoothed-AIC weights from the per-model likelihoods,
* ``equal``   — the uniform baseline.

Per-model values always use the data fits (OLS / logistic MLE); the
``optimal`` scheme's quadratic form internally uses pseudo-fits for the
logistic bias entries, which is a property of the MSE estimate, not of
the reported estimator.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .errors import DataError
from .mse_weights import (
    LinearQFactory,
    QuadraticForm,
    aic_weights,
    build_q_logistic,
    equal_weights,
    solve_simplex_qp,
)
from .glm_fit import FitResult, logistic_mle
from .model_space import ModelSet, augment, subset_columns, subset_point
from .rng import substream

SCHEMES = ("optimal", "aic", "equal")


@dataclass(frozen=True)
class Functional:
    """Target of estimation: a linear point value, a logistic probability, or one coordinate."""

    kind: str
    x_star: np.ndarray | None = None
    index: int | None = None

    def __post_init__(self):
        if self.kind not in ("linear_point", "logistic_point", "coordinate"):
            raise DataError(f"unknown functional kind {self.kind!r}")
        if self.kind == "coordinate":
            if self.index is None or self.index < 0:
                raise DataError("coordinate functional needs a non-negative index")
        else:
            if self.x_star is None:
                raise DataError(f"{self.kind} functional needs an x_star vector")
            arr = np.array(self.x_star, dtype=float)
            arr.flags.writeable = False
            object.__setattr__(self, "x_star", arr)

    @classmethod
    def linear_point(cls, x_star) -> "Functional":
        return cls(kind="linear_point", x_star=np.asarray(x_star, dtype=float))

    @classmethod
    def logistic_point(cls, x_star) -> "Functional":
        return cls(kind="logistic_point", x_star=np.asarray(x_star, dtype=float))

    @classmethod
    def coordinate(cls, index: int) -> "Functional":
        return cls(kind="coordinate", index=int(index))

    def resolve(self, total_dim: int) -> np.ndarray:
        """The x* vector of length ``total_dim`` this functional evaluates against.

        A coordinate functional is the linear functional with a unit x*.
        """
        if self.kind == "coordinate":
            if self.index >= total_dim:
                raise DataError(f"coordinate index {self.index} out of range for dimension {total_dim}")
            e = np.zeros(total_dim)
            e[self.index] = 1.0
            return e
        if self.x_star.shape[0] != total_dim:
            raise DataError(
                f"x_star has length {self.x_star.shape[0]}, model space needs {total_dim}"
            )
        return np.asarray(self.x_star, dtype=float)


@dataclass(frozen=True)
class AveragedEstimate:
    """Weighted combination of per-model estimates, with its ingredients."""

    value: float
    weights: np.ndarray
    per_model: np.ndarray
    q_hat: QuadraticForm | None = None

    def __post_init__(self):
        for name in ("weights", "per_model"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "weights": self.weights.tolist(),
            "per_model": self.per_model.tolist(),
        }


@dataclass(frozen=True)
class PredictionBand:
    """Quantile band for one predicted response."""

    point: float
    lower: float
    upper: float
    level: float

    def to_dict(self) -> dict:
        return {"point": self.point, "lower": self.lower, "upper": self.upper, "level": self.level}


def average_estimate(weights: np.ndarray, per_model: np.ndarray) -> float:
    """Dot product of simplex weights with per-model estimates."""
    weights = np.asarray(weights, dtype=float)
    per_model = np.asarray(per_model, dtype=float)
    if weights.shape != per_model.shape:
        raise DataError("weights and per-model values must have the same length")
    if np.any(weights < -1e-9) or abs(weights.sum() - 1.0) > 1e-9:
        raise DataError("weights must lie on the probability simplex")
    return float(weights @ per_model)


def _check_scheme(scheme: str):
    if scheme not in SCHEMES:
        raise DataError(f"unknown weighting scheme {scheme!r}; expected one of {SCHEMES}")


class LinearAveragingPredictor:
    """Averaging predictor bound to one training set.

    Fits every candidate once; each subsequent ``predict`` call costs
    only the weight computation for its x*.  ``fit_and_average_linear``
    is the one-shot convenience wrapper around this class.
    """

    def __init__(self, X: np.ndarray, y: np.ndarray, models: ModelSet):
        self.models = models
        self.factory = LinearQFactory(X, y, list(models))
        self._aic = None

    def fit_results(self) -> list[FitResult]:
        betas = self.factory.model_betas()
        logliks = self.factory.logliks()
        out = []
        for model, beta, ll in zip(self.models, betas, logliks):
            out.append(
                FitResult(
                    beta=beta,
                    augmented=augment(beta, model, self.models.q),
                    loglik=float(ll),
                    dim=beta.shape[0],
                )
            )
        return out

    def _aic_weights(self) -> np.ndarray:
        if self._aic is None:
            self._aic = aic_weights(self.fit_results())
        return self._aic

    def predict(self, x_star: np.ndarray, scheme: str = "optimal") -> AveragedEstimate:
        _check_scheme(scheme)
        x_star = np.asarray(x_star, dtype=float)
        per_model = self.factory.per_model_values(x_star)
        q_hat = None
        if scheme == "optimal":
            q_hat = self.factory.q_form(x_star)
            weights = solve_simplex_qp(q_hat).weights
        elif scheme == "aic":
            weights = self._aic_weights()
        else:
            weights = equal_weights(len(self.models))
        return AveragedEstimate(
            value=average_estimate(weights, per_model),
            weights=weights,
            per_model=per_model,
            q_hat=q_hat,
        )


def fit_and_average_linear(
    X: np.ndarray,
    y: np.ndarray,
    models: ModelSet,
    functional: Functional,
    scheme: str = "optimal",
) -> AveragedEstimate:
    """Fit all candidates by OLS and combine x*'beta estimates under ``scheme``."""
    if functional.kind not in ("linear_point", "coordinate"):
        raise DataError("linear averaging needs a linear_point or coordinate functional")
    X = np.asarray(X, dtype=float)
    total = models.p_fixed + models.q
    if X.shape[1] != total:
        raise DataError(f"design has {X.shape[1]} columns, model space needs {total}")
    x_star = functional.resolve(total)
    return LinearAveragingPredictor(X, y, models).predict(x_star, scheme)


def fit_and_average_logistic(
    X: np.ndarray,
    y: np.ndarray,
    models: ModelSet,
    functional: Functional,
    scheme: str = "optimal",
) -> AveragedEstimate:
    """Fit all candidates by logistic MLE and combine probability estimates at x*."""
    if functional.kind != "logistic_point":
        raise DataError("logistic averaging needs a logistic_point functional")
    _check_scheme(scheme)
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    total = models.p_fixed + models.q
    if X.shape[1] != total:
        raise DataError(f"design has {X.shape[1]} columns, model space needs {total}")
    x_star = functional.resolve(total)

    fits = [
        logistic_mle(subset_columns(X, m), y, model=m, q=models.q) for m in models
    ]
    per_model = np.array(
        [float(expit(subset_point(x_star, m) @ f.beta)) for m, f in zip(models, fits)]
    )
    q_hat = None
    if scheme == "optimal":
        q_hat = build_q_logistic(X, y, list(models), x_star)
        weights = solve_simplex_qp(q_hat).weights
    elif scheme == "aic":
        weights = aic_weights(fits)
    else:
        weights = equal_weights(len(models))
    return AveragedEstimate(
        value=average_estimate(weights, per_model),
        weights=weights,
        per_model=per_model,
        q_hat=q_hat,
    )


def prediction_band(
    X_pool: np.ndarray,
    y_pool: np.ndarray,
    test_point: np.ndarray,
    models: ModelSet,
    *,
    n_sub: int = 50,
    n_reps: int = 50,
    sigma: float,
    level: float = 0.9,
    seed: int = 0,
    scheme: str = "optimal",
    workers: int = 1,
) -> PredictionBand:
    """Subsample-and-perturb prediction band for one test covariate row.

    Each replication draws ``n_sub`` pool rows without replacement,
    averages the linear predictions at ``test_point`` under ``scheme``,
    and adds one Gaussian draw with standard deviation ``sigma``; the
    band is the empirical (1 +/- level)/2 quantile pair of those draws
    and the point estimate is the mean of the replication means.
    Replication r uses the stream derived from (seed, r), so the result
    is identical for any ``workers`` count or execution order.
    """
    X_pool = np.asarray(X_pool, dtype=float)
    y_pool = np.asarray(y_pool, dtype=float)
    test_point = np.asarray(test_point, dtype=float)
    if not 0.0 < level < 1.0:
        raise DataError("level must be strictly between 0 and 1")
    if n_sub > X_pool.shape[0]:
        raise DataError(f"n_sub={n_sub} exceeds the pool size {X_pool.shape[0]}")
    if n_reps < 1:
        raise DataError("n_reps must be at least 1")

    functional = Functional.linear_point(test_point)

    def one_replication(rep: int) -> tuple[float, float]:
        rng = substream(seed, "band", rep)
        idx = rng.choice(X_pool.shape[0], size=n_sub, replace=False)
        est = fit_and_average_linear(X_pool[idx], y_pool[idx], models, functional, scheme)
        return est.value, est.value + rng.normal(0.0, sigma)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one_replication, range(n_reps)))
    else:
        results = [one_replication(rep) for rep in range(n_reps)]
    means = np.array([m for m, _ in results])
    draws = np.array([d for _, d in results])
    alpha = (1.0 - level) / 2.0
    lower, upper = np.quantile(draws, [alpha, 1.0 - alpha])
    return PredictionBand(
        point=float(np.mean(means)), lower=float(lower), upper=float(upper), level=level
    )
