"""Repeated train/test comparison of prediction methods.

The comparison protocol mirrors a crude repeated holdout: each repeat
draws one train/test split, every method sees exactly the same split
(paired comparison), prediction error is the mean squared error over
the test rows, and errors are averaged over repeats.

``best_subset`` performs an all-subsets search over the optional
predictors; the subset is chosen inside the training split only —
either by 5-fold cross-validation (default) or by training AIC — then
refit on the whole training split and scored once on the test split.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .averaging import LinearAveragingPredictor
from .dataio import Dataset, split
from .errors import CapacityError, DataError
from .glm_fit import ols_fit
from .model_space import ModelSet, enumerate_all_subsets, subset_columns
from .rng import derive_seed, substream

DEFAULT_METHODS = ("avg_optimal", "avg_aic", "best_subset", "full_model")
_TRAIN_FRACTION = 67 / 97  # the stock prostate protocol's 67/30 split, kept proportional


@dataclass
class CvReport:
    """Per-method mean prediction errors plus the per-repeat log."""

    mean_errors: dict[str, float]
    per_repeat: list[dict] = field(default_factory=list)
    n_train: int = 0
    n_test: int = 0
    n_repeats: int = 0
    seed: int = 0

    def to_dict(self) -> dict:
        return {
            "mean_errors": self.mean_errors,
            "n_train": self.n_train,
            "n_test": self.n_test,
            "n_repeats": self.n_repeats,
            "seed": self.seed,
            "per_repeat": self.per_repeat,
        }


def _default_n_train(n: int) -> int:
    n_train = int(round(n * _TRAIN_FRACTION))
    return min(max(n_train, 1), n - 1)


def _test_mse(beta: np.ndarray, model, test: Dataset) -> float:
    X_test = subset_columns(test.design, model)
    return float(np.mean((test.response - X_test @ beta) ** 2))


def _cv_folds(n: int, n_folds: int, seed: int, repeat: int):
    perm = substream(seed, "folds", repeat).permutation(n)
    return np.array_split(perm, n_folds)


def select_best_subset(
    train: Dataset,
    *,
    select_by: str = "cv",
    n_folds: int = 5,
    seed: int = 0,
    repeat: int = 0,
):
    """Pick the optional-predictor subset by inner CV (or training AIC).

    Returns the winning CandidateModel.  Ties break toward the earlier
    model in enumeration order, which is also the smaller index set.
    """
    q = train.d - 1
    if q > 20:
        raise CapacityError(f"all-subsets search over {q} optional predictors is too large")
    candidates = enumerate_all_subsets(1, q)

    if select_by == "aic":
        aics = []
        for model in candidates:
            fit = ols_fit(subset_columns(train.design, model), train.response, model=model)
            aics.append(-2.0 * fit.loglik + 2.0 * fit.dim)
        return candidates[int(np.argmin(aics))]
    if select_by != "cv":
        raise DataError(f"unknown selection rule {select_by!r}; expected 'cv' or 'aic'")

    folds = _cv_folds(train.n, n_folds, seed, repeat)
    scores = np.zeros(len(candidates))
    for fold in folds:
        mask = np.ones(train.n, dtype=bool)
        mask[fold] = False
        inner_train, held = train.take(np.flatnonzero(mask)), train.take(fold)
        for j, model in enumerate(candidates):
            fit = ols_fit(subset_columns(inner_train.design, model), inner_train.response, model=model)
            scores[j] += _test_mse(fit.beta, model, held) * fold.size
    return candidates[int(np.argmin(scores))]


def best_subset_cv(
    dataset: Dataset,
    n_repeats: int = 5,
    seed: int = 0,
    *,
    n_train: int | None = None,
    select_by: str = "cv",
) -> float:
    """Mean test MSE of best-subset selection over repeated holdout splits."""
    if n_train is None:
        n_train = _default_n_train(dataset.n)
    errors = []
    for repeat in range(n_repeats):
        train, test = split(dataset, n_train, derive_seed(seed, "cv-split", repeat))
        model = select_best_subset(train, select_by=select_by, seed=seed, repeat=repeat)
        fit = ols_fit(subset_columns(train.design, model), train.response, model=model)
        errors.append(_test_mse(fit.beta, model, test))
    return float(np.mean(errors))


def cv_compare(
    dataset: Dataset,
    methods=DEFAULT_METHODS,
    n_repeats: int = 5,
    seed: int = 0,
    *,
    n_train: int | None = None,
    models: ModelSet | None = None,
    select_by: str = "cv",
    workers: int = 1,
) -> CvReport:
    """Compare prediction methods on identical repeated holdout splits.

    Averaging methods predict each test row with x* set to that row's
    covariates (weights re-solved per row for the optimal scheme; AIC
    weights depend on the training fit only).  Each repeat's split and
    fold seeds derive from (seed, repeat), so the report is identical
    for any ``workers`` count.
    """
    if dataset.family != "linear":
        raise DataError("cv_compare supports the linear family only")
    unknown = set(methods) - set(DEFAULT_METHODS)
    if unknown:
        raise DataError(f"unknown methods {sorted(unknown)}; expected subset of {DEFAULT_METHODS}")
    if n_train is None:
        n_train = _default_n_train(dataset.n)
    if models is None and {"avg_optimal", "avg_aic"} & set(methods):
        models = enumerate_all_subsets(1, dataset.d - 1)

    def one_repeat(repeat: int) -> list[float]:
        train, test = split(dataset, n_train, derive_seed(seed, "cv-split", repeat))
        predictor = None
        if {"avg_optimal", "avg_aic"} & set(methods):
            predictor = LinearAveragingPredictor(train.design, train.response, models)
        repeat_errors = []
        for method in methods:
            if method == "full_model":
                fit = ols_fit(train.design, train.response)
                err = float(np.mean((test.response - test.design @ fit.beta) ** 2))
            elif method == "best_subset":
                model = select_best_subset(train, select_by=select_by, seed=seed, repeat=repeat)
                fit = ols_fit(subset_columns(train.design, model), train.response, model=model)
                err = _test_mse(fit.beta, model, test)
            else:
                scheme = "optimal" if method == "avg_optimal" else "aic"
                preds = np.array(
                    [predictor.predict(test.design[i], scheme).value for i in range(test.n)]
                )
                err = float(np.mean((test.response - preds) ** 2))
            repeat_errors.append(err)
        return repeat_errors

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one_repeat, range(n_repeats)))
    else:
        results = [one_repeat(repeat) for repeat in range(n_repeats)]

    per_repeat = []
    errors: dict[str, list[float]] = {m: [] for m in methods}
    for repeat, repeat_errors in enumerate(results):
        for method, err in zip(methods, repeat_errors):
            errors[method].append(err)
            per_repeat.append({"repeat": repeat, "method": method, "error": err})

    return CvReport(
        mean_errors={m: float(np.mean(errors[m])) for m in methods},
        per_repeat=per_repeat,
        n_train=n_train,
        n_test=dataset.n - n_train,
        n_repeats=n_repeats,
        seed=seed,
    )
