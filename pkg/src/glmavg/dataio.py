"""CSV ingestion, serialization, and train/test splitting.

A ``Dataset`` is a numeric response plus a design matrix whose first
column is an all-ones intercept; predictor columns keep the CSV's
order.  Ordered categorical variables are passed through as numbers —
no factor encoding happens here.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .errors import DataError
from .rng import substream

INTERCEPT_NAME = "(intercept)"


@dataclass(frozen=True)
class Dataset:
    """Numeric regression data with a leading intercept column."""

    response: np.ndarray
    design: np.ndarray
    column_names: list[str]
    family: str
    response_name: str = "y"

    def __post_init__(self):
        response = np.array(self.response, dtype=float)
        design = np.array(self.design, dtype=float)
        if self.family not in ("linear", "logistic"):
            raise DataError(f"unknown family {self.family!r}")
        if response.ndim != 1 or design.ndim != 2 or design.shape[0] != response.shape[0]:
            raise DataError("response must be (n,) and design (n, d) with matching n")
        if len(self.column_names) != design.shape[1]:
            raise DataError("need one column name per design column")
        if not (np.all(np.isfinite(response)) and np.all(np.isfinite(design))):
            raise DataError("data must not contain missing or non-finite values")
        if design.shape[0] > 0 and not np.all(design[:, 0] == 1.0):
            raise DataError("the first design column must be an all-ones intercept")
        response.flags.writeable = False
        design.flags.writeable = False
        object.__setattr__(self, "response", response)
        object.__setattr__(self, "design", design)

    @property
    def n(self) -> int:
        return self.response.shape[0]

    @property
    def d(self) -> int:
        return self.design.shape[1]

    def take(self, indices) -> "Dataset":
        """Row subset as a new Dataset (indices kept in the given order)."""
        idx = np.asarray(indices, dtype=int)
        return Dataset(
            response=self.response[idx],
            design=self.design[idx],
            column_names=list(self.column_names),
            family=self.family,
            response_name=self.response_name,
        )


def load_csv(path, response_column: str, family: str = "linear") -> Dataset:
    """Read a numeric CSV with a header row into a Dataset.

    All non-response columns become predictors in file order, behind a
    prepended intercept column.  Parse failures report the offending
    row and column.
    """
    with open(path, newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty file, expected a header row") from None
        header = [h.strip() for h in header]
        if response_column not in header:
            raise DataError(f"{path}: no column named {response_column!r} in header {header}")
        response_idx = header.index(response_column)
        predictor_names = [h for i, h in enumerate(header) if i != response_idx]

        response = []
        rows = []
        for lineno, record in enumerate(reader, start=2):
            if len(record) != len(header):
                raise DataError(
                    f"{path}: row {lineno} has {len(record)} cells, header has {len(header)}"
                )
            parsed = []
            for name, cell in zip(header, record):
                cell = cell.strip()
                if cell == "":
                    raise DataError(f"{path}: missing value at row {lineno}, column {name!r}")
                try:
                    parsed.append(float(cell))
                except ValueError:
                    raise DataError(
                        f"{path}: cannot parse {cell!r} at row {lineno}, column {name!r}"
                    ) from None
            response.append(parsed[response_idx])
            rows.append([v for i, v in enumerate(parsed) if i != response_idx])

    if not rows:
        raise DataError(f"{path}: no data rows")
    design = np.column_stack([np.ones(len(rows)), np.asarray(rows, dtype=float)])
    return Dataset(
        response=np.asarray(response, dtype=float),
        design=design,
        column_names=[INTERCEPT_NAME] + predictor_names,
        family=family,
        response_name=response_column,
    )


def save_csv(dataset: Dataset, path) -> None:
    """Write predictors + response back to CSV with round-trippable floats."""
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(dataset.column_names[1:] + [dataset.response_name])
        for i in range(dataset.n):
            row = [repr(float(v)) for v in dataset.design[i, 1:]]
            row.append(repr(float(dataset.response[i])))
            writer.writerow(row)


def split(dataset: Dataset, n_train: int, seed: int) -> tuple[Dataset, Dataset]:
    """Uniform without-replacement split into (train, test), deterministic in seed."""
    if not 0 < n_train < dataset.n:
        raise DataError(f"n_train must be in (0, {dataset.n}), got {n_train}")
    perm = substream(seed, "split").permutation(dataset.n)
    train_idx = np.sort(perm[:n_train])
    test_idx = np.sort(perm[n_train:])
    return dataset.take(train_idx), dataset.take(test_idx)
