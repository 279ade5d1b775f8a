"""Candidate model sets over fixed + optional coefficients.

A candidate model keeps all ``p_fixed`` leading coefficients and some
subset of the ``q`` optional ones.  Full-length design matrices and
covariate vectors are laid out as ``[fixed columns | optional columns]``,
so optional index ``j`` lives at column ``p_fixed + j``.

Sub-model coefficient vectors are brought back to the common
(p_fixed + q)-dimensional coordinate system by padding the missing
optional coordinates with a fixed fill value (zero for all regression
targets used here), which makes every model commensurable under a
single linear functional.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import CapacityError, DataError

#: All-subsets enumeration is refused above this many optional coefficients.
MAX_ENUMERABLE_Q = 20


@dataclass(frozen=True)
class CandidateModel:
    """One candidate: ``p_fixed`` always-kept coefficients plus an optional-index subset."""

    included: tuple[int, ...]
    p_fixed: int

    def __post_init__(self):
        object.__setattr__(self, "included", tuple(int(i) for i in self.included))
        if self.p_fixed < 0:
            raise DataError("p_fixed must be non-negative")
        if any(i < 0 for i in self.included):
            raise DataError("optional indices must be non-negative")
        if any(b <= a for a, b in zip(self.included, self.included[1:])):
            raise DataError(f"optional indices must be strictly increasing, got {self.included}")
        if self.p_fixed + len(self.included) < 1:
            raise DataError("a candidate model must have at least one coefficient")

    @property
    def dim(self) -> int:
        """Number of coefficients this model estimates."""
        return self.p_fixed + len(self.included)

    def column_indices(self) -> list[int]:
        """Column positions of this model inside a full [fixed | optional] layout."""
        return list(range(self.p_fixed)) + [self.p_fixed + j for j in self.included]


class ModelSet:
    """Ordered collection of candidate models sharing one (p_fixed, q) layout."""

    def __init__(self, models: Sequence[CandidateModel], q: int):
        models = tuple(models)
        if not models:
            raise DataError("a model set must contain at least one model")
        q = int(q)
        if q < 0:
            raise DataError("q must be non-negative")
        p_fixed = models[0].p_fixed
        seen = set()
        for m in models:
            if m.p_fixed != p_fixed:
                raise DataError("all models in a set must share p_fixed")
            if m.included and m.included[-1] >= q:
                raise DataError(f"optional index {m.included[-1]} out of range for q={q}")
            if m.included in seen:
                raise DataError(f"duplicate candidate model {m.included}")
            seen.add(m.included)
        self.models = models
        self.q = q

    @property
    def p_fixed(self) -> int:
        return self.models[0].p_fixed

    def __len__(self) -> int:
        return len(self.models)

    def __iter__(self) -> Iterator[CandidateModel]:
        return iter(self.models)

    def __getitem__(self, k: int) -> CandidateModel:
        return self.models[k]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ModelSet)
            and self.q == other.q
            and self.models == other.models
        )

    def __repr__(self) -> str:
        return f"ModelSet({len(self.models)} models, p_fixed={self.p_fixed}, q={self.q})"

    def to_jsonl(self) -> str:
        """One JSON object per line: {"p_fixed":…, "q":…, "included":[…]}."""
        lines = [
            json.dumps({"p_fixed": m.p_fixed, "q": self.q, "included": list(m.included)})
            for m in self.models
        ]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_jsonl(cls, text: str) -> "ModelSet":
        models = []
        q = None
        for lineno, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
                model = CandidateModel(tuple(rec["included"]), int(rec["p_fixed"]))
                line_q = int(rec["q"])
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise DataError(f"bad model record on line {lineno}: {exc}") from exc
            if q is None:
                q = line_q
            elif q != line_q:
                raise DataError(f"inconsistent q on line {lineno}: {line_q} != {q}")
            models.append(model)
        if q is None:
            raise DataError("no model records found")
        return cls(models, q)


@dataclass(frozen=True)
class AugmentedVector:
    """Sub-model coefficients padded to full length, missing coordinates = ``fill``."""

    values: np.ndarray
    fill: float = 0.0

    def __post_init__(self):
        arr = np.array(self.values, dtype=float)
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)


def enumerate_all_subsets(p_fixed: int, q: int) -> ModelSet:
    """All 2**q candidate models, in binary-counting order (bit j <-> optional index j)."""
    if q < 0:
        raise DataError("q must be non-negative")
    if q > MAX_ENUMERABLE_Q:
        raise CapacityError(
            f"2**{q} candidate models exceeds the enumeration guard (q <= {MAX_ENUMERABLE_Q})"
        )
    models = []
    for mask in range(2**q):
        included = tuple(j for j in range(q) if (mask >> j) & 1)
        models.append(CandidateModel(included, p_fixed))
    return ModelSet(models, q)


def nested_sequence(p_fixed: int, q: int) -> ModelSet:
    """q+1 nested models, dropping optional coefficients from the front.

    Model 0 keeps every optional index, model i keeps {i, ..., q-1},
    model q keeps none.
    """
    if q < 0:
        raise DataError("q must be non-negative")
    models = [CandidateModel(tuple(range(i, q)), p_fixed) for i in range(q + 1)]
    return ModelSet(models, q)


def subset_columns(full_design: np.ndarray, model: CandidateModel) -> np.ndarray:
    """Columns of ``full_design`` used by ``model``: fixed block, then its optional columns."""
    full_design = np.asarray(full_design, dtype=float)
    if full_design.ndim != 2:
        raise DataError("full_design must be a 2-d matrix")
    cols = model.column_indices()
    if cols and cols[-1] >= full_design.shape[1]:
        raise DataError(
            f"design has {full_design.shape[1]} columns, model needs column {cols[-1]}"
        )
    return full_design[:, cols]


def subset_point(x_star: np.ndarray, model: CandidateModel) -> np.ndarray:
    """``subset_columns`` for a single covariate vector."""
    x_star = np.asarray(x_star, dtype=float)
    if x_star.ndim != 1:
        raise DataError("x_star must be a 1-d vector")
    cols = model.column_indices()
    if cols and cols[-1] >= x_star.shape[0]:
        raise DataError(f"x_star has length {x_star.shape[0]}, model needs index {cols[-1]}")
    return x_star[cols]


def augment(beta_k: np.ndarray, model: CandidateModel, q: int, fill: float = 0.0) -> AugmentedVector:
    """Pad a sub-model coefficient vector to length p_fixed + q.

    Model coordinates are copied in order; optional coordinates the
    model excludes are set to ``fill``.  Round-trips with
    ``subset_point``: subsetting the padded vector recovers ``beta_k``
    exactly.
    """
    beta_k = np.asarray(beta_k, dtype=float)
    if beta_k.ndim != 1 or beta_k.shape[0] != model.dim:
        raise DataError(
            f"beta_k has length {beta_k.shape[0] if beta_k.ndim == 1 else beta_k.shape}, "
            f"model dimension is {model.dim}"
        )
    full = np.full(model.p_fixed + q, float(fill))
    full[model.column_indices()] = beta_k
    return AugmentedVector(values=full, fill=float(fill))
