"""Column normalizations used ahead of weighting and TOPSIS."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import Direction, IndicatorMatrix

__all__ = [
    "NormalizedMatrix",
    "ProbabilityMatrix",
    "ZMatrix",
    "forward_normalize",
    "probability_matrix",
    "vector_normalize",
]

COLUMN_TOL = 1e-12


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.ndim != 2:
        raise ValueError("expected a 2-D matrix")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class NormalizedMatrix:
    """Range-normalized matrix; every column is benefit-type with entries in [0, 1]."""

    values: np.ndarray
    source_directions: tuple[Direction, ...] = ()

    def __post_init__(self):
        values = _frozen(self.values)
        if not np.all(np.isfinite(values)) or values.min() < 0 or values.max() > 1:
            raise ValueError("normalized entries must lie in [0, 1]")
        object.__setattr__(self, "values", values)
        if not self.source_directions:
            object.__setattr__(self, "source_directions", (Direction.MAX,) * values.shape[1])


@dataclass(frozen=True)
class ProbabilityMatrix:
    """Column-stochastic matrix."""

    values: np.ndarray

    def __post_init__(self):
        values = _frozen(self.values)
        if not np.all(np.isfinite(values)) or values.min() < 0 or values.max() > 1:
            raise ValueError("probabilities must lie in [0, 1]")
        sums = values.sum(axis=0)
        if np.any(np.abs(sums - 1.0) > COLUMN_TOL):
            raise ValueError(f"columns must sum to 1, got {sums}")
        object.__setattr__(self, "values", values)

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    def column(self, j: int) -> np.ndarray:
        return self.values[:, j]


@dataclass(frozen=True)
class ZMatrix:
    """Vector-normalized matrix, and after weighting, the weighted decision matrix."""

    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen(self.values))

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape


def forward_normalize(matrix: IndicatorMatrix) -> NormalizedMatrix:
    """Range-normalize each column so that larger is better.

    Constant columns carry no information and map to all ones, which gives a
    uniform probability column downstream.
    """
    x = matrix.values
    lo = x.min(axis=0)
    hi = x.max(axis=0)
    span = hi - lo
    out = np.ones_like(x)
    for j, direction in enumerate(matrix.directions):
        if span[j] == 0:
            continue
        if direction is Direction.MIN:
            out[:, j] = (hi[j] - x[:, j]) / span[j]
        else:
            out[:, j] = (x[:, j] - lo[j]) / span[j]
    return NormalizedMatrix(out, matrix.directions)


def probability_matrix(normalized: NormalizedMatrix) -> ProbabilityMatrix:
    x = normalized.values
    sums = x.sum(axis=0)
    if np.any(sums <= 0):
        bad = np.flatnonzero(sums <= 0).tolist()
        raise ValueError(f"all-zero column(s) {bad} cannot form a probability distribution")
    return ProbabilityMatrix(x / sums)


def vector_normalize(matrix: IndicatorMatrix | NormalizedMatrix) -> ZMatrix:
    """Divide each column by its Euclidean norm; all-zero columns stay zero."""
    x = matrix.values
    # pre-scale by the column max so tiny or huge entries don't under/overflow when squared
    scale = np.max(np.abs(x), axis=0)
    y = np.divide(x, scale, out=np.zeros_like(x), where=scale > 0)
    norms = np.sqrt(np.sum(y * y, axis=0))
    out = np.divide(y, norms, out=np.zeros_like(y), where=norms > 0)
    return ZMatrix(out)
