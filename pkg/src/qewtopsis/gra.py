"""
Grey relational analysis against a reference score sequence.

The reference is the TOPSIS closeness (unit scale) and the comparison
sequences are the forward-normalized indicator columns, so both share the
[0, 1] scale. Δmin and Δmax are taken over the whole difference matrix.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .transforms import NormalizedMatrix
from .weighting import WeightVector

__all__ = [
    "GreyConfig",
    "GreyRelationReport",
    "XiSweepResult",
    "relational_coefficients",
    "relational_degrees",
    "gra_weights",
    "grey_relation",
    "xi_grid",
    "xi_sweep",
    "XI_WARNING_THRESHOLD",
]

logger = logging.getLogger(__name__)

# distinguishing coefficients above this tend to blur the relational grades
XI_WARNING_THRESHOLD = 0.5468


@dataclass(frozen=True)
class GreyConfig:
    """Distinguishing coefficient and the sweep grid used to pick it.

    With ``use_sweep`` the pipeline picks ξ from the grid; otherwise ``xi``
    is used directly.
    """

    xi: float = 0.5
    sweep_start: float = 0.001
    sweep_end: float = 0.005
    sweep_step: float = 0.0001
    use_sweep: bool = True

    def __post_init__(self):
        if not 0 < self.xi <= 1:
            raise ValueError(f"xi must lie in (0, 1], got {self.xi}")
        if not 0 < self.sweep_start <= self.sweep_end <= 1:
            raise ValueError("sweep bounds must satisfy 0 < start <= end <= 1")
        if not self.sweep_step > 0:
            raise ValueError("sweep step must be positive")
        top = self.sweep_end if self.use_sweep else self.xi
        if top >= XI_WARNING_THRESHOLD:
            logger.warning("distinguishing coefficient %g >= %g; resolution degrades", top, XI_WARNING_THRESHOLD)


@dataclass(frozen=True)
class GreyRelationReport:
    coefficients: np.ndarray
    degrees: np.ndarray
    weights: WeightVector
    xi_used: float


@dataclass(frozen=True)
class XiSweepResult:
    best_xi: float
    report: GreyRelationReport
    grid: np.ndarray
    weights: np.ndarray  # (len(grid), n)
    distances: np.ndarray


def relational_coefficients(reference, comparison: NormalizedMatrix | np.ndarray, xi: float) -> np.ndarray:
    """Grey relational coefficients of every comparison entry to the reference.

    ``(Δmin + ξ Δmax) / (Δ_ij + ξ Δmax)`` with ``Δ_ij = |S_i - x_ij|``; all
    ones when every sequence coincides.
    """
    s = np.asarray(reference, dtype=float)
    x = comparison.values if isinstance(comparison, NormalizedMatrix) else np.asarray(comparison, dtype=float)
    if s.ndim != 1 or x.ndim != 2 or x.shape[0] != s.size:
        raise ValueError(f"reference of length {s.size} does not match comparison shape {x.shape}")
    if np.any(s < 0) or np.any(s > 1):
        raise ValueError("reference sequence must be on the unit scale [0, 1]")
    if not 0 < xi <= 1:
        raise ValueError(f"xi must lie in (0, 1], got {xi}")
    delta = np.abs(s[:, None] - x)
    dmin = delta.min()
    dmax = delta.max()
    if dmax == 0:
        return np.ones_like(delta)
    return (dmin + xi * dmax) / (delta + xi * dmax)


def relational_degrees(coefficients) -> np.ndarray:
    c = np.asarray(coefficients, dtype=float)
    if c.ndim != 2 or c.shape[0] < 1:
        raise ValueError("coefficients must be a non-empty m x n matrix")
    return c.mean(axis=0)


def gra_weights(degrees) -> WeightVector:
    g = np.asarray(degrees, dtype=float)
    if np.any(g <= 0):
        raise ValueError("relational degrees must be positive")
    return WeightVector(g / g.sum(), "gra")


def grey_relation(reference, comparison, xi: float) -> GreyRelationReport:
    coef = relational_coefficients(reference, comparison, xi)
    degrees = relational_degrees(coef)
    return GreyRelationReport(coef, degrees, gra_weights(degrees), float(xi))


def xi_grid(start: float, end: float, step: float) -> np.ndarray:
    """Inclusive grid ``start, start + step, ..., <= end``."""
    if step <= 0 or start > end:
        raise ValueError("invalid sweep range")
    count = math.floor((end - start) / step + 1e-9) + 1
    # rounding keeps 0.0013 from printing as 0.0013000000000000002
    return np.round(start + step * np.arange(count), 12)


def xi_sweep(reference, comparison, baseline: WeightVector, config: GreyConfig = GreyConfig()) -> XiSweepResult:
    """Pick the ξ whose grey weights are closest (L2) to ``baseline``; ties go to the smaller ξ."""
    grid = xi_grid(config.sweep_start, config.sweep_end, config.sweep_step)
    base = np.asarray(baseline.weights)
    reports = [grey_relation(reference, comparison, xi) for xi in grid]
    weights = np.array([r.weights.weights for r in reports])
    distances = np.sqrt(np.sum((weights - base) ** 2, axis=1))
    k = int(np.argmin(distances))  # first minimum == smallest xi
    return XiSweepResult(float(grid[k]), reports[k], grid, weights, distances)
