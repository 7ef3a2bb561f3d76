"""
Objective weighting schemes.

Shannon entropy weights, the Tsallis q-entropy family (q-logarithm,
q-exponential, the per-column q solver and q-entropy weights), and three
comparison schemes: coefficient of variation, CRITIC and independent
weights.

Entropies are normalized by default: Shannon entropy is divided by
``ln m`` and Tsallis entropy by ``ln_q m`` so that a uniform column scores
exactly 1. Pass ``normalize=False`` for the raw forms.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .dataset import IndicatorMatrix
from .transforms import ProbabilityMatrix, forward_normalize

__all__ = [
    "WeightVector",
    "EntropyReport",
    "QRoot",
    "shannon_entropy",
    "shannon_weights",
    "q_log",
    "q_exp",
    "tsallis_entropy",
    "solve_q",
    "solve_q_detailed",
    "average_q",
    "q_entropy_weights",
    "cv_weights",
    "critic_weights",
    "iw_weights",
]

logger = logging.getLogger(__name__)

Q_ONE_TOL = 1e-9
WEIGHT_SUM_TOL = 1e-12

QWeightMode = Literal["entropy", "utility"]


@dataclass(frozen=True)
class WeightVector:
    weights: np.ndarray
    method: str
    q: float | None = None

    def __post_init__(self):
        w = np.array(self.weights, dtype=float)
        if w.ndim != 1 or w.size == 0:
            raise ValueError("weights must be a non-empty vector")
        if not np.all(np.isfinite(w)) or np.any(w < 0):
            raise ValueError(f"{self.method} weights must be finite and non-negative: {w}")
        if abs(w.sum() - 1.0) > WEIGHT_SUM_TOL:
            raise ValueError(f"{self.method} weights sum to {w.sum()!r}, not 1")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @classmethod
    def from_scores(cls, scores, method: str, q: float | None = None) -> "WeightVector":
        """Normalize non-negative scores to weights; all-zero scores give uniform weights."""
        s = np.asarray(scores, dtype=float)
        if np.any(s < 0):
            raise ValueError(f"{method}: negative weight scores {s}")
        total = s.sum()
        if not np.isfinite(total):
            raise ValueError(f"{method}: non-finite weight scores {s}")
        if total <= 0:
            return cls(np.full(s.size, 1.0 / s.size), method, q)
        return cls(s / total, method, q)

    def __len__(self):
        return self.weights.size

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.weights, dtype=dtype)


@dataclass(frozen=True)
class EntropyReport:
    entropies: np.ndarray
    utilities: np.ndarray | None = None
    q_values: np.ndarray | None = None
    q_mean: float | None = None


# -- Shannon ------------------------------------------------------------------


def _check_distribution(p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise ValueError("probability vector must be one-dimensional and non-empty")
    if np.any(p < 0):
        raise ValueError("probabilities must be non-negative")
    return p


def _shannon_raw(p: np.ndarray) -> float:
    nz = p[p > 0]
    return float(-np.sum(nz * np.log(nz)))


def shannon_entropy(p, normalize: bool = True) -> float:
    """Shannon entropy of a distribution with ``0 ln 0 = 0``; divided by ``ln m`` if normalized."""
    p = _check_distribution(p)
    h = _shannon_raw(p)
    if not normalize:
        return h
    if p.size < 2:
        raise ValueError("normalized entropy needs at least 2 outcomes")
    return h / math.log(p.size)


def shannon_weights(P: ProbabilityMatrix, normalize: bool = True) -> tuple[EntropyReport, WeightVector]:
    """Entropy weights: utility ``d = 1 - e``, weight proportional to utility."""
    e = np.array([shannon_entropy(P.column(j), normalize) for j in range(P.shape[1])])
    d = 1.0 - e
    if np.any(d < -1e-12):
        raise ValueError(
            "raw entropy exceeds 1 so utilities go negative; use normalized entropies"
        )
    d = np.clip(d, 0.0, None)
    return EntropyReport(e, d), WeightVector.from_scores(d, "shannon")


# -- Tsallis ------------------------------------------------------------------


def q_log(x, q: float):
    """q-logarithm ``(x**(1-q) - 1) / (1 - q)``; natural log as ``q -> 1``."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise ValueError("q_log is defined for x > 0 only")
    lx = np.log(x)
    if abs(q - 1.0) < Q_ONE_TOL:
        out = lx
    else:
        out = np.expm1((1.0 - q) * lx) / (1.0 - q)
    return float(out) if out.ndim == 0 else out


def q_exp(x, q: float):
    """q-exponential ``[1 + (1-q) x]**(1/(1-q))``, the inverse of :func:`q_log`.

    Raises ``ValueError`` when ``1 + (1-q) x <= 0`` (outside the cutoff).
    """
    x = np.asarray(x, dtype=float)
    if abs(q - 1.0) < Q_ONE_TOL:
        out = np.exp(x)
    else:
        base = (1.0 - q) * x
        if np.any(1.0 + base <= 0):
            raise ValueError(f"q_exp cutoff violated: 1 + (1-q)x <= 0 for q={q}")
        out = np.exp(np.log1p(base) / (1.0 - q))
    return float(out) if out.ndim == 0 else out


def _tsallis_raw(p: np.ndarray, q: float) -> float:
    nz = p[p > 0]
    # sum(p**q) - 1 == sum(p * (p**(q-1) - 1)) for sum(p) == 1; expm1 keeps q ~ 1 accurate
    return float(np.sum(nz * np.expm1((q - 1.0) * np.log(nz))) / (1.0 - q))


def tsallis_entropy(p, q: float, normalize: bool = True) -> float:
    """Tsallis entropy ``(sum p**q - 1) / (1 - q)`` with ``0**q = 0``.

    When ``normalize`` is set the value is divided by ``ln_q(m)``, the entropy
    of the uniform distribution over ``m`` outcomes.
    """
    p = _check_distribution(p)
    if abs(q - 1.0) < Q_ONE_TOL:
        return shannon_entropy(p, normalize)
    s = _tsallis_raw(p, q)
    if not normalize:
        return s
    if p.size < 2:
        raise ValueError("normalized entropy needs at least 2 outcomes")
    return s / q_log(float(p.size), q)


@dataclass(frozen=True)
class QRoot:
    """Outcome of the per-column q search.

    ``bracketed`` is False when the scan found no sign change and q fell back
    to 1. ``n_brackets > 1`` means the entropy curve crossed the target more
    than once; the crossing nearest q = 1 is returned.
    """

    q: float
    residual: float
    bracketed: bool
    n_brackets: int
    monotone: bool


def _bisect(f, lo: float, hi: float, flo: float, xtol: float, ftol: float = 1e-13) -> float:
    best, fbest = (lo, flo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fmid = f(mid)
        if abs(fmid) < abs(fbest):
            best, fbest = mid, fmid
        if fmid == 0:
            break
        if (fmid < 0) == (flo < 0):
            lo, flo = mid, fmid
        else:
            hi = mid
        if hi - lo <= xtol and abs(fbest) <= ftol:
            break
    return best


def solve_q_detailed(
    p,
    target: float,
    *,
    q_min: float = 1e-6,
    q_max: float = 50.0,
    grid_points: int = 200,
    normalize: bool = True,
    xtol: float = 1e-10,
) -> QRoot:
    """Solve ``tsallis_entropy(p, q) == target`` for q.

    ``q`` is scanned on a geometric grid over ``[q_min, q_max]`` for sign
    changes of the residual, and the chosen bracket is refined by bisection.
    q = 1 is returned when it already satisfies the equation or when no sign
    change exists.
    """
    if not 0.0 <= target <= 1.0:
        raise ValueError(f"target must lie in [0, 1], got {target}")
    if not 0 < q_min < q_max:
        raise ValueError("need 0 < q_min < q_max")
    p = _check_distribution(p)

    def f(q):
        return tsallis_entropy(p, q, normalize) - target

    f1 = f(1.0)
    if abs(f1) <= 1e-12:
        return QRoot(1.0, f1, True, 1, True)

    qs = np.geomspace(q_min, q_max, grid_points)
    fs = np.array([f(q) for q in qs])
    diffs = np.diff(fs)
    monotone = bool(np.all(diffs <= 0) or np.all(diffs >= 0))

    exact = np.flatnonzero(fs == 0)
    brackets = [k for k in range(grid_points - 1) if fs[k] * fs[k + 1] < 0]
    candidates = [(qs[k], qs[k]) for k in exact] + [(qs[k], qs[k + 1]) for k in brackets]
    if not candidates:
        return QRoot(1.0, f1, False, 0, monotone)

    def distance_to_one(interval):
        lo, hi = interval
        if lo <= 1.0 <= hi:
            return 0.0
        return min(abs(math.log(lo)), abs(math.log(hi)))

    lo, hi = min(candidates, key=lambda iv: (distance_to_one(iv), iv[0]))
    if len(candidates) > 1:
        logger.debug("q search: %d crossings, using [%g, %g]", len(candidates), lo, hi)
    q = lo if lo == hi else _bisect(f, lo, hi, f(lo), xtol)
    return QRoot(float(q), f(q), True, len(candidates), monotone)


def solve_q(p, target: float, **kwargs) -> float:
    """q such that the (normalized) Tsallis entropy of ``p`` equals ``target``; 1 if none."""
    return solve_q_detailed(p, target, **kwargs).q


def average_q(q_values) -> float:
    q = np.asarray(q_values, dtype=float)
    if q.size == 0:
        raise ValueError("need at least one q value")
    return float(np.mean(q))


def q_entropy_weights(
    P: ProbabilityMatrix,
    q: float,
    normalize: bool = True,
    mode: QWeightMode = "entropy",
) -> tuple[EntropyReport, WeightVector]:
    """Weights from Tsallis entropies at a shared q.

    ``mode="entropy"`` weights each column by its q-entropy share;
    ``mode="utility"`` weights by ``1 - entropy`` like :func:`shannon_weights`.
    Degenerate all-zero scores fall back to uniform weights.
    """
    e = np.array([tsallis_entropy(P.column(j), q, normalize) for j in range(P.shape[1])])
    if mode == "entropy":
        report = EntropyReport(e, q_mean=q)
        scores = e
    elif mode == "utility":
        d = 1.0 - e
        if np.any(d < -1e-12):
            raise ValueError("q-entropy exceeds 1 so utilities go negative; use normalized entropies")
        d = np.clip(d, 0.0, None)
        report = EntropyReport(e, d, q_mean=q)
        scores = d
    else:
        raise ValueError(f"unknown q weight mode {mode!r}")
    return report, WeightVector.from_scores(np.clip(scores, 0.0, None), "tsallis", q)


# -- comparison schemes ---------------------------------------------------------


def cv_weights(matrix: IndicatorMatrix) -> WeightVector:
    """Coefficient-of-variation weights on the forward-normalized matrix."""
    x = forward_normalize(matrix).values
    mu = x.mean(axis=0)
    if np.any(mu == 0):
        raise ValueError("coefficient of variation undefined for a zero-mean column")
    cv = x.std(axis=0) / mu
    return WeightVector.from_scores(cv, "cv")


def _correlation(x: np.ndarray) -> np.ndarray:
    """Pearson correlation; pairs involving a constant column get r = 0."""
    xc = x - x.mean(axis=0)
    sd = np.sqrt(np.mean(xc * xc, axis=0))
    live = sd > 0
    z = np.zeros_like(xc)
    z[:, live] = xc[:, live] / sd[live]
    r = (z.T @ z) / x.shape[0]
    np.fill_diagonal(r, 1.0)
    return np.clip(r, -1.0, 1.0)


def critic_weights(matrix: IndicatorMatrix) -> WeightVector:
    """CRITIC: contrast (std) times conflict (sum of 1 - r) per criterion."""
    if matrix.shape[1] < 2:
        raise ValueError("CRITIC needs at least 2 criteria")
    x = forward_normalize(matrix).values
    sigma = x.std(axis=0)
    info = sigma * np.sum(1.0 - _correlation(x), axis=0)
    return WeightVector.from_scores(info, "critic")


def _multiple_correlation(x: np.ndarray, j: int) -> float:
    y = x[:, j]
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    if ss_tot == 0:
        # constant column: nothing independent to contribute
        return 1.0
    design = np.column_stack([np.ones(x.shape[0]), np.delete(x, j, axis=1)])
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    resid = y - design @ coef
    r2 = 1.0 - float(resid @ resid) / ss_tot
    return math.sqrt(min(max(r2, 0.0), 1.0))


def iw_weights(matrix: IndicatorMatrix, floor: float = 1e-6) -> WeightVector:
    """Independent-weight coefficients: weight proportional to 1 / R_j.

    ``R_j`` is the multiple correlation of criterion j regressed on all other
    criteria. Least squares keeps collinear inputs well defined (R_j = 1).
    """
    if matrix.shape[1] < 2:
        raise ValueError("independent weights need at least 2 criteria")
    x = forward_normalize(matrix).values
    r = np.array([_multiple_correlation(x, j) for j in range(x.shape[1])])
    return WeightVector.from_scores(1.0 / np.maximum(r, floor), "iw")
