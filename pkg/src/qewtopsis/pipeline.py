"""
End-to-end evaluation runs.

``run_ew_topsis`` is the entropy-weight baseline. ``run_q_ew_topsis`` feeds
the baseline scores through grey relational analysis, solves one Tsallis q
per indicator so that its q-entropy matches the grey weight, averages the q
values and re-scores with the resulting q-entropy weights.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .dataset import IndicatorMatrix, RawSupplyData, derive_indicators
from .gra import GreyConfig, GreyRelationReport, XiSweepResult, grey_relation, xi_sweep
from .topsis import ScoreTable, topsis
from .transforms import forward_normalize, probability_matrix, vector_normalize
from .weighting import (
    EntropyReport,
    QRoot,
    WeightVector,
    average_q,
    critic_weights,
    cv_weights,
    iw_weights,
    q_entropy_weights,
    shannon_weights,
    solve_q_detailed,
)

__all__ = [
    "ModelConfig",
    "EvaluationResult",
    "MethodFailure",
    "ComparisonDiagnostics",
    "RobustnessReport",
    "METHODS",
    "PUBLISHED_REFERENCE",
    "run_ew_topsis",
    "run_q_ew_topsis",
    "run_method",
    "delta_proportions",
    "impact_rate",
    "compare_results",
    "compare_methods",
    "robustness_sweep",
    "reference_comparison",
]

logger = logging.getLogger(__name__)

METHODS = ("ew", "qew", "cv", "critic", "iw")

# Published figures for the 402-supplier dataset, for side-by-side reports only.
PUBLISHED_REFERENCE = {
    "xi": 0.0013,
    "q_values": [0.3216, 0.1346, 1.0001, 0.0993],
    "q_mean": 0.3888,
    "delta": [0.5352, 0.0096, 0.0606, 0.4741],
    "delta_mean": 0.2396,
    "impact_count": 99,
    "impact_rate": 0.2463,
    "top10": ["229", "361", "140", "108", "151", "340", "282", "275", "329", "139"],
}


@dataclass(frozen=True)
class ModelConfig:
    """Entropy conventions and q-solver settings for the q-entropy stage.

    ``normalize_entropy=False`` uses raw Tsallis entropies when solving for q
    and weighting; the Shannon baseline is always normalized because raw
    utilities ``1 - e`` turn negative once ``ln m > 1``. ``fixed_q`` skips the
    grey/q-solve stage and uses the given q directly.
    """

    normalize_entropy: bool = True
    q_weight_mode: str = "entropy"
    q_min: float = 1e-6
    q_max: float = 50.0
    q_grid_points: int = 200
    fixed_q: float | None = None

    def __post_init__(self):
        if self.q_weight_mode not in ("entropy", "utility"):
            raise ValueError(f"q_weight_mode must be 'entropy' or 'utility', got {self.q_weight_mode!r}")
        if not 0 < self.q_min < self.q_max:
            raise ValueError("need 0 < q_min < q_max")
        if self.q_grid_points < 2:
            raise ValueError("q grid needs at least 2 points")


@dataclass(frozen=True)
class EvaluationResult:
    method: str
    weight_vector: WeightVector
    entropy_report: EntropyReport | None
    score_table: ScoreTable
    grey_report: GreyRelationReport | None = None
    q_mean: float | None = None
    q_roots: tuple[QRoot, ...] | None = None
    sweep: XiSweepResult | None = None
    baseline: "EvaluationResult | None" = field(default=None, repr=False)


@dataclass(frozen=True)
class MethodFailure:
    method: str
    error: str


@dataclass(frozen=True)
class ComparisonDiagnostics:
    delta_per_indicator: np.ndarray
    delta_mean: float
    impact_count: int
    impact_rate: float


@dataclass(frozen=True)
class RobustnessReport:
    """Weights of both models across data iterations.

    Row ``k`` of ``w0``/``w1`` holds the baseline / q-model weights for the
    ``k``-th subset. Relative errors are measured against each model's mean
    weight over all iterations.
    """

    subset_sizes: tuple[int, ...]
    subsets: tuple[tuple[str, ...], ...]
    names: tuple[str, ...]
    w0: np.ndarray
    w1: np.ndarray
    q_means: np.ndarray
    w0_mean: np.ndarray
    w1_mean: np.ndarray
    w0_var: np.ndarray
    w1_var: np.ndarray
    rel_err0: np.ndarray
    rel_err1: np.ndarray


def _score(matrix: IndicatorMatrix, weights: WeightVector) -> ScoreTable:
    z = vector_normalize(forward_normalize(matrix))
    return topsis(z, weights, matrix.ids)


def run_ew_topsis(matrix: IndicatorMatrix) -> EvaluationResult:
    P = probability_matrix(forward_normalize(matrix))
    report, weights = shannon_weights(P)
    return EvaluationResult("ew", weights, report, _score(matrix, weights))


def run_q_ew_topsis(
    matrix: IndicatorMatrix,
    grey: GreyConfig = GreyConfig(),
    config: ModelConfig = ModelConfig(),
) -> EvaluationResult:
    baseline = run_ew_topsis(matrix)
    normalized = forward_normalize(matrix)
    P = probability_matrix(normalized)

    if config.fixed_q is not None:
        q = float(config.fixed_q)
        report, weights = q_entropy_weights(P, q, config.normalize_entropy, config.q_weight_mode)
        return EvaluationResult("qew", weights, report, _score(matrix, weights), q_mean=q, baseline=baseline)

    reference = np.clip(baseline.score_table.closeness, 0.0, 1.0)
    sweep = None
    if grey.use_sweep:
        sweep = xi_sweep(reference, normalized, baseline.weight_vector, grey)
        grey_report = sweep.report
    else:
        grey_report = grey_relation(reference, normalized, grey.xi)

    targets = grey_report.weights.weights
    roots = tuple(
        solve_q_detailed(
            P.column(j),
            float(targets[j]),
            q_min=config.q_min,
            q_max=config.q_max,
            grid_points=config.q_grid_points,
            normalize=config.normalize_entropy,
        )
        for j in range(P.shape[1])
    )
    q_values = np.array([r.q for r in roots])
    q = average_q(q_values)
    report, weights = q_entropy_weights(P, q, config.normalize_entropy, config.q_weight_mode)
    report = EntropyReport(report.entropies, report.utilities, q_values, q)
    return EvaluationResult(
        "qew", weights, report, _score(matrix, weights),
        grey_report=grey_report, q_mean=q, q_roots=roots, sweep=sweep, baseline=baseline,
    )


_PLAIN_WEIGHTS: dict[str, Callable[[IndicatorMatrix], WeightVector]] = {
    "cv": cv_weights,
    "critic": critic_weights,
    "iw": iw_weights,
}


def run_method(
    matrix: IndicatorMatrix,
    method: str,
    grey: GreyConfig = GreyConfig(),
    config: ModelConfig = ModelConfig(),
) -> EvaluationResult:
    if method == "ew":
        return run_ew_topsis(matrix)
    if method == "qew":
        return run_q_ew_topsis(matrix, grey, config)
    if method not in _PLAIN_WEIGHTS:
        raise ValueError(f"unknown method {method!r}; choose from {', '.join(METHODS)}")
    weights = _PLAIN_WEIGHTS[method](matrix)
    return EvaluationResult(method, weights, None, _score(matrix, weights))


def compare_methods(
    matrix: IndicatorMatrix,
    grey: GreyConfig = GreyConfig(),
    config: ModelConfig = ModelConfig(),
) -> list[EvaluationResult | MethodFailure]:
    """Score with every method through the same TOPSIS stage.

    A failing method yields a :class:`MethodFailure` in its slot instead of
    aborting the others.
    """
    out: list[EvaluationResult | MethodFailure] = []
    for method in METHODS:
        try:
            out.append(run_method(matrix, method, grey, config))
        except (ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
            logger.info("method %s failed: %s", method, exc)
            out.append(MethodFailure(method, str(exc)))
    return out


# -- diagnostics ----------------------------------------------------------------


def delta_proportions(baseline: WeightVector, corrected: WeightVector) -> tuple[np.ndarray, float]:
    """Relative gap ``|W_S - W_T| / W_T`` per indicator, and its mean."""
    ws = np.asarray(baseline.weights)
    wt = np.asarray(corrected.weights)
    if ws.shape != wt.shape:
        raise ValueError("weight vectors differ in length")
    if np.any(wt <= 0):
        raise ValueError("corrected weights must be positive")
    delta = np.abs(ws - wt) / wt
    return delta, float(delta.mean())


def impact_rate(a: ScoreTable, b: ScoreTable) -> tuple[int, float]:
    """Number and fraction of alternatives whose rank differs between two tables."""
    ra, rb = a.rank_of(), b.rank_of()
    if ra.keys() != rb.keys():
        raise ValueError("score tables cover different ids")
    count = sum(ra[k] != rb[k] for k in ra)
    return count, count / len(ra)


def compare_results(baseline: EvaluationResult, corrected: EvaluationResult) -> ComparisonDiagnostics:
    delta, mean = delta_proportions(baseline.weight_vector, corrected.weight_vector)
    count, rate = impact_rate(baseline.score_table, corrected.score_table)
    return ComparisonDiagnostics(delta, mean, count, rate)


# -- robustness -----------------------------------------------------------------


def _relative_error(w: np.ndarray, standard: np.ndarray) -> np.ndarray:
    safe = np.where(standard > 0, standard, 1.0)
    return np.where(standard > 0, (w - standard) / safe, 0.0)


def robustness_sweep(
    data: RawSupplyData,
    subset_sizes: Sequence[int],
    seed: int,
    grey: GreyConfig = GreyConfig(),
    config: ModelConfig = ModelConfig(),
) -> RobustnessReport:
    """Recompute both models' weights on seeded random supplier subsets."""
    m = len(data)
    sizes = tuple(int(k) for k in subset_sizes)
    if len(sizes) < 2:
        raise ValueError("robustness sweep needs at least 2 iterations")
    for k in sizes:
        if not 2 <= k <= m:
            raise ValueError(f"subset size {k} outside [2, {m}]")

    rng = np.random.default_rng(seed)
    w0, w1, qs, subsets = [], [], [], []
    names: tuple[str, ...] = ()
    for k in sizes:
        idx = np.sort(rng.choice(m, size=k, replace=False))
        matrix = derive_indicators(data.subset(idx.tolist()))
        names = matrix.names
        result = run_q_ew_topsis(matrix, grey, config)
        w0.append(result.baseline.weight_vector.weights)
        w1.append(result.weight_vector.weights)
        qs.append(result.q_mean)
        subsets.append(matrix.ids)

    w0a, w1a = np.array(w0), np.array(w1)
    m0, m1 = w0a.mean(axis=0), w1a.mean(axis=0)
    return RobustnessReport(
        subset_sizes=sizes,
        subsets=tuple(subsets),
        names=names,
        w0=w0a,
        w1=w1a,
        q_means=np.array(qs),
        w0_mean=m0,
        w1_mean=m1,
        w0_var=w0a.var(axis=0),
        w1_var=w1a.var(axis=0),
        rel_err0=_relative_error(w0a, m0),
        rel_err1=_relative_error(w1a, m1),
    )


def reference_comparison(qew: EvaluationResult) -> dict:
    """Computed diagnostics next to the published 402-supplier figures (report only)."""
    if qew.baseline is None or qew.grey_report is None:
        raise ValueError("need a q-EW-TOPSIS result that carries its baseline and grey report")
    base = qew.baseline
    diag = compare_results(base, qew)
    top = lambda t: [t.ids[i] for i in t.ordered()[:10]]  # noqa: E731
    top_base, top_q = top(base.score_table), top(qew.score_table)
    computed = {
        "shannon_weights": base.weight_vector.weights.tolist(),
        "gra_weights": qew.grey_report.weights.weights.tolist(),
        "xi": qew.grey_report.xi_used,
        "q_values": qew.entropy_report.q_values.tolist(),
        "q_mean": qew.q_mean,
        "tsallis_weights": qew.weight_vector.weights.tolist(),
        "delta": diag.delta_per_indicator.tolist(),
        "delta_mean": diag.delta_mean,
        "impact_count": diag.impact_count,
        "impact_rate": diag.impact_rate,
        "top10_ew": top_base,
        "top10_qew": top_q,
        "top10_same_ids": sorted(top_base) == sorted(top_q),
    }
    return {"computed": computed, "published": PUBLISHED_REFERENCE, "asserted": False}
