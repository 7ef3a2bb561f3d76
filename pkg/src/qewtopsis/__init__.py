"""
q-EW-TOPSIS supplier evaluation.

Entropy-weight TOPSIS as a baseline, grey relational analysis as a
correction signal, and Tsallis q-entropy weights derived from it.

>>> from qewtopsis import IndicatorMatrix, run_q_ew_topsis
>>> result = run_q_ew_topsis(matrix)            # doctest: +SKIP
>>> result.score_table.scores, result.q_mean    # doctest: +SKIP
"""

from .dataset import (
    Direction,
    IndicatorMatrix,
    ParseError,
    RawSupplyData,
    SupplierSeries,
    SupplyCsvSchema,
    ambiguous_capacity,
    attach_orders,
    derive_indicators,
    format_indicator_csv,
    format_supply_csv,
    parse_indicator_csv,
    parse_supply_csv,
    supply_continuity,
    supply_quantity,
    supply_stability,
)
from .gra import (
    GreyConfig,
    GreyRelationReport,
    XiSweepResult,
    gra_weights,
    grey_relation,
    relational_coefficients,
    relational_degrees,
    xi_grid,
    xi_sweep,
)
from .pipeline import (
    ComparisonDiagnostics,
    EvaluationResult,
    MethodFailure,
    ModelConfig,
    RobustnessReport,
    compare_methods,
    compare_results,
    delta_proportions,
    impact_rate,
    reference_comparison,
    robustness_sweep,
    run_ew_topsis,
    run_method,
    run_q_ew_topsis,
)
from .topsis import IdealSchemes, ScoreTable, closeness_scores, ideal_schemes, rank, topsis, weighted_matrix
from .transforms import (
    NormalizedMatrix,
    ProbabilityMatrix,
    ZMatrix,
    forward_normalize,
    probability_matrix,
    vector_normalize,
)
from .weighting import (
    EntropyReport,
    QRoot,
    WeightVector,
    average_q,
    critic_weights,
    cv_weights,
    iw_weights,
    q_entropy_weights,
    q_exp,
    q_log,
    shannon_entropy,
    shannon_weights,
    solve_q,
    solve_q_detailed,
    tsallis_entropy,
)

__version__ = "0.1.0"
