"""Text renderings (CSV / JSON) of results, used by the CLI."""

from __future__ import annotations

import csv
import io
import json
from typing import Any

import numpy as np

from .gra import XiSweepResult
from .pipeline import EvaluationResult, RobustnessReport, compare_results
from .topsis import ScoreTable
from .weighting import WeightVector

SCORE_COLUMNS = ("serial", "id", "score", "d_plus", "d_minus", "rank")


def fmt(x: float) -> str:
    return f"{float(x):.6f}"


def _csv(rows: list[list[Any]]) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def to_jsonable(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, WeightVector):
        return obj.weights.tolist()
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    return obj


def dumps(obj) -> str:
    return json.dumps(to_jsonable(obj), indent=2, sort_keys=True, allow_nan=False) + "\n"


def score_rows(table: ScoreTable) -> list[dict]:
    """Rows in rank order; ``serial`` is the 1-based input row of each id."""
    return [
        {
            "serial": i + 1,
            "id": table.ids[i],
            "score": float(table.scores[i]),
            "d_plus": float(table.d_plus[i]),
            "d_minus": float(table.d_minus[i]),
            "rank": int(table.rank[i]),
        }
        for i in table.ordered()
    ]


def score_csv(table: ScoreTable) -> str:
    rows = [list(SCORE_COLUMNS)]
    for r in score_rows(table):
        rows.append([r["serial"], r["id"], fmt(r["score"]), fmt(r["d_plus"]), fmt(r["d_minus"]), r["rank"]])
    return _csv(rows)


def score_json(table: ScoreTable) -> str:
    return dumps(score_rows(table))


def parse_score_csv(text: str) -> list[dict]:
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != SCORE_COLUMNS:
        raise ValueError(f"unexpected score columns {reader.fieldnames}")
    return [
        {
            "serial": int(r["serial"]),
            "id": r["id"],
            "score": float(r["score"]),
            "d_plus": float(r["d_plus"]),
            "d_minus": float(r["d_minus"]),
            "rank": int(r["rank"]),
        }
        for r in reader
    ]


def weights_summary(result: EvaluationResult, names) -> dict:
    out: dict[str, Any] = {
        "method": result.method,
        "indicators": list(names),
        "weights": result.weight_vector.weights,
    }
    if result.entropy_report is not None:
        out["entropies"] = result.entropy_report.entropies
    if result.method != "qew" or result.baseline is None:
        return out

    base = result.baseline
    out["shannon_weights"] = base.weight_vector.weights
    out["tsallis_weights"] = result.weight_vector.weights
    out["q_mean"] = result.q_mean
    if result.grey_report is not None:
        out["gra_weights"] = result.grey_report.weights.weights
        out["gra_degrees"] = result.grey_report.degrees
        out["xi"] = result.grey_report.xi_used
    if result.entropy_report.q_values is not None:
        out["q_values"] = result.entropy_report.q_values
    if result.q_roots is not None:
        out["q_roots"] = [
            {"q": r.q, "residual": r.residual, "bracketed": r.bracketed,
             "n_brackets": r.n_brackets, "monotone": r.monotone}
            for r in result.q_roots
        ]
    diag = compare_results(base, result)
    out.update(
        delta=diag.delta_per_indicator,
        delta_mean=diag.delta_mean,
        impact_count=diag.impact_count,
        impact_rate=diag.impact_rate,
    )
    return out


def sweep_csv(sweep: XiSweepResult, names) -> str:
    rows = [["xi", *(f"w_{n}" for n in names), "distance"]]
    for xi, w, d in zip(sweep.grid, sweep.weights, sweep.distances):
        rows.append([repr(float(xi)), *map(fmt, w), fmt(d)])
    return _csv(rows)


def sweep_summary(sweep: XiSweepResult, baseline: WeightVector, names) -> dict:
    k = int(np.flatnonzero(sweep.grid == sweep.best_xi)[0])
    return {
        "indicators": list(names),
        "selected_xi": sweep.best_xi,
        "distance": sweep.distances[k],
        "gra_weights": sweep.report.weights.weights,
        "shannon_weights": baseline.weights,
        "grid_points": int(sweep.grid.size),
    }


def robustness_csv(report: RobustnessReport) -> str:
    names = report.names
    header = ["iteration", "subset_size", "q_mean"]
    for prefix in ("w0", "w1", "err0", "err1"):
        header += [f"{prefix}_{n}" for n in names]
    rows = [header]
    for k, size in enumerate(report.subset_sizes):
        row = [k + 1, size, fmt(report.q_means[k])]
        for arr in (report.w0, report.w1, report.rel_err0, report.rel_err1):
            row += [fmt(v) for v in arr[k]]
        rows.append(row)
    return _csv(rows)


def robustness_summary(report: RobustnessReport, seed: int) -> dict:
    return {
        "indicators": list(report.names),
        "seed": seed,
        "subset_sizes": list(report.subset_sizes),
        "w0_ave": report.w0_mean,
        "w1_ave": report.w1_mean,
        "w0_var": report.w0_var,
        "w1_var": report.w1_var,
        "q_means": report.q_means,
    }
