"""TOPSIS scoring on a vector-normalized matrix."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .transforms import ZMatrix
from .weighting import WeightVector

__all__ = [
    "IdealSchemes",
    "ScoreTable",
    "weighted_matrix",
    "ideal_schemes",
    "closeness_scores",
    "rank",
    "rank_order",
    "topsis",
]

SCORE_SCALE = 100.0


@dataclass(frozen=True)
class IdealSchemes:
    best: np.ndarray
    worst: np.ndarray

    def __post_init__(self):
        if np.any(self.best < self.worst):
            raise ValueError("ideal best must dominate ideal worst in every column")


@dataclass(frozen=True)
class ScoreTable:
    """Per-alternative TOPSIS results, in input row order.

    ``scores`` are on the 0..100 scale; ``rank[i]`` is the 1-based position
    of row ``i`` (0 until :func:`rank` is applied).
    """

    ids: tuple[str, ...]
    d_plus: np.ndarray
    d_minus: np.ndarray
    scores: np.ndarray
    rank: np.ndarray

    @property
    def closeness(self) -> np.ndarray:
        """Scores on the unit interval."""
        return self.scores / SCORE_SCALE

    def __len__(self):
        return len(self.ids)

    def rank_of(self) -> dict[str, int]:
        return dict(zip(self.ids, self.rank.tolist()))

    def ordered(self) -> list[int]:
        """Row indices sorted by rank."""
        return np.argsort(self.rank, kind="stable").tolist()


def weighted_matrix(Z: ZMatrix, W: WeightVector) -> ZMatrix:
    w = np.asarray(W.weights)
    if Z.shape[1] != w.size:
        raise ValueError(f"matrix has {Z.shape[1]} columns but {w.size} weights")
    return ZMatrix(Z.values * w)


def ideal_schemes(Zstar: ZMatrix) -> IdealSchemes:
    if Zstar.shape[0] < 1:
        raise ValueError("need at least one row")
    return IdealSchemes(Zstar.values.max(axis=0), Zstar.values.min(axis=0))


def closeness_scores(Zstar: ZMatrix, schemes: IdealSchemes, ids) -> ScoreTable:
    """Euclidean distances to both ideals and the relative closeness ``D- / (D+ + D-)``.

    Rows where both distances vanish (every row identical) score 50.
    """
    z = Zstar.values
    ids = tuple(str(i) for i in ids)
    if len(ids) != z.shape[0] or schemes.best.size != z.shape[1]:
        raise ValueError("dimension mismatch between matrix, ideals and ids")
    d_plus = np.sqrt(np.sum((schemes.best - z) ** 2, axis=1))
    d_minus = np.sqrt(np.sum((schemes.worst - z) ** 2, axis=1))
    total = d_plus + d_minus
    ratio = np.divide(d_minus, total, out=np.full_like(total, 0.5), where=total > 0)
    return ScoreTable(ids, d_plus, d_minus, SCORE_SCALE * ratio, np.zeros(len(ids), dtype=int))


def rank_order(scores, ids) -> list[int]:
    """Row indices by descending score, ties broken by ascending id."""
    return sorted(range(len(ids)), key=lambda i: (-float(scores[i]), ids[i]))


def rank(table: ScoreTable) -> ScoreTable:
    order = rank_order(table.scores, table.ids)
    positions = np.empty(len(order), dtype=int)
    positions[order] = np.arange(1, len(order) + 1)
    return replace(table, rank=positions)


def topsis(Z: ZMatrix, W: WeightVector, ids) -> ScoreTable:
    """Weight, find ideals, score and rank in one call."""
    zstar = weighted_matrix(Z, W)
    return rank(closeness_scores(zstar, ideal_schemes(zstar), ids))
