"""ROC construction and area computation for location-based scoring."""

from dataclasses import dataclass

import numpy as np

from .core import FixationSet, GridMap
from .errors import EmptyNegativesError, EmptyPositivesError, SamplerExhaustedError
from .seeding import derive_seed


@dataclass(frozen=True)
class RocCurve:
    """Monotone list of (fpr, tpr) points running from (0, 0) to (1, 1)."""

    points: tuple

    def __post_init__(self):
        pts = tuple((float(f), float(t)) for f, t in self.points)
        object.__setattr__(self, "points", pts)
        if len(pts) < 2 or pts[0] != (0.0, 0.0) or pts[-1] != (1.0, 1.0):
            raise ValueError("curve must run from (0, 0) to (1, 1)")
        for (f0, t0), (f1, t1) in zip(pts, pts[1:]):
            if f1 < f0 or t1 < t0:
                raise ValueError("fpr and tpr must be non-decreasing")

    @property
    def fpr(self) -> np.ndarray:
        return np.array([p[0] for p in self.points])

    @property
    def tpr(self) -> np.ndarray:
        return np.array([p[1] for p in self.points])


def roc_points(pred: GridMap, positives: FixationSet, negatives: FixationSet) -> RocCurve:
    """Sweep thresholds over every value seen at a positive or negative location.

    At threshold t a location counts as predicted-salient when its value is
    >= t, so the trapezoidal area equals the pairwise rank statistic (ties
    contribute one half).
    """
    if len(positives) == 0:
        raise EmptyPositivesError("no positive locations")
    if len(negatives) == 0:
        raise EmptyNegativesError("no negative locations")
    pv = np.sort(pred.values_at(positives))
    nv = np.sort(pred.values_at(negatives))
    thresholds = np.unique(np.concatenate([pv, nv]))[::-1]
    tp = pv.size - np.searchsorted(pv, thresholds, side="left")
    fp = nv.size - np.searchsorted(nv, thresholds, side="left")
    pts = [(0.0, 0.0)]
    pts.extend(zip(fp / nv.size, tp / pv.size))
    pts.append((1.0, 1.0))
    return RocCurve(tuple(pts))


def auc(curve: RocCurve) -> float:
    """Trapezoidal integral of tpr over fpr."""
    f = curve.fpr
    t = curve.tpr
    return float(0.5 * np.sum(np.diff(f) * (t[:-1] + t[1:])))


def auc_single(pred: GridMap, positives: FixationSet, negatives: FixationSet) -> float:
    return auc(roc_points(pred, positives, negatives))


def auc_averaged(pred, positives, negative_sampler, n_splits: int = 100, seed: int = 0):
    """Mean and population std of ``auc_single`` over seeded negative draws.

    ``negative_sampler`` gets one derived seed per split, so the result does
    not depend on evaluation order.
    """
    if n_splits < 1:
        raise ValueError("n_splits must be at least 1")
    scores = np.empty(n_splits, dtype=np.float64)
    for i in range(n_splits):
        negatives = negative_sampler(derive_seed(seed, i))
        if len(negatives) == 0:
            raise SamplerExhaustedError("negative sampler returned an empty set")
        scores[i] = auc_single(pred, positives, negatives)
    return float(scores.mean()), float(scores.std())
