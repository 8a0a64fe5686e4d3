"""Quality measures for sampled negative sets.

A good negative set does two things at once: it lands where a pure
center-bias prediction is strong (so that prediction gets penalized), and it
stays away from the true positives (so a correct prediction does not). The
two measures here score exactly that trade-off; their ratio
(contamination / penalization) is lower for better sets.
"""

from dataclasses import dataclass

import numpy as np

from .core import DatasetIndex, DensityMap, FixationSet
from .errors import EmptyFixationsError
from .gaussian import center_bias_map, density_from_fixations
from .metrics import auc_judd
from .sampling import negatives_farthest, negatives_farthest_fast, negatives_shuffled
from .seeding import derive_seed
from .stats import pearson

QUALITY_MEASURES = ("cc", "auc")


@dataclass(frozen=True)
class QualityTriple:
    penalization: float  # higher is better
    contamination: float  # lower is better
    ratio: float | None  # contamination / penalization; None when penalization is 0


def make_triple(penalization: float, contamination: float) -> QualityTriple:
    ratio = contamination / penalization if penalization != 0.0 else None
    return QualityTriple(penalization, contamination, ratio)


def center_penalization(negatives: FixationSet, center: DensityMap | None = None,
                        sigma: float = 19.0, measure: str = "cc") -> float:
    """How strongly the negatives would reward a pure center-bias prediction.

    Treats the negatives as if they were positives and scores the centered
    density against them."""
    if len(negatives) == 0:
        raise EmptyFixationsError("no negatives to score")
    if center is None:
        center = center_bias_map(negatives.frame)
    if measure == "cc":
        return pearson(density_from_fixations(negatives, sigma).values, center.values)
    if measure == "auc":
        return auc_judd(center.grid, negatives)
    raise ValueError(f"unknown measure {measure!r}; choose from {QUALITY_MEASURES}")


def positive_contamination(negatives: FixationSet, positives: FixationSet,
                           sigma: float = 19.0, measure: str = "cc") -> float:
    """How much the negatives overlap the positives they should contrast with.

    Treats the negatives' density as a prediction and scores it against the
    true positives."""
    if len(negatives) == 0 or len(positives) == 0:
        raise EmptyFixationsError("need non-empty negative and positive sets")
    if measure == "cc":
        return pearson(
            density_from_fixations(negatives, sigma).values,
            density_from_fixations(positives, sigma).values,
        )
    if measure == "auc":
        return auc_judd(density_from_fixations(negatives, sigma).grid, positives)
    raise ValueError(f"unknown measure {measure!r}; choose from {QUALITY_MEASURES}")


def _parse_sampler(label: str):
    """Sampler spec: "shuffled", "fn:K" or "fn-fast:K[:cc_threshold]"."""
    parts = label.split(":")
    kind = parts[0]
    if kind == "shuffled":
        if len(parts) != 1:
            raise ValueError(f"sampler {label!r} takes no parameters")
        return lambda image_id, dataset, sigma, seed: negatives_shuffled(image_id, dataset, seed)
    if kind in ("fn", "fn-fast"):
        if len(parts) < 2:
            raise ValueError(f"sampler {label!r} needs a neighbor count, e.g. '{kind}:5'")
        k = int(parts[1])
        if kind == "fn":
            if len(parts) != 2:
                raise ValueError(f"sampler {label!r} has too many parameters")
            return lambda image_id, dataset, sigma, seed: negatives_farthest(
                image_id, dataset, k, sigma, seed
            )
        threshold = float(parts[2]) if len(parts) == 3 else 0.0
        if len(parts) > 3:
            raise ValueError(f"sampler {label!r} has too many parameters")
        return lambda image_id, dataset, sigma, seed: negatives_farthest_fast(
            image_id, dataset, k, sigma, threshold, seed
        )
    raise ValueError(f"unknown sampler {label!r}; expected shuffled, fn:K or fn-fast:K")


def quality_report(dataset: DatasetIndex, samplers=("shuffled", "fn:5"), seed: int = 0,
                   sigma: float | None = None, measure: str = "cc") -> dict:
    """Mean quality triple per sampler across all images of the dataset.

    Each image's draw is seeded from (seed, sampler label, image id), so the
    report is deterministic and order-independent."""
    sigma = dataset.sigma if sigma is None else float(sigma)
    center = center_bias_map(dataset.frame)
    out = {}
    for label in samplers:
        draw = _parse_sampler(label)
        pen, con, ratios = [], [], []
        for rec in dataset.images:
            negatives = draw(rec.id, dataset, sigma, derive_seed(seed, label, rec.id))
            triple = make_triple(
                center_penalization(negatives, center, sigma, measure),
                positive_contamination(negatives, rec.fixations, sigma, measure),
            )
            pen.append(triple.penalization)
            con.append(triple.contamination)
            if triple.ratio is not None:
                ratios.append(triple.ratio)
        out[label] = QualityTriple(
            penalization=float(np.mean(pen)),
            contamination=float(np.mean(con)),
            ratio=float(np.mean(ratios)) if ratios else None,
        )
    return out
