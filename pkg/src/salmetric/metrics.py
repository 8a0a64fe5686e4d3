"""Score suite: correlation, scanpath saliency, similarity, divergence,
information gain, and the AUC family with pluggable negative sampling.

Distribution scores (cc, sim, kld) compare density-normalized maps; location
scores (nss, the AUCs) consume the raw prediction and the fixation set.
"""

from __future__ import annotations

import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .core import (
    DatasetIndex,
    DensityMap,
    FixationSet,
    GridMap,
    complement_set,
    normalize_to_density,
)
from .errors import (
    DimensionMismatchError,
    EmptyFixationsError,
    EmptyPoolError,
    InsufficientNegativesError,
    MissingPredictionError,
    UndersizedPoolWarning,
    ZeroVarianceError,
)
from .gaussian import center_bias_map, density_from_fixations
from .roc import auc_averaged, auc_single
from .sampling import (
    NegativePool,
    farthest_pool,
    farthest_pool_fast,
    sample_from_pool,
    shuffled_pool,
)
from .seeding import derive_seed
from .smoothing import tie_break_global, tie_break_noise
from .stats import pearson

EPS = float(np.finfo(np.float64).eps)

ALL_METRICS = ("cc", "nss", "sim", "kld", "ig", "auc_judd", "auc_borji", "s_auc", "fn_auc")
SAMPLED_METRICS = ("auc_borji", "s_auc", "fn_auc")
TIE_BREAK_MODES = ("global", "noise", "off")


def _vals(m) -> np.ndarray:
    return m.values


def _check_dims(a, b):
    if _vals(a).shape != _vals(b).shape:
        raise DimensionMismatchError(f"shapes differ: {_vals(a).shape} vs {_vals(b).shape}")


def cc(a, b) -> float:
    """Pearson correlation between two maps over flattened pixels."""
    _check_dims(a, b)
    return pearson(_vals(a), _vals(b))


def nss(pred: GridMap, fixations: FixationSet) -> float:
    """Mean z-scored prediction value at the fixated pixels."""
    if len(fixations) == 0:
        raise EmptyFixationsError("no fixations to score")
    v = pred.values
    std = float(v.std())
    if std == 0.0:
        raise ZeroVarianceError("constant map has no z-scores")
    return float(((pred.values_at(fixations) - v.mean()) / std).mean())


def sim(a, b) -> float:
    """Histogram intersection of two densities: sum of elementwise minima."""
    _check_dims(a, b)
    return float(np.minimum(_vals(a), _vals(b)).sum())


def kld(gt, pred) -> float:
    """Divergence of the prediction from the ground truth, summed over pixels
    where the ground truth has mass."""
    _check_dims(gt, pred)
    g = _vals(gt)
    p = _vals(pred)
    mask = g > 0.0
    return float(np.sum(g[mask] * np.log(g[mask] / (p[mask] + EPS))))


def ig(pred: DensityMap, fixations: FixationSet, baseline: DensityMap | None = None) -> float:
    """Bits gained over a baseline density at the fixated pixels.

    The baseline defaults to the centered Gaussian density."""
    if len(fixations) == 0:
        raise EmptyFixationsError("no fixations to score")
    if baseline is None:
        baseline = center_bias_map(pred.frame)
    _check_dims(pred, baseline)
    pv = pred.values_at(fixations)
    bv = baseline.values_at(fixations)
    return float(np.mean(np.log2(pv + EPS) - np.log2(bv + EPS)))


def _tie_break(pred: GridMap, mode: str, seed: int) -> GridMap:
    if mode == "off":
        return pred
    # a flat map carries no ranking; leave it to score at chance
    if np.unique(pred.values).size < 2:
        return pred
    if mode == "global":
        return tie_break_global(pred)
    if mode == "noise":
        return tie_break_noise(pred, derive_seed(seed, "tie-noise"))
    raise ValueError(f"unknown tie_break mode {mode!r}; expected one of {TIE_BREAK_MODES}")


def _sampled_auc(scored: GridMap, positives: FixationSet, pool: NegativePool,
                 n_splits: int, seed: int):
    if len(pool) == 0:
        raise EmptyPoolError("empty negative pool")
    count = min(len(positives), len(pool))
    if count < len(positives):
        warnings.warn(
            f"negative pool ({len(pool)}) smaller than the positive set ({len(positives)})",
            UndersizedPoolWarning,
            stacklevel=3,
        )
    return auc_averaged(
        scored, positives, lambda s: sample_from_pool(pool, count, s), n_splits, seed
    )


def auc_judd(pred: GridMap, fixations: FixationSet, tie_break: str = "global",
             seed: int = 0) -> float:
    """AUC with every non-fixated pixel as a negative."""
    scored = _tie_break(pred, tie_break, seed)
    return auc_single(scored, fixations, complement_set(pred.frame, fixations))


def auc_borji(pred: GridMap, fixations: FixationSet, n_splits: int = 100, seed: int = 0,
              tie_break: str = "global"):
    """AUC against uniform draws of non-fixated pixels; returns (mean, std)."""
    scored = _tie_break(pred, tie_break, seed)
    pool = NegativePool(complement_set(pred.frame, fixations))
    if len(pool) < len(fixations):
        raise InsufficientNegativesError(
            f"only {len(pool)} non-fixated pixels for {len(fixations)} positives"
        )
    return _sampled_auc(scored, fixations, pool, n_splits, seed)


def s_auc(pred: GridMap, image_id: str, dataset: DatasetIndex, n_splits: int = 100,
          seed: int = 0, tie_break: str = "global"):
    """AUC against fixations pooled from the other images; returns (mean, std)."""
    img = dataset.image(image_id)
    scored = _tie_break(pred, tie_break, seed)
    pool = shuffled_pool(image_id, dataset)
    if len(pool) < len(img.fixations):
        raise InsufficientNegativesError(
            f"pooled fixations leave only {len(pool)} candidates for "
            f"{len(img.fixations)} positives"
        )
    return _sampled_auc(scored, img.fixations, pool, n_splits, seed)


def fn_auc(pred: GridMap, image_id: str, dataset: DatasetIndex, k: int = 5,
           n_splits: int = 100, seed: int = 0, sigma: float | None = None,
           tie_break: str = "global", fast: bool = False, cc_threshold: float = 0.0):
    """AUC against fixations of the k least similar images; returns (mean, std).

    With ``fast`` the neighbors come from the early-exit scan instead of the
    full ranking."""
    img = dataset.image(image_id)
    scored = _tie_break(pred, tie_break, seed)
    if fast:
        pool = farthest_pool_fast(image_id, dataset, k, sigma, cc_threshold, seed)
    else:
        pool = farthest_pool(image_id, dataset, k, sigma)
    return _sampled_auc(scored, img.fixations, pool, n_splits, seed)


@dataclass(frozen=True)
class EvalConfig:
    """Everything that pins down an evaluation run."""

    metrics: tuple = ALL_METRICS
    seed: int = 0
    n_splits: int = 100
    k: int = 5
    sigma: float | None = None
    tie_break: str = "global"
    fn_fast: bool = False
    cc_threshold: float = 0.0


@dataclass
class MetricReport:
    """Per-image scores, their aggregates, and the configuration used.

    ``per_image_std`` holds the split spread for the sampled AUC metrics;
    ``aggregate`` is the arithmetic mean of the per-image scores."""

    per_image: dict
    per_image_std: dict
    aggregate: dict
    config: EvalConfig


def _score_image(task: dict):
    cfg: EvalConfig = task["config"]
    pred: GridMap = task["pred"]
    fx: FixationSet = task["fixations"]
    image_seed: int = task["image_seed"]
    scores: dict = {}
    stds: dict = {}
    scored = None
    pred_density = None
    for name in cfg.metrics:
        if name == "cc":
            pred_density = pred_density or normalize_to_density(pred)
            scores[name] = cc(pred_density, task["gt_density"])
        elif name == "sim":
            pred_density = pred_density or normalize_to_density(pred)
            scores[name] = sim(pred_density, task["gt_density"])
        elif name == "kld":
            pred_density = pred_density or normalize_to_density(pred)
            scores[name] = kld(task["gt_density"], pred_density)
        elif name == "ig":
            pred_density = pred_density or normalize_to_density(pred)
            scores[name] = ig(pred_density, fx, task["baseline"])
        elif name == "nss":
            scores[name] = nss(pred, fx)
        else:
            if scored is None:
                scored = _tie_break(pred, cfg.tie_break, image_seed)
            if name == "auc_judd":
                scores[name] = auc_single(scored, fx, complement_set(pred.frame, fx))
            else:
                pool = task["pools"][name]
                mean, std = _sampled_auc(scored, fx, pool, cfg.n_splits, image_seed)
                scores[name] = mean
                stds[name] = std
    return task["id"], scores, stds


def evaluate_all(dataset: DatasetIndex, predictions: dict, config: EvalConfig | None = None,
                 jobs: int = 1) -> MetricReport:
    """Score every image of the dataset and aggregate per metric.

    ``predictions`` maps image id to a GridMap of matching dimensions. Results
    are deterministic for a given config seed and independent of ``jobs``: each
    image's sampled draws are seeded from (seed, image id).
    """
    cfg = config if config is not None else EvalConfig()
    unknown = [m for m in cfg.metrics if m not in ALL_METRICS]
    if unknown:
        raise ValueError(f"unknown metrics: {unknown}; choose from {ALL_METRICS}")
    cfg = replace(cfg, metrics=tuple(cfg.metrics),
                  sigma=dataset.sigma if cfg.sigma is None else float(cfg.sigma))

    needs_density = any(m in cfg.metrics for m in ("cc", "sim", "kld", "ig"))
    baseline = center_bias_map(dataset.frame) if "ig" in cfg.metrics else None
    tasks = []
    for rec in dataset.images:
        if rec.id not in predictions:
            raise MissingPredictionError(f"no prediction for image {rec.id!r}")
        pred = predictions[rec.id]
        if pred.frame != dataset.frame:
            raise DimensionMismatchError(
                f"prediction for {rec.id!r} is {pred.frame}, dataset frame is {dataset.frame}"
            )
        image_seed = derive_seed(cfg.seed, rec.id)
        pools = {}
        if "auc_borji" in cfg.metrics:
            pools["auc_borji"] = NegativePool(complement_set(dataset.frame, rec.fixations))
        if "s_auc" in cfg.metrics:
            pools["s_auc"] = shuffled_pool(rec.id, dataset)
        if "fn_auc" in cfg.metrics:
            if cfg.fn_fast:
                pools["fn_auc"] = farthest_pool_fast(
                    rec.id, dataset, cfg.k, cfg.sigma, cfg.cc_threshold, image_seed
                )
            else:
                pools["fn_auc"] = farthest_pool(rec.id, dataset, cfg.k, cfg.sigma)
        tasks.append({
            "id": rec.id,
            "pred": pred,
            "fixations": rec.fixations,
            "gt_density": density_from_fixations(rec.fixations, cfg.sigma) if needs_density else None,
            "baseline": baseline,
            "pools": pools,
            "config": cfg,
            "image_seed": image_seed,
        })

    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            results = list(executor.map(_score_image, tasks))
    else:
        results = [_score_image(t) for t in tasks]

    per_image = {}
    per_image_std = {}
    for image_id, scores, stds in sorted(results):
        per_image[image_id] = dict(sorted(scores.items()))
        if stds:
            per_image_std[image_id] = dict(sorted(stds.items()))
    aggregate = {
        m: float(np.mean([per_image[i][m] for i in per_image])) for m in cfg.metrics
    }
    return MetricReport(per_image=per_image, per_image_std=per_image_std,
                        aggregate=dict(sorted(aggregate.items())), config=cfg)
