"""Synthetic fixation datasets and reference predictors.

The generator mixes a centered draw with per-image object clusters, which is
enough to reproduce the qualitative behaviors the metric suite should detect:
center bias, peripheral bias, blur-width sensitivity, and tie-break effects.
"""

from dataclasses import dataclass

import numpy as np

from .core import (
    DatasetIndex,
    FixationSet,
    Frame,
    GridMap,
    ImageRecord,
    complement_set,
)
from .errors import UnknownModeError
from .gaussian import center_bias_map, density_from_fixations
from .metrics import _sampled_auc, _tie_break, auc_single, cc, ig, kld, nss, sim
from .sampling import NegativePool, farthest_pool, shuffled_pool
from .seeding import derive_seed

PREDICTOR_MODES = ("oracle", "center", "peripheral", "quantized", "uniform")
SWEEP_METRICS = ("cc", "nss", "sim", "kld", "ig", "auc_judd", "auc_borji", "s_auc", "fn_auc")


@dataclass(frozen=True)
class SynthConfig:
    n_images: int = 200
    frame: Frame = (64, 64)
    fixations_per_image: int = 20
    center_bias_strength: float = 0.8  # mixing weight of the centered draw
    n_object_clusters: int = 3
    cluster_sigma: float = 3.0
    seed: int = 0

    def __post_init__(self):
        if self.n_images < 1 or self.fixations_per_image < 1 or self.n_object_clusters < 1:
            raise ValueError("counts must be at least 1")
        if not (0.0 <= self.center_bias_strength <= 1.0):
            raise ValueError("center_bias_strength must be in [0, 1]")
        if not (self.cluster_sigma > 0):
            raise ValueError("cluster_sigma must be positive")
        w, h = self.frame
        if w * h < self.fixations_per_image:
            raise ValueError("frame too small for the requested fixations per image")


def gen_dataset(config: SynthConfig) -> DatasetIndex:
    """Deterministic synthetic dataset; each image's draws are seeded from
    (config.seed, image index).

    Cluster centers are drawn from the centered density; each fixation comes
    from the centered density with probability ``center_bias_strength`` and
    from a cluster Gaussian otherwise, clamped in-bounds. Duplicates are
    redrawn."""
    w, h = config.frame
    center_flat = center_bias_map(config.frame).values.ravel()
    images = []
    for i in range(config.n_images):
        rng = np.random.default_rng(derive_seed(config.seed, "image", i))
        center_linear = rng.choice(w * h, size=config.n_object_clusters, p=center_flat)
        clusters = [(int(lin) % w, int(lin) // w) for lin in center_linear]
        chosen: set[int] = set()
        attempts = 0
        while len(chosen) < config.fixations_per_image:
            attempts += 1
            if attempts > 200 * config.fixations_per_image:
                # grid nearly exhausted; fill from whatever pixels are left
                taken = FixationSet.from_linear(np.fromiter(chosen, dtype=np.int64), (w, h))
                rest = complement_set((w, h), taken).linear
                need = config.fixations_per_image - len(chosen)
                chosen.update(int(v) for v in rng.choice(rest, size=need, replace=False))
                break
            if rng.random() < config.center_bias_strength:
                linear = int(rng.choice(w * h, p=center_flat))
            else:
                cx, cy = clusters[int(rng.integers(config.n_object_clusters))]
                x = int(round(cx + rng.normal(0.0, config.cluster_sigma)))
                y = int(round(cy + rng.normal(0.0, config.cluster_sigma)))
                x = min(max(x, 0), w - 1)
                y = min(max(y, 0), h - 1)
                linear = y * w + x
            chosen.add(linear)
        fixations = FixationSet.from_linear(np.fromiter(chosen, dtype=np.int64), (w, h))
        images.append(ImageRecord(id=f"synth_{i:04d}", fixations=fixations))
    # cluster_sigma is the blur width that best reconstructs the generating density
    return DatasetIndex(images, name="synthetic", sigma=config.cluster_sigma)


def gen_prediction(image: ImageRecord, mode: str, sigma: float, levels: int = 3) -> GridMap:
    """Reference predictor for one image.

    oracle      density of the image's own fixations at ``sigma``
    center      the centered Gaussian baseline
    peripheral  inverted center map, re-normalized to peak 1
    quantized   oracle binned into ``levels`` equal-count value steps
    uniform     constant map
    """
    w, h = image.frame
    if mode == "oracle":
        return density_from_fixations(image.fixations, sigma).grid
    if mode == "center":
        return center_bias_map((w, h)).grid
    if mode == "peripheral":
        center = center_bias_map((w, h)).values
        inverted = 1.0 - center / center.max()
        return GridMap(inverted / inverted.max())
    if mode == "quantized":
        return quantize_map(density_from_fixations(image.fixations, sigma), levels)
    if mode == "uniform":
        return GridMap(np.full((h, w), 0.5))
    raise UnknownModeError(f"unknown predictor mode {mode!r}; choose from {PREDICTOR_MODES}")


def quantize_map(source, levels: int = 3) -> GridMap:
    """Bin a map into ``levels`` equal-count value steps spaced over [0, 1]."""
    if levels < 2:
        raise ValueError("quantization needs at least 2 levels")
    v = source.values
    edges = np.quantile(v, [i / levels for i in range(1, levels)])
    bins = np.zeros(v.shape, dtype=np.float64)
    for edge in edges:
        bins += (v > edge).astype(np.float64)
    return GridMap(bins / (levels - 1))


@dataclass(frozen=True)
class SweepTable:
    """Per-metric score rows over a grid of training blur widths.

    ``deviation`` is the population standard deviation of each row: the
    smaller it is, the less the metric cares about the blur width used to
    build the prediction."""

    sigmas: tuple
    sigma_gt: float
    scores: dict  # metric -> tuple of mean scores, aligned with sigmas
    deviation: dict  # metric -> float


def sigma_sweep(dataset: DatasetIndex, sigma_train, sigma_gt: float | None = None,
                metrics=("cc", "nss", "auc_judd"), seed: int = 0, n_splits: int = 100,
                k: int = 5, tie_break: str = "global") -> SweepTable:
    """Score the oracle predictor rebuilt at each training width against a
    fixed ground-truth width.

    Distribution metrics compare the prediction density at each train width
    with the ground-truth density at ``sigma_gt``; location metrics score the
    prediction against the raw fixations."""
    sigma_train = tuple(float(s) for s in sigma_train)
    if not sigma_train:
        raise ValueError("need at least one training width")
    unknown = [m for m in metrics if m not in SWEEP_METRICS]
    if unknown:
        raise ValueError(f"unknown metrics: {unknown}; choose from {SWEEP_METRICS}")
    sigma_gt = dataset.sigma if sigma_gt is None else float(sigma_gt)

    needs_gt = any(m in metrics for m in ("cc", "sim", "kld"))
    gt_density = (
        {rec.id: density_from_fixations(rec.fixations, sigma_gt) for rec in dataset.images}
        if needs_gt else {}
    )
    baseline = center_bias_map(dataset.frame) if "ig" in metrics else None
    pools = {}
    if "auc_borji" in metrics:
        pools["auc_borji"] = {
            rec.id: NegativePool(complement_set(dataset.frame, rec.fixations))
            for rec in dataset.images
        }
    if "s_auc" in metrics:
        pools["s_auc"] = {rec.id: shuffled_pool(rec.id, dataset) for rec in dataset.images}
    if "fn_auc" in metrics:
        pools["fn_auc"] = {rec.id: farthest_pool(rec.id, dataset, k) for rec in dataset.images}

    rows = {m: [] for m in metrics}
    for st in sigma_train:
        sums = {m: 0.0 for m in metrics}
        for rec in dataset.images:
            pred_density = density_from_fixations(rec.fixations, st)
            pred = pred_density.grid
            image_seed = derive_seed(seed, "sweep", st, rec.id)
            scored = None
            for m in metrics:
                if m == "cc":
                    sums[m] += cc(pred_density, gt_density[rec.id])
                elif m == "sim":
                    sums[m] += sim(pred_density, gt_density[rec.id])
                elif m == "kld":
                    sums[m] += kld(gt_density[rec.id], pred_density)
                elif m == "ig":
                    sums[m] += ig(pred_density, rec.fixations, baseline)
                elif m == "nss":
                    sums[m] += nss(pred, rec.fixations)
                else:
                    if scored is None:
                        scored = _tie_break(pred, tie_break, image_seed)
                    if m == "auc_judd":
                        sums[m] += auc_single(
                            scored, rec.fixations, complement_set(dataset.frame, rec.fixations)
                        )
                    else:
                        mean, _ = _sampled_auc(
                            scored, rec.fixations, pools[m][rec.id], n_splits, image_seed
                        )
                        sums[m] += mean
        for m in metrics:
            rows[m].append(sums[m] / len(dataset))

    scores = {m: tuple(rows[m]) for m in metrics}
    deviation = {m: float(np.std(rows[m])) for m in metrics}
    return SweepTable(sigmas=sigma_train, sigma_gt=sigma_gt, scores=scores, deviation=deviation)
