"""Negative-set construction: complements, pooled fixations, farthest neighbors.

Pooled samplers expose their candidates as a :class:`NegativePool`: the
deduplicated support set plus per-location draw weights. Weights count how
many images fixated a location, so sampling reproduces the dataset's fixation
distribution even when many fixations collide on a small grid; the support
set alone would flatten it.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .core import DatasetIndex, FixationSet, Frame, complement_set
from .errors import (
    EmptyPoolError,
    InsufficientNegativesError,
    UndersizedPoolWarning,
    ZeroVarianceError,
)
from .gaussian import density_from_fixations
from .seeding import derive_seed


@dataclass(frozen=True)
class NegativePool:
    """Candidate negatives: a support set and optional draw weights.

    ``weights`` is aligned with ``support.linear``; ``None`` means uniform."""

    support: FixationSet
    weights: np.ndarray | None = None

    def __len__(self):
        return len(self.support)


@dataclass(frozen=True)
class NeighborList:
    """Per-image ranking of all other images, least similar first.

    Dissimilarity is the negated correlation of the two blurred fixation
    densities; equal scores fall back to id order.
    """

    query: str
    entries: tuple  # of (image id, dissimilarity)


def sample_from_pool(pool: NegativePool, count: int, seed: int) -> FixationSet:
    """Draw ``count`` distinct locations from the pool.

    The support is in canonical order, so a seed pins the draw exactly."""
    rng = np.random.default_rng(seed)
    if pool.weights is None:
        take = rng.choice(pool.support.linear, size=int(count), replace=False)
    else:
        p = pool.weights / pool.weights.sum()
        take = rng.choice(pool.support.linear, size=int(count), replace=False, p=p)
    return FixationSet.from_linear(take, pool.support.frame)


def negatives_judd(frame: Frame, positives: FixationSet) -> FixationSet:
    """Every non-fixated grid location."""
    return complement_set(frame, positives)


def negatives_borji(frame: Frame, positives: FixationSet, seed: int = 0) -> FixationSet:
    """Uniform sample of non-fixated locations, as many as there are positives."""
    pool = NegativePool(complement_set(frame, positives))
    if len(pool) < len(positives):
        raise InsufficientNegativesError(
            f"only {len(pool)} non-fixated pixels for {len(positives)} positives"
        )
    return sample_from_pool(pool, len(positives), seed)


def shuffled_pool(image_id: str, dataset: DatasetIndex) -> NegativePool:
    """Fixations pooled from the whole dataset, minus this image's own."""
    img = dataset.image(image_id)
    pooled = dataset.pooled.linear
    keep = ~np.isin(pooled, img.fixations.linear, assume_unique=True)
    support = FixationSet.from_linear(pooled[keep], dataset.frame)
    return NegativePool(support, dataset.pooled_counts[keep].astype(np.float64))


def negatives_shuffled(image_id: str, dataset: DatasetIndex, seed: int = 0) -> FixationSet:
    """Draw of other images' fixations, as many as this image's positives."""
    img = dataset.image(image_id)
    pool = shuffled_pool(image_id, dataset)
    if len(pool) < len(img.fixations):
        raise InsufficientNegativesError(
            f"pooled fixations leave only {len(pool)} candidates for "
            f"{len(img.fixations)} positives"
        )
    return sample_from_pool(pool, len(img.fixations), seed)


def _cc_matrix(dataset: DatasetIndex, sigma: float) -> np.ndarray:
    """Pairwise correlation of per-image densities, cached on the dataset."""
    key = ("density_cc", float(sigma))
    cached = dataset._cache.get(key)
    if cached is None:
        rows = np.stack(
            [density_from_fixations(rec.fixations, sigma).values.ravel() for rec in dataset.images]
        )
        rows = rows - rows.mean(axis=1, keepdims=True)
        norms = np.linalg.norm(rows, axis=1, keepdims=True)
        if np.any(norms == 0.0):
            raise ZeroVarianceError("an image density is constant; cannot correlate")
        rows /= norms
        cached = np.clip(rows @ rows.T, -1.0, 1.0)
        dataset._cache[key] = cached
    return cached


def neighbor_ranking(image_id: str, dataset: DatasetIndex, sigma: float | None = None) -> NeighborList:
    """Order the other images by how unlike their fixation density is."""
    if len(dataset) < 2:
        raise ValueError("need at least two images to rank neighbors")
    sigma = dataset.sigma if sigma is None else sigma
    cmat = _cc_matrix(dataset, sigma)
    i = dataset.index(image_id)
    entries = [
        (rec.id, float(-cmat[i, j]))
        for j, rec in enumerate(dataset.images)
        if j != i
    ]
    entries.sort(key=lambda e: (-e[1], e[0]))
    return NeighborList(query=image_id, entries=tuple(entries))


def _check_k(k: int, n_images: int):
    if not (1 <= k <= n_images - 1):
        raise ValueError(f"k must be in [1, {n_images - 1}], got {k}")


def _pool_from_ids(dataset: DatasetIndex, image_id: str, neighbor_ids) -> NegativePool:
    img = dataset.image(image_id)
    parts = [dataset.image(nid).fixations.linear for nid in neighbor_ids]
    merged = np.concatenate(parts) if parts else np.empty(0, dtype=np.int64)
    support, counts = np.unique(merged, return_counts=True)
    keep = ~np.isin(support, img.fixations.linear, assume_unique=True)
    return NegativePool(
        FixationSet.from_linear(support[keep], dataset.frame),
        counts[keep].astype(np.float64),
    )


def farthest_pool(image_id: str, dataset: DatasetIndex, k: int, sigma: float | None = None) -> NegativePool:
    """Union of the top-k farthest neighbors' fixations, minus this image's own."""
    _check_k(k, len(dataset))
    ranking = neighbor_ranking(image_id, dataset, sigma)
    return _pool_from_ids(dataset, image_id, [nid for nid, _ in ranking.entries[:k]])


def farthest_pool_fast(
    image_id: str,
    dataset: DatasetIndex,
    k: int,
    sigma: float | None = None,
    cc_threshold: float = 0.0,
    seed: int = 0,
) -> NegativePool:
    """Early-exit neighbor selection: scan in a seeded order and keep the first
    k images whose density correlation falls below ``cc_threshold``. When a
    full scan finds fewer than k, fall back to the exact top-k ranking."""
    _check_k(k, len(dataset))
    sigma = dataset.sigma if sigma is None else sigma
    cmat = _cc_matrix(dataset, sigma)
    i = dataset.index(image_id)
    others = [j for j in range(len(dataset)) if j != i]
    order = np.random.default_rng(derive_seed(seed, "fast-scan")).permutation(len(others))
    chosen = []
    for idx in order:
        j = others[int(idx)]
        if cmat[i, j] < cc_threshold:
            chosen.append(dataset.images[j].id)
            if len(chosen) == k:
                break
    if len(chosen) < k:
        ranking = neighbor_ranking(image_id, dataset, sigma)
        chosen = [nid for nid, _ in ranking.entries[:k]]
    return _pool_from_ids(dataset, image_id, chosen)


def _draw_negatives(pool: NegativePool, positives: FixationSet, seed: int) -> FixationSet:
    if len(pool) == 0:
        raise EmptyPoolError("no negative candidates left after removing the positives")
    count = min(len(positives), len(pool))
    if count < len(positives):
        warnings.warn(
            f"negative pool ({len(pool)}) smaller than the positive set "
            f"({len(positives)}); using the whole pool",
            UndersizedPoolWarning,
            stacklevel=3,
        )
    return sample_from_pool(pool, count, seed)


def negatives_farthest(
    image_id: str,
    dataset: DatasetIndex,
    k: int = 5,
    sigma: float | None = None,
    seed: int = 0,
) -> FixationSet:
    """Draw from the farthest-neighbor pool, matching the positives' size."""
    pool = farthest_pool(image_id, dataset, k, sigma)
    return _draw_negatives(pool, dataset.image(image_id).fixations, seed)


def negatives_farthest_fast(
    image_id: str,
    dataset: DatasetIndex,
    k: int = 5,
    sigma: float | None = None,
    cc_threshold: float = 0.0,
    seed: int = 0,
) -> FixationSet:
    """Like :func:`negatives_farthest` but with the early-exit neighbor scan."""
    pool = farthest_pool_fast(image_id, dataset, k, sigma, cc_threshold, seed)
    return _draw_negatives(pool, dataset.image(image_id).fixations, seed)
