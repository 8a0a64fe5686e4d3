"""Grid maps, fixation sets and density maps, plus conversions between them.

Coordinate convention: ``(x, y)`` means column ``x`` and row ``y`` with the
origin at the top-left pixel, so a map stores ``values[y, x]``. Frames are
``(width, height)`` tuples. All types are immutable after construction and
safe to share across workers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DuplicateIdError,
    EmptyDatasetError,
    EmptyFixationsError,
    FrameMismatchError,
    NegativeValueError,
    NonBinaryMapError,
    ZeroMassError,
)

Frame = tuple[int, int]

# fixation maps are accepted as binary up to this absolute slack
_BINARY_ATOL = 1e-9


class GridMap:
    """Dense 2D map of finite float64 values."""

    def __init__(self, values):
        arr = np.array(values, dtype=np.float64)
        if arr.ndim != 2:
            raise ValueError(f"expected a 2D array, got shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError("maps need at least one row and one column")
        if not np.all(np.isfinite(arr)):
            raise ValueError("map values must be finite")
        arr.setflags(write=False)
        self.values = arr

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @property
    def width(self) -> int:
        return self.values.shape[1]

    @property
    def frame(self) -> Frame:
        return (self.width, self.height)

    def at(self, x: int, y: int) -> float:
        return float(self.values[y, x])

    def values_at(self, fixations: "FixationSet") -> np.ndarray:
        """Map values at each fixation, in the set's canonical order."""
        if fixations.frame != self.frame:
            raise FrameMismatchError(
                f"fixations index a {fixations.frame} frame, map is {self.frame}"
            )
        return self.values[fixations.ys, fixations.xs]

    def __repr__(self):
        return f"GridMap({self.width}x{self.height})"


class FixationSet:
    """Deduplicated set of integer pixel coordinates within a frame.

    Coordinates are kept sorted in row-major order; that canonical order is
    what makes the seeded samplers reproducible.
    """

    def __init__(self, coords, frame: Frame):
        w, h = int(frame[0]), int(frame[1])
        if w < 1 or h < 1:
            raise ValueError("frame must be at least 1x1")
        pts = list(coords)
        if pts:
            arr = np.asarray(pts, dtype=np.int64)
            if arr.ndim != 2 or arr.shape[1] != 2:
                raise ValueError("coords must be (x, y) pairs")
            xs, ys = arr[:, 0], arr[:, 1]
            if np.any((xs < 0) | (xs >= w) | (ys < 0) | (ys >= h)):
                raise ValueError(f"coordinate outside the {w}x{h} frame")
            linear = np.unique(ys * w + xs)
        else:
            linear = np.empty(0, dtype=np.int64)
        linear.setflags(write=False)
        self.frame = (w, h)
        self._linear = linear

    @classmethod
    def from_linear(cls, linear, frame: Frame) -> "FixationSet":
        """Build from row-major linear indices (``y * width + x``)."""
        w, h = int(frame[0]), int(frame[1])
        arr = np.unique(np.asarray(linear, dtype=np.int64))
        if arr.size and (arr[0] < 0 or arr[-1] >= w * h):
            raise ValueError(f"linear index outside the {w}x{h} frame")
        out = cls.__new__(cls)
        arr.setflags(write=False)
        out.frame = (w, h)
        out._linear = arr
        return out

    @property
    def linear(self) -> np.ndarray:
        return self._linear

    @property
    def xs(self) -> np.ndarray:
        return self._linear % self.frame[0]

    @property
    def ys(self) -> np.ndarray:
        return self._linear // self.frame[0]

    @property
    def coords(self) -> list[tuple[int, int]]:
        return [(int(x), int(y)) for x, y in zip(self.xs, self.ys)]

    def __len__(self):
        return int(self._linear.size)

    def __iter__(self):
        return iter(self.coords)

    def __contains__(self, coord):
        x, y = coord
        return bool(np.any(self._linear == int(y) * self.frame[0] + int(x)))

    def __eq__(self, other):
        if not isinstance(other, FixationSet):
            return NotImplemented
        return self.frame == other.frame and np.array_equal(self._linear, other._linear)

    def __repr__(self):
        return f"FixationSet({len(self)} points in {self.frame[0]}x{self.frame[1]})"


class DensityMap:
    """A GridMap constrained to be a probability mass function over pixels."""

    SUM_ATOL = 1e-9

    def __init__(self, grid: GridMap):
        if np.any(grid.values < 0.0):
            raise NegativeValueError("densities cannot hold negative values")
        total = float(grid.values.sum())
        if abs(total - 1.0) > self.SUM_ATOL:
            raise ValueError(f"density sums to {total!r}, expected 1")
        self.grid = grid

    @property
    def values(self) -> np.ndarray:
        return self.grid.values

    @property
    def frame(self) -> Frame:
        return self.grid.frame

    @property
    def width(self) -> int:
        return self.grid.width

    @property
    def height(self) -> int:
        return self.grid.height

    def values_at(self, fixations: FixationSet) -> np.ndarray:
        return self.grid.values_at(fixations)

    def __repr__(self):
        return f"DensityMap({self.width}x{self.height})"


@dataclass(frozen=True)
class ImageRecord:
    """One dataset entry: an id and its ground-truth fixations."""

    id: str
    fixations: FixationSet

    @property
    def frame(self) -> Frame:
        return self.fixations.frame


class DatasetIndex:
    """Images over a single shared frame, plus the pooled fixation union.

    ``sigma`` is the blur width (pixels) used whenever this dataset's
    fixations are turned into densities and no explicit width is given.
    """

    def __init__(self, images, name: str = "", sigma: float = 19.0):
        images = tuple(images)
        if not images:
            raise EmptyDatasetError("dataset has no images")
        frame = images[0].frame
        by_id: dict[str, int] = {}
        for pos, rec in enumerate(images):
            if rec.id in by_id:
                raise DuplicateIdError(f"duplicate image id {rec.id!r}")
            if rec.frame != frame:
                raise FrameMismatchError(
                    f"image {rec.id!r} frame {rec.frame} differs from {frame}"
                )
            if len(rec.fixations) == 0:
                raise EmptyFixationsError(f"image {rec.id!r} has no fixations")
            by_id[rec.id] = pos
        self.images = images
        self.name = name
        self.sigma = float(sigma)
        all_linear = np.concatenate([rec.fixations.linear for rec in images])
        support, counts = np.unique(all_linear, return_counts=True)
        counts.setflags(write=False)
        self.pooled = FixationSet.from_linear(support, frame)
        # how many images fixated each pooled location, aligned with pooled.linear
        self.pooled_counts = counts
        self._by_id = by_id
        self._cache: dict = {}

    @property
    def frame(self) -> Frame:
        return self.images[0].frame

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(rec.id for rec in self.images)

    def image(self, image_id: str) -> ImageRecord:
        return self.images[self.index(image_id)]

    def index(self, image_id: str) -> int:
        try:
            return self._by_id[image_id]
        except KeyError:
            raise KeyError(f"no image {image_id!r} in dataset {self.name!r}") from None

    def __len__(self):
        return len(self.images)

    def __getstate__(self):
        state = self.__dict__.copy()
        state["_cache"] = {}
        return state

    def __repr__(self):
        w, h = self.frame
        return f"DatasetIndex({self.name!r}, {len(self)} images, {w}x{h})"


def vectorize(fixations: FixationSet) -> GridMap:
    """Binary map with a 1 at each fixation and 0 elsewhere."""
    w, h = fixations.frame
    flat = np.zeros(w * h, dtype=np.float64)
    flat[fixations.linear] = 1.0
    return GridMap(flat.reshape(h, w))


def fixations_from_map(grid: GridMap) -> FixationSet:
    """Inverse of :func:`vectorize` for binary maps."""
    v = grid.values
    is_zero = np.abs(v) <= _BINARY_ATOL
    is_one = np.abs(v - 1.0) <= _BINARY_ATOL
    if not np.all(is_zero | is_one):
        raise NonBinaryMapError("map values must all be 0 or 1")
    return FixationSet.from_linear(np.flatnonzero(is_one.ravel()), grid.frame)


def normalize_to_density(grid: GridMap) -> DensityMap:
    """Divide a non-negative map by its total mass."""
    if np.any(grid.values < 0.0):
        raise NegativeValueError("map has negative values")
    total = float(grid.values.sum())
    if total == 0.0:
        raise ZeroMassError("cannot normalize an all-zero map")
    return DensityMap(GridMap(grid.values / total))


def complement_set(frame: Frame, exclude: FixationSet) -> FixationSet:
    """Every grid location not in ``exclude``."""
    w, h = int(frame[0]), int(frame[1])
    if exclude.frame != (w, h):
        raise FrameMismatchError(
            f"exclude set indexes a {exclude.frame} frame, expected {(w, h)}"
        )
    keep = np.setdiff1d(np.arange(w * h, dtype=np.int64), exclude.linear, assume_unique=True)
    return FixationSet.from_linear(keep, (w, h))
