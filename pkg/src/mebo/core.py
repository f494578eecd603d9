"""Shared domain types, parameter derivation, and validation.

Everything downstream (ball fitting, selection, tree growth, peeling)
works in terms of the types defined here.  All of them are immutable;
functions taking them are pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

__all__ = [
    "MeboError",
    "InvalidParamsError",
    "DegenerateDatasetError",
    "EmptySubsetError",
    "InstanceTooLargeError",
    "SpecInfeasibleError",
    "Dataset",
    "Ball",
    "Params",
    "DerivedParams",
    "Candidate",
    "RecognitionResult",
    "derive_params",
]


class MeboError(Exception):
    """Base class for all library errors."""


class InvalidParamsError(MeboError, ValueError):
    """A parameter violates its range or consistency constraints."""


class DegenerateDatasetError(MeboError, ValueError):
    """The dataset is too small for the requested parameters."""


class EmptySubsetError(MeboError, ValueError):
    """An operation that needs at least one point got none."""


class InstanceTooLargeError(MeboError, ValueError):
    """The exact oracle was asked for more than it can enumerate."""


class SpecInfeasibleError(MeboError, ValueError):
    """A multi-class specification cannot be satisfied on the data."""


class Dataset:
    """Immutable n x d matrix of points, one row per point.

    Entries must be finite reals.  The backing array is copied on
    construction and marked read-only, so instances are safe to share
    across threads.
    """

    __slots__ = ("points", "n", "d")

    def __init__(self, points) -> None:
        pts = np.array(points, dtype=np.float64, order="C", copy=True)
        if pts.ndim != 2:
            raise InvalidParamsError(f"points must be 2-dimensional, got shape {pts.shape}")
        if pts.shape[0] < 1 or pts.shape[1] < 1:
            raise InvalidParamsError(f"need at least one point and one dimension, got shape {pts.shape}")
        if not np.isfinite(pts).all():
            raise InvalidParamsError("points contain NaN or infinity")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "n", pts.shape[0])
        object.__setattr__(self, "d", pts.shape[1])

    def __setattr__(self, name, value):
        raise AttributeError("Dataset is immutable")

    def __repr__(self) -> str:
        return f"Dataset(n={self.n}, d={self.d})"


@dataclass(frozen=True)
class Ball:
    """A center plus a nonnegative radius."""

    center: np.ndarray
    radius: float

    def __post_init__(self):
        c = np.asarray(self.center, dtype=np.float64)
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "radius", float(self.radius))
        if c.ndim != 1:
            raise InvalidParamsError("ball center must be a flat vector")
        if not np.isfinite(c).all():
            raise InvalidParamsError("ball center must be finite")
        if not (self.radius >= 0.0):
            raise InvalidParamsError(f"ball radius must be >= 0, got {self.radius}")

    def contains(self, point, tol: float = 0.0) -> bool:
        return float(np.linalg.norm(np.asarray(point, dtype=np.float64) - self.center)) <= self.radius + tol


@dataclass(frozen=True)
class Params:
    """All algorithm knobs.

    gamma is the assumed outlier fraction.  epsilon controls the radius
    approximation (tree height h = ceil(2/epsilon) + 1), delta the count
    slack (top-k size k = ceil((1+delta)*gamma*n)), mu the per-tree
    failure probability budget (sample size s = ceil((1+1/delta)*ln(h/mu))).

    meb_iters is the iteration count of the ball-center recurrence;
    None means the derived default ceil(1/epsilon^2).  forest_size and
    sequential_rounds configure boosting.  seed drives every random
    choice; identical Params give bit-identical results.
    """

    gamma: float
    epsilon: float = 0.8
    delta: float = 0.15
    mu: float = 0.9
    meb_iters: Optional[int] = None
    forest_size: int = 4
    sequential_rounds: int = 2
    seed: int = 0

    def __post_init__(self):
        # gamma = 0 is allowed so multi-class peeling can request "no outliers".
        if not (0.0 <= self.gamma < 1.0):
            raise InvalidParamsError(f"gamma must be in [0, 1), got {self.gamma}")
        for name in ("epsilon", "delta", "mu"):
            v = getattr(self, name)
            if not (0.0 < v < 1.0):
                raise InvalidParamsError(f"{name} must be in (0, 1), got {v}")
        if (1.0 + self.delta) * self.gamma >= 1.0:
            raise InvalidParamsError(
                f"(1+delta)*gamma = {(1 + self.delta) * self.gamma:.6g} must stay below 1, "
                "otherwise no inliers remain"
            )
        if self.meb_iters is not None and self.meb_iters < 1:
            raise InvalidParamsError(f"meb_iters must be >= 1, got {self.meb_iters}")
        if self.forest_size < 1:
            raise InvalidParamsError(f"forest_size must be >= 1, got {self.forest_size}")
        if self.sequential_rounds < 0:
            raise InvalidParamsError(f"sequential_rounds must be >= 0, got {self.sequential_rounds}")
        if not (0 <= self.seed < 2**64):
            raise InvalidParamsError("seed must fit in 64 unsigned bits")

    @property
    def meb_iter_count(self) -> int:
        """Resolved iteration count: explicit value or ceil(1/epsilon^2)."""
        if self.meb_iters is not None:
            return self.meb_iters
        return _ceil_snapped(1.0 / (self.epsilon * self.epsilon))


@dataclass(frozen=True)
class DerivedParams:
    """Quantities derived from Params for a concrete dataset size."""

    h: int  # tree height
    k: int  # top-k (presumed outlier) count
    s: int  # children sampled per internal node
    m: int  # inlier count, n - k


def _ceil_snapped(x: float) -> int:
    """ceil that forgives float crumbs.

    Products like (1+delta)*gamma*n land a few ulps past an exact
    integer (1.1 * 0.4 * 10000 gives 4400.000000000001) and a plain
    ceil then overshoots by one.  A value within 1e-12 relative of an
    integer counts as that integer.
    """
    r = round(x)
    if abs(x - r) <= 1e-12 * max(1.0, abs(x)):
        return int(r)
    return int(math.ceil(x))


def derive_params(p: Params, n: int) -> DerivedParams:
    """Derive (h, k, s, m) for a dataset of n points.

    h = ceil(2/epsilon) + 1, k = ceil((1+delta)*gamma*n),
    s = ceil((1+1/delta)*ln(h/mu)), m = n - k.
    """
    if n < 1:
        raise DegenerateDatasetError(f"need at least one point, got n={n}")
    h = _ceil_snapped(2.0 / p.epsilon) + 1
    k = _ceil_snapped((1.0 + p.delta) * p.gamma * n)
    if k >= n:
        raise DegenerateDatasetError(
            f"top-k count k={k} leaves no inliers out of n={n}; lower gamma or delta"
        )
    s = max(1, _ceil_snapped((1.0 + 1.0 / p.delta) * math.log(h / p.mu)))
    return DerivedParams(h=h, k=k, s=s, m=n - k)


@dataclass(frozen=True)
class Candidate:
    """One tree node's attached center with its provenance and score.

    path holds dataset row indices along the root-to-node path; a tree
    rooted at a virtual (non-dataset) point contributes no index for
    that root.  score is the total variance of the node's m nearest
    points.  inliers is filled lazily: tree growth leaves it None to
    avoid storing an m-sized set per node, and the winning candidate is
    re-materialized when a result is assembled.
    """

    center: np.ndarray
    path: tuple
    score: float
    inliers: Optional[np.ndarray] = None


@dataclass(frozen=True)
class RecognitionResult:
    """Final output: fitted ball, inlier indices, and bookkeeping."""

    ball: Ball
    inliers: np.ndarray
    candidates_evaluated: int
    score: float
