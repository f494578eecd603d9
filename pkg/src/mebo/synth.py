"""Synthetic datasets with ground-truth labels.

Geometry defaults, used by every generator: inlier clusters are
spherical normals with standard deviation 1, scattered-cluster means
sit at distance >= 10 from the inlier mean, and uniform noise fills a
box of side 40 centered on the inlier region.  Counts are exact.

Labels: 0 marks an outlier, j >= 1 marks inlier class j.
"""

from __future__ import annotations

import numpy as np

from .core import Dataset, InvalidParamsError

__all__ = ["gen_toy_2d", "gen_highdim", "gen_multiclass"]

_BOX_HALF = 20.0


def _group_sizes(total: int, parts: int) -> np.ndarray:
    """Split total into parts whose sizes differ by at most 1, exactly."""
    bounds = np.round(np.linspace(0.0, total, parts + 1)).astype(np.int64)
    return np.diff(bounds)


def _unit(rng: np.random.Generator, d: int) -> np.ndarray:
    v = rng.standard_normal(d)
    return v / np.linalg.norm(v)


def gen_toy_2d(seed: int):
    """Plane instance of 10000 points at outlier ratio 0.4.

    6000 inliers from one unit normal at the origin; 4000 outliers in
    four groups of 800, 1200, 800, and 1200 points, the first three
    normal clusters placed well away from the origin, the last uniform
    over the box.  Returns (Dataset, labels).
    """
    rng = np.random.default_rng(seed)
    inl = rng.standard_normal((6000, 2))
    groups = []
    for size, dist in zip((800, 1200, 800), (12.0, 15.0, 18.0)):
        mean = dist * _unit(rng, 2)
        groups.append(mean + rng.standard_normal((size, 2)))
    groups.append(rng.uniform(-_BOX_HALF, _BOX_HALF, size=(1200, 2)))
    pts = np.vstack([inl] + groups)
    labels = np.zeros(10000, dtype=np.int64)
    labels[:6000] = 1
    return Dataset(pts), labels


def gen_highdim(n: int, d: int, gamma: float, seed: int):
    """(1-gamma)n inliers from one spherical normal, gamma*n outliers in
    four groups (three normal clusters away from the origin, one uniform
    over the box).  Returns (Dataset, labels)."""
    if n < 1 or d < 1:
        raise InvalidParamsError(f"n and d must be positive, got n={n}, d={d}")
    if not (0.0 < gamma < 1.0):
        raise InvalidParamsError(f"gamma must be in (0, 1), got {gamma}")
    rng = np.random.default_rng(seed)
    n_out = int(round(gamma * n))
    n_in = n - n_out
    if n_in < 1 or n_out < 1:
        raise InvalidParamsError(f"degenerate split: {n_in} inliers, {n_out} outliers")
    inl = rng.standard_normal((n_in, d))
    sizes = _group_sizes(n_out, 4)
    groups = []
    for size, dist in zip(sizes[:3], (12.0, 15.0, 18.0)):
        mean = dist * _unit(rng, d)
        groups.append(mean + rng.standard_normal((int(size), d)))
    groups.append(rng.uniform(-_BOX_HALF, _BOX_HALF, size=(int(sizes[3]), d)))
    pts = np.vstack([inl] + groups)
    labels = np.zeros(n, dtype=np.int64)
    labels[:n_in] = 1
    return Dataset(pts), labels


def _class_mean(j: int, d: int) -> np.ndarray:
    # axis-aligned placement: pairwise distances >= 12 by construction,
    # independent of d and of the class count
    mean = np.zeros(d)
    sign = -1.0 if j % 2 else 1.0
    mean[j % d] = sign * 12.0 * (1 + j // d)
    return mean


def gen_multiclass(n: int, d: int, fractions, gamma: float, seed: int):
    """One spherical normal cluster per class plus uniform outliers.

    fractions and gamma must sum to 1; class sizes are exact.  Class
    means are axis aligned at pairwise distance >= 12 (10x the cluster
    standard deviation).  Returns (Dataset, labels) with labels in
    {0 (outlier), 1..C}.
    """
    fr = tuple(float(f) for f in fractions)
    if n < 1 or d < 1:
        raise InvalidParamsError(f"n and d must be positive, got n={n}, d={d}")
    if len(fr) < 1 or any(not (0.0 < f < 1.0) for f in fr):
        raise InvalidParamsError(f"fractions must lie in (0, 1), got {fr}")
    if not (0.0 <= gamma < 1.0):
        raise InvalidParamsError(f"gamma must be in [0, 1), got {gamma}")
    if abs(sum(fr) + gamma - 1.0) > 1e-9:
        raise InvalidParamsError(
            f"fractions plus gamma must equal 1, got {sum(fr) + gamma}")
    rng = np.random.default_rng(seed)
    bounds = np.round(np.cumsum((0.0,) + fr) * n).astype(np.int64)
    sizes = np.diff(bounds)
    n_out = n - int(sizes.sum())
    blocks = []
    labels = []
    for j, size in enumerate(sizes):
        blocks.append(_class_mean(j, d) + rng.standard_normal((int(size), d)))
        labels.append(np.full(int(size), j + 1, dtype=np.int64))
    blocks.append(rng.uniform(-_BOX_HALF, _BOX_HALF, size=(n_out, d)))
    labels.append(np.zeros(n_out, dtype=np.int64))
    return Dataset(np.vstack(blocks)), np.concatenate(labels)
