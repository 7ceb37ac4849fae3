"""Seeded instance generators for trees and point sets."""

from __future__ import annotations

import numpy as np

from .errors import DomainError
from .geometry import PointSet
from .steiner_tree import RootedSteinerTree

TREE_SHAPES = ("random", "path", "binary", "caterpillar")
POINT_DISTS = ("uniform", "clustered", "collinear")


def tree_parents(n: int, shape: str, rng: np.random.Generator) -> np.ndarray:
    if n < 0:
        raise DomainError("n must be non-negative")
    idx = np.arange(n, dtype=np.int64)
    if shape == "random":
        # random recursive tree: each vertex hangs below a uniformly chosen earlier one
        parent = np.floor(rng.random(n) * idx).astype(np.int64)
    elif shape == "path":
        parent = idx - 1
    elif shape == "binary":
        parent = (idx - 1) // 2
    elif shape == "caterpillar":
        spine = (n + 1) // 2
        parent = np.empty(n, dtype=np.int64)
        parent[:spine] = idx[:spine] - 1
        parent[spine:] = rng.integers(0, max(spine, 1), size=n - spine)
    else:
        raise DomainError(f"unknown tree shape {shape!r}")
    if n:
        parent[0] = -1
    return parent


def random_tree(n: int, required_frac: float, seed: int = 0, shape: str = "random") -> RootedSteinerTree:
    if not 0.0 <= required_frac <= 1.0:
        raise DomainError("required fraction must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    parent = tree_parents(n, shape, rng)
    required = rng.random(n) < required_frac
    return RootedSteinerTree(parent, required)


def random_points(n: int, d: int, dist: str = "uniform", seed: int = 0) -> PointSet:
    if n < 0 or d < 1:
        raise DomainError("need n >= 0 and d >= 1")
    rng = np.random.default_rng(seed)
    if dist == "uniform":
        c = rng.random((n, d))
    elif dist == "clustered":
        centers = rng.random((max(1, int(np.sqrt(n) / 2) or 1), d))
        which = rng.integers(0, centers.shape[0], size=n)
        c = centers[which] + rng.normal(scale=0.02, size=(n, d))
    elif dist == "collinear":
        c = np.zeros((n, d))
        c[:, 0] = rng.random(n)
    else:
        raise DomainError(f"unknown distribution {dist!r}")
    # exact duplicates are astronomically unlikely but would be invalid input
    _, first = np.unique(c, axis=0, return_index=True)
    if first.shape[0] != n:
        c = c[np.sort(first)]
    return PointSet(c)
