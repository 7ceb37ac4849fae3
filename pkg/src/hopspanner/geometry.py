"""Point sets and weighted geometric graphs."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

WEIGHT_RTOL = 1e-9


@dataclass(frozen=True)
class PointSet:
    coords: np.ndarray  # shape (n, dim), float64

    def __post_init__(self):
        c = np.asarray(self.coords, dtype=np.float64)
        if c.ndim != 2 or (c.shape[0] and c.shape[1] < 1):
            raise ValidationError("coordinates must form an (n, dim) array with dim >= 1")
        if not np.all(np.isfinite(c)):
            raise ValidationError("coordinates must be finite")
        object.__setattr__(self, "coords", np.ascontiguousarray(c))

    @property
    def n(self) -> int:
        return self.coords.shape[0]

    @property
    def dim(self) -> int:
        return self.coords.shape[1]

    def __len__(self) -> int:
        return self.coords.shape[0]

    def dist(self, u, v):
        d = self.coords[u] - self.coords[v]
        return np.sqrt((d * d).sum(axis=-1))

    def check_distinct(self) -> None:
        if self.n < 2:
            return
        order = np.lexsort(self.coords.T[::-1])
        s = self.coords[order]
        same = np.all(s[1:] == s[:-1], axis=1)
        if same.any():
            i = int(np.flatnonzero(same)[0])
            raise ValidationError(f"duplicate points {int(order[i])} and {int(order[i + 1])}")


@dataclass(frozen=True)
class GeometricGraph:
    """Undirected weighted graph on a point set; edges stored with u < v,
    sorted, without duplicates."""

    points: PointSet
    u: np.ndarray
    v: np.ndarray
    w: np.ndarray

    @classmethod
    def from_pairs(cls, points: PointSet, pairs, weights=None, validate: bool = True) -> "GeometricGraph":
        arr = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
        if arr.size and (arr.min() < 0 or arr.max() >= points.n):
            raise ValidationError("edge endpoint outside the point set")
        if arr.size and np.any(arr[:, 0] == arr[:, 1]):
            raise ValidationError("self-loop in edge list")
        swap = arr[:, 0] > arr[:, 1]
        arr[swap] = arr[swap][:, ::-1]
        wts = None if weights is None else np.asarray(weights, dtype=np.float64).reshape(-1)
        if arr.shape[0]:
            key = arr[:, 0] * points.n + arr[:, 1]
            key_order = np.argsort(key, kind="stable")
            uniq = np.r_[True, key[key_order][1:] != key[key_order][:-1]]
            sel = key_order[uniq]
            arr = arr[sel]
            if wts is not None:
                wts = wts[sel]
        true_w = points.dist(arr[:, 0], arr[:, 1]) if arr.shape[0] else np.zeros(0)
        if wts is None:
            wts = true_w
        elif validate:
            bad = np.abs(wts - true_w) > WEIGHT_RTOL * np.maximum(true_w, 1e-300)
            if bad.any():
                i = int(np.flatnonzero(bad)[0])
                raise ValidationError(
                    f"weight {wts[i]!r} of edge ({arr[i, 0]}, {arr[i, 1]}) differs from distance {true_w[i]!r}")
        return cls(points, arr[:, 0].copy(), arr[:, 1].copy(), wts)

    @property
    def m(self) -> int:
        return self.u.shape[0]

    def __len__(self) -> int:
        return self.u.shape[0]

    def pairs(self) -> np.ndarray:
        return np.stack([self.u, self.v], axis=1)

    def csr(self):
        """Symmetric CSR adjacency (ptr, idx, weight)."""
        n = self.points.n
        src = np.concatenate([self.u, self.v])
        dst = np.concatenate([self.v, self.u])
        wt = np.concatenate([self.w, self.w])
        order = np.lexsort((dst, src))
        ptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=ptr[1:])
        return ptr, np.ascontiguousarray(dst[order]), np.ascontiguousarray(wt[order])
