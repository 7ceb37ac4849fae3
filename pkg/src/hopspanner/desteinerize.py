"""Removing Steiner points from spanners of points on a line.

Every vertex is projected onto the x-axis and snapped to its nearest required
neighbours on either side; each projected edge (u, v) is replaced by the up to
four edges between {u_L, u_R} and {v_L, v_R}.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ValidationError
from .geometry import GeometricGraph, PointSet

NULL = -1
SLACK = 1e-9


@dataclass(frozen=True)
class AxisInstance:
    required: np.ndarray  # sorted x-coordinates of the required points
    graph: GeometricGraph  # over all points, Steiner points anywhere
    required_ids: np.ndarray  # point id of required[i]

    @classmethod
    def from_graph(cls, graph: GeometricGraph, required_ids) -> "AxisInstance":
        ids = np.asarray(required_ids, dtype=np.int64).reshape(-1)
        pts = graph.points
        if ids.size == 0:
            raise DomainError("no required points")
        if ids.min() < 0 or ids.max() >= pts.n:
            raise ValidationError("required point id outside the point set")
        if np.unique(ids).size != ids.size:
            raise ValidationError("required point listed twice")
        c = pts.coords[ids]
        if c.shape[1] > 1 and np.any(c[:, 1:] != 0):
            bad = int(ids[np.flatnonzero(np.any(c[:, 1:] != 0, axis=1))[0]])
            raise ValidationError(f"required point {bad} is not on the x-axis")
        order = np.argsort(c[:, 0], kind="stable")
        x = c[order, 0]
        if np.any(x[1:] == x[:-1]):
            raise ValidationError("two required points share an x-coordinate")
        return cls(x, graph, ids[order])

    @property
    def required_index(self) -> dict[int, int]:
        return {int(p): i for i, p in enumerate(self.required_ids.tolist())}

    @property
    def n(self) -> int:
        return self.required.shape[0]

    def required_points(self) -> PointSet:
        """Required points in ascending id order; output graphs index into this."""
        return PointSet(self.graph.points.coords[np.sort(self.required_ids)])


def project_to_axis(inst: AxisInstance) -> GeometricGraph:
    """Same vertices and edges with every point replaced by its x-coordinate."""
    g = inst.graph
    x = PointSet(g.points.coords[:, :1])
    return GeometricGraph.from_pairs(x, g.pairs())


def neighbor_maps(inst: AxisInstance) -> tuple[np.ndarray, np.ndarray]:
    """Point ids of the nearest required point at-or-left and at-or-right of
    every vertex's projection, NULL (-1) where none exists."""
    x = inst.graph.points.coords[:, 0]
    X = inst.required
    left = np.searchsorted(X, x, side="right") - 1
    right = np.searchsorted(X, x, side="left")
    vL = np.where(left >= 0, inst.required_ids[np.maximum(left, 0)], NULL)
    vR = np.where(right < X.shape[0], inst.required_ids[np.minimum(right, X.shape[0] - 1)], NULL)
    return vL, vR


def desteinerize(inst: AxisInstance) -> GeometricGraph:
    """Steiner-free graph over :meth:`AxisInstance.required_points` with at
    most four edges per input edge."""
    vL, vR = neighbor_maps(inst)
    g = inst.graph
    pts = inst.required_points()
    local = np.full(g.points.n, NULL, dtype=np.int64)
    local[np.sort(inst.required_ids)] = np.arange(inst.n)
    cand = np.concatenate([np.stack([a[g.u], b[g.v]], axis=1)
                           for a in (vL, vR) for b in (vL, vR)]) if g.m else np.zeros((0, 2), np.int64)
    keep = (cand[:, 0] != NULL) & (cand[:, 1] != NULL) & (cand[:, 0] != cand[:, 1])
    return GeometricGraph.from_pairs(pts, local[cand[keep]])


def hop_profile(graph: GeometricGraph, sources, max_hops: int) -> np.ndarray:
    """D[h, i, v]: least weight from sources[i] to v using at most h edges."""
    n = graph.points.n
    src = np.asarray(sources, dtype=np.int64)
    out = np.full((max_hops + 1, src.shape[0], n), np.inf)
    out[0, np.arange(src.shape[0]), src] = 0.0
    a = np.concatenate([graph.u, graph.v])
    b = np.concatenate([graph.v, graph.u])
    w = np.concatenate([graph.w, graph.w])
    for h in range(1, max_hops + 1):
        cur = out[h - 1].copy()
        if a.size:
            np.minimum.at(cur.T, b, (out[h - 1][:, a] + w).T)
        out[h] = cur
    return out


@dataclass(frozen=True)
class TransferReport:
    pairs_checked: int
    max_hops: int
    hop_violations: int  # (pair, h) where the output is worse than the projection
    weight_violations: int  # pairs beyond the additive weight bound
    max_excess: float
    stretch_before: float  # over required pairs, in the original graph
    stretch_after: float
    m_in: int
    m_out: int
    worst: tuple[int, int, int] | None  # (u, v, h) of the first hop violation

    @property
    def hop_preserved(self) -> bool:
        return self.hop_violations == 0

    @property
    def passed(self) -> bool:
        return (self.hop_violations == 0 and self.weight_violations == 0
                and self.m_out <= 4 * self.m_in and self.stretch_after <= self.stretch_before * (1 + SLACK))


def transfer_audit(inst: AxisInstance, samples: int | None = None, seed: int = 0,
                   output: GeometricGraph | None = None) -> TransferReport:
    """Compare hop-limited distances of sampled required pairs, at every hop
    budget, between the projected graph and its Steiner-free replacement."""
    out = desteinerize(inst) if output is None else output
    proj = project_to_axis(inst)
    ids = np.sort(inst.required_ids)
    R = ids.shape[0]
    iu, iv = np.triu_indices(R, 1)
    if samples is not None and samples < iu.shape[0]:
        pick = np.sort(np.random.default_rng(seed).choice(iu.shape[0], size=samples, replace=False))
        iu, iv = iu[pick], iv[pick]
    H = max(inst.graph.points.n - 1, 1)
    srcs = np.unique(iu)
    row = np.searchsorted(srcs, iu)
    before = hop_profile(proj, ids[srcs], H)[:, row, ids[iv]]
    after = hop_profile(out, srcs, H)[:, row, iv]
    orig = hop_profile(inst.graph, ids[srcs], H)[-1, row, ids[iv]]
    tol = SLACK * np.maximum(np.where(np.isfinite(before), before, 0), 1.0)
    worse = after > before + tol
    hv = int(np.count_nonzero(worse))
    worst = None
    if hv:
        h, j = np.argwhere(worse)[0]
        worst = (int(ids[iu[j]]), int(ids[iv[j]]), int(h))
    # w(P') <= w(P~) + |u' - u| + |v' - v|, with u' = u, v' = v for required endpoints
    excess = np.where(np.isfinite(after[-1]), after[-1] - before[-1], np.where(np.isfinite(before[-1]), np.inf, 0))
    wv = int(np.count_nonzero(excess > tol[-1]))
    dist = inst.graph.points.dist(ids[iu], ids[iv])
    st_before = float((orig / dist).max()) if dist.size else 1.0
    st_after = float((after[-1] / dist).max()) if dist.size else 1.0
    return TransferReport(int(iu.shape[0]), H, hv, wv, float(excess.max()) if excess.size else 0.0,
                          st_before, st_after, inst.graph.m, out.m, worst)


def random_axis_instance(n_required: int, n_steiner: int, extra_edges: int, seed: int = 0,
                         dim: int = 2) -> AxisInstance:
    """Required points on the axis plus Steiner points near it, joined by the
    path through all points in x-order plus random shortcut edges."""
    rng = np.random.default_rng(seed)
    if n_required < 1:
        raise DomainError("no required points")
    req = np.zeros((n_required, dim))
    req[:, 0] = rng.choice(10 * (n_required + 1), size=n_required, replace=False) / 10.0
    st = rng.normal(size=(n_steiner, dim))
    st[:, 0] = rng.uniform(-1, n_required + 1, size=n_steiner)
    coords = np.vstack([req, st])
    pts = PointSet(coords)
    n = pts.n
    order = np.argsort(coords[:, 0], kind="stable")
    pairs = [np.stack([order[:-1], order[1:]], axis=1)]
    if n > 1 and extra_edges:
        a = rng.integers(0, n, size=extra_edges)
        b = rng.integers(0, n - 1, size=extra_edges)
        b = b + (b >= a)
        pairs.append(np.stack([a, b], axis=1))
    g = GeometricGraph.from_pairs(pts, np.concatenate(pairs))
    return AxisInstance.from_graph(g, np.arange(n_required))
