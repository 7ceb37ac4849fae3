"""Euclidean layer: fair split tree, well-separated pairs, dumbbell-tree
covers, and the (1+eps)-spanner obtained by shortcutting every cover tree.

A dumbbell tree is a rooted tree whose leaves are the points; every internal
vertex carries the lowest-indexed point below it as representative.  Walking
between two leaves from representative to representative costs the sum of
the Euclidean jumps, and a cover guarantees that every pair has a tree where
this walk is at most (1+eps) times the distance.

Two cover strategies are provided:

``"contract"``
    WSPD dumbbells grouped by length class, greedily coloured so that
    same-level dumbbells in a group keep ``pack_factor * length`` apart, then
    assembled bottom-up per colour.  Faithful to the fixed recipe, but at desk
    scale the colouring needs hundreds of groups (see ``contract_lower_bound``).

``"greedy"`` (default)
    Grows increasing point trees (each point hangs below a lower-indexed one,
    so representatives coincide with the tree's own points) and certifies
    every pair exactly while building.  Coverage is exhaustive by
    construction, and the tree count is usually an order of magnitude smaller.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from . import _kernels
from .errors import CapacityError, DomainError, ValidationError
from .geometry import GeometricGraph, PointSet
from .steiner_tree import LcaIndex, RootedSteinerTree, tree_path
from .tree_spanner import edge_budget, spanner_for_tree

__all__ = [
    "PointSet", "GeometricGraph", "SplitTree", "WspdPair", "Wspd", "DumbbellTree", "TreeCover",
    "CoverConfig", "CoverAudit", "build_split_tree", "build_wspd", "build_dumbbell_cover",
    "contract_lower_bound", "rep_walk_weight", "rep_walk_weights", "audit_cover", "euclidean_spanner",
    "distance_matrix",
]

AUDIT_SLACK = 1e-9
TREE_SIZE_FACTOR = 4  # every cover tree has at most 4n vertices


# -- split tree ------------------------------------------------------------

@dataclass(frozen=True)
class SplitTree:
    """Fair split tree.  Node ``i`` owns ``perm[start[i]:end[i]]`` and the
    bounding box ``[lo[i], hi[i]]`` of those points; leaves are singletons.
    Node 0 is the root and children are created after their parent."""

    points: PointSet
    perm: np.ndarray
    start: np.ndarray
    end: np.ndarray
    lo: np.ndarray
    hi: np.ndarray
    left: np.ndarray
    right: np.ndarray

    @property
    def n_nodes(self) -> int:
        return self.start.shape[0]

    def members(self, node: int) -> np.ndarray:
        return self.perm[self.start[node]:self.end[node]]

    def size(self, node):
        return self.end[node] - self.start[node]

    def centers(self) -> np.ndarray:
        return (self.lo + self.hi) / 2

    def radii(self) -> np.ndarray:
        """Radius of the ball around each box: half the box diagonal."""
        ext = self.hi - self.lo
        return np.sqrt((ext * ext).sum(axis=1)) / 2

    def is_leaf(self, node: int) -> bool:
        return self.left[node] < 0


def build_split_tree(points: PointSet) -> SplitTree:
    if not isinstance(points, PointSet):
        points = PointSet(np.asarray(points, dtype=np.float64))
    n = points.n
    if n < 1:
        raise DomainError("a split tree needs at least one point")
    points.check_distinct()
    coords = points.coords
    perm = np.arange(n, dtype=np.int64)
    start, end, lo, hi, left, right = [0], [n], [coords.min(axis=0)], [coords.max(axis=0)], [-1], [-1]
    stack = [0]
    while stack:
        v = stack.pop()
        s, e = start[v], end[v]
        if e - s < 2:
            continue
        ext = hi[v] - lo[v]
        axis = int(np.argmax(ext))
        mid = (lo[v][axis] + hi[v][axis]) / 2
        idx = perm[s:e]
        x = coords[idx, axis]
        mask = x <= mid
        if mask.all():  # mid rounded onto the upper end of the extent
            mask = x < mid
        perm[s:e] = np.concatenate([idx[mask], idx[~mask]])
        m = s + int(mask.sum())
        kids = []
        for a, b in ((s, m), (m, e)):
            pts = coords[perm[a:b]]
            start.append(a)
            end.append(b)
            lo.append(pts.min(axis=0))
            hi.append(pts.max(axis=0))
            left.append(-1)
            right.append(-1)
            kids.append(len(start) - 1)
        left[v], right[v] = kids
        stack.extend(reversed(kids))
    as64 = lambda a: np.asarray(a, dtype=np.int64)  # noqa: E731
    return SplitTree(points, perm, as64(start), as64(end), np.vstack(lo), np.vstack(hi), as64(left), as64(right))


# -- well-separated pair decomposition ---------------------------------------

@dataclass(frozen=True)
class WspdPair:
    left: int
    right: int
    length: float


@dataclass(frozen=True)
class Wspd(Sequence):
    """Array-backed sequence of :class:`WspdPair`."""

    split: SplitTree
    s: float
    left: np.ndarray
    right: np.ndarray
    length: np.ndarray

    def __len__(self) -> int:
        return self.left.shape[0]

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [self[j] for j in range(*i.indices(len(self)))]
        return WspdPair(int(self.left[i]), int(self.right[i]), float(self.length[i]))

    def covered_pairs(self) -> int:
        return int((self.split.size(self.left) * self.split.size(self.right)).sum())

    def separated(self, s: float | None = None) -> np.ndarray:
        """Per pair: distance between the bounding balls >= s * larger radius."""
        s = self.s if s is None else s
        c, r = self.split.centers(), self.split.radii()
        a, b = self.left, self.right
        gap = np.sqrt(((c[a] - c[b]) ** 2).sum(axis=1)) - r[a] - r[b]
        return gap >= s * np.maximum(r[a], r[b])


def build_wspd(split: SplitTree, s: float) -> Wspd:
    """Pairs (A, B) of split-tree nodes covering every point pair exactly
    once.  Starts from the two children of every internal node and keeps
    refining the node with the larger ball until the pair is s-separated."""
    if not s > 0:
        raise DomainError("separation s must be positive")
    c, r = split.centers(), split.radii()
    internal = np.flatnonzero(split.left >= 0)
    a, b = split.left[internal], split.right[internal]
    out_a, out_b = [], []
    while a.size:
        gap = np.sqrt(((c[a] - c[b]) ** 2).sum(axis=1)) - r[a] - r[b]
        ok = gap >= s * np.maximum(r[a], r[b])
        out_a.append(a[ok])
        out_b.append(b[ok])
        a, b = a[~ok], b[~ok]
        flip = r[a] < r[b]
        big, other = np.where(flip, b, a), np.where(flip, a, b)
        a = np.concatenate([split.left[big], split.right[big]])
        b = np.concatenate([other, other])
    A = np.concatenate(out_a) if out_a else np.zeros(0, np.int64)
    B = np.concatenate(out_b) if out_b else np.zeros(0, np.int64)
    order = np.lexsort((B, A))
    A, B = A[order], B[order]
    length = np.sqrt(((c[A] - c[B]) ** 2).sum(axis=1))
    return Wspd(split, float(s), A, B, length)


# -- dumbbell trees --------------------------------------------------------

@dataclass(frozen=True)
class DumbbellTree:
    """``tree`` has the points as REQUIRED leaves and STEINER internal
    vertices; ``leaf_point[v]`` is the point of leaf ``v`` (-1 on internal
    vertices); ``representative[v]`` is the lowest point index below ``v``."""

    points: PointSet
    tree: RootedSteinerTree
    leaf_point: np.ndarray
    representative: np.ndarray

    @classmethod
    def from_parent(cls, points: PointSet, parent, leaf_point) -> "DumbbellTree":
        leaf_point = np.asarray(leaf_point, dtype=np.int64)
        tree = RootedSteinerTree(parent, leaf_point >= 0)
        return cls(points, tree, leaf_point, lowest_leaf_representatives(tree, leaf_point))

    @property
    def point_leaf(self) -> np.ndarray:
        out = np.full(self.points.n, -1, dtype=np.int64)
        leaves = np.flatnonzero(self.leaf_point >= 0)
        out[self.leaf_point[leaves]] = leaves
        return out

    def __len__(self) -> int:
        return len(self.tree)

    def jump_lengths(self) -> np.ndarray:
        """Per vertex: distance between its representative and its parent's."""
        par = self.tree.parent
        nonroot = par >= 0
        out = np.zeros(len(self.tree))
        out[nonroot] = self.points.dist(self.representative[nonroot], self.representative[par[nonroot]])
        return out


def lowest_leaf_representatives(tree: RootedSteinerTree, leaf_point: np.ndarray) -> np.ndarray:
    big = np.iinfo(np.int64).max
    rep = np.where(leaf_point >= 0, leaf_point, big).astype(np.int64)
    par = tree.parent.tolist()
    rl = rep.tolist()
    for v in tree.preorder()[::-1].tolist():
        p = par[v]
        if p >= 0 and rl[v] < rl[p]:
            rl[p] = rl[v]
    return np.array(rl, dtype=np.int64)


def rep_walk_weight(tree: DumbbellTree, u: int, v: int) -> float:
    """Sum of consecutive representative distances along the tree path between
    the leaves of points ``u`` and ``v``."""
    n = tree.points.n
    for x in (u, v):
        if not (0 <= int(x) < n):
            raise ValidationError(f"unknown point {x}")
    pl = tree.point_leaf
    path = tree_path(tree.tree, int(pl[u]), int(pl[v]))
    reps = tree.representative[path]
    if len(reps) < 2:
        return 0.0
    return float(tree.points.dist(reps[:-1], reps[1:]).sum())


class _WalkIndex:
    """Vectorised representative walks: weighted depth plus LCA."""

    def __init__(self, tree: DumbbellTree):
        self.leaf = tree.point_leaf
        self.lca = LcaIndex(tree.tree)
        jump = tree.jump_lengths().tolist()
        par = tree.tree.parent.tolist()
        wd = [0.0] * len(jump)
        for v in tree.tree.preorder()[1:].tolist():
            wd[v] = wd[par[v]] + jump[v]
        self.wdepth = np.array(wd)

    def __call__(self, us, vs) -> np.ndarray:
        a, b = self.leaf[us], self.leaf[vs]
        return self.wdepth[a] + self.wdepth[b] - 2 * self.wdepth[self.lca.lca(a, b)]


def rep_walk_weights(tree: DumbbellTree, us, vs) -> np.ndarray:
    """:func:`rep_walk_weight` for arrays of point pairs."""
    return _WalkIndex(tree)(np.asarray(us, dtype=np.int64), np.asarray(vs, dtype=np.int64))


# -- covers ------------------------------------------------------------------

@dataclass(frozen=True)
class CoverConfig:
    strategy: str = "greedy"
    separation: float | None = None  # None: max(16, 8/eps + 8)
    length_group: int = 3
    pack_factor: float = 4.0
    max_trees: int | None = 64  # None: unlimited
    candidates: int = 32  # greedy: nearest lower-indexed points tried as parent
    extra_candidates: int = 8  # greedy: nearest uncovered partners also tried
    greedy_max_n: int = 4096  # greedy keeps n x n matrices

    def separation_for(self, eps: float) -> float:
        return float(self.separation) if self.separation is not None else max(16.0, 8.0 / eps + 8.0)

    def validate(self) -> None:
        if self.strategy not in ("greedy", "contract"):
            raise DomainError(f"unknown cover strategy {self.strategy!r}")
        if self.length_group < 1:
            raise DomainError("length_group must be >= 1")
        if not self.pack_factor >= 0:
            raise DomainError("pack_factor must be >= 0")
        if self.max_trees is not None and self.max_trees < 1:
            raise DomainError("max_trees must be >= 1")
        if self.candidates < 1 or self.extra_candidates < 1:
            raise DomainError("candidate counts must be >= 1")
        if self.separation is not None and not self.separation > 0:
            raise DomainError("separation must be positive")


@dataclass(frozen=True)
class TreeCover:
    trees: tuple[DumbbellTree, ...]
    eps: float
    group_count: int
    config: CoverConfig
    certificate: np.ndarray | None = None  # (n, n): index of a tree serving the pair, -1 on the diagonal
    stats: dict = field(default_factory=dict)


def distance_matrix(coords: np.ndarray, block: int = 512) -> np.ndarray:
    """All pairwise distances, computed with the same arithmetic as
    :meth:`PointSet.dist` so the entries match edge weights bit for bit."""
    n = coords.shape[0]
    out = np.empty((n, n))
    for i in range(0, n, block):
        d = coords[i:i + block, None, :] - coords[None, :, :]
        out[i:i + block] = np.sqrt((d * d).sum(axis=-1))
    return out


def _single_leaf(points: PointSet) -> DumbbellTree:
    return DumbbellTree.from_parent(points, np.array([-1]), np.array([0]))


def build_dumbbell_cover(points: PointSet, eps: float, config: CoverConfig | None = None) -> TreeCover:
    """Family of dumbbell trees such that every point pair has a tree whose
    representative walk is at most (1 + eps) times the pair's distance."""
    cfg = config or CoverConfig()
    cfg.validate()
    if not eps > 0:
        raise DomainError("eps must be positive")
    if not isinstance(points, PointSet):
        points = PointSet(np.asarray(points, dtype=np.float64))
    if points.n < 1:
        raise DomainError("a cover needs at least one point")
    points.check_distinct()
    if points.n == 1:
        return TreeCover((_single_leaf(points),), float(eps), 1, cfg,
                         np.full((1, 1), -1, dtype=np.int32), {"strategy": cfg.strategy})
    if cfg.strategy == "greedy":
        return _greedy_cover(points, float(eps), cfg)
    return _contract_cover(points, float(eps), cfg)


def _nearest_lower(D: np.ndarray, K: int) -> np.ndarray:
    """Row p: the K nearest points with index < p (ties by index), -1 padded."""
    n = D.shape[0]
    masked = np.where(np.tri(n, k=-1, dtype=bool), D, np.inf)
    K = min(K, max(n - 1, 1))
    order = np.argsort(masked, axis=1, kind="stable")[:, :K]
    valid = np.arange(K)[None, :] < np.arange(n)[:, None]
    return np.ascontiguousarray(np.where(valid, order, -1), dtype=np.int64)


def _increasing_tree(points: PointSet, par: np.ndarray) -> DumbbellTree:
    """Dumbbell tree of an increasing point tree: vertex p < n is the leaf of
    point p; every point with children gets an internal vertex holding its
    leaf and its children's subtrees, so its representative is the point."""
    n = par.shape[0]
    has_child = np.bincount(par[1:], minlength=n) > 0
    node = np.where(has_child, n + np.cumsum(has_child) - 1, np.arange(n))
    m = n + int(has_child.sum())
    parent = np.full(m, -1, dtype=np.int64)
    pts = np.arange(1, n)
    parent[:n] = np.where(has_child, node, -1)  # leaf below its own point's vertex
    hang = pts[~has_child[pts]]
    parent[hang] = node[par[hang]]
    up = pts[has_child[pts]]
    parent[node[up]] = node[par[up]]
    leaf_point = np.r_[np.arange(n), np.full(m - n, -1)]
    rep = np.r_[np.arange(n), np.flatnonzero(has_child)]
    tree = RootedSteinerTree(parent, leaf_point >= 0)
    return DumbbellTree(points, tree, leaf_point.astype(np.int64), rep.astype(np.int64))


def _greedy_cover(points: PointSet, eps: float, cfg: CoverConfig) -> TreeCover:
    n = points.n
    if n > cfg.greedy_max_n:
        raise CapacityError(f"greedy cover is limited to {cfg.greedy_max_n} points (got {n})",
                            {"n": n, "greedy_max_n": cfg.greedy_max_n})
    D = distance_matrix(points.coords)
    near = _nearest_lower(D, cfg.candidates)
    cap = -1 if cfg.max_trees is None else int(cfg.max_trees)
    parents, cert, t, remaining = _kernels.greedy_cover(D, near, eps, int(cfg.extra_candidates), cap)
    lower = np.tril(np.ones((n, n), dtype=bool), -1)
    hist = np.bincount(cert[lower & (cert >= 0)], minlength=t).tolist()
    if remaining:
        raise CapacityError(
            f"greedy cover needs more than {cfg.max_trees} trees ({remaining} pairs uncovered)",
            {"strategy": "greedy", "max_trees": cfg.max_trees, "uncovered_pairs": int(remaining),
             "histogram": {i: c for i, c in enumerate(hist)}})
    cert = np.where(lower, cert, cert.T)
    np.fill_diagonal(cert, -1)
    trees = tuple(_increasing_tree(points, parents[i]) for i in range(t))
    stats = {"strategy": "greedy", "candidates": cfg.candidates, "extra_candidates": cfg.extra_candidates,
             "pairs_per_tree": hist}
    return TreeCover(trees, eps, t, cfg, cert, stats)


# contract strategy -------------------------------------------------------------

def _dumbbell_levels(w: Wspd) -> np.ndarray:
    return np.floor(np.log2(w.length)).astype(np.int64)


def contract_lower_bound(points: PointSet, eps: float, config: CoverConfig | None = None) -> dict:
    """Lower bound on the groups the contract colouring needs: dumbbells of one
    level whose heads share a point conflict pairwise, so each class needs at
    least the largest such clique.  Returns the per-class bound and total."""
    cfg = config or CoverConfig(strategy="contract")
    split = build_split_tree(points)
    w = build_wspd(split, cfg.separation_for(eps))
    return _clique_bound(split, w, cfg)


def _clique_bound(split: SplitTree, w: Wspd, cfg: CoverConfig) -> dict:
    n = split.points.n
    level = _dumbbell_levels(w)
    by_class: dict[int, int] = {}
    for L in np.unique(level).tolist():
        sel = level == L
        diff = np.zeros(n + 1, dtype=np.int64)
        for heads in (w.left[sel], w.right[sel]):
            np.add.at(diff, split.start[heads], 1)
            np.add.at(diff, split.end[heads], -1)
        c = int(L % cfg.length_group)
        by_class[c] = max(by_class.get(c, 0), int(np.cumsum(diff)[:n].max()))
    return {"per_class": dict(sorted(by_class.items())), "total": int(sum(by_class.values()))}


class _Group:
    """One colour of one length class, assembled incrementally."""

    def __init__(self, n: int, split: SplitTree):
        self.split = split
        self.owner = np.arange(n, dtype=np.int64)  # current root vertex per point
        self.size = [1] * n
        self.parent = [-1] * n
        self.level = None
        self.boxes_lo = []  # head boxes of same-level members
        self.boxes_hi = []
        self.lengths = []

    def _box_gap(self, lo, hi, olo, ohi):
        gap = np.maximum(0.0, np.maximum(olo - hi, lo - ohi))
        return np.sqrt((gap * gap).sum(axis=-1))

    def accepts(self, heads, length, level, pack) -> bool:
        if self.level == level and self.lengths:
            olo, ohi = np.asarray(self.boxes_lo), np.asarray(self.boxes_hi)  # (k, 2, dim)
            lens = np.asarray(self.lengths)
            reach = pack * np.maximum(lens, length)
            for h in heads:
                lo, hi = self.split.lo[h], self.split.hi[h]
                d = self._box_gap(lo, hi, olo, ohi).min(axis=1)
                if np.any(d <= reach):
                    return False
        for h in heads:  # every current root touching a head must lie inside it
            owners, counts = np.unique(self.owner[self.split.members(h)], return_counts=True)
            if any(c != self.size[o] for o, c in zip(owners.tolist(), counts.tolist())):
                return False
        return True

    def _new_vertex(self, size) -> int:
        self.parent.append(-1)
        self.size.append(size)
        return len(self.parent) - 1

    def add(self, heads, length, level) -> None:
        tops = []
        for h in heads:
            pts = self.split.members(h)
            roots = np.unique(self.owner[pts]).tolist()
            if len(roots) == 1:
                tops.append(roots[0])
            else:
                v = self._new_vertex(len(pts))
                for r in roots:
                    self.parent[r] = v
                tops.append(v)
        top = self._new_vertex(sum(self.size[t] for t in tops))
        for t in tops:
            self.parent[t] = top
        for h in heads:
            self.owner[self.split.members(h)] = top
        if self.level != level:
            self.level, self.boxes_lo, self.boxes_hi, self.lengths = level, [], [], []
        self.boxes_lo.append(self.split.lo[list(heads)])
        self.boxes_hi.append(self.split.hi[list(heads)])
        self.lengths.append(length)

    def finish(self, points: PointSet) -> DumbbellTree:
        roots = np.unique(self.owner).tolist()
        if len(roots) > 1:
            g = self._new_vertex(points.n)
            for r in roots:
                self.parent[r] = g
        n = points.n
        m = len(self.parent)
        leaf_point = np.r_[np.arange(n), np.full(m - n, -1)]
        return DumbbellTree.from_parent(points, np.array(self.parent, dtype=np.int64), leaf_point)


def _contract_cover(points: PointSet, eps: float, cfg: CoverConfig) -> TreeCover:
    n = points.n
    split = build_split_tree(points)
    s = cfg.separation_for(eps)
    w = build_wspd(split, s)
    bound = _clique_bound(split, w, cfg)
    base = {"strategy": "contract", "separation": s, "length_group": cfg.length_group,
            "pack_factor": cfg.pack_factor, "dumbbells": len(w), "clique_bound": bound}
    if cfg.max_trees is not None and bound["total"] > cfg.max_trees:
        raise CapacityError(
            f"contract cover needs at least {bound['total']} groups (max_trees={cfg.max_trees})",
            {**base, "histogram": bound["per_class"]})
    level = _dumbbell_levels(w)
    cls = level % cfg.length_group
    order = np.lexsort((w.right, w.left, w.length, level))
    groups: list[tuple[int, _Group]] = []
    per_class: dict[int, list[_Group]] = {}
    member = np.empty(len(w), dtype=np.int64)
    for i in order.tolist():
        c = int(cls[i])
        heads = (int(w.left[i]), int(w.right[i]))
        length, lev = float(w.length[i]), int(level[i])
        pool = per_class.setdefault(c, [])
        for g in pool:
            if g.accepts(heads, length, lev, cfg.pack_factor):
                break
        else:
            if cfg.max_trees is not None and len(groups) >= cfg.max_trees:
                hist = {k: len(v) for k, v in sorted(per_class.items())}
                raise CapacityError(
                    f"contract cover exceeds max_trees={cfg.max_trees}",
                    {**base, "histogram": hist})
            g = _Group(n, split)
            pool.append(g)
            groups.append((c, g))
        g.add(heads, length, lev)
        member[i] = next(j for j, (_, h) in enumerate(groups) if h is g)
    trees = tuple(g.finish(points) for _, g in groups)
    cert = np.full((n, n), -1, dtype=np.int32)
    for i in range(len(w)):
        a, b = split.members(w.left[i]), split.members(w.right[i])
        cert[np.ix_(a, b)] = member[i]
        cert[np.ix_(b, a)] = member[i]
    hist = {}
    for c, _ in groups:
        hist[c] = hist.get(c, 0) + 1
    stats = {**base, "histogram": dict(sorted(hist.items()))}
    return TreeCover(trees, eps, len(trees), cfg, cert, stats)


# -- audit -----------------------------------------------------------------

@dataclass(frozen=True)
class CoverAudit:
    leaves_biject: bool  # property 1
    representatives_below: bool  # property 2
    pairs_checked: int
    uncovered_pair: tuple[int, int] | None  # property 3 counterexample
    max_certified_ratio: float  # max over pairs of the certifying walk / distance
    max_size_ratio: float  # max tree size / n

    @property
    def passed(self) -> bool:
        return (self.leaves_biject and self.representatives_below and self.uncovered_pair is None
                and self.max_size_ratio <= TREE_SIZE_FACTOR)


def _descends(tree: DumbbellTree) -> bool:
    """Is every representative the point of a leaf below its vertex?"""
    T = tree.tree
    n = len(T)
    pos = np.empty(n, dtype=np.int64)
    order = T.preorder()
    pos[order] = np.arange(n)
    size = np.ones(n, dtype=np.int64)
    par = T.parent
    for v in order[::-1].tolist():
        if par[v] >= 0:
            size[par[v]] += size[v]
    rep = tree.representative
    if rep.min() < 0 or rep.max() >= tree.points.n:
        return False
    leaf = tree.point_leaf[rep]
    return bool(np.all((leaf >= 0) & (pos[leaf] >= pos) & (pos[leaf] < pos + size)))


def audit_cover(cover: TreeCover, slack: float = AUDIT_SLACK) -> CoverAudit:
    """Exhaustive check of the three cover properties.  Each pair is first
    tried in the tree named by the certificate; pairs that fail there (or have
    none) are searched across every tree."""
    trees = cover.trees
    points = trees[0].points
    n = points.n
    bij = True
    below = True
    size_ratio = 0.0
    for t in trees:
        lp = t.leaf_point
        leaves = np.flatnonzero(t.tree.child_ptr[1:] == t.tree.child_ptr[:-1])
        bij &= bool(np.array_equal(np.sort(lp[leaves]), np.arange(n)) and np.all(lp[lp >= 0] < n)
                    and np.array_equal(np.flatnonzero(lp >= 0), leaves)
                    and np.array_equal(t.tree.required, lp >= 0))
        below &= _descends(t)
        size_ratio = max(size_ratio, len(t) / n)
    iu, iv = np.triu_indices(n, 1)
    dist = points.dist(iu, iv)
    limit = (1 + cover.eps) * dist * (1 + slack)
    ratio = np.full(iu.shape[0], np.inf)
    walkers = [None] * len(trees)

    def walker(i):
        if walkers[i] is None:
            walkers[i] = _WalkIndex(trees[i])
        return walkers[i]

    if cover.certificate is not None:
        cert = cover.certificate[iu, iv]
        for i in np.unique(cert[cert >= 0]).tolist():
            sel = np.flatnonzero(cert == i)
            ratio[sel] = walker(i)(iu[sel], iv[sel]) / dist[sel]
    todo = np.flatnonzero(~(ratio * dist <= limit))
    for i in range(len(trees)):
        if not todo.size:
            break
        r = walker(i)(iu[todo], iv[todo]) / dist[todo]
        better = r < ratio[todo]
        ratio[todo[better]] = r[better]
        todo = todo[~(ratio[todo] * dist[todo] <= limit[todo])]
    bad = todo[0] if todo.size else None
    return CoverAudit(bool(bij), bool(below), int(iu.shape[0]),
                      None if bad is None else (int(iu[bad]), int(iv[bad])),
                      float(ratio.max()) if ratio.size else 1.0, float(size_ratio))


# -- spanner ---------------------------------------------------------------

def euclidean_spanner(points: PointSet, k: int, eps: float, config: CoverConfig | None = None,
                      stats: dict | None = None, cover: TreeCover | None = None) -> GeometricGraph:
    """Union over the cover trees of the tree 1-spanners, each shortcut edge
    (x, y) becoming the point edge (rep(x), rep(y)).  Every pair then has a
    path of at most k edges and weight at most (1 + eps) times its distance."""
    if k < 2:
        raise DomainError("k must be at least 2")
    if not isinstance(points, PointSet):
        points = PointSet(np.asarray(points, dtype=np.float64))
    if points.n == 0:
        return GeometricGraph.from_pairs(points, np.zeros((0, 2), np.int64))
    if cover is None:
        cover = build_dumbbell_cover(points, eps, config)
    chunks = []
    for t in cover.trees:
        sc, vmap = spanner_for_tree(t.tree, k)
        if len(sc) == 0:
            continue
        orig = vmap.to_old[sc.edges]
        e = t.representative[orig]
        chunks.append(e[e[:, 0] != e[:, 1]])
    pairs = np.concatenate(chunks) if chunks else np.zeros((0, 2), np.int64)
    g = GeometricGraph.from_pairs(points, pairs)
    if stats is not None:
        budget = edge_budget(points.n, k)
        stats.update({"trees": len(cover.trees), "edges": g.m, "budget_per_tree": budget,
                      "edge_cap": budget * len(cover.trees), "eps": cover.eps, "k": k,
                      **{f"cover_{key}": val for key, val in cover.stats.items()
                         if not isinstance(val, (list, dict))}})
    return g


def with_config(config: CoverConfig | None, **changes) -> CoverConfig:
    return replace(config or CoverConfig(), **changes)
