"""Brute-force oracles: tree-monotone hop diameter, hop-limited distances,
Euclidean stretch, and edge-budget audits."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DomainError, ValidationError
from .geometry import GeometricGraph, PointSet
from .steiner_tree import RootedSteinerTree, tree_path
from .tree_spanner import edge_budget

INFINITE = math.inf
STRETCH_SLACK = 1e-9
EXHAUSTIVE_LIMIT = 2000
DEFAULT_PAIR_BUDGET = 10**6


@dataclass(frozen=True)
class MonotoneDiameterReport:
    diameter: float  # int-valued, or INFINITE when some pair has no monotone path
    witness_pair: tuple[int, int] | None
    pairs_checked: int


def _edge_array(H, n: int) -> np.ndarray:
    arr = H.edges if hasattr(H, "edges") else np.asarray(list(H), dtype=np.int64)
    arr = np.asarray(arr, dtype=np.int64).reshape(-1, 2)
    if arr.size and (arr.min() < 0 or arr.max() >= n):
        raise ValidationError("edge endpoint is not a vertex of the tree")
    return arr


def _csr(n: int, a: np.ndarray, b: np.ndarray):
    src = np.concatenate([a, b])
    dst = np.concatenate([b, a])
    order = np.lexsort((dst, src))
    ptr = np.zeros(n + 1, dtype=np.int64)
    if n:
        np.cumsum(np.bincount(src, minlength=n), out=ptr[1:])
    return ptr, np.ascontiguousarray(dst[order], dtype=np.int64)


def monotone_distance_pair(T: RootedSteinerTree, H, u: int, v: int) -> float:
    """Fewest H-edges on a path whose vertices form a subsequence of the tree
    path u..v: restrict H to that path, keep arcs i -> j (i < j), BFS 0 -> t."""
    path = tree_path(T, u, v)
    where = {x: i for i, x in enumerate(path)}
    edges = H.as_set() if hasattr(H, "as_set") else {tuple(sorted(e)) for e in H}
    t = len(path) - 1
    if t == 0:
        return 0
    forward = [[] for _ in path]
    for a, b in edges:
        ia, ib = where.get(a), where.get(b)
        if ia is not None and ib is not None:
            lo, hi = min(ia, ib), max(ia, ib)
            forward[lo].append(hi)
    dist = [-1] * len(path)
    dist[0] = 0
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for j in forward[i]:
            if dist[j] < 0:
                dist[j] = dist[i] + 1
                queue.append(j)
    return dist[t] if dist[t] >= 0 else INFINITE


def monotone_diameter(T: RootedSteinerTree, H, required_only: bool = True,
                      method: str = "scan") -> MonotoneDiameterReport:
    """Maximum tree-monotone hop distance over (required) vertex pairs.

    ``method="scan"`` runs one DFS per source and takes the last hop from a
    vertex on the current DFS stack (= the tree path); ``method="pairwise"``
    applies :func:`monotone_distance_pair` to every pair.  Ties keep the
    lexicographically smallest pair.
    """
    n = len(T)
    arr = _edge_array(H, n)
    targets = T.required.copy() if required_only else np.ones(n, dtype=bool)
    sources = np.flatnonzero(targets)
    if method == "pairwise":
        edge_set = {tuple(sorted(e)) for e in arr.tolist()}
        best, witness, pairs = 0, None, 0
        for i, u in enumerate(sources.tolist()):
            for v in sources[i + 1:].tolist():
                d = monotone_distance_pair(T, edge_set, u, v)
                pairs += 1
                if d > best:
                    best, witness = d, (u, v)
                    if d == INFINITE:
                        return MonotoneDiameterReport(INFINITE, witness, pairs)
        return MonotoneDiameterReport(best, witness, pairs)
    if method != "scan":
        raise DomainError(f"unknown method {method!r}")
    if n == 0:
        return MonotoneDiameterReport(0, None, 0)
    nonroot = np.flatnonzero(T.parent >= 0)
    tp, ti = _csr(n, T.parent[nonroot], nonroot)
    hp, hi = _csr(n, arr[:, 0], arr[:, 1])
    best, bu, bv, pairs = _kernels.monotone_scan(tp, ti, hp, hi, sources.astype(np.int64), targets.astype(np.uint8))
    if best < 0:
        return MonotoneDiameterReport(INFINITE, (int(bu), int(bv)), int(pairs))
    witness = (int(bu), int(bv)) if bu >= 0 else None
    return MonotoneDiameterReport(int(best), witness, int(pairs))


def _as_graph(points, edges) -> GeometricGraph:
    if isinstance(edges, GeometricGraph):
        return edges
    ps = points if isinstance(points, PointSet) else PointSet(np.asarray(points, dtype=np.float64))
    arr = np.asarray(edges, dtype=np.float64).reshape(-1, 3) if len(edges) else np.zeros((0, 3))
    return GeometricGraph.from_pairs(ps, arr[:, :2].astype(np.int64), arr[:, 2])


def hop_limited_distance(points, edges, k: int, source: int) -> np.ndarray:
    """Least weight of a path from ``source`` using at most ``k`` edges (inf if
    none).  ``edges`` is a GeometricGraph or rows (u, v, weight); weights are
    checked against the coordinates."""
    if k < 0:
        raise DomainError("k must be non-negative")
    g = _as_graph(points, edges)
    if not (0 <= source < g.points.n):
        raise ValidationError(f"unknown point {source}")
    ptr, idx, w = g.csr()
    return _kernels.hop_limited(ptr, idx, w, int(source), int(k))


@dataclass(frozen=True)
class StretchReport:
    max_stretch: float
    max_pair: tuple[int, int] | None
    violating_pair: tuple[int, int] | None
    pairs_checked: int
    exhaustive: bool

    @property
    def passed(self) -> bool:
        return self.violating_pair is None


def stretch_report(points, edges, k: int, eps: float, pair_budget: int = DEFAULT_PAIR_BUDGET,
                   seed: int = 0, exhaustive_limit: int = EXHAUSTIVE_LIMIT) -> StretchReport:
    """Largest ratio (k-hop distance) / (Euclidean distance) over all pairs, or
    over a seeded uniform sample of ``pair_budget`` pairs once n exceeds
    ``exhaustive_limit``.  A pair violates when its ratio exceeds
    (1 + eps) with relative slack 1e-9."""
    if eps <= 0:
        raise DomainError("eps must be positive")
    g = _as_graph(points, edges)
    n = g.points.n
    if n < 2:
        return StretchReport(1.0 if n == 2 else 0.0, None, None, 0, True)
    ptr, idx, w = g.csr()
    coords = g.points.coords
    if n <= exhaustive_limit:
        best, bu, bv, vu, vv, pairs = _kernels.stretch_scan(
            ptr, idx, w, coords, int(k), np.arange(n, dtype=np.int64), float(eps), STRETCH_SLACK)
        return StretchReport(float(best), (int(bu), int(bv)) if bu >= 0 else None,
                             (int(vu), int(vv)) if vu >= 0 else None, int(pairs), True)
    rng = np.random.default_rng(seed)
    us = rng.integers(0, n, size=pair_budget)
    vs = rng.integers(0, n - 1, size=pair_budget)
    vs = vs + (vs >= us)
    lo, hi = np.minimum(us, vs), np.maximum(us, vs)
    ratio = _kernels.stretch_pairs(ptr, idx, w, coords, int(k), lo.astype(np.int64), hi.astype(np.int64))
    j = int(np.argmax(ratio))
    bad = np.flatnonzero(ratio > (1 + eps) * (1 + STRETCH_SLACK))
    viol = (int(lo[bad[0]]), int(hi[bad[0]])) if bad.size else None
    return StretchReport(float(ratio[j]), (int(lo[j]), int(hi[j])), viol, int(pair_budget), False)


@dataclass(frozen=True)
class BudgetAudit:
    passed: bool
    bound: int
    rule: str


def audit_budgets(n: int, k: int, edge_count: int) -> BudgetAudit:
    bound = edge_budget(n, k)
    if k == 2:
        rule = "n*alpha_2(n)"
    elif k == 3:
        rule = "floor(5/2*n*alpha_3(n))+2"
    elif k % 2 == 0:
        rule = "2*n*alpha'_k(n)"
    else:
        rule = "3*n*alpha'_k(n)+2"
    return BudgetAudit(edge_count <= bound, bound, rule)
