"""Rooted Steiner trees, the Prune procedure, and brute-force tree oracles."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import ValidationError

REQUIRED = 1
STEINER = 0
NONE = -1


class RootedSteinerTree:
    """Ordered rooted tree over vertices 0..n-1 with a required/Steiner colouring.

    Children are stored in CSR form; unless an explicit order is supplied they
    are listed by ascending vertex id.  Instances are treated as immutable.
    """

    __slots__ = ("parent", "required", "root", "child_ptr", "child_idx", "_preorder", "_depths")

    def __init__(self, parent, required, children=None, validate=True):
        parent = np.ascontiguousarray(parent, dtype=np.int64)
        required = np.ascontiguousarray(required, dtype=bool)
        n = parent.shape[0]
        if required.shape != (n,):
            raise ValidationError("parent and colour arrays differ in length")
        if n and (parent.min() < -1 or parent.max() >= n):
            raise ValidationError("parent id out of range")
        roots = np.flatnonzero(parent == NONE)
        if n and roots.size != 1:
            raise ValidationError(f"expected exactly one root, found {roots.size}")
        self.parent = parent
        self.required = required
        self.root = int(roots[0]) if n else NONE
        if children is None:
            nonroot = np.flatnonzero(parent != NONE)
            order = nonroot[np.argsort(parent[nonroot], kind="stable")]
            counts = np.bincount(parent[nonroot], minlength=n) if n else np.zeros(0, np.int64)
        else:
            if len(children) != n:
                raise ValidationError("children list has wrong length")
            order = np.fromiter((c for ch in children for c in ch), dtype=np.int64)
            counts = np.fromiter((len(ch) for ch in children), dtype=np.int64, count=n)
            if validate:
                owner = np.repeat(np.arange(n), counts)
                if order.shape[0] != max(n - 1, 0) or np.any(parent[order] != owner):
                    raise ValidationError("children lists disagree with parent array")
        self.child_ptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(counts, out=self.child_ptr[1:])
        self.child_idx = order.astype(np.int64)
        self._preorder = None
        self._depths = None
        if validate and n:
            if self.preorder().shape[0] != n:
                raise ValidationError("parent array contains a cycle or unreachable vertices")

    # -- constructors -----------------------------------------------------
    @classmethod
    def empty(cls) -> "RootedSteinerTree":
        return cls(np.zeros(0, np.int64), np.zeros(0, bool))

    @classmethod
    def from_children(cls, children, required) -> "RootedSteinerTree":
        n = len(children)
        parent = np.full(n, NONE, dtype=np.int64)
        for v, ch in enumerate(children):
            for c in ch:
                parent[c] = v
        return cls(parent, required, children=children)

    def recolored(self, required) -> "RootedSteinerTree":
        return RootedSteinerTree(self.parent, required, children=self.children_lists(), validate=False)

    # -- queries ------------------------------------------------------------
    def __len__(self) -> int:
        return self.parent.shape[0]

    @property
    def n_vertices(self) -> int:
        return self.parent.shape[0]

    @property
    def required_size(self) -> int:
        return int(np.count_nonzero(self.required))

    def required_vertices(self) -> np.ndarray:
        return np.flatnonzero(self.required)

    def children(self, v: int) -> list[int]:
        self._check_vertex(v)
        return self.child_idx[self.child_ptr[v]:self.child_ptr[v + 1]].tolist()

    def children_lists(self) -> list[list[int]]:
        idx = self.child_idx.tolist()
        ptr = self.child_ptr.tolist()
        return [idx[ptr[v]:ptr[v + 1]] for v in range(len(self))]

    def color(self, v: int) -> int:
        self._check_vertex(v)
        return REQUIRED if self.required[v] else STEINER

    def edges(self) -> list[tuple[int, int]]:
        nonroot = np.flatnonzero(self.parent != NONE)
        return [(int(self.parent[v]), int(v)) for v in nonroot]

    def preorder(self) -> np.ndarray:
        if self._preorder is None:
            if len(self) == 0:
                self._preorder = np.zeros(0, np.int64)
            else:
                self._preorder = _kernels.preorder(self.child_ptr, self.child_idx, self.root)
        return self._preorder

    def depths(self) -> np.ndarray:
        """Edge-count distance of every vertex from the root."""
        if self._depths is None:
            d = np.zeros(len(self), dtype=np.int64)
            order = self.preorder()
            if order.shape[0] > 1:
                rest = order[1:]
                # parents precede children in pre-order, so one ordered sweep suffices
                par = self.parent
                dl = d
                for v in rest.tolist():
                    dl[v] = dl[par[v]] + 1
            self._depths = d
        return self._depths

    def _check_vertex(self, v) -> None:
        if not (0 <= int(v) < len(self)):
            raise ValidationError(f"unknown vertex {v}")

    def __repr__(self) -> str:
        return f"RootedSteinerTree(n={len(self)}, required={self.required_size}, root={self.root})"

    def same_shape(self, other: "RootedSteinerTree") -> bool:
        return (np.array_equal(self.parent, other.parent) and np.array_equal(self.required, other.required)
                and np.array_equal(self.child_idx, other.child_idx) and np.array_equal(self.child_ptr, other.child_ptr))


@dataclass(frozen=True)
class VertexMap:
    """Injective map from the vertices of a source tree onto a target tree.

    ``to_new[v]`` is the target id of source vertex ``v`` or -1 if it was dropped;
    ``to_old[w]`` is the source id of target vertex ``w``.
    """

    to_new: np.ndarray
    to_old: np.ndarray

    def __post_init__(self):
        to_old = self.to_old
        if to_old.size and (to_old.min() < 0 or to_old.max() >= self.to_new.shape[0]):
            raise ValidationError("vertex map points outside the source tree")
        if not np.array_equal(self.to_new[to_old], np.arange(to_old.shape[0])):
            raise ValidationError("vertex map is not a bijection on its domain")
        if np.count_nonzero(self.to_new >= 0) != to_old.shape[0]:
            raise ValidationError("vertex map domain mismatch")

    @classmethod
    def from_kept(cls, kept_old_ids, source_size: int) -> "VertexMap":
        to_old = np.ascontiguousarray(kept_old_ids, dtype=np.int64)
        to_new = np.full(source_size, -1, dtype=np.int64)
        to_new[to_old] = np.arange(to_old.shape[0])
        return cls(to_new, to_old)

    @classmethod
    def identity(cls, n: int) -> "VertexMap":
        a = np.arange(n, dtype=np.int64)
        return cls(a, a.copy())

    def __getitem__(self, v: int) -> int:
        w = int(self.to_new[v])
        if w < 0:
            raise KeyError(v)
        return w

    def domain(self) -> np.ndarray:
        return self.to_old.copy()

    def inverse(self, w: int) -> int:
        return int(self.to_old[w])

    def then(self, other: "VertexMap") -> "VertexMap":
        """Composition: apply self, then other."""
        fwd = np.full(self.to_new.shape[0], -1, dtype=np.int64)
        live = self.to_new >= 0
        fwd[live] = other.to_new[self.to_new[live]]
        keep = np.flatnonzero(fwd >= 0)
        to_old = np.empty(other.to_old.shape[0], dtype=np.int64)
        to_old[fwd[keep]] = keep
        return VertexMap(fwd, to_old)


def prune(T: RootedSteinerTree, counter: dict | None = None) -> tuple[RootedSteinerTree, VertexMap]:
    """Remove redundant vertices (Steiner vertices that are not the LCA of two
    required vertices).  Survivors are renumbered in the pre-order of ``T``,
    so the result's ascending child order equals its inherited order."""
    n = len(T)
    if n == 0:
        return RootedSteinerTree.empty(), VertexMap.from_kept(np.zeros(0, np.int64), 0)
    order = T.preorder()
    pos = np.empty(n, dtype=np.int64)
    pos[order] = np.arange(n)
    par_pos = np.where(T.parent[order] >= 0, pos[np.maximum(T.parent[order], 0)], -1)
    keep, new_par, work = _kernels.prune_preorder(par_pos, T.required[order].astype(np.uint8))
    if counter is not None:
        counter["work"] = counter.get("work", 0) + int(work)
    kept_old = order[keep]
    pruned = RootedSteinerTree(new_par, T.required[kept_old], validate=False)
    return pruned, VertexMap.from_kept(kept_old, n)


def is_pruned(T: RootedSteinerTree) -> bool:
    """True iff every Steiner vertex has at least two children and (for a
    non-empty tree) at least one required vertex exists."""
    if len(T) == 0:
        return True
    nchild = np.diff(T.child_ptr)
    return bool(np.all(T.required | (nchild >= 2)))


# ---------------------------------------------------------------------------
# oracles


def tree_path(T: RootedSteinerTree, u: int, v: int) -> list[int]:
    T._check_vertex(u)
    T._check_vertex(v)
    up_u = _root_path(T, u)
    on_u = {x: i for i, x in enumerate(up_u)}
    tail = []
    x = v
    while x not in on_u:
        tail.append(x)
        x = int(T.parent[x])
    return up_u[: on_u[x] + 1] + tail[::-1]


def _root_path(T: RootedSteinerTree, u: int) -> list[int]:
    out = [int(u)]
    while T.parent[out[-1]] != NONE:
        out.append(int(T.parent[out[-1]]))
    return out


def depth(T: RootedSteinerTree) -> int:
    """Height of the tree in edges; -1 for the empty tree."""
    if len(T) == 0:
        return -1
    return int(T.depths().max())


def lca_brute(T: RootedSteinerTree, u: int, v: int) -> int:
    T._check_vertex(u)
    T._check_vertex(v)
    marked = set(_root_path(T, u))
    x = int(v)
    while x not in marked:
        x = int(T.parent[x])
    return x


class LcaIndex:
    """Euler tour + sparse-table LCA, vectorised over query arrays.  Used by the
    oracles to answer many pair queries at once."""

    def __init__(self, T: RootedSteinerTree):
        n = len(T)
        self.depth = T.depths()
        euler = []
        first = np.zeros(n, dtype=np.int64)
        if n:
            stack = [(T.root, 0)]
            ptr, idx = T.child_ptr.tolist(), T.child_idx.tolist()
            while stack:
                v, i = stack.pop()
                if i == 0:
                    first[v] = len(euler)
                euler.append(v)
                if ptr[v] + i < ptr[v + 1]:
                    stack.append((v, i + 1))
                    stack.append((idx[ptr[v] + i], 0))
        e = np.array(euler, dtype=np.int64)
        self.first = first
        key = self.depth[e] * max(n, 1) + e if n else e
        self.n = max(n, 1)
        levels = [key]
        j = 1
        while (1 << j) <= key.shape[0]:
            prev = levels[-1]
            half = 1 << (j - 1)
            levels.append(np.minimum(prev[:-half], prev[half:]))
            j += 1
        self.table = levels

    def lca(self, u, v) -> np.ndarray:
        a = self.first[np.asarray(u)]
        b = self.first[np.asarray(v)]
        lo, hi = np.minimum(a, b), np.maximum(a, b) + 1
        span = hi - lo
        j = np.floor(np.log2(span)).astype(np.int64)
        # guard against float rounding near exact powers of two
        j -= (1 << j) > span
        j += (1 << (j + 1)) <= span
        out = np.empty(lo.shape, dtype=np.int64)
        for level in np.unique(j):
            m = j == level
            t = self.table[level]
            out[m] = np.minimum(t[lo[m]], t[hi[m] - (1 << level)])
        return out % self.n

    def dist(self, u, v) -> np.ndarray:
        return self.depth[u] + self.depth[v] - 2 * self.depth[self.lca(u, v)]


def _required_pairs(req_ids: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    iu, iv = np.triu_indices(req_ids.shape[0], k=1)
    return req_ids[iu], req_ids[iv]


def useful_set_brute(T: RootedSteinerTree) -> set[int]:
    """Steiner vertices that are the LCA of some pair of required vertices,
    found by evaluating the LCA of every required pair."""
    req = T.required_vertices()
    if req.shape[0] < 2:
        return set()
    idx = LcaIndex(T)
    found = set()
    for chunk_u, chunk_v in _chunked_pairs(req):
        found.update(np.unique(idx.lca(chunk_u, chunk_v)).tolist())
    return {x for x in found if not T.required[x]}


def _chunked_pairs(req: np.ndarray, chunk: int = 1 << 20):
    # row blocks of the strict upper triangle, bounded memory
    r = req.shape[0]
    i = 0
    while i < r - 1:
        rows = max(1, chunk // max(r - i, 1))
        j = min(r - 1, i + rows)
        us, vs = [], []
        for a in range(i, j):
            us.append(np.full(r - a - 1, req[a]))
            vs.append(req[a + 1:])
        yield np.concatenate(us), np.concatenate(vs)
        i = j


def is_monotone_preserving_brute(T: RootedSteinerTree, T2: RootedSteinerTree, vmap: VertexMap) -> bool:
    """For every required pair, is the path in ``T2`` a subsequence of the path
    in ``T``?  ``vmap`` maps vertices of ``T`` to vertices of ``T2``."""
    return first_monotone_violation(T, T2, vmap) is None


def first_monotone_violation(T, T2, vmap):
    if vmap.to_new.shape[0] != len(T) or vmap.to_old.shape[0] != len(T2):
        raise ValidationError("vertex map does not match the two trees")
    req_T = set(T.required_vertices().tolist())
    req_T2_as_T = set(vmap.to_old[T2.required_vertices()].tolist())
    if req_T != req_T2_as_T:
        raise ValidationError("required sets differ under the vertex map")
    req2 = T2.required_vertices()
    if req2.shape[0] < 2:
        return None
    to_old = vmap.to_old
    lca_T = LcaIndex(T)
    par2, dep2 = T2.parent, T2.depths()
    for u0, v0 in _chunked_pairs(req2, 1 << 18):
        uT, vT = to_old[u0], to_old[v0]
        duv = lca_T.dist(uT, vT)
        cu, cv = u0.copy(), v0.copy()
        last_u = np.zeros_like(duv)  # position of the newest u-side vertex along P_T(u, v)
        last_v = np.zeros_like(duv)  # same, measured from v
        ok = np.ones(duv.shape, dtype=bool)
        active = np.flatnonzero(cu != cv)
        while active.size:
            a, b = cu[active], cv[active]
            da, db = dep2[a], dep2[b]
            mu, mv = da >= db, db >= da
            for side, mask, cur, last, src in ((0, mu, cu, last_u, uT), (1, mv, cv, last_v, vT)):
                sel = active[mask]
                if not sel.size:
                    continue
                nxt = par2[cur[sel]]
                cur[sel] = nxt
                x = to_old[nxt]
                p = lca_T.dist(src[sel], x)
                q = lca_T.dist(x, (vT if side == 0 else uT)[sel])
                good = (p + q == duv[sel]) & (p > last[sel])
                last[sel] = p
                ok[sel] &= good
            active = active[cu[active] != cv[active]]
        bad = np.flatnonzero(~ok)
        if bad.size:
            i = int(bad[0])
            return int(uT[i]), int(vT[i])
    return None
