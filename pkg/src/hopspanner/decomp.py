"""Size-threshold tree decomposition into cut vertices and small subtrees."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, replace

import numpy as np

from . import _kernels
from .errors import DomainError, ValidationError
from .steiner_tree import RootedSteinerTree, VertexMap


@dataclass(frozen=True)
class Subtree:
    tree: RootedSteinerTree
    vmap: VertexMap  # T -> subtree ids; ``vmap.to_old`` lists members in T's pre-order
    root: int  # id in T of the subtree root


class SubtreeList(Sequence):
    """Components in root pre-order, built on first access."""

    def __init__(self, T, order, par_pos, live_pos, bounds, roots):
        self._T, self._order, self._pp = T, order, par_pos
        self._live_pos, self._bounds, self._roots = live_pos, bounds, roots
        self._cache: dict[int, Subtree] = {}

    def __len__(self) -> int:
        return self._roots.shape[0]

    def __getitem__(self, c):
        if isinstance(c, slice):
            return tuple(self[i] for i in range(*c.indices(len(self))))
        if c < 0:
            c += len(self)
        if not 0 <= c < len(self):
            raise IndexError(c)
        if c not in self._cache:
            mem = self._live_pos[self._bounds[c]:self._bounds[c + 1]]  # ascending pre-order positions
            local = np.empty(self._order.shape[0], dtype=np.int64)
            local[mem] = np.arange(mem.shape[0])
            par_local = local[self._pp[mem]]
            par_local[0] = -1
            old_ids = self._order[mem]
            sub = RootedSteinerTree(par_local, self._T.required[old_ids], validate=False)
            self._cache[c] = Subtree(sub, VertexMap.from_kept(old_ids, len(self._T)), int(self._order[self._roots[c]]))
        return self._cache[c]


@dataclass(frozen=True)
class Decomposition:
    ell: int
    cut_vertices: tuple[int, ...]  # in detachment (post-)order
    subtrees: Sequence[Subtree]  # ordered by the pre-order position of their roots
    sizes: np.ndarray  # size(w) at termination, indexed by T ids
    component: np.ndarray  # subtree index per vertex of T, -1 on cut vertices
    borders: tuple[tuple[int, ...], ...] | None = None


def decompose(T: RootedSteinerTree, ell: int, counter: dict | None = None) -> Decomposition:
    """One bottom-up pass: a vertex whose accumulated required-size exceeds
    ``ell`` becomes a cut vertex and stops contributing to its parent."""
    if ell < 1:
        raise DomainError(f"ell must be a positive integer, got {ell}")
    n = len(T)
    if n == 0:
        return Decomposition(ell, (), (), np.zeros(0, np.int64), np.zeros(0, np.int64), None)
    order = T.preorder()
    pos = np.empty(n, dtype=np.int64)
    pos[order] = np.arange(n)
    par_pos = np.where(T.parent[order] >= 0, pos[np.maximum(T.parent[order], 0)], -1)
    cut_pos, size_pos, work = _kernels.decomp_preorder(par_pos, T.required[order].astype(np.uint8), int(ell))
    if counter is not None:
        counter["work"] = counter.get("work", 0) + int(work)
    cut = np.zeros(n, dtype=bool)
    cut[order] = cut_pos.astype(bool)
    sizes = np.empty(n, dtype=np.int64)
    sizes[order] = size_pos

    # post-order rank = pre-order rank - depth + subtree size - 1
    subtree_size = np.ones(n, dtype=np.int64)
    for i in range(n - 1, 0, -1):
        subtree_size[par_pos[i]] += subtree_size[i]
    depths = T.depths()[order]
    post_rank = np.arange(n) - depths + subtree_size - 1
    cut_ids = order[np.flatnonzero(cut_pos)]
    cut_ids = cut_ids[np.argsort(post_rank[np.flatnonzero(cut_pos)], kind="stable")]

    comp_root = np.full(n, -1, dtype=np.int64)  # by pre-order position
    cp = cut_pos.tolist()
    pp = par_pos.tolist()
    cr = comp_root.tolist()
    for i in range(n):
        if not cp[i]:
            p = pp[i]
            cr[i] = i if (p < 0 or cp[p]) else cr[p]
    comp_root = np.array(cr, dtype=np.int64)
    roots = np.flatnonzero((comp_root == np.arange(n)))
    comp_index = np.full(n, -1, dtype=np.int64)
    live = comp_root >= 0
    comp_index[live] = np.searchsorted(roots, comp_root[live])
    component = np.full(n, -1, dtype=np.int64)
    component[order] = comp_index

    members_by_comp = np.argsort(comp_index[live], kind="stable")
    live_pos = np.flatnonzero(live)[members_by_comp]
    bounds = np.searchsorted(comp_index[live_pos], np.arange(roots.shape[0] + 1))
    subtrees = SubtreeList(T, order, par_pos, live_pos, bounds, roots)
    return Decomposition(int(ell), tuple(int(x) for x in cut_ids), subtrees, sizes, component, None)


def compute_borders(T: RootedSteinerTree, partial: Decomposition) -> Decomposition:
    """Border of a subtree: the cut parent of its root (upstream) plus every cut
    vertex whose parent lies in the subtree (downstream).  One pass over V(T)."""
    if partial.component.shape[0] != len(T):
        raise ValidationError("decomposition does not belong to this tree")
    borders: list[list[int]] = [[] for _ in partial.subtrees]
    comp = partial.component.tolist()
    par = T.parent.tolist()
    for v in T.preorder().tolist():
        p = par[v]
        if p < 0:
            continue
        if comp[v] < 0 and comp[p] >= 0:
            borders[comp[p]].append(v)
        elif comp[v] >= 0 and comp[p] < 0:
            borders[comp[v]].append(p)
    return replace(partial, borders=tuple(tuple(sorted(b)) for b in borders))
