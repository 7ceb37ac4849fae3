"""Low-diameter 1-spanners for tree metrics.

``tree_one_spanner`` drives the recursive shortcutting scheme on a pruned
Steiner tree: cut vertices at threshold ell = alpha'_{k-2}(n), border edges
into each subtree, a recursive (k-2)-spanner over the cut vertices, and a
recursive k-spanner inside every subtree.  The recursion itself runs in the
kernel on pre-order arrays with an explicit task stack.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import DomainError, ValidationError
from .slow_funcs import get_evaluator
from .steiner_tree import RootedSteinerTree, VertexMap, is_pruned, prune


def tree_token(T: RootedSteinerTree) -> str:
    h = hashlib.blake2b(digest_size=8)
    h.update(T.parent.tobytes())
    h.update(T.required.tobytes())
    h.update(T.child_idx.tobytes())
    return h.hexdigest()


@dataclass(frozen=True)
class ShortcutEdgeSet:
    """Undirected edges (u < v) sorted lexicographically, no duplicates."""

    edges: np.ndarray
    source_tree_id: str

    def __len__(self) -> int:
        return self.edges.shape[0]

    def __iter__(self):
        return iter(map(tuple, self.edges.tolist()))

    def as_set(self) -> set[tuple[int, int]]:
        return set(self)

    @classmethod
    def from_pairs(cls, pairs, source_tree_id: str = "") -> "ShortcutEdgeSet":
        arr = np.asarray(list(pairs) if not isinstance(pairs, np.ndarray) else pairs, dtype=np.int64).reshape(-1, 2)
        if arr.size and np.any(arr[:, 0] == arr[:, 1]):
            raise ValidationError("self-loop in edge set")
        arr = np.sort(arr, axis=1)
        arr = np.unique(arr, axis=0) if arr.size else arr
        return cls(arr, source_tree_id)


@dataclass
class SpannerStats:
    n: int = 0
    k: int = 0
    ell: int = 0
    edges: int = 0
    budget: int = 0
    work: int = 0
    calls: int = 0
    epp_excess: int = 0
    shrink_fail: int = 0
    extra: dict = field(default_factory=dict)


def edge_budget(n: int, k: int) -> int:
    if k < 2:
        raise DomainError("k must be at least 2")
    if n < 0:
        raise DomainError("n must be non-negative")
    ev = get_evaluator(n)
    if k == 2:
        return n * ev.alpha(2, n)
    if k == 3:
        return (5 * n * ev.alpha(3, n)) // 2 + 2
    if k % 2 == 0:
        return 2 * n * ev.alpha_prime(k, n)
    return 3 * n * ev.alpha_prime(k, n) + 2


def threshold(n: int, k: int, variant: str = "alpha_prime") -> int:
    """ell used at the top level of a call with parameters (n, k >= 2)."""
    ev = get_evaluator(n)
    return ev.alpha_prime(k - 2, n) if variant == "alpha_prime" else ev.alpha(k - 2, n)


def _ell_table(n: int, k: int, variant: str) -> np.ndarray:
    ev = get_evaluator(n)
    rows = [(ev.alpha_prime_dense if variant == "alpha_prime" else ev.alpha_dense)(kk, n) for kk in range(k - 1)]
    return np.ascontiguousarray(np.vstack(rows), dtype=np.int64)


def tree_one_spanner(T: RootedSteinerTree, n: int, k: int, *, _ell_variant: str = "alpha_prime",
                     stats: SpannerStats | None = None) -> ShortcutEdgeSet:
    """Shortcut edges over V(T) giving tree-monotone hop-diameter <= k between
    required vertices.  ``T`` must be pruned and ``n`` its required-size.

    ``_ell_variant="alpha"`` switches the threshold to alpha_{k-2}; it exists
    only so tests can compare edge counts against the default.
    """
    if k < 2:
        raise DomainError("k must be at least 2")
    if n != T.required_size:
        raise ValidationError(f"n={n} differs from the tree's required-size {T.required_size}")
    if not is_pruned(T):
        bad = np.flatnonzero(~T.required & (np.diff(T.child_ptr) < 2))
        raise ValidationError(f"tree is not pruned: redundant vertex {int(bad[0])}")
    if _ell_variant not in ("alpha_prime", "alpha"):
        raise DomainError("unknown threshold variant")
    token = tree_token(T)
    if len(T) == 0:
        edges = np.zeros((0, 2), dtype=np.int64)
        work, audit = 0, {"calls": 0, "epp_excess": 0, "shrink_fail": 0}
    else:
        order = T.preorder()
        pos = np.empty(len(T), dtype=np.int64)
        pos[order] = np.arange(len(T))
        par_pos = np.where(T.parent[order] >= 0, pos[np.maximum(T.parent[order], 0)], -1)
        edges, work, audit = _kernels.spanner_edges(
            order.astype(np.int64), par_pos.astype(np.int64), T.required[order].astype(np.uint8),
            int(k), _ell_table(n, k, _ell_variant))
    if stats is not None:
        stats.n, stats.k = n, k
        stats.ell = threshold(n, k, _ell_variant) if n else 0
        stats.edges = int(edges.shape[0])
        stats.budget = edge_budget(n, k)
        stats.work = int(work)
        stats.calls = int(audit["calls"])
        stats.epp_excess = int(audit["epp_excess"])
        stats.shrink_fail = int(audit["shrink_fail"])
    return ShortcutEdgeSet(edges, token)


def spanner_for_tree(T: RootedSteinerTree, k: int, stats: SpannerStats | None = None
                     ) -> tuple[ShortcutEdgeSet, VertexMap]:
    """Prune an arbitrary Steiner tree, then build its spanner.  Edges are in the
    pruned tree's ids; the map translates ``T``'s ids to them."""
    if k < 2:
        raise DomainError("k must be at least 2")
    pruned, vmap = prune(T)
    return tree_one_spanner(pruned, pruned.required_size, k, stats=stats), vmap
