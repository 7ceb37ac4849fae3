import numpy as np
import pytest

from hopspanner import _kernels
from hopspanner.decomp import decompose
from hopspanner.generators import random_points, random_tree
from hopspanner.geo import CoverConfig, build_dumbbell_cover
from hopspanner.geometry import GeometricGraph
from hopspanner.steiner_tree import RootedSteinerTree, prune
from hopspanner.tree_spanner import SpannerStats, tree_one_spanner
from hopspanner.verify import hop_limited_distance, monotone_diameter, stretch_report

KERNELS = ("preorder", "prune_preorder", "decomp_preorder", "spanner_edges", "monotone_scan", "hop_limited",
           "stretch_scan", "stretch_pairs", "greedy_cover")

BACKENDS = _kernels.backends()
needs_both = pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled backend not built")


def with_backend(monkeypatch, name, fn):
    mod = BACKENDS[name]
    with monkeypatch.context() as m:
        for k in KERNELS:
            m.setattr(_kernels, k, getattr(mod, k))
        return fn()


def both(monkeypatch, fn):
    return [with_backend(monkeypatch, name, fn) for name in ("python", "cython")]


def trees(count, max_n=400):
    shapes = ("random", "path", "binary", "caterpillar")
    for s in range(count):
        n = int(np.random.default_rng(s).integers(1, max_n))
        yield random_tree(n, (0.2, 0.6, 1.0)[s % 3], seed=s, shape=shapes[s % 4])


def test_backend_names():
    assert BACKENDS["python"].BACKEND == "python"
    assert _kernels.BACKEND in ("python", "cython")


@needs_both
def test_prune_and_preorder_agree(monkeypatch):
    for T in trees(40):
        def go():
            fresh = RootedSteinerTree(T.parent, T.required)
            P, m = prune(fresh, counter := {})
            return fresh.preorder().tolist(), P.parent.tolist(), m.to_old.tolist(), counter["work"]
        a, b = both(monkeypatch, go)
        assert a == b


@needs_both
def test_decomp_agrees(monkeypatch):
    for T in trees(40):
        for ell in (1, 3, 7):
            def go():
                c = {}
                d = decompose(T, ell, c)
                return d.cut_vertices, d.sizes.tolist(), c["work"]
            a, b = both(monkeypatch, go)
            assert a == b


@needs_both
def test_spanner_agrees(monkeypatch):
    for T in trees(25, 600):
        P, _ = prune(T)
        if P.required_size < 2:
            continue
        for k in (2, 3, 4, 5, 8):
            def go():
                st = SpannerStats()
                H = tree_one_spanner(P, P.required_size, k, stats=st)
                return H.edges.tolist(), st.work, st.epp_excess, st.shrink_fail
            a, b = both(monkeypatch, go)
            assert a == b


@needs_both
def test_monotone_scan_agrees(monkeypatch):
    for T in trees(20, 120):
        rng = np.random.default_rng(len(T))
        n = len(T)
        H = [tuple(e) for e in rng.integers(0, n, (2 * n, 2)).tolist() if e[0] != e[1]] + T.edges()
        a, b = both(monkeypatch, lambda: monotone_diameter(T, H))
        assert a == b


@needs_both
def test_graph_kernels_agree(monkeypatch):
    for s in range(10):
        P = random_points(60, 2, seed=s)
        rng = np.random.default_rng(s)
        e = rng.integers(0, 60, (200, 2))
        g = GeometricGraph.from_pairs(P, e[e[:, 0] != e[:, 1]])
        for k in (1, 2, 4):
            a, b = both(monkeypatch, lambda: hop_limited_distance(P, g, k, s).tolist())
            assert a == b
            a, b = both(monkeypatch, lambda: stretch_report(P, g, k, 0.5))
            assert a == b
            a, b = both(monkeypatch, lambda: stretch_report(P, g, k, 0.5, pair_budget=300, exhaustive_limit=10))
            assert a == b


@needs_both
def test_greedy_cover_agrees(monkeypatch):
    for s, (dim, eps) in enumerate(((2, 0.5), (3, 1.0), (2, 0.1))):
        P = random_points(150, dim, seed=s)

        def go():
            c = build_dumbbell_cover(P, eps, CoverConfig(max_trees=None))
            return [t.tree.parent.tolist() for t in c.trees], c.certificate.tolist()
        a, b = both(monkeypatch, go)
        assert a == b
