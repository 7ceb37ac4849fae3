import math

import numpy as np
import pytest

from hopspanner.decomp import compute_borders, decompose
from hopspanner.errors import DomainError
from hopspanner.generators import random_tree
from hopspanner.steiner_tree import RootedSteinerTree

import oracles

DECOMP_WORK_PER_VERTEX = 1  # calibrated once, frozen


def path(n):
    return RootedSteinerTree(np.arange(n) - 1, np.ones(n, bool))


def residual_sizes(T, cut):
    par = T.parent.tolist()
    size = [int(r) for r in T.required]
    for v in oracles.postorder(par):
        if par[v] >= 0 and v not in cut:
            size[par[v]] += size[v]
    return size


def test_p7_ell1():
    T = path(7)
    d = compute_borders(T, decompose(T, 1))
    # post-order of P_7 rooted at 0 is 6, 5, ..., 0; the 2nd, 4th and 6th are cut
    assert d.cut_vertices == (5, 3, 1)
    assert len(d.cut_vertices) == 7 // 2
    roots = [st.root for st in d.subtrees]
    assert roots == [0, 2, 4, 6]
    assert d.borders == ((1,), (1, 3), (3, 5), (5,))


def test_large_ell_no_cut():
    T = random_tree(80, 0.5, seed=3)
    d = compute_borders(T, decompose(T, T.required_size))
    assert d.cut_vertices == () and len(d.subtrees) == 1
    st = d.subtrees[0]
    old = st.vmap.to_old
    assert np.array_equal(np.sort(old), np.arange(len(T)))
    mapped = np.where(st.tree.parent >= 0, old[np.maximum(st.tree.parent, 0)], -1)
    assert np.array_equal(mapped, T.parent[old])
    assert d.borders == ((),)


def test_star_center_cut():
    T = RootedSteinerTree([-1] + [0] * 6, np.ones(7, bool))
    d = compute_borders(T, decompose(T, 1))
    assert d.cut_vertices == (0,)
    assert all(b == (0,) for b in d.borders)


@pytest.mark.parametrize("n", [1, 2, 5, 17, 64])
def test_path_tightness(n):
    T = path(n)
    for ell in range(1, n + 1):
        assert len(decompose(T, ell).cut_vertices) == n // (ell + 1)


def test_ell_zero_rejected():
    with pytest.raises(DomainError):
        decompose(path(3), 0)


def test_against_brute_and_bounds():
    shapes = ("random", "path", "binary", "caterpillar")
    for s in range(400):
        n = int(np.random.default_rng(s).integers(1, 400))
        T = random_tree(n, (0.1, 0.5, 0.9)[s % 3], seed=s, shape=shapes[s % 4])
        r = T.required_size
        for ell in sorted({1, 2, 3, max(1, math.isqrt(max(r, 1) - 1) + 1), max(1, -(-r // 2))}):
            counter = {}
            d = compute_borders(T, decompose(T, ell, counter))
            assert list(d.cut_vertices) == oracles.decomp_brute(T.parent.tolist(), T.required.tolist(), ell)
            assert len(d.cut_vertices) <= r // (ell + 1)
            assert counter["work"] <= DECOMP_WORK_PER_VERTEX * n
            members = np.concatenate([st.vmap.to_old for st in d.subtrees] + [np.array(d.cut_vertices, np.int64)])
            assert np.array_equal(np.sort(members), np.arange(n))
            cut = set(d.cut_vertices)
            for i, (st, border) in enumerate(zip(d.subtrees, d.borders)):
                assert st.tree.required_size <= ell
                mem = set(st.vmap.to_old.tolist())
                expect = {int(T.parent[v]) for v in mem if T.parent[v] in cut}
                expect |= {c for c in cut if T.parent[c] in mem}
                assert set(border) == expect
            # size(w) is the required-size of w's subtree with detached cut children removed
            assert d.sizes.tolist() == residual_sizes(T, cut)


def test_steiner_cut_vertices_occur():
    found = False
    for s in range(50):
        T = random_tree(200, 0.5, seed=s)
        d = decompose(T, 3)
        if any(not T.required[c] for c in d.cut_vertices):
            found = True
            break
    assert found
