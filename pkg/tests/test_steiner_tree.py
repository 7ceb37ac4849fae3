import numpy as np
import pytest

from hopspanner.errors import ValidationError
from hopspanner.generators import random_tree
from hopspanner.steiner_tree import (LcaIndex, RootedSteinerTree, VertexMap, depth, is_monotone_preserving_brute,
                                     is_pruned, lca_brute, prune, tree_path, useful_set_brute)
from hopspanner.verify import monotone_diameter

import oracles

PRUNE_WORK_PER_VERTEX = 2  # calibrated once on the corpus below, then frozen


def corpus(count, max_n=300):
    shapes = ("random", "path", "binary", "caterpillar")
    for s in range(count):
        n = int(np.random.default_rng(s).integers(1, max_n))
        yield random_tree(n, (0.1, 0.5, 0.9)[s % 3], seed=s, shape=shapes[s % 4])


def test_single_required_root():
    T = RootedSteinerTree([-1], [True])
    P, m = prune(T)
    assert P.same_shape(T) and m.to_old.tolist() == [0]


def test_all_steiner_prunes_to_empty():
    T = random_tree(50, 0.0, seed=1)
    P, m = prune(T)
    assert len(P) == 0 and m.to_old.size == 0


def test_chain_example():
    # rt(S) - s(S) - {r1(R), r2(R)}
    T = RootedSteinerTree([-1, 0, 1, 1], [False, False, True, True])
    assert useful_set_brute(T) == {1} == oracles.useful_brute(T.parent.tolist(), T.required.tolist())
    P, m = prune(T)
    assert sorted(m.to_old.tolist()) == [1, 2, 3]
    assert m.to_old[P.root] == 1


def test_useful_set_examples():
    star = RootedSteinerTree([-1, 0, 0, 0], [True, True, False, True])
    assert useful_set_brute(star) == set()
    binary = RootedSteinerTree([-1, 0, 0, 1, 1, 2, 2], [False] * 3 + [True] * 4)
    assert useful_set_brute(binary) == {0, 1, 2}
    path = RootedSteinerTree(np.arange(6) - 1, [False, False, True, False, False, False])
    assert useful_set_brute(path) == set()


def test_prune_against_oracles():
    for T in corpus(150, max_n=200):
        P, m = prune(T)
        req = set(T.required_vertices().tolist())
        useful = oracles.useful_brute(T.parent.tolist(), T.required.tolist())
        assert useful == useful_set_brute(T)
        assert set(m.to_old.tolist()) == req | useful
        assert is_pruned(P)
        assert len(useful) <= max(0, len(req) - 1)
        if len(P):
            assert depth(P) <= len(req) - 1
        assert is_monotone_preserving_brute(T, P, m)
        # brute subsequence check on small trees
        if len(req) <= 25:
            par, par2 = T.parent.tolist(), P.parent.tolist()
            rl = sorted(req)
            for i, u in enumerate(rl):
                for v in rl[i + 1:]:
                    big = oracles.path_between(par, u, v)
                    small = [int(m.to_old[x]) for x in oracles.path_between(par2, int(m.to_new[u]), int(m.to_new[v]))]
                    it = iter(big)
                    assert all(x in it for x in small)


def test_linear_oracles_agree_with_pairwise():
    # the linear checks back the large acceptance corpus; here they are tied to
    # the pairwise definitions, including on deliberately broken trees
    rng = np.random.default_rng(7)
    caught = 0
    for T in corpus(300, max_n=60):
        par, req = T.parent.tolist(), T.required.tolist()
        assert oracles.useful_linear(par, req) == oracles.useful_brute(par, req)
        P, m = prune(T)
        to_old = m.to_old.tolist()
        assert oracles.monotone_preserving_linear(par, req, P.parent.tolist(), to_old)
        if len(P) < 3:
            continue
        for _ in range(4):
            par2, old2 = P.parent.tolist(), list(to_old)
            if rng.random() < 0.5:
                y = int(rng.integers(1, len(P)))
                below = set(oracles.postorder_subtree(par2, y))
                z = int(rng.choice([v for v in range(len(P)) if v not in below]))
                par2[y] = z
            else:
                i, j = rng.choice(len(P), 2, replace=False)
                if req[old2[i]] != req[old2[j]]:
                    continue
                old2[i], old2[j] = old2[j], old2[i]
            T2 = RootedSteinerTree(par2, [req[o] for o in old2])
            vm = VertexMap.from_kept(old2, len(T))
            brute = is_monotone_preserving_brute(T, T2, vm)
            lin = oracles.monotone_preserving_linear(par, req, par2, old2)
            assert brute or not lin  # linear pass implies pairwise pass
            caught += not brute
    assert caught > 50


def test_prune_preserves_lca_and_ancestry():
    for T in corpus(60):
        P, m = prune(T)
        req = T.required_vertices()
        if req.size < 2:
            continue
        rng = np.random.default_rng(len(T))
        for _ in range(30):
            u, v = rng.choice(req, 2, replace=False)
            assert m.to_old[lca_brute(P, m[int(u)], m[int(v)])] == lca_brute(T, int(u), int(v))


def test_prune_idempotent():
    for T in corpus(100):
        P, m = prune(T)
        P2, m2 = prune(P)
        assert P2.same_shape(P)
        assert np.array_equal(m2.to_old, np.arange(len(P)))
        comp = m.then(m2)
        assert np.array_equal(comp.to_old, m.to_old)


def test_prune_linear_work():
    for T in corpus(200, max_n=3000):
        counter = {}
        prune(T, counter)
        assert counter["work"] <= PRUNE_WORK_PER_VERTEX * len(T)


def test_pruned_root_children_shortcut():
    for T in corpus(150, max_n=60):
        P, _ = prune(T)
        if len(P) == 0 or len(P.children(P.root)) != 2:
            continue
        c1, c2 = P.children(P.root)
        edges = [(int(P.parent[v]), v) for v in range(len(P)) if P.parent[v] >= 0] + [(c1, c2)]
        assert monotone_diameter(P, edges).diameter <= P.required_size - 1
        tree_only = monotone_diameter(P, edges[:-1]).diameter
        assert tree_only <= P.required_size


def test_monotone_preserving_negative():
    # two branches with swapped subtrees
    T = RootedSteinerTree([-1, 0, 0, 1, 2], [False, False, False, True, True])
    T2 = RootedSteinerTree([-1, 0, 0, 2, 1], [False, False, False, True, True])
    assert is_monotone_preserving_brute(T, T, VertexMap.identity(5))
    assert not is_monotone_preserving_brute(T, T2, VertexMap.identity(5))


def test_tree_path_depth_lca():
    P5 = RootedSteinerTree(np.arange(5) - 1, np.ones(5, bool))
    assert tree_path(P5, 0, 4) == [0, 1, 2, 3, 4]
    assert tree_path(P5, 4, 0) == [4, 3, 2, 1, 0]
    binary = RootedSteinerTree([-1, 0, 0, 1, 1], np.ones(5, bool))
    assert lca_brute(binary, 3, 4) == 1
    assert depth(binary) == 2 and depth(RootedSteinerTree.empty()) == -1
    with pytest.raises(ValidationError):
        tree_path(P5, 0, 9)


def test_lca_index_matches_brute():
    for T in corpus(40, max_n=400):
        idx = LcaIndex(T)
        rng = np.random.default_rng(len(T))
        u = rng.integers(0, len(T), 200)
        v = rng.integers(0, len(T), 200)
        got = idx.lca(u, v)
        par = T.parent.tolist()
        assert got.tolist() == [oracles.lca(par, int(a), int(b)) for a, b in zip(u, v)]


@pytest.mark.parametrize("parent", [[-1, -1], [0, 0], [1, 0], [-1, 5]])
def test_malformed_trees(parent):
    with pytest.raises(ValidationError):
        RootedSteinerTree(parent, [True] * len(parent))


def test_children_order_default_ascending():
    T = RootedSteinerTree([-1, 0, 0, 0], [True] * 4)
    assert T.children(0) == [1, 2, 3]
    T2 = RootedSteinerTree([-1, 0, 0, 0], [True] * 4, children=[[3, 1, 2], [], [], []])
    assert T2.children(0) == [3, 1, 2]
    assert T2.preorder().tolist() == [0, 3, 1, 2]


def test_deep_path_no_recursion_limit():
    n = 200_000
    T = RootedSteinerTree(np.arange(n) - 1, np.r_[True, np.zeros(n - 2, bool), True])
    P, m = prune(T)
    assert len(P) == 2 and m.to_old.tolist() == [0, n - 1]
