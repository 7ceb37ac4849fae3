import numpy as np
import pytest

from hopspanner.errors import DomainError, ValidationError
from hopspanner.generators import random_tree
from hopspanner.slow_funcs import alpha, alpha_prime
from hopspanner.steiner_tree import RootedSteinerTree, prune
from hopspanner.tree_spanner import (ShortcutEdgeSet, SpannerStats, edge_budget, spanner_for_tree, threshold,
                                     tree_one_spanner)
from hopspanner.verify import audit_budgets, monotone_diameter

import oracles

WORK_PER_N_ALPHA = 17  # calibrated once (max 16.3 observed), frozen

# P_9, k = 2: the frozen edge set, checked against the brute monotone oracle below
P9_K2 = [(0, 1), (0, 3), (1, 2), (1, 3), (2, 3), (3, 4), (3, 5), (3, 6), (3, 7), (3, 8), (4, 5), (5, 6),
         (5, 7), (5, 8), (6, 7), (7, 8)]


def path(n):
    return RootedSteinerTree(np.arange(n) - 1, np.ones(n, bool))


def tree_edges(T):
    return {tuple(sorted(e)) for e in T.edges()}


def test_edge_budget_examples():
    assert edge_budget(9, 2) == 36
    assert edge_budget(0, 7) == 2
    assert edge_budget(100, 4) == 2 * 100 * alpha_prime(4, 100)
    assert edge_budget(100, 3) == (5 * 100 * alpha(3, 100)) // 2 + 2
    assert edge_budget(100, 5) == 3 * 100 * alpha_prime(5, 100) + 2
    with pytest.raises(DomainError):
        edge_budget(5, 1)


def test_audit_budgets_boundary():
    assert audit_budgets(9, 2, 36).passed
    assert not audit_budgets(9, 2, 37).passed
    assert audit_budgets(0, 5, 0).passed


def test_p9_k2():
    H = tree_one_spanner(path(9), 9, 2)
    assert sorted(H.as_set()) == P9_K2
    assert len(H) <= 9 * alpha(2, 9) == 36
    assert oracles.monotone_diameter_brute(list(range(-1, 8)), [True] * 9, P9_K2) == 2
    assert monotone_diameter(path(9), H).diameter == 2


def test_p100_k4():
    H = tree_one_spanner(path(100), 100, 4)
    assert len(H) <= 2 * 100 * alpha_prime(4, 100)
    assert monotone_diameter(path(100), H).diameter <= 4


def test_small_n_returns_tree_edges():
    for s in range(40):
        T, _ = prune(random_tree(30, 0.15, seed=s))
        n = T.required_size
        for k in range(max(2, n), max(2, n) + 3):
            assert tree_one_spanner(T, n, k).as_set() == tree_edges(T)


def test_n_equals_k_plus_one():
    hits = 0
    for s in range(300):
        T, _ = prune(random_tree(25, 0.2, seed=s))
        n = T.required_size
        k = n - 1
        if k < 2:
            continue
        H = tree_one_spanner(T, n, k).as_set()
        ch = T.children(T.root)
        expect = tree_edges(T)
        if len(ch) == 2:
            expect |= {tuple(sorted(ch))}
            hits += 1
        assert H == expect
    assert hits > 0


def test_errors():
    with pytest.raises(DomainError):
        tree_one_spanner(path(3), 3, 1)
    with pytest.raises(ValidationError):
        tree_one_spanner(path(3), 2, 2)
    T = RootedSteinerTree([-1, 0, 1], [True, False, True])  # vertex 1 is redundant
    with pytest.raises(ValidationError):
        tree_one_spanner(T, 2, 2)


def test_random_500_k5():
    T = random_tree(500, 0.5, seed=11)
    H, vmap = spanner_for_tree(T, 5)
    P, _ = prune(T)
    assert monotone_diameter(P, H).diameter <= 5
    assert monotone_diameter(T, vmap.to_old[H.edges]).diameter <= 5


def test_pruned_input_matches_wrapper():
    P, _ = prune(random_tree(200, 0.4, seed=2))
    H1 = tree_one_spanner(P, P.required_size, 4)
    H2, vmap = spanner_for_tree(P, 4)
    assert np.array_equal(H1.edges, H2.edges)
    assert np.array_equal(vmap.to_old, np.arange(len(P)))


def test_steiner_branches_dropped():
    # required path 0-1-2 plus a Steiner-only branch 3-4 under vertex 1
    T = RootedSteinerTree([-1, 0, 1, 1, 3], [True, True, True, False, False])
    H, vmap = spanner_for_tree(T, 2)
    used = set(vmap.to_old[H.edges].ravel().tolist())
    assert not used & {3, 4}


def test_budget_diameter_and_audit_corpus():
    shapes = ("random", "path", "binary", "caterpillar")
    for s in range(120):
        n = int(np.random.default_rng(s).integers(2, 70))
        T, _ = prune(random_tree(n, (0.3, 0.6, 1.0)[s % 3], seed=s, shape=shapes[s % 4]))
        m = T.required_size
        par, req = T.parent.tolist(), T.required.tolist()
        for k in range(2, 8):
            st = SpannerStats()
            H = tree_one_spanner(T, m, k, stats=st)
            assert len(H) <= edge_budget(m, k)
            assert st.epp_excess == 0 and st.shrink_fail == 0
            assert oracles.monotone_diameter_brute(par, req, H.as_set()) <= k


def test_work_is_near_linear():
    shapes = ("random", "path", "binary", "caterpillar")
    for s in range(200):
        n = int(np.random.default_rng(s).integers(1, 3000))
        P, _ = prune(random_tree(n, (0.1, 0.5, 0.9)[s % 3], seed=s, shape=shapes[s % 4]))
        m = P.required_size
        if m < 2:
            continue
        for k in (2, 3, 4, 5):
            st = SpannerStats()
            tree_one_spanner(P, m, k, stats=st)
            assert st.work <= WORK_PER_N_ALPHA * m * max(1, alpha(k, m))


def test_threshold_and_stats():
    st = SpannerStats()
    tree_one_spanner(path(1000), 1000, 6, stats=st)
    assert st.ell == threshold(1000, 6) == alpha_prime(4, 1000)
    assert st.budget == edge_budget(1000, 6) and st.edges <= st.budget


def test_alpha_threshold_variant():
    # the alpha_{k-2} threshold is kept only for comparison; at this scale it
    # does not exceed the alpha' edge count (the predicted blowup is asymptotic)
    counts = {}
    for variant in ("alpha_prime", "alpha"):
        H = tree_one_spanner(path(10_000), 10_000, 6, _ell_variant=variant)
        counts[variant] = len(H)
    assert counts == {"alpha_prime": 36850, "alpha": 29894}
    assert threshold(10_000, 6, "alpha") <= threshold(10_000, 6)
    H = tree_one_spanner(path(300), 300, 4, _ell_variant="alpha")
    assert monotone_diameter(path(300), H).diameter <= 4
    with pytest.raises(DomainError):
        tree_one_spanner(path(3), 3, 2, _ell_variant="beta")


def test_edge_set_canonical():
    H = ShortcutEdgeSet.from_pairs([(3, 1), (1, 3), (2, 0)])
    assert H.edges.tolist() == [[0, 2], [1, 3]]
    with pytest.raises(ValidationError):
        ShortcutEdgeSet.from_pairs([(1, 1)])
