import math

import numpy as np
import pytest

from hopspanner.errors import CapacityError, DomainError
from hopspanner.slow_funcs import (AlphaEvaluator, ackermann_diag, alpha, alpha_prime, ceil_log2,
                                   get_evaluator, identity_suite, inverse_ackermann,
                                   inverse_ackermann_two)

from oracles import A, B, ackermann_brute, alpha_brute, alpha_prime_brute, ceil_log2_int

# values produced by tests/oracles.py and frozen here
FROZEN_ALPHA = {(2, 8): 3, (4, 1): 0, (3, 2): 0, (4, 2): 1, (0, 7): 4, (4, 65536): 4, (4, 65537): 5,
                (2, 9): 4, (3, 17): 3, (5, 10**6): 2, (6, 10**6): 4}
FROZEN_PRIME = {(2, 6): 4, (0, 7): 4, (6, 5): 3, (4, 100): 9, (2, 100): 13}
FROZEN_INV_ACK = {0: 0, 1: 1, 2: 1, 3: 2, 4: 2, 5: 3, 65536: 3, 65537: 4}


def test_oracle_unrolls_ackermann():
    assert [A(1, i) for i in range(5)] == [1, 2, 4, 8, 16]
    assert [A(2, i) for i in range(5)] == [1, 2, 4, 16, 65536]
    assert ackermann_brute(3) == A(2, 4) == 65536
    assert [B(1, i) for i in range(4)] == [2, 4, 16, 256]


@pytest.mark.parametrize("kn,value", sorted(FROZEN_ALPHA.items()))
def test_alpha_frozen(kn, value):
    assert alpha_brute(*kn) == value
    assert alpha(*kn) == value


@pytest.mark.parametrize("kn,value", sorted(FROZEN_PRIME.items()))
def test_alpha_prime_frozen(kn, value):
    assert alpha_prime_brute(*kn) == value
    assert alpha_prime(*kn) == value


def test_alpha_prime_n_small_branch():
    assert alpha_prime(6, 5) == alpha(6, 5)


@pytest.mark.parametrize("k", range(10))
def test_alpha_matches_recurrence_oracle(k):
    ev = get_evaluator()
    dense = ev.alpha_dense(k, 3000)
    assert dense.tolist() == [alpha_brute(k, n) for n in range(3001)]


@pytest.mark.parametrize("k", range(10))
def test_alpha_prime_matches_recurrence_oracle(k):
    ev = get_evaluator()
    dense = ev.alpha_prime_dense(k, 10**4)
    assert dense.tolist() == [alpha_prime_brute(k, n) for n in range(10**4 + 1)]


def test_closed_forms():
    for n in range(0, 5000):
        assert alpha(0, n) == -(-n // 2)
        assert alpha(1, n) == (math.isqrt(n - 1) + 1 if n else 0)
        assert alpha(2, n) == ceil_log2_int(n) == ceil_log2(n)
        assert alpha(3, n) == ceil_log2_int(ceil_log2_int(n))


@pytest.mark.parametrize("n,value", sorted(FROZEN_INV_ACK.items()))
def test_inverse_ackermann(n, value):
    brute = next(s for s in range(10) if ackermann_brute(s) >= n)
    assert brute == value
    assert inverse_ackermann(n) == value


def test_ackermann_diag_saturates():
    assert ackermann_diag(3) == 65536
    assert ackermann_diag(4) == 1 << 62


def test_inverse_ackermann_two():
    assert inverse_ackermann_two(2, 2) == 1
    for m in range(0, 5):
        assert inverse_ackermann_two(m, 1) == 1
    for n in range(2, 60):
        for m in range(n, 20 * n, n):
            assert inverse_ackermann_two(m, n) >= inverse_ackermann_two(m + n, n)
        assert inverse_ackermann_two(4 * n, n) >= inverse_ackermann_two(16 * n, n)
    with pytest.raises(DomainError):
        inverse_ackermann_two(3, 0)
    # A_s(0) = 1 for every s: no s reaches ceil(log n) >= 2
    with pytest.raises(DomainError):
        inverse_ackermann_two(0, 8)


def test_inverse_ackermann_two_brute():
    for n in range(1, 80):
        for m in range(0, 6 * n, 7):
            t = 4 * (-(-m // n))
            target = ceil_log2_int(n)
            if t == 0 and target > 1:
                continue
            brute = next(s for s in range(1, 10) if A(s, t) >= target)
            assert inverse_ackermann_two(m, n) == brute


def test_capacity_and_domain_errors():
    ev = AlphaEvaluator(max_n=100)
    with pytest.raises(CapacityError):
        ev.alpha(2, 101)
    with pytest.raises(DomainError):
        ev.alpha(-1, 3)


def test_monotone_and_shrinking():
    ev = get_evaluator()
    for k in range(0, 12):
        a = ev.alpha_dense(k, 20000)
        assert np.all(np.diff(a) >= 0)
        if k >= 2:
            p = ev.alpha_prime_dense(k, 20000)
            assert np.all(np.diff(p) >= 0)
            assert np.all(p[1:] < np.arange(1, 20001))
            assert np.all(a <= p) and np.all(p <= 2 * a + 4)


def test_identity_suite_passes():
    rep = identity_suite(12, 10**5)
    assert rep.passed, rep.failures()


def test_identity_suite_empty_range():
    assert identity_suite(0, 0).passed


def test_identity_suite_detects_corruption():
    ev = AlphaEvaluator(max_n=100)
    ev.alpha_memo[2] = tuple(x + 1 if i == 3 else x for i, x in enumerate(ev._alpha_table(2)))
    rep = identity_suite(2, 100, evaluator=ev)
    assert not rep.passed
    assert rep.failures()[0].counterexample is not None


def test_prime_table_built_out_of_order():
    # building alpha'_6 first recurses into alpha'_4 and alpha'_2 under the table lock
    ev = AlphaEvaluator(max_n=5000)
    assert ev.alpha_prime(6, 5000) == alpha_prime_brute(6, 5000)
