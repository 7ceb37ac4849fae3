"""Exact evaluation of the A_k / B_k hierarchy and its inverses.

Forward functions are only materialised up to a saturation ceiling, since the
inverses merely ask whether a value reaches ``n``.  ``alpha(k, n)`` bisects a
short table of forward values.  ``alpha_prime(k, n)`` is produced by a dense
bottom-up pass and then compressed to breakpoint tables.
"""

from __future__ import annotations

import bisect
import functools
import math
import threading
from dataclasses import dataclass, field

import numpy as np

from .errors import CapacityError, DomainError

CEILING = 1 << 62
DEFAULT_MAX_N = 1 << 20


def ceil_log2(n: int) -> int:
    """Ceiling of log2(n) on integers with the convention log 0 = 0."""
    if n <= 1:
        return 0
    return (n - 1).bit_length()


def _ceil_sqrt(n: int) -> int:
    if n <= 0:
        return 0
    return math.isqrt(n - 1) + 1


@functools.lru_cache(maxsize=None)
def _forward_table(kind: str, level: int, ceiling: int) -> tuple[int, ...]:
    """Values f(0), f(1), ... of A_level (kind 'A') or B_level (kind 'B'),
    stopping at the first value that reaches ``ceiling`` (stored saturated)."""
    base_step = (lambda x: min(2 * x, ceiling)) if kind == "A" else (lambda x: min(x * x, ceiling))
    start = 1 if kind == "A" else 2
    if level == 0:
        raise ValueError("level 0 is evaluated in closed form")
    lower = base_step if level == 1 else _table_apply(_forward_table(kind, level - 1, ceiling), ceiling)
    out = [start]
    while out[-1] < ceiling:
        out.append(min(lower(out[-1]), ceiling))
    return tuple(out)


def _table_apply(table: tuple[int, ...], ceiling: int):
    def f(x: int) -> int:
        return table[x] if x < len(table) else ceiling
    return f


def forward(kind: str, level: int, x: int, ceiling: int = CEILING) -> int:
    """Saturated A_level(x) or B_level(x)."""
    if level == 0:
        return min(2 * x, ceiling) if kind == "A" else min(x * x, ceiling)
    return _table_apply(_forward_table(kind, level, ceiling), ceiling)(x)


class _BreakpointTable:
    """Monotone step function stored as (start, value) breakpoints."""

    __slots__ = ("starts", "values")

    def __init__(self, dense: np.ndarray):
        change = np.flatnonzero(np.diff(dense)) + 1
        starts = np.concatenate(([0], change))
        self.starts = starts.astype(np.int64)
        self.values = dense[starts].astype(np.int64)

    def __call__(self, n: int) -> int:
        i = int(np.searchsorted(self.starts, n, side="right")) - 1
        return int(self.values[i])

    def dense(self, upto: int) -> np.ndarray:
        idx = np.searchsorted(self.starts, np.arange(upto + 1), side="right") - 1
        return self.values[idx]


@dataclass
class AlphaEvaluator:
    """Evaluates alpha_k / alpha'_k on [0, max_n].  Tables are built lazily per k
    under a lock; once built they are never mutated."""

    max_n: int = DEFAULT_MAX_N
    ceiling: int = CEILING
    alpha_memo: dict = field(default_factory=dict, repr=False)
    alpha_prime_memo: dict = field(default_factory=dict, repr=False)
    _lock: threading.RLock = field(default_factory=threading.RLock, repr=False, compare=False)  # table builds recurse on k - 2

    def __post_init__(self):
        if self.max_n < 0:
            raise DomainError("max_n must be non-negative")
        if self.max_n > self.ceiling:
            raise CapacityError("max_n above the saturation ceiling")

    def _check(self, k: int, n: int) -> None:
        if k < 0 or n < 0:
            raise DomainError(f"alpha arguments must be non-negative, got k={k}, n={n}")
        if n > self.max_n:
            raise CapacityError(f"n={n} exceeds evaluator capacity max_n={self.max_n}",
                                {"n": n, "max_n": self.max_n})

    # -- alpha_k ---------------------------------------------------------
    def _alpha_table(self, k: int) -> tuple[int, ...]:
        table = self.alpha_memo.get(k)
        if table is None:
            kind, level = ("A", k // 2) if k % 2 == 0 else ("B", k // 2)
            table = _forward_table(kind, level, self.ceiling)
            self.alpha_memo[k] = table
        return table

    def alpha(self, k: int, n: int) -> int:
        self._check(k, n)
        if k == 0:
            return (n + 1) // 2
        if k == 1:
            return _ceil_sqrt(n)
        return bisect.bisect_left(self._alpha_table(k), n)

    def alpha_dense(self, k: int, upto: int | None = None) -> np.ndarray:
        upto = self.max_n if upto is None else upto
        self._check(k, upto)
        ns = np.arange(upto + 1, dtype=np.int64)
        if k == 0:
            return (ns + 1) // 2
        if k == 1:
            return _vec_ceil_sqrt(ns)
        table = np.array(self._alpha_table(k), dtype=np.int64)
        return np.searchsorted(table, ns, side="left").astype(np.int64)

    # -- alpha'_k --------------------------------------------------------
    def _prime_table(self, k: int) -> _BreakpointTable:
        table = self.alpha_prime_memo.get(k)
        if table is not None:
            return table
        with self._lock:
            if k not in self.alpha_prime_memo:
                self.alpha_prime_memo[k] = _BreakpointTable(self._build_prime_dense(k))
        return self.alpha_prime_memo[k]

    def _build_prime_dense(self, k: int) -> np.ndarray:
        n_max = self.max_n
        prev = self.alpha_dense(k - 2, n_max) if k - 2 < 2 else self._prime_table(k - 2).dense(n_max)
        out = np.empty(n_max + 1, dtype=np.int64)
        head = min(k + 1, n_max)
        out[: head + 1] = self.alpha_dense(k, head)
        lo = k + 2
        while lo <= n_max:
            # every argument alpha'_{k-2}(n) for n < hi is already final
            hi = min(int(np.searchsorted(prev, lo, side="left")), n_max + 1)
            if hi <= lo:
                raise AssertionError("alpha'_{k-2} is not shrinking; table build cannot proceed")
            out[lo:hi] = 2 + out[prev[lo:hi]]
            lo = hi
        return out

    def alpha_prime(self, k: int, n: int) -> int:
        self._check(k, n)
        if k < 2:
            return self.alpha(k, n)
        if n <= k + 1:
            return self.alpha(k, n)
        return self._prime_table(k)(n)

    def alpha_prime_dense(self, k: int, upto: int | None = None) -> np.ndarray:
        upto = self.max_n if upto is None else upto
        self._check(k, upto)
        if k < 2:
            return self.alpha_dense(k, upto)
        return self._prime_table(k).dense(upto)


_shared: AlphaEvaluator | None = None
_shared_lock = threading.Lock()


def get_evaluator(min_capacity: int = 0) -> AlphaEvaluator:
    """Process-wide evaluator whose capacity is at least ``min_capacity``."""
    global _shared
    with _shared_lock:
        if _shared is None or _shared.max_n < min_capacity:
            cap = DEFAULT_MAX_N
            while cap < min_capacity:
                cap *= 2
            _shared = AlphaEvaluator(max_n=cap)
        return _shared


def alpha(k: int, n: int) -> int:
    return get_evaluator().alpha(k, n)


def alpha_prime(k: int, n: int) -> int:
    return get_evaluator().alpha_prime(k, n)


def ackermann_diag(s: int, ceiling: int = CEILING) -> int:
    """A(s) = A_s(s), saturated at ``ceiling``."""
    return forward("A", s, s, ceiling)


def inverse_ackermann(n: int) -> int:
    """alpha(n) = min{s >= 0 : A_s(s) >= n}."""
    if n < 0:
        raise DomainError("n must be non-negative")
    s = 0
    while ackermann_diag(s, max(CEILING, n)) < n:
        s += 1
    return s


def inverse_ackermann_two(m: int, n: int) -> int:
    """alpha(m, n) = min{s >= 1 : A_s(4*ceil(m/n)) >= ceil(log n)}."""
    if n <= 0 or m < 0:
        raise DomainError("inverse_ackermann_two needs n >= 1 and m >= 0")
    t = 4 * (-(-m // n))
    target = ceil_log2(n)
    if t == 0 and target > 1:
        # A_s(0) = 1 for every s, so no s qualifies
        raise DomainError(f"no s satisfies A_s(0) >= {target} (m = 0, n = {n})")
    s = 1
    while forward("A", s, t, max(CEILING, target)) < target:
        s += 1
    return s


# ---------------------------------------------------------------------------
# identity suite


@dataclass
class IdentityResult:
    name: str
    passed: bool
    checked: int
    counterexample: dict | None = None


@dataclass
class IdentityReport:
    max_k: int
    max_n: int
    results: list[IdentityResult]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def failures(self) -> list[IdentityResult]:
        return [r for r in self.results if not r.passed]


def identity_suite(max_k: int, max_n: int, evaluator: AlphaEvaluator | None = None) -> IdentityReport:
    """Check the hierarchy's identities for k in [0, max_k] and n in [0, max_n].

    Everything is vectorised over n.  ``evaluator`` may be supplied to audit a
    particular (possibly corrupted) instance.
    """
    if max_k < 0 or max_n < 0:
        raise DomainError("bounds must be non-negative")
    ev = evaluator or AlphaEvaluator(max_n=max(max_n, 16))
    if ev.max_n < max_n:
        raise CapacityError("evaluator capacity below max_n")
    ns = np.arange(max_n + 1, dtype=np.int64)
    top = max_k + 2
    A = {k: ev.alpha_dense(k, max_n) for k in range(top + 1)}
    P = {k: ev.alpha_prime_dense(k, max_n) for k in range(top + 1)}
    results: list[IdentityResult] = []

    def record(name, bad_mask, checked, describe):
        idx = np.flatnonzero(bad_mask)
        cex = describe(int(idx[0])) if idx.size else None
        results.append(IdentityResult(name, idx.size == 0, int(checked), cex))

    def per_k(name, ks, check):
        # check(k) -> (bad_mask, checked, describe); stops at the first failing k
        total = 0
        for k in ks:
            bad, checked, describe = check(k)
            total += int(checked)
            idx = np.flatnonzero(bad)
            if idx.size:
                results.append(IdentityResult(name, False, total, describe(int(idx[0])) | {"k": k}))
                return
        results.append(IdentityResult(name, True, total))

    ks = list(range(max_k + 1))
    ks2 = [k for k in ks if k >= 2]

    # k = 0, 1 are evaluated from their closed forms; k = 2, 3 come from tables
    closed = {2: _vec_ceil_log2(ns)}
    closed[3] = _vec_ceil_log2(closed[2])
    per_k("closed_forms_log", [k for k in ks if k in (2, 3)],
          lambda k: (A[k] != closed[k], max_n + 1, lambda i: {"n": i, "alpha": int(A[k][i]), "closed": int(closed[k][i])}))

    per_k("monotone_alpha", ks,
          lambda k: (np.diff(A[k]) < 0, max_n, lambda i: {"n": i + 1, "alpha(n-1)": int(A[k][i]), "alpha(n)": int(A[k][i + 1])}))
    per_k("monotone_alpha_prime", ks2,
          lambda k: (np.diff(P[k]) < 0, max_n, lambda i: {"n": i + 1, "alpha'(n-1)": int(P[k][i]), "alpha'(n)": int(P[k][i + 1])}))

    def shrink(table):
        def check(k):
            lo = 1 if k >= 2 else (2 if k == 0 else 3)
            bad = (table[k] >= ns) & (ns >= lo)
            return bad, max(0, max_n + 1 - lo), lambda i: {"n": i, "value": int(table[k][i])}
        return check

    per_k("strict_shrink_alpha", ks, shrink(A))
    per_k("strict_shrink_alpha_prime", ks, shrink(P))
    per_k("level_collapse_alpha", ks,
          lambda k: (A[k + 2] > A[k], max_n + 1, lambda i: {"n": i, "alpha(k+2)": int(A[k + 2][i]), "alpha(k)": int(A[k][i])}))
    per_k("level_collapse_alpha_prime", ks2,
          lambda k: (P[k + 2] > P[k], max_n + 1, lambda i: {"n": i, "alpha'(k+2)": int(P[k + 2][i]), "alpha'(k)": int(P[k][i])}))

    def recurrence(k):
        expect = np.empty_like(A[k])
        head = min(3, max_n + 1)
        expect[:head] = [0, 0, 0 if k % 2 else 1][:head]
        if max_n >= 3:
            expect[3:] = 1 + A[k][A[k - 2][3:]]
        return A[k] != expect, max_n + 1, lambda i: {"n": i, "alpha": int(A[k][i]), "expected": int(expect[i])}

    per_k("recurrence_alpha", ks2, recurrence)

    def prime_definition(k):
        expect = A[k].copy()
        if max_n >= k + 2:
            expect[k + 2:] = 2 + P[k][P[k - 2][k + 2:]]
        return P[k] != expect, max_n + 1, lambda i: {"n": i, "alpha'": int(P[k][i]), "expected": int(expect[i])}

    per_k("definition_alpha_prime", ks2, prime_definition)
    per_k("sandwich", ks,
          lambda k: ((A[k] > P[k]) | (P[k] > 2 * A[k] + 4), max_n + 1,
                     lambda i: {"n": i, "alpha": int(A[k][i]), "alpha'": int(P[k][i])}))

    if max_k >= 2:
        p2, p0 = P[2], P[0]
        bad = ((ns >= 1) & (p2 > ns - 1)) | ((ns >= 6) & (p2 > ns - 2))
        record("alpha_prime2_shrink", bad, max_n, lambda i: {"n": i, "alpha'_2": int(p2[i])})
        record("alpha_prime2_vs_alpha_prime0", (ns > 10) & (p2 > p0), max(0, max_n - 10),
               lambda i: {"n": i, "alpha'_2": int(p2[i]), "alpha'_0": int(p0[i])})
    if max_k >= 4:
        record("alpha_prime4_vs_alpha_prime2", P[4] > P[2], max_n + 1,
               lambda i: {"n": i, "alpha'_4": int(P[4][i]), "alpha'_2": int(P[2][i])})

    half = max_n // 2 - 2
    if half >= 0:
        small = ns[: half + 1]
        arg = 2 * (small + 2)
        per_k("alpha_doubling", ks,
              lambda k: (A[k][arg] >= 2 * (A[k][small] + 2), half + 1,
                         lambda i: {"n": i, "alpha(2(n+2))": int(A[k][arg[i]]), "alpha(n)": int(A[k][i])}))
        per_k("alpha_prime_doubling", ks,
              lambda k: (P[k][arg] > 2 * (A[k][small] + 2), half + 1,
                         lambda i: {"n": i, "alpha'(2(n+2))": int(P[k][arg[i]]), "alpha(n)": int(A[k][i])}))

    inv = _vec_inverse_ackermann(ns)
    levels = 2 * inv + 2
    col_a = np.zeros_like(ns)
    col_p = np.zeros_like(ns)
    for lv in np.unique(levels):
        mask = levels == lv
        col_a[mask] = ev.alpha_dense(int(lv), max_n)[mask]
        col_p[mask] = ev.alpha_prime_dense(int(lv), max_n)[mask]
    record("collapse_alpha", col_a > 4, max_n + 1, lambda i: {"n": i, "level": int(levels[i]), "value": int(col_a[i])})
    record("collapse_alpha_prime", col_p > 12, max_n + 1, lambda i: {"n": i, "level": int(levels[i]), "value": int(col_p[i])})
    return IdentityReport(max_k, max_n, results)


def _vec_ceil_log2(ns: np.ndarray) -> np.ndarray:
    # exact while n < 2**53: frexp's exponent of (n - 1) is its bit length
    out = np.zeros_like(ns)
    big = ns > 1
    m = (ns[big] - 1).astype(np.float64)
    out[big] = np.frexp(m)[1]
    return out


def _vec_ceil_sqrt(ns: np.ndarray) -> np.ndarray:
    r = np.floor(np.sqrt(ns.astype(np.float64))).astype(np.int64)
    r -= (r * r > ns)
    r += (r * r < ns)
    return r


def _vec_inverse_ackermann(ns: np.ndarray) -> np.ndarray:
    out = np.zeros_like(ns)
    s = 0
    while True:
        a = ackermann_diag(s)
        out += (ns > a)
        if a >= int(ns.max(initial=0)):
            break
        s += 1
    return out
