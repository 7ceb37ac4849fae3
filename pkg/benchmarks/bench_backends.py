"""Time every kernel on the compiled and the pure-Python backend.

    python3 benchmarks/bench_backends.py [--scale 1.0] [--repeat 3]

Prints a TSV with one row per kernel: input size, best time per backend and
the speed-up.  Both backends receive identical inputs and their outputs are
compared before timing, so a row is only printed for agreeing backends.
"""

import argparse
import sys
import time

import numpy as np

from hopspanner import _kernels
from hopspanner.generators import random_points, random_tree
from hopspanner.geo import CoverConfig, _nearest_lower, distance_matrix
from hopspanner.geometry import GeometricGraph
from hopspanner.steiner_tree import prune
from hopspanner.tree_spanner import _ell_table, tree_one_spanner
from hopspanner.verify import _csr


def preorder_inputs(T):
    order = T.preorder()
    pos = np.empty(len(T), dtype=np.int64)
    pos[order] = np.arange(len(T))
    par_pos = np.where(T.parent[order] >= 0, pos[np.maximum(T.parent[order], 0)], -1).astype(np.int64)
    return order.astype(np.int64), par_pos, T.required[order].astype(np.uint8)


def cases(scale):
    n_tree = int(20000 * scale)
    T = random_tree(n_tree, 0.5, seed=1)
    _, par_pos, req = preorder_inputs(T)
    P, _ = prune(T)
    g_id, p_par, p_req = preorder_inputs(P)
    table = _ell_table(P.required_size, 4, "alpha_prime")
    yield "preorder", n_tree, (T.child_ptr, T.child_idx, T.root)
    yield "prune_preorder", n_tree, (par_pos, req)
    yield "decomp_preorder", n_tree, (par_pos, req, 30)
    yield "spanner_edges", len(P), (g_id, p_par, p_req, 4, table)

    n_small = max(20, int(2000 * scale))
    Ts, _ = prune(random_tree(n_small, 0.5, seed=2))
    H = tree_one_spanner(Ts, Ts.required_size, 3).edges
    nonroot = np.flatnonzero(Ts.parent >= 0)
    tp, ti = _csr(len(Ts), Ts.parent[nonroot], nonroot)
    hp, hi = _csr(len(Ts), H[:, 0], H[:, 1])
    sources = np.flatnonzero(Ts.required).astype(np.int64)
    yield "monotone_scan", len(Ts), (tp, ti, hp, hi, sources, Ts.required.astype(np.uint8))

    rng = np.random.default_rng(3)
    n_pts = max(20, int(600 * scale))
    pts = random_points(n_pts, 2, seed=4)
    pairs = rng.integers(0, n_pts, (6 * n_pts, 2))
    g = GeometricGraph.from_pairs(pts, pairs[pairs[:, 0] != pairs[:, 1]])
    ptr, idx, w = g.csr()
    yield "hop_limited", n_pts, (ptr, idx, w, 0, 4)
    yield "stretch_scan", n_pts, (ptr, idx, w, pts.coords, 3, np.arange(min(n_pts, 100), dtype=np.int64), 0.5, 1e-9)
    us = rng.integers(0, n_pts, 2000)
    vs = (us + 1 + rng.integers(0, n_pts - 1, 2000)) % n_pts
    yield "stretch_pairs", n_pts, (ptr, idx, w, pts.coords, 3, us.astype(np.int64), vs.astype(np.int64))

    n_cov = max(20, int(250 * scale))
    cp = random_points(n_cov, 2, seed=5)
    D = distance_matrix(cp.coords)
    cfg = CoverConfig()
    yield "greedy_cover", n_cov, (D, _nearest_lower(D, cfg.candidates), 0.5, cfg.extra_candidates, -1)


def same(a, b):
    if isinstance(a, tuple):
        return len(a) == len(b) and all(same(x, y) for x, y in zip(a, b))
    if isinstance(a, np.ndarray):
        return np.array_equal(a, b)
    if isinstance(a, dict):
        return a == b
    return a == b


def best_time(fn, args, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t)
    return best


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--scale", type=float, default=1.0)
    ap.add_argument("--repeat", type=int, default=3)
    a = ap.parse_args(argv)
    backends = _kernels.backends()
    if "cython" not in backends:
        print("compiled backend not available; only the Python kernels would run", file=sys.stderr)
        return 1
    py, cy = backends["python"], backends["cython"]
    print("kernel\tsize\tpython_ms\tcython_ms\tspeedup")
    for name, size, args in cases(a.scale):
        fp, fc = getattr(py, name), getattr(cy, name)
        if not same(fp(*args), fc(*args)):
            print(f"{name}\t{size}\tMISMATCH\tMISMATCH\t-")
            continue
        tp = best_time(fp, args, a.repeat)
        tc = best_time(fc, args, a.repeat)
        print(f"{name}\t{size}\t{tp * 1e3:.2f}\t{tc * 1e3:.3f}\t{tp / tc:.1f}", flush=True)
    return 0


if __name__ == "__main__":
    sys.exit(main())
