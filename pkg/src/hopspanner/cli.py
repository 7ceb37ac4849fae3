"""Command-line front end and the on-disk formats.

Exit status: 0 success, 1 usage or input error, 2 verification violation.
Statistics are printed as ``key=value`` lines.  Any file argument may be
``-`` for standard input.
"""

from __future__ import annotations

import argparse
import io
import math
import sys
import time
from contextlib import contextmanager

import numpy as np

from . import FORMAT_VERSION, __version__
from .errors import CapacityError, HopSpannerError, ValidationError
from .geometry import GeometricGraph, PointSet
from .steiner_tree import RootedSteinerTree

EXIT_OK, EXIT_USAGE, EXIT_VIOLATION = 0, 1, 2
PRIME_CLI_LIMIT = 1 << 26  # alpha' tables are dense up to n


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: {message}")


# -- formats -----------------------------------------------------------------

@contextmanager
def _open_in(path: str):
    if path == "-":
        yield sys.stdin
    else:
        with open(path, encoding="utf-8") as fh:
            yield fh


@contextmanager
def _open_out(path: str | None):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            yield fh


def _lines(text: str) -> list[list[str]]:
    return [ln.split() for ln in text.splitlines() if ln.strip()]


def fmt_float(x: float) -> str:
    return "%.17g" % x


def parse_tree(text: str) -> RootedSteinerTree:
    rows = _lines(text)
    if not rows or len(rows[0]) != 1:
        raise ValidationError("tree file: first line must hold the vertex count")
    try:
        n = int(rows[0][0])
    except ValueError:
        raise ValidationError("tree file: bad vertex count") from None
    if n < 0 or len(rows) - 1 != n:
        raise ValidationError(f"tree file: expected {n} vertex lines, found {len(rows) - 1}")
    parent = np.empty(n, dtype=np.int64)
    required = np.empty(n, dtype=bool)
    for i, row in enumerate(rows[1:]):
        if len(row) != 2 or row[1] not in ("R", "S"):
            raise ValidationError(f"tree file: line {i + 2} must read 'parent R|S'")
        try:
            parent[i] = int(row[0])
        except ValueError:
            raise ValidationError(f"tree file: bad parent on line {i + 2}") from None
        required[i] = row[1] == "R"
    return RootedSteinerTree(parent, required)


def format_tree(T: RootedSteinerTree) -> str:
    col = np.where(T.required, "R", "S")
    return f"{len(T)}\n" + "".join(f"{p} {c}\n" for p, c in zip(T.parent.tolist(), col.tolist()))


def parse_pairs(text: str) -> np.ndarray:
    rows = _lines(text)
    try:
        arr = np.array([[int(a) for a in r] for r in rows], dtype=np.int64)
    except ValueError:
        raise ValidationError("edge file: ids must be integers") from None
    if rows and (arr.ndim != 2 or arr.shape[1] != 2):
        raise ValidationError("edge file: expected 'u v' per line")
    return arr.reshape(-1, 2)


def format_pairs(edges: np.ndarray) -> str:
    return "".join(f"{u} {v}\n" for u, v in np.asarray(edges).reshape(-1, 2).tolist())


def parse_points(text: str) -> PointSet:
    rows = _lines(text)
    if not rows:
        return PointSet(np.zeros((0, 1)))
    d = len(rows[0])
    if any(len(r) != d for r in rows):
        raise ValidationError(f"point file: every line needs {d} coordinates")
    try:
        return PointSet(np.array(rows, dtype=np.float64))
    except ValueError:
        raise ValidationError("point file: coordinates must be decimal numbers") from None


def format_points(points: PointSet) -> str:
    return "".join(" ".join(map(fmt_float, row)) + "\n" for row in points.coords.tolist())


def parse_weighted(text: str) -> tuple[np.ndarray, np.ndarray]:
    rows = _lines(text)
    if any(len(r) != 3 for r in rows):
        raise ValidationError("edge file: expected 'u v weight' per line")
    try:
        pairs = np.array([[int(r[0]), int(r[1])] for r in rows], dtype=np.int64).reshape(-1, 2)
        w = np.array([float(r[2]) for r in rows], dtype=np.float64)
    except ValueError:
        raise ValidationError("edge file: malformed number") from None
    return pairs, w


def format_weighted(g: GeometricGraph) -> str:
    return "".join(f"{u} {v} {fmt_float(w)}\n" for u, v, w in zip(g.u.tolist(), g.v.tolist(), g.w.tolist()))


def _read(path: str) -> str:
    with _open_in(path) as fh:
        return fh.read()


def _write(path: str | None, text: str) -> None:
    with _open_out(path) as fh:
        fh.write(text)


def _stats(out, **kv) -> None:
    for key, val in kv.items():
        if isinstance(val, bool):
            val = "yes" if val else "no"
        elif isinstance(val, float):
            val = fmt_float(val)
        elif isinstance(val, (tuple, list)):
            val = ",".join(map(str, val))
        out.write(f"{key}={val}\n")


def _load_graph(points: PointSet, text: str, strict: bool = True) -> GeometricGraph:
    pairs, w = parse_weighted(text)
    return GeometricGraph.from_pairs(points, pairs, w, validate=strict)


# -- subcommands -------------------------------------------------------------

def cmd_alpha(a, out):
    from .slow_funcs import AlphaEvaluator, get_evaluator
    if a.prime:
        if a.n > PRIME_CLI_LIMIT:
            raise CapacityError(f"--prime supports n <= {PRIME_CLI_LIMIT}")
        val = get_evaluator(a.n).alpha_prime(a.k, a.n)
    else:
        val = AlphaEvaluator(max_n=max(a.n, 0)).alpha(a.k, a.n)
    out.write(f"{val}\n")


def cmd_alpha_table(a, out):
    from .slow_funcs import get_evaluator
    ev = get_evaluator(a.max_n)
    out.write("k\tn\talpha\talpha_prime\n")
    for k in range(a.max_k + 1):
        al = ev.alpha_dense(k, a.max_n)
        ap = ev.alpha_prime_dense(k, a.max_n)
        out.write("".join(f"{k}\t{n}\t{x}\t{y}\n" for n, (x, y) in enumerate(zip(al.tolist(), ap.tolist()))))


def cmd_gen_tree(a, out):
    from .generators import random_tree
    out.write(format_tree(random_tree(a.n, a.required_frac, seed=a.seed, shape=a.shape)))


def cmd_decomp(a, out):
    from .decomp import compute_borders, decompose
    T = parse_tree(_read(a.tree))
    d = compute_borders(T, decompose(T, a.ell))
    _stats(out, n=T.required_size, ell=a.ell, cut=list(d.cut_vertices), subtrees=len(d.subtrees))
    for st, border in zip(d.subtrees, d.borders):
        _stats(out, size=st.tree.required_size, border=list(border))


def cmd_build_tree_spanner(a, out):
    from .tree_spanner import SpannerStats, spanner_for_tree
    T = parse_tree(_read(a.tree))
    stats = SpannerStats()
    edges, _ = spanner_for_tree(T, a.k, stats=stats)
    if a.out is not None:
        _write(a.out, format_pairs(edges.edges))
    _stats(out, n=stats.n, k=stats.k, edges=stats.edges, budget=stats.budget, ell=stats.ell)


def cmd_verify_tree_spanner(a, out):
    from .steiner_tree import prune
    from .tree_spanner import edge_budget
    from .verify import monotone_diameter
    T = parse_tree(_read(a.tree))
    pruned, vmap = prune(T)
    pairs = parse_pairs(_read(a.edges))
    if pairs.size and (pairs.min() < 0 or pairs.max() >= len(pruned)):
        raise ValidationError(f"edge endpoint outside the pruned tree (size {len(pruned)})")
    if pairs.size and np.any(pairs[:, 0] == pairs[:, 1]):
        raise ValidationError("self-loop in edge file")
    n = pruned.required_size
    m = int(np.unique(np.sort(pairs, axis=1), axis=0).shape[0]) if pairs.size else 0
    budget = edge_budget(n, a.k)
    rep = monotone_diameter(T, vmap.to_old[pairs] if pairs.size else pairs)
    ok = rep.diameter <= a.k and m <= budget
    diam = "inf" if rep.diameter == math.inf else int(rep.diameter)
    _stats(out, n=n, k=a.k, edges=m, budget=budget, diameter=diam, pairs=rep.pairs_checked)
    if rep.witness_pair is not None and rep.diameter > a.k:
        u, v = (int(vmap.to_new[x]) for x in rep.witness_pair)
        _stats(out, witness_u=u, witness_v=v)
    _stats(out, status="pass" if ok else "fail")
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_gen_points(a, out):
    from .generators import random_points
    out.write(format_points(random_points(a.n, a.d, dist=a.dist, seed=a.seed)))


def _cover_config(a):
    from .geo import CoverConfig
    return CoverConfig(strategy=a.strategy, max_trees=None if a.max_trees == 0 else a.max_trees,
                       separation=a.separation)


def _stretch(points, g, k, eps, pairs, seed):
    from .verify import stretch_report
    n = points.n
    limit = n if n * (n - 1) // 2 <= pairs else 0
    return stretch_report(points, g, k, eps, pair_budget=pairs, seed=seed, exhaustive_limit=limit)


def cmd_build_euclidean(a, out):
    from .geo import euclidean_spanner
    from .tree_spanner import edge_budget
    points = parse_points(_read(a.points))
    stats: dict = {}
    g = euclidean_spanner(points, a.k, a.eps, _cover_config(a), stats=stats)
    if a.out is not None:
        _write(a.out, format_weighted(g))
    rep = _stretch(points, g, a.k, a.eps, a.pairs, a.seed)
    _stats(out, n=points.n, k=a.k, eps=a.eps, trees=stats.get("trees", 1 if points.n else 0), edges=g.m,
           budget_per_tree=edge_budget(points.n, a.k), max_stretch_sampled=rep.max_stretch,
           pairs_sampled=rep.pairs_checked, strategy=a.strategy)


def cmd_verify_euclidean(a, out):
    points = parse_points(_read(a.points))
    g = _load_graph(points, _read(a.edges), strict=False)
    true_w = points.dist(g.u, g.v)
    bad = np.flatnonzero(np.abs(g.w - true_w) > 1e-9 * np.maximum(true_w, 1e-300))
    if bad.size:
        i = int(bad[0])
        _stats(out, status="fail", reason="weight", violation=(int(g.u[i]), int(g.v[i])))
        return EXIT_VIOLATION
    rep = _stretch(points, g, a.k, a.eps, a.pairs, a.seed)
    _stats(out, n=points.n, k=a.k, eps=a.eps, edges=g.m, pairs=rep.pairs_checked,
           exhaustive=rep.exhaustive, max_stretch=rep.max_stretch)
    if rep.max_pair is not None:
        _stats(out, max_pair=rep.max_pair)
    if rep.violating_pair is not None:
        _stats(out, violation=rep.violating_pair)
    _stats(out, status="pass" if rep.passed else "fail")
    return EXIT_OK if rep.passed else EXIT_VIOLATION


def cmd_desteinerize(a, out):
    from .desteinerize import AxisInstance, desteinerize, transfer_audit
    points = parse_points(_read(a.points))
    g = _load_graph(points, _read(a.edges))
    if not 0 <= a.required_count <= points.n:
        raise ValidationError(f"--required-count must lie in [0, {points.n}]")
    inst = AxisInstance.from_graph(g, np.arange(a.required_count))
    h = desteinerize(inst)
    if a.out is not None:
        _write(a.out, format_weighted(h))
    rep = transfer_audit(inst, samples=a.pairs, seed=a.seed, output=h)
    _stats(out, m_in=g.m, m_out=h.m, ratio=h.m / g.m if g.m else 0.0, hop_preserved=rep.hop_preserved,
           pairs_checked=rep.pairs_checked, stretch_before=rep.stretch_before, stretch_after=rep.stretch_after)
    return EXIT_OK if rep.passed else EXIT_VIOLATION


def _ladder(a) -> list[int]:
    if a.ns is not None:
        return [int(x) for x in a.ns.replace(",", " ").split()]
    return [1 << e for e in range(a.min_exp, a.max_exp + 1)]


def cmd_bench(a, out):
    from .slow_funcs import get_evaluator
    out.write("n\tk\teps\tedges\tbuild_ms\talpha_k_n\tedges_per_n_alpha\n")
    for n in _ladder(a):
        if a.mode == "tree":
            from .generators import random_tree
            from .tree_spanner import spanner_for_tree
            T = random_tree(n, a.required_frac, seed=a.seed, shape=a.shape)
            best = math.inf
            for _ in range(a.repeat):
                t0 = time.perf_counter()
                edges, _ = spanner_for_tree(T, a.k)
                best = min(best, time.perf_counter() - t0)
            size, m, eps = T.required_size, len(edges), "-"
        else:
            from .generators import random_points
            from .geo import euclidean_spanner
            P = random_points(n, a.d, dist=a.dist, seed=a.seed)
            best = math.inf
            for _ in range(a.repeat):
                t0 = time.perf_counter()
                g = euclidean_spanner(P, a.k, a.eps, _cover_config(a))
                best = min(best, time.perf_counter() - t0)
            size, m, eps = P.n, g.m, fmt_float(a.eps)
        al = get_evaluator(size).alpha(a.k, size)
        ratio = m / (size * al) if size and al else 0.0
        out.write(f"{n}\t{a.k}\t{eps}\t{m}\t{best * 1000:.3f}\t{al}\t{ratio:.6f}\n")
        out.flush()


# -- argument parsing --------------------------------------------------------

def _positive_float(s: str) -> float:
    x = float(s)
    if not x > 0 or not math.isfinite(x):
        raise argparse.ArgumentTypeError("must be a positive number")
    return x


def _nonneg_int(s: str) -> int:
    x = int(s)
    if x < 0:
        raise argparse.ArgumentTypeError("must be a non-negative integer")
    return x


def _add_cover_args(p):
    p.add_argument("--strategy", choices=("greedy", "contract"), default="greedy")
    p.add_argument("--max-trees", type=_nonneg_int, default=64, help="0 = no limit")
    p.add_argument("--separation", type=_positive_float, default=None)


def build_parser() -> argparse.ArgumentParser:
    from .generators import POINT_DISTS, TREE_SHAPES
    p = _Parser(prog="hopspanner", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"hopspanner {__version__} (format {FORMAT_VERSION})")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    s = sub.add_parser("alpha", help="print alpha_k(n) or alpha'_k(n)")
    s.add_argument("--k", type=_nonneg_int, required=True)
    s.add_argument("--n", type=_nonneg_int, required=True)
    s.add_argument("--prime", action="store_true")
    s.set_defaults(func=cmd_alpha)

    s = sub.add_parser("alpha-table", help="TSV of alpha and alpha' values")
    s.add_argument("--max-k", type=_nonneg_int, required=True)
    s.add_argument("--max-n", type=_nonneg_int, required=True)
    s.set_defaults(func=cmd_alpha_table)

    s = sub.add_parser("gen-tree", help="random Steiner tree")
    s.add_argument("--n", type=_nonneg_int, required=True)
    s.add_argument("--required-frac", type=float, default=0.5)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--shape", choices=TREE_SHAPES, default="random")
    s.set_defaults(func=cmd_gen_tree)

    s = sub.add_parser("decomp", help="cut vertices and subtrees at threshold ell")
    s.add_argument("--tree", default="-")
    s.add_argument("--ell", type=int, required=True)
    s.set_defaults(func=cmd_decomp)

    s = sub.add_parser("build-tree-spanner", help="shortcut edges for a tree")
    s.add_argument("--tree", default="-")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--out", default=None)
    s.set_defaults(func=cmd_build_tree_spanner)

    s = sub.add_parser("verify-tree-spanner", help="check hop diameter and edge budget")
    s.add_argument("--tree", required=True)
    s.add_argument("--edges", required=True)
    s.add_argument("--k", type=int, required=True)
    s.set_defaults(func=cmd_verify_tree_spanner)

    s = sub.add_parser("gen-points", help="random point set")
    s.add_argument("--n", type=_nonneg_int, required=True)
    s.add_argument("--d", type=int, default=2)
    s.add_argument("--dist", choices=POINT_DISTS, default="uniform")
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_gen_points)

    s = sub.add_parser("build-euclidean", help="(1+eps)-spanner with hop diameter k")
    s.add_argument("--points", default="-")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--eps", type=_positive_float, required=True)
    s.add_argument("--out", default=None)
    s.add_argument("--pairs", type=_nonneg_int, default=10000, help="stretch sample size")
    s.add_argument("--seed", type=int, default=0)
    _add_cover_args(s)
    s.set_defaults(func=cmd_build_euclidean)

    s = sub.add_parser("verify-euclidean", help="check k-hop stretch")
    s.add_argument("--points", required=True)
    s.add_argument("--edges", required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--eps", type=_positive_float, required=True)
    s.add_argument("--pairs", type=_nonneg_int, default=10**6)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_verify_euclidean)

    s = sub.add_parser("desteinerize", help="remove Steiner points from an axis spanner")
    s.add_argument("--points", required=True)
    s.add_argument("--edges", required=True)
    s.add_argument("--required-count", type=_nonneg_int, required=True)
    s.add_argument("--out", default=None)
    s.add_argument("--pairs", type=_nonneg_int, default=5000, help="audited required pairs")
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_desteinerize)

    s = sub.add_parser("bench", help="size ladder timing as TSV")
    s.add_argument("--mode", choices=("tree", "euclidean"), default="tree")
    s.add_argument("--ns", default=None, help="explicit sizes, comma separated")
    s.add_argument("--min-exp", type=_nonneg_int, default=10)
    s.add_argument("--max-exp", type=_nonneg_int, default=16)
    s.add_argument("--k", type=int, default=4)
    s.add_argument("--eps", type=_positive_float, default=0.5)
    s.add_argument("--d", type=int, default=2)
    s.add_argument("--dist", choices=POINT_DISTS, default="uniform")
    s.add_argument("--shape", choices=TREE_SHAPES, default="random")
    s.add_argument("--required-frac", type=float, default=0.5)
    s.add_argument("--repeat", type=int, default=3)
    s.add_argument("--seed", type=int, default=0)
    _add_cover_args(s)
    s.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    buf = io.StringIO()
    try:
        args = parser.parse_args(argv)
        if sum(getattr(args, f, None) == "-" for f in ("tree", "edges", "points")) > 1:
            raise UsageError("only one input may be read from standard input")
        status = args.func(args, buf)
    except SystemExit as exc:  # --help / --version
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        for key, val in exc.diagnostics.items():
            print(f"{key}={val}", file=sys.stderr)
        return EXIT_USAGE
    except (HopSpannerError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        sys.stdout.write(buf.getvalue())
        sys.stdout.flush()
    return EXIT_OK if status is None else status


if __name__ == "__main__":
    sys.exit(main())
