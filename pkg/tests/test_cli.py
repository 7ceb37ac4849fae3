import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from hopspanner import cli
from hopspanner.generators import random_points, random_tree
from hopspanner.geometry import GeometricGraph
from hopspanner.slow_funcs import alpha

import oracles

DATA = Path(__file__).parent / "data"


def run(capsys, *argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        import io
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = cli.main([str(a) for a in argv])
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def stats(text):
    return dict(line.split("=", 1) for line in text.splitlines() if "=" in line)


def test_alpha_examples(capsys):
    assert run(capsys, "alpha", "--k", 2, "--n", 8) == (0, "3\n", "")
    assert run(capsys, "alpha", "--k", 4, "--n", 100, "--prime")[1] == "9\n"


def test_alpha_table_golden(capsys):
    code, out, _ = run(capsys, "alpha-table", "--max-k", 3, "--max-n", 5)
    assert code == 0 and out == (DATA / "alpha3x5.tsv").read_text()
    for row in out.splitlines()[1:]:
        k, n, a, ap = map(int, row.split("\t"))
        assert a == oracles.alpha_brute(k, n)
        assert ap == oracles.alpha_prime_brute(k, n)


def test_version(capsys):
    code, out, _ = run(capsys, "--version")
    assert code == 0 and out.startswith("hopspanner ") and "format" in out


def test_generators_golden_and_deterministic(capsys):
    for argv, name in ((("gen-points", "--n", 6, "--d", 3, "--dist", "clustered", "--seed", 3), "gen6.points"),
                       (("gen-tree", "--n", 12, "--required-frac", 0.5, "--seed", 2), "gen12.tree")):
        first = run(capsys, *argv)[1]
        assert first == run(capsys, *argv)[1] == (DATA / name).read_text()


def test_round_trips():
    for name in ("p9.tree", "gen12.tree"):
        text = (DATA / name).read_text()
        assert cli.format_tree(cli.parse_tree(text)) == text
    text = (DATA / "gen6.points").read_text()
    P = cli.parse_points(text)
    assert cli.format_points(P) == text
    text = (DATA / "gen6_k2.edges").read_text()
    g = GeometricGraph.from_pairs(P, *cli.parse_weighted(text))
    assert cli.format_weighted(g) == text
    text = (DATA / "p9_k2.edges").read_text()
    assert cli.format_pairs(cli.parse_pairs(text)) == text
    # random round trips at full precision
    Q = random_points(50, 4, seed=1)
    assert np.array_equal(cli.parse_points(cli.format_points(Q)).coords, Q.coords)
    T = random_tree(70, 0.3, seed=5)
    assert cli.parse_tree(cli.format_tree(T)).same_shape(T)


def test_parse_errors(capsys, tmp_path):
    bad = tmp_path / "bad.tree"
    for text in ("", "2\n-1 R\n", "1\n-1 X\n", "x\n", "2\n-1 R\n5 R\n"):
        bad.write_text(text)
        code, _, err = run(capsys, "decomp", "--tree", bad, "--ell", 1)
        assert code == 1 and err
    pts = tmp_path / "p.txt"
    pts.write_text("0 0\n1\n")
    assert run(capsys, "build-euclidean", "--points", pts, "--k", 2, "--eps", 0.5)[0] == 1


def test_decomp_golden(capsys):
    code, out, _ = run(capsys, "decomp", "--tree", DATA / "p9.tree", "--ell", 2)
    assert code == 0 and out == (DATA / "p9_ell2.decomp").read_text()


def test_tree_spanner_build_and_verify(capsys, tmp_path):
    out = tmp_path / "h.edges"
    code, text, _ = run(capsys, "build-tree-spanner", "--tree", DATA / "p9.tree", "--k", 2, "--out", out)
    assert code == 0 and out.read_text() == (DATA / "p9_k2.edges").read_text()
    assert stats(text)["edges"] == "16" and stats(text)["budget"] == "36"
    code, text, _ = run(capsys, "verify-tree-spanner", "--tree", DATA / "p9.tree", "--edges", out, "--k", 2)
    assert code == 0 and stats(text)["status"] == "pass"


def test_tampered_tree_spanner_exit_2(capsys, tmp_path):
    lines = (DATA / "p9_k2.edges").read_text().splitlines()
    bad = tmp_path / "bad.edges"
    bad.write_text("\n".join(ln for ln in lines if ln != "3 8") + "\n")
    code, text, _ = run(capsys, "verify-tree-spanner", "--tree", DATA / "p9.tree", "--edges", bad, "--k", 2)
    s = stats(text)
    assert code == 2 and s["status"] == "fail" and "witness_u" in s and "witness_v" in s


def test_two_point_pipeline_subprocess():
    gen = subprocess.run([sys.executable, "-m", "hopspanner", "gen-points", "--n", "2", "--d", "2",
                          "--dist", "uniform", "--seed", "1"], capture_output=True, text=True, check=True)
    res = subprocess.run([sys.executable, "-m", "hopspanner", "build-euclidean", "--k", "4", "--eps", "0.5"],
                         input=gen.stdout, capture_output=True, text=True)
    assert res.returncode == 0 and "edges=1" in res.stdout.splitlines()


def test_build_euclidean_golden(capsys, tmp_path):
    out = tmp_path / "g.edges"
    code, text, _ = run(capsys, "build-euclidean", "--points", DATA / "gen6.points", "--k", 2, "--eps", 0.5,
                        "--out", out)
    assert code == 0
    assert text == (DATA / "gen6_k2.stats").read_text()
    assert out.read_text() == (DATA / "gen6_k2.edges").read_text()
    code, text, _ = run(capsys, "verify-euclidean", "--points", DATA / "gen6.points", "--edges", out,
                        "--k", 2, "--eps", 0.5)
    assert code == 0 and stats(text)["status"] == "pass"


def test_verify_euclidean_failures(capsys, tmp_path):
    lines = (DATA / "gen6_k2.edges").read_text().splitlines()
    short = tmp_path / "short.edges"
    short.write_text("\n".join(lines[:2]) + "\n")
    code, text, _ = run(capsys, "verify-euclidean", "--points", DATA / "gen6.points", "--edges", short,
                        "--k", 2, "--eps", 0.5)
    assert code == 2 and stats(text)["status"] == "fail"
    wrong = tmp_path / "wrong.edges"
    wrong.write_text("0 1 0.5\n")
    code, text, _ = run(capsys, "verify-euclidean", "--points", DATA / "gen6.points", "--edges", wrong,
                        "--k", 2, "--eps", 0.5)
    assert code == 2 and stats(text)["reason"] == "weight"


def test_capacity_error_exit_1(capsys, tmp_path):
    pts = tmp_path / "p.txt"
    pts.write_text(cli.format_points(random_points(150, 3, seed=0)))
    code, _, err = run(capsys, "build-euclidean", "--points", pts, "--k", 2, "--eps", 0.1, "--max-trees", 2)
    assert code == 1 and "histogram=" in err


def test_desteinerize_golden(capsys, tmp_path):
    out = tmp_path / "o.edges"
    code, text, _ = run(capsys, "desteinerize", "--points", DATA / "worked.points", "--edges",
                        DATA / "worked.edges", "--required-count", 2, "--out", out)
    s = stats(text)
    assert code == 0 and out.read_text() == (DATA / "worked_out.edges").read_text()
    assert (s["m_in"], s["m_out"], s["hop_preserved"]) == ("2", "1", "yes")


def test_usage_errors(capsys):
    assert run(capsys, "alpha", "--k", 2)[0] == 1
    assert run(capsys, "alpha", "--k", 2, "--n", 8, "--bogus")[0] == 1
    assert run(capsys, "nope")[0] == 1
    assert run(capsys, "build-euclidean", "--points", "/nonexistent/x", "--k", 2, "--eps", 0.5)[0] == 1
    assert run(capsys, "verify-tree-spanner", "--tree", "-", "--edges", "-", "--k", 2)[0] == 1


def test_stdin_input(capsys, monkeypatch):
    code, out, _ = run(capsys, "decomp", "--ell", 2, stdin=(DATA / "p9.tree").read_text(), monkeypatch=monkeypatch)
    assert code == 0 and out == (DATA / "p9_ell2.decomp").read_text()


def test_bench_empty_ladder(capsys):
    code, out, _ = run(capsys, "bench", "--ns", "")
    assert code == 0 and out == "n\tk\teps\tedges\tbuild_ms\talpha_k_n\tedges_per_n_alpha\n"


def test_bench_k2_budget(capsys):
    code, out, _ = run(capsys, "bench", "--mode", "tree", "--k", 2, "--min-exp", 6, "--max-exp", 11,
                       "--repeat", 1, "--shape", "path", "--required-frac", 1.0)
    rows = [r.split("\t") for r in out.splitlines()[1:]]
    assert len(rows) == 6
    for n, k, eps, edges, *_ in rows:
        assert eps == "-" and int(edges) <= int(n) * alpha(2, int(n))


def test_bench_euclidean_row(capsys):
    code, out, _ = run(capsys, "bench", "--mode", "euclidean", "--ns", "64", "--k", 3, "--repeat", 1)
    row = out.splitlines()[1].split("\t")
    assert code == 0 and row[:3] == ["64", "3", "0.5"] and int(row[3]) > 0
