import csv
import io
import re
import subprocess
import sys
from importlib import resources

import pytest

from paritybench.arena import serialize_game
from paritybench.cli import main

from conftest import small_games

EXAMPLE = str(resources.files("paritybench") / "data" / "example.gm")


def _winners(text):
    lines = [l.rstrip(";").split() for l in text.strip().splitlines()[1:]]
    return {int(f[0]): int(f[1]) for f in lines}


def test_solve_running_example(capsys):
    assert main(["solve", "--input", EXAMPLE, "--semantics", "min", "--stats"]) == 0
    out = capsys.readouterr()
    assert out.out.startswith("paritysol 6;")
    assert set(_winners(out.out).values()) == {0}
    assert "algorithm=apt" in out.err


def test_solve_odd_loop(tmp_path, capsys):
    path = tmp_path / "g.gm"
    path.write_text("parity 0;\n0 1 0 0;\n")
    assert main(["solve", "-i", str(path), "--semantics", "min"]) == 0
    assert _winners(capsys.readouterr().out) == {0: 1}


def test_solve_from_stdin(monkeypatch, capsys):
    monkeypatch.setattr(sys, "stdin", io.StringIO("parity 0;\n0 2 1 0;\n"))
    assert main(["solve", "--semantics", "min"]) == 0
    assert _winners(capsys.readouterr().out) == {0: 0}


def test_solve_algorithms_agree(tmp_path, capsys):
    assert main(["generate", "-n", "40", "-k", "4", "--seed", "3", "--count", "3",
                 "--degree", "1:4", "--out-dir", str(tmp_path)]) == 0
    capsys.readouterr()
    for path in sorted(tmp_path.glob("*.gm")):
        cols = []
        for alg in ("re", "apt", "sp"):
            out = tmp_path / f"{path.stem}.{alg}.sol"
            assert main(["solve", "-i", str(path), "-a", alg, "-o", str(out)]) == 0
            cols.append(_winners(out.read_text()))
        assert cols[0] == cols[1] == cols[2]
        assert main(["solve", "-i", str(path), "--preprocess", "all"]) == 0
        assert _winners(capsys.readouterr().out) == cols[0]


def test_generate_forced_game(tmp_path, capsys):
    assert main(["generate", "--nodes", "1", "--priorities", "1", "--seed", "0",
                 "--out-dir", str(tmp_path)]) == 0
    line = capsys.readouterr().out.strip()
    path = tmp_path / "uniform_n1_k1_s0_0.gm"
    assert line.startswith(str(path))
    assert path.read_text() == "parity 0;\n0 0 " + path.read_text().split()[4] + " 0;\n"


def test_generate_deterministic(tmp_path, capsys):
    for sub in ("a", "b"):
        assert main(["generate", "-n", "30", "-k", "3", "--seed", "11", "--count", "2",
                     "--out-dir", str(tmp_path / sub)]) == 0
    for f in (tmp_path / "a").iterdir():
        assert f.read_bytes() == (tmp_path / "b" / f.name).read_bytes()


def test_generate_family_manifest(tmp_path, capsys):
    assert main(["generate", "--family", "exp-e", "--priorities", "7",
                 "--degree", "1:3", "--out-dir", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert "\tn=1097\t" in out and "exp-e_n1097_k7_s0_0.gm" in out


def test_generate_invalid_spec(tmp_path, capsys):
    assert main(["generate", "-n", "0", "-k", "1", "--out-dir", str(tmp_path)]) == 2
    assert main(["generate", "--family", "exp10", "-k", "30", "--out-dir", str(tmp_path)]) == 2


def _csv_rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_bench_smoke_csv(tmp_path, capsys):
    out = tmp_path / "b.csv"
    summary = tmp_path / "s.csv"
    assert main(["bench", "--algorithms", "apt,re", "--nodes", "4", "--priorities", "2",
                 "--instances", "3", "--csv", str(out), "--summary-csv", str(summary)]) == 0
    rows = _csv_rows(out)
    assert len(rows) == 6 and {r["status"] for r in rows} == {"ok"}
    assert "mean_ms" in capsys.readouterr().out
    assert summary.read_text().startswith("family,n,k,algorithm")


def test_bench_timeout_csv(tmp_path, capsys):
    out = tmp_path / "t.csv"
    assert main(["bench", "--nodes", "2000", "--instances", "1", "--timeout", "0.000001",
                 "--csv", str(out)]) == 0
    rows = _csv_rows(out)
    assert len(rows) == 3
    assert all(r["status"] == "timeout" and r["time_ms"] == "" and r["digest"] == ""
               for r in rows)


def test_bench_csv_to_stdout(capsys):
    assert main(["bench", "--algorithms", "apt", "-n", "5", "--instances", "2"]) == 0
    out = capsys.readouterr()
    assert out.out.splitlines()[0].startswith("seed,family")
    assert "mean_ms" in out.err


def test_bench_mismatch_exit(tmp_path, monkeypatch, capsys):
    import numpy as np
    from paritybench import bench
    from paritybench.arena import SolveResult

    def wrong(game, budget=None):
        n = game.node_count
        return SolveResult(w0=np.ones(n, bool), w1=np.zeros(n, bool), algorithm="wrong")

    monkeypatch.setitem(bench.SOLVERS, "sp", wrong)
    code = main(["bench", "--algorithms", "apt,sp", "-n", "8", "-k", "3", "--instances", "10",
                 "--dump-dir", str(tmp_path), "--csv", str(tmp_path / "x.csv")])
    assert code == 5
    err = capsys.readouterr().err
    assert str(tmp_path) in err and list(tmp_path.glob("*.gm"))


def test_verify_running_example(capsys):
    assert main(["verify", "-i", EXAMPLE, "--semantics", "min", "--against", "apt,re"]) == 0
    assert capsys.readouterr().out.startswith("ok:")


def test_verify_solution_and_corruption(tmp_path, capsys):
    sol = tmp_path / "example.sol"
    assert main(["solve", "-i", EXAMPLE, "--semantics", "min", "-a", "re", "-o", str(sol)]) == 0
    assert main(["verify", "-i", EXAMPLE, "--semantics", "min", "--solution", str(sol)]) == 0
    lines = sol.read_text().splitlines()
    assert lines[3].startswith("2 0")
    lines[3] = re.sub(r"^2 0", "2 1", lines[3])
    bad = tmp_path / "bad.sol"
    bad.write_text("\n".join(lines) + "\n")
    capsys.readouterr()
    assert main(["verify", "-i", EXAMPLE, "--semantics", "min", "--solution", str(bad)]) == 5
    assert "node 2" in capsys.readouterr().err


def test_verify_rejects_losing_strategy(tmp_path, capsys):
    game = tmp_path / "g.gm"
    # node 0 (player 0) can stay on the even loop or move to the odd sink 1
    game.write_text("parity 1;\n0 2 0 0,1;\n1 1 0 1;\n")
    sol = tmp_path / "g.sol"
    sol.write_text("paritysol 1;\n0 0 1;\n1 1;\n")
    assert main(["verify", "-i", str(game), "--semantics", "min", "--solution", str(sol)]) == 5
    sol.write_text("paritysol 1;\n0 0 0;\n1 1;\n")
    assert main(["verify", "-i", str(game), "--semantics", "min", "--solution", str(sol)]) == 0


def test_verify_random_games(tmp_path, capsys):
    for j, g in small_games(100, seed=21):
        path = tmp_path / f"g{j}.gm"
        path.write_text(serialize_game(g))
        sem = "max" if g.semantics == "max" else "min"
        assert main(["verify", "-i", str(path), "--semantics", sem,
                     "--against", "apt,re,sp,oracle"]) == 0, j


def test_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.gm"
    bad.write_text("parity 1;\n0 1 0 5;\n")
    assert main(["solve", "-i", str(bad)]) == 2
    assert "line" in capsys.readouterr().err
    big = tmp_path / "big.gm"
    assert main(["generate", "-n", "13", "-k", "2", "--out-dir", str(tmp_path)]) == 0
    big = next(tmp_path.glob("uniform_n13*.gm"))
    assert main(["solve", "-i", str(big), "-a", "oracle"]) == 3
    assert main(["solve", "-i", str(tmp_path / "missing.gm")]) == 4
    assert main(["solve", "-i", EXAMPLE, "-o", str(tmp_path / "no" / "such" / "dir.sol")]) == 4
    with pytest.raises(SystemExit) as info:
        main(["solve", "--algorithm", "nope"])
    assert info.value.code == 2
    with pytest.raises(SystemExit):
        main(["verify", "-i", EXAMPLE])


def test_console_entry_point(tmp_path):
    done = subprocess.run([sys.executable, "-m", "paritybench.cli", "solve", "-i", EXAMPLE,
                           "--semantics", "min"], capture_output=True, text=True, check=False)
    assert done.returncode == 0 and done.stdout.startswith("paritysol")
