import subprocess
import sys

import numpy as np
import pytest

from sgcol.cli import main


def run_cli(args, tmp_path=None):
    main(args)


class TestNodesDump:
    def test_writes_csv(self, tmp_path):
        out = tmp_path / "nodes.csv"
        main(["nodes", "dump", "--family", "gauss-hermite", "--level", "2",
              "--out", str(out)])
        lines = out.read_text().splitlines()
        assert lines[0].startswith("#")
        assert lines[1] == "index,node,weight"
        assert len(lines) == 2 + 3

    def test_rejects_unknown_family(self):
        with pytest.raises(SystemExit):
            main(["nodes", "dump", "--family", "chebyshev", "--level", "1"])


class TestProfile:
    def test_delta_norms(self, tmp_path):
        out = tmp_path / "prof.csv"
        main(["profile", "delta-norms", "--family", "gaussian-leja",
              "--k-max", "4", "--out", str(out)])
        lines = out.read_text().splitlines()
        assert lines[1] == "k,max_detail_norm"
        ks = [int(ln.split(",")[0]) for ln in lines[2:]]
        assert ks == [1, 2, 3, 4]


class TestField:
    def test_paths(self, tmp_path):
        out = tmp_path / "paths.csv"
        main(["field", "paths", "--kind", "kl", "--q", "1", "--M", "100",
              "--samples", "3", "--seed", "5", "--grid-n", "8",
              "--out", str(out)])
        lines = out.read_text().splitlines()
        assert lines[1] == "x,path_0,path_1,path_2"
        assert len(lines) == 2 + 9

    def test_paths_deterministic(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for out in (a, b):
            main(["field", "paths", "--kind", "lc", "--M", "63",
                  "--samples", "2", "--seed", "11", "--grid-n", "16",
                  "--out", str(out)])
        assert a.read_text() == b.read_text()

    def test_kappa(self, tmp_path):
        out = tmp_path / "kappa.csv"
        main(["field", "kappa", "--p", "4", "--M", "1000", "--grid-n", "8",
              "--out", str(out)])
        lines = out.read_text().splitlines()
        assert lines[1] == "x,kappa"
        assert len(lines) == 2 + 7  # interior grid points only


class TestBench:
    def test_quad_csv(self, tmp_path):
        cfgfile = tmp_path / "exp.ini"
        cfgfile.write_text("[experiment]\nn_vars = 1\nw_max = 3\n")
        out = tmp_path / "quad.csv"
        main(["bench", "quad", "--config", str(cfgfile), "--out", str(out)])
        lines = out.read_text().splitlines()
        assert lines[0].startswith("# kind=quad")
        assert lines[1].split(",")[0] == "function"

    def test_pde_with_trace_and_set_dump(self, tmp_path):
        cfgfile = tmp_path / "exp.ini"
        cfgfile.write_text(
            "[experiment]\nbudget = 40\nmesh_n = 16\nn_ref = 20\n"
            "truncation = 10\nsigma = 1.0\n")
        out = tmp_path / "pde.csv"
        trace = tmp_path / "trace.csv"
        sets = tmp_path / "final.set"
        main(["bench", "pde", "--config", str(cfgfile), "--seed", "3",
              "--out", str(out), "--trace", str(trace),
              "--dump-set", str(sets)])
        assert out.read_text().splitlines()[1].split(",")[0] == "label"
        assert trace.read_text().splitlines()[1].split(",")[0] == "iteration"
        from sgcol.multiindex import MultiIndexSet
        back = MultiIndexSet.deserialize(sets.read_text())
        assert () in set(back)

    def test_determinism_including_parallel(self, tmp_path):
        cfgfile = tmp_path / "exp.ini"
        cfgfile.write_text(
            "[experiment]\nbudget = 40\nmesh_n = 16\nn_ref = 20\n"
            "truncation = 10\nsigma = 1.0\nworkers = 2\n")
        outs = []
        for name in ("a.csv", "b.csv"):
            out = tmp_path / name
            main(["bench", "pde", "--config", str(cfgfile), "--seed", "3",
                  "--out", str(out)])
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]

    def test_console_script_help(self):
        proc = subprocess.run([sys.executable, "-m", "sgcol.cli", "--help"],
                              capture_output=True, text=True)
        assert proc.returncode == 0
        assert "bench" in proc.stdout
