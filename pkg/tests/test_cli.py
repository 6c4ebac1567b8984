import io
import subprocess
import sys

import pytest

from bsep.addressing import parse_addressing, verify
from bsep.cli import EXIT_BUDGET, EXIT_INVALID, EXIT_OK, EXIT_REJECTED, run
from bsep.graph import format_graph, parse_graph, cycle_graph, complete_graph, path_graph

from test_exact import LP_NEEDED


def call(*argv):
    buf = io.StringIO()
    code = run(list(argv), buf)
    return code, buf.getvalue()


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)

    return write


@pytest.fixture
def c6(files):
    return files("c6.txt", format_graph(cycle_graph([1] * 6)))


class TestExact:
    def test_c6(self, c6, files, tmp_path):
        out_path = str(tmp_path / "w.txt")
        code, out = call("exact", "--graph", c6, "--addr-out", out_path)
        assert code == EXIT_OK
        assert out.splitlines()[0] == "c = 3 (proven; lower bound rule = diameter)"
        assert verify(parse_addressing(open(out_path).read()), cycle_graph([1] * 6).distances)

    def test_kv_and_lambda(self, files):
        k4 = files("k4.txt", format_graph(complete_graph(4)))
        code, out = call("exact", "--graph", k4, "--lambda", "2", "--format", "kv")
        assert code == EXIT_OK
        assert "c_2=3" in out.splitlines() and "proven=yes" in out.splitlines()

    def test_bnb(self, files):
        g = files("g.txt", format_graph(LP_NEEDED))
        code, out = call("exact", "--graph", g, "--method", "bnb")
        assert code == EXIT_OK and out.startswith("c = 8 (proven; lower bound rule = branch and bound)")

    def test_budget_exit(self, files):
        g = files("g.txt", format_graph(LP_NEEDED))
        code, out = call("exact", "--graph", g, "--node-limit", "5")
        assert code == EXIT_BUDGET
        assert out.startswith("c in [7, 9] (not proven:")

    def test_budget_from_env(self, files, monkeypatch):
        g = files("g.txt", format_graph(LP_NEEDED))
        monkeypatch.setenv("BSEP_NODE_LIMIT", "5")
        assert call("exact", "--graph", g)[0] == EXIT_BUDGET
        # the flag wins over the environment
        assert call("exact", "--graph", g, "--node-limit", "1000000")[0] == EXIT_OK

    def test_budget_settled_by_construction(self, files):
        g = files("c8.txt", format_graph(cycle_graph([1] * 8)))
        code, out = call("exact", "--graph", g, "--node-limit", "1")
        assert code == EXIT_OK and out.startswith("c = 4 (proven")


class TestOtherCommands:
    def test_bounds(self, c6):
        code, out = call("bounds", "--graph", c6, "--format", "kv")
        lines = out.splitlines()
        assert code == EXIT_OK and "c.best_lower=3" in lines and "c.best_upper=3" in lines
        code, out = call("bounds", "--graph", c6)
        assert "best lower" in out

    def test_beta(self, files, tmp_path):
        k4 = files("k4.txt", format_graph(complete_graph(4)))
        code, out = call("beta", "--graph", k4)
        assert out.splitlines()[0] == "beta = 3/2, candidate mu = 2"
        lp_path = str(tmp_path / "k4.lp")
        code, out = call("beta", "--graph", k4, "--dual", "--format", "kv", "--export-lp", lp_path)
        assert "dual_value=3/2" in out.splitlines()
        assert "Maximize" in open(lp_path).read()

    def test_beta_size_limit(self, c6, monkeypatch):
        monkeypatch.setenv("BSEP_PRIMAL_CAP", "3")
        assert call("beta", "--graph", c6)[0] == EXIT_INVALID

    def test_address(self, files, tmp_path):
        p = files("p.txt", format_graph(path_graph([2, 3])))
        code, out = call("address", "--graph", p, "--scheme", "path")
        assert out.splitlines() == ["3 5", "00000", "00011", "11111"]
        code, out = call("address", "--graph", p, "--scheme", "cycle")
        assert code == EXIT_INVALID

    def test_address_auto(self, c6):
        code, out = call("address", "--graph", c6, "--lambda", "2")
        a = parse_addressing(out)
        assert a.length == 6 and verify(a, cycle_graph([1] * 6).distances, 2)

    def test_verify(self, files):
        k4 = files("k4.txt", format_graph(complete_graph(4)))
        addr = files("a.txt", "4 3\n000\n110\n101\n011\n")
        code, out = call("verify", "--graph", k4, "--addr", addr)
        assert code == EXIT_OK and out.startswith("valid: length 3")
        code, out = call("verify", "--graph", k4, "--addr", addr, "--lambda", "3")
        assert code == EXIT_REJECTED and out.startswith("invalid: vertices 0 and 1")

    def test_lee(self):
        code, out = call("lee", "17", "4", "19")
        assert code == EXIT_OK and out == "A^L ≤ 8 via A_2(68,38), lambda=2\n"
        code, out = call("lee", "17", "6", "27", "--format", "kv")
        assert "bound=18" in out.splitlines() and "lambda=2" in out.splitlines()

    def test_lee_no_bound(self):
        assert call("lee", "17", "6", "2")[0] == EXIT_INVALID

    def test_lee_table(self):
        code, out = call("lee-table", "--format", "kv")
        assert code == EXIT_OK and out.count(".match=yes") == 23

    def test_product(self, files, tmp_path):
        c3 = files("c3.txt", format_graph(cycle_graph([1, 1, 1])))
        c4 = files("c4.txt", format_graph(cycle_graph([1] * 4)))
        gpath, apath = str(tmp_path / "p.txt"), str(tmp_path / "a.txt")
        code, out = call("product", "--factors", c3, c4, "--certify", "--graph-out", gpath, "--addr-out", apath)
        assert code == EXIT_OK
        assert "c = 2 + 2 = 4 (proven;" in out and "beta = 7/2" in out
        g = parse_graph(open(gpath).read())
        assert g.n == 12 and verify(parse_addressing(open(apath).read()), g.distances)

    def test_product_uncertified(self, files):
        c5 = files("c5.txt", format_graph(cycle_graph([1] * 5)))
        code, out = call("product", "--factors", c5, c5, "--certify", "--format", "kv")
        assert code == EXIT_OK and "certified=unknown" in out.splitlines()


class TestErrors:
    def test_parse_error(self, files):
        bad = files("bad.txt", "3 2\n0 1 1\n0 1 2\n")
        assert call("bounds", "--graph", bad)[0] == EXIT_INVALID

    def test_disconnected(self, files):
        g = files("g.txt", "3 1\n0 1 1\n")
        assert call("exact", "--graph", g)[0] == EXIT_INVALID

    def test_missing_file(self):
        assert call("bounds", "--graph", "/nonexistent/graph.txt")[0] == EXIT_INVALID

    def test_usage(self):
        assert call()[0] == EXIT_INVALID
        assert call("exact", "--graph", "x", "--lambda", "0")[0] == EXIT_INVALID


def test_module_entry_point_reads_stdin():
    proc = subprocess.run(
        [sys.executable, "-m", "bsep", "exact", "--graph", "-", "--format", "kv"],
        input=format_graph(cycle_graph([1] * 5)),
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and "c=3" in proc.stdout.splitlines()
