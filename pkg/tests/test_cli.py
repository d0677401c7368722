from __future__ import annotations

import json
import shutil
import subprocess

import pytest

from congested_sp.cli import main, parse_nodes

D4 = "directed 4 4\n0 1 1\n1 2 1\n2 3 1\n3 0 1\n"
C4 = "undirected 4 4\n0 1 1\n1 2 1\n2 3 1\n0 3 1\n"


@pytest.fixture
def files(tmp_path):
    def write(name: str, text: str) -> str:
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return write


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestSolve:
    def test_solve_spc(self, capsys, files):
        inst = files("i.txt", D4 + "pairs 2 2\n0 2\n1 3\n")
        code, out, _ = run(capsys, "solve-spc", inst)
        assert code == 0
        assert out == "solved\npath 0: 0 1 2\npath 1: 1 2 3\ncongestion: 0:1 1:2 2:2 3:1\n"

    def test_infeasible(self, capsys, files):
        inst = files("i.txt", D4 + "pairs 2 1\n0 2\n1 3\n")
        assert run(capsys, "solve-spc", inst)[:2] == (1, "infeasible\n")

    def test_json(self, capsys, files):
        inst = files("i.txt", C4 + "pairs 2 2\n0 2\n1 3\n")
        code, out, _ = run(capsys, "solve-spc", inst, "--method", "reduction", "--format", "json")
        doc = json.loads(out)
        assert code == 0 and set(doc) == {"status", "paths", "congestion", "trace", "case_log"}
        assert doc["status"] == "solved" and doc["paths"] == [[0, 1, 2], [1, 0, 3]]
        assert doc["congestion"] == {"0": 2, "1": 2, "2": 1, "3": 1}

    def test_budget_exit_code(self, capsys, files):
        inst = files("i.txt", D4 + "pairs 2 1\n0 2\n1 3\n")
        assert run(capsys, "solve-spc", inst, "--budget", "1")[0] == 3

    def test_graph_file_reference(self, capsys, files):
        files("g.txt", C4)
        inst = files("i.txt", "g.txt\npairs 1 1\n0 2\n")
        assert run(capsys, "solve-spc", inst)[0] == 0

    def test_solve_dsp(self, capsys, files):
        ok = files("ok.txt", C4 + "pairs 2 1\n0 1\n3 2\n")
        assert run(capsys, "solve-dsp", ok)[0] == 0
        bad = files("bad.txt", C4 + "pairs 2 2\n0 1\n3 2\n")
        assert run(capsys, "solve-dsp", bad)[0] == 2


class TestUsageErrors:
    def test_missing_file(self, capsys):
        code, _, err = run(capsys, "solve-spc", "/nonexistent/file")
        assert code == 2 and "cannot read" in err

    def test_bad_format(self, capsys, files):
        assert run(capsys, "solve-spc", files("i.txt", "directed 2 1\n0 1 0\npairs 1 1\n0 1\n"))[0] == 2

    def test_argparse_errors(self, capsys):
        assert run(capsys)[0] == 2
        assert run(capsys, "verify", "everything")[0] == 2

    def test_help(self, capsys):
        assert run(capsys, "--help")[0] == 0

    def test_parse_nodes(self):
        assert parse_nodes("1,2 3") == [1, 2, 3]


class TestMerge:
    def test_default_solution_and_targets(self, capsys, files):
        inst = files("i.txt", C4 + "pairs 2 2\n0 2\n1 3\n")
        code, out, _ = run(capsys, "merge", inst)
        assert code == 0 and out.startswith("W: 0 1\ncovering path: 0\n")

    def test_explicit_paths_with_swap(self, capsys, files):
        g = "undirected 7 7\n0 1 1\n1 2 1\n2 3 1\n3 4 1\n2 6 1\n6 4 1\n4 5 1\n"
        inst = files("i.txt", g + "pairs 2 2\n0 4\n0 4\n")
        paths = files("p.txt", "0 1 2 6 4\n0 1 2 3 4\n")
        code, out, _ = run(capsys, "merge", inst, "--paths", paths, "--W", "0,1,3,4", "--format", "json")
        doc = json.loads(out)
        assert code == 0 and doc["trace"] == ["swap p=0 q=1 a=1 b=4"]
        assert doc["paths"][0] == [0, 1, 2, 3, 4]

    def test_refuses_cyclic_digraph(self, capsys, files):
        inst = files("i.txt", D4 + "pairs 2 2\n0 2\n1 3\n")
        assert run(capsys, "merge", inst)[0] == 2

    def test_supplier_exhausted(self, capsys, files):
        inst = files("i.txt", C4 + "pairs 2 2\n0 1\n1 2\n")
        paths = files("p.txt", "0 1\n1 2\n")
        assert run(capsys, "merge", inst, "--paths", paths, "--W", "0,2")[0] == 1


class TestRoundtrip:
    def test_cycle(self, capsys, files):
        g = files("g.txt", D4)
        code, out, _ = run(capsys, "roundtrip", g, "--W", "0,2")
        assert code == 0 and out.startswith("single path")

    def test_two_paths_json(self, capsys, files):
        edges = "".join(f"{i} {(i + 1) % 16} 1\n{(i + 1) % 16} {i} 11\n" for i in range(16))
        g = files("g.txt", f"directed 16 32\n{edges}")
        code, out, _ = run(capsys, "roundtrip", g, "--format", "json")
        doc = json.loads(out)
        assert code == 0 and doc["case_log"][-1].startswith("iter=14 case=1")


class TestCounterexample:
    def test_cycle(self, capsys):
        code, out, _ = run(capsys, "counterexample", "cycle")
        assert code == 0 and "precondition_holds: true" in out

    def test_directed_cycle_json(self, capsys):
        code, out, _ = run(capsys, "counterexample", "appendix-b", "--format", "json")
        doc = json.loads(out)
        assert code == 0 and doc["status"] == "verified" and len(doc["paths"]) == 8

    def test_falsified(self, capsys):
        assert run(capsys, "counterexample", "cycle", "--n", "8", "--a", "5", "--set-size", "8")[0] == 1


class TestVerify:
    def test_small_campaign(self, capsys):
        code, out, _ = run(capsys, "verify", "swaps", "--trials", "5", "--seed", "3")
        assert code == 0 and out.startswith("swap-algebra: 5/5 passed (seed 3)")


class TestDotAndReplay:
    def test_export_dot(self, capsys, files, tmp_path):
        g = files("g.txt", C4)
        paths = files("p.txt", "0 1 2\n")
        target = tmp_path / "out.dot"
        assert run(capsys, "export-dot", g, "--paths", paths, "--W", "0,2", "-o", str(target))[0] == 0
        text = target.read_text()
        assert text.startswith("graph G {") and "doublecircle" in text and 'label="P0"' in text

    def test_replay(self, capsys, files):
        g = files("g.txt", C4)
        paths = files("p.txt", "0 1 2\n0 3 2\n")
        trace = files("t.txt", "swap p=0 q=1 a=0 b=2\n")
        code, out, _ = run(capsys, "replay", g, "--paths", paths, "--trace", trace)
        assert code == 0 and out == "0 3 2\n0 1 2\n"

    def test_replay_bad_swap(self, capsys, files):
        g = files("g.txt", C4)
        paths = files("p.txt", "0 1 2\n0 3 2\n")
        trace = files("t.txt", "swap p=0 q=1 a=1 b=2\n")
        assert run(capsys, "replay", g, "--paths", paths, "--trace", trace)[0] == 1


@pytest.mark.skipif(shutil.which("congested-sp") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["congested-sp", "counterexample", "appendix-b"], capture_output=True, text=True)
    assert proc.returncode == 0 and "unique_solution: true" in proc.stdout
