"""
Unit tests for main.py module.
"""
import json
import os
from unittest.mock import patch

from graph import parse_graph
from main import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestElementCommands:
    """Test cases for normalize, mul and degree."""

    def test_normalize(self, capsys, graph_file):
        """Test that e* e prints as v."""
        code, out, _ = run(capsys, "--graph", graph_file("R1"), "normalize", "1*e^*.e")
        assert code == 0
        assert out.strip() == "1*v"

    def test_mul(self, capsys, graph_file):
        """Test the product e f in L(A3)."""
        code, out, _ = run(capsys, "--graph", graph_file("A3"), "mul", "1*e", "1*f")
        assert code == 0
        assert out.strip() == "1*e.f"

    def test_degree(self, capsys, graph_file):
        """Test the degree of y2* y1*."""
        code, out, _ = run(capsys, "--graph", graph_file("R2"), "degree", "1*y2^*.y1^*")
        assert code == 0
        assert out.strip() == "-2"

    def test_degree_of_mixed_element(self, capsys, graph_file):
        """Test that a non-homogeneous element is a usage error."""
        code, _, err = run(capsys, "--graph", graph_file("R2"), "degree", "1*y1 + 1*v")
        assert code == 2
        assert err.startswith("error:")

    def test_unknown_generator(self, capsys, graph_file):
        """Test that an unknown name exits with 2."""
        code, _, err = run(capsys, "--graph", graph_file("R2"), "normalize", "1*q")
        assert code == 2
        assert "error:" in err

    def test_missing_graph_file(self, capsys, temp_dir):
        """Test that an unreadable graph exits with 2."""
        code, _, _ = run(capsys, "--graph", os.path.join(temp_dir, "none.graph"), "normalize", "1*v")
        assert code == 2

    def test_json_output(self, capsys, graph_file):
        """Test that JSON output carries the graph hash and field."""
        code, out, _ = run(capsys, "--graph", graph_file("R1"), "--format", "json", "normalize", "1*e^*.e")
        payload = json.loads(out)
        assert code == 0
        assert payload["element"] == "1*v"
        assert payload["field"] == "q"
        assert len(payload["graph_md5"]) == 32


class TestWitnessCommands:
    """Test cases for witness, witness-any and idgen."""

    def test_witness(self, capsys, graph_file):
        """Test a verified witness on the two-petal rose."""
        code, out, _ = run(capsys, "--graph", graph_file("R2"), "witness", "1*y1 + 1*y2")
        assert code == 0
        assert out.strip().splitlines()[-1] == "VERIFIED"

    def test_witness_over_f2(self, capsys, graph_file):
        """Test the same witness over GF(2)."""
        code, out, _ = run(capsys, "--graph", graph_file("R2"), "--field", "fp:2", "witness", "1*y1 + 1*y2")
        assert code == 0
        assert "VERIFIED" in out

    def test_witness_any_without_solution(self, capsys, graph_file):
        """Test that v + e on the single loop exits with 1."""
        code, _, err = run(
            capsys, "--graph", graph_file("R1"), "witness-any", "1*v + 1*e", "--max-bound", "3"
        )
        assert code == 1
        assert "error:" in err

    def test_idgen(self, capsys, graph_file):
        """Test an idempotent generator for y1 A + y2 A."""
        code, out, _ = run(capsys, "--graph", graph_file("R2"), "idgen", "1*y1", "1*y2")
        assert code == 0
        assert out.strip().splitlines()[0].startswith("e = ")
        assert out.strip().splitlines()[-1] == "VERIFIED"


class TestSuiteCommand:
    """Test cases for seeded suites."""

    def test_suite_needs_seed(self, capsys, graph_file):
        """Test that a suite without --seed is a usage error."""
        code, _, err = run(capsys, "--graph", graph_file("A2"), "suite", "--trials", "2")
        assert code == 2
        assert "seed" in err

    def test_suite_json_is_deterministic(self, capsys, graph_file):
        """Test that two runs with one seed print the same JSON."""
        argv = ["--graph", graph_file("A2"), "--seed", "3", "--format", "json", "suite", "--trials", "3"]
        first_code, first, _ = run(capsys, *argv)
        second_code, second, _ = run(capsys, *argv)
        assert first_code == second_code == 0
        assert first == second
        assert json.loads(first)["verified"] == 3

    def test_suite_saves_report(self, capsys, graph_file, temp_dir):
        """Test that --report-dir stores the suite payload."""
        report_dir = os.path.join(temp_dir, "reports")
        code, _, _ = run(
            capsys, "--graph", graph_file("A2"), "--seed", "3", "--report-dir", report_dir,
            "suite", "--trials", "2",
        )
        assert code == 0
        with open(os.path.join(report_dir, "suite-q-3.json"), encoding="utf-8") as f:
            assert json.load(f)["trials"] == 2


class TestTransformCommands:
    """Test cases for desource, desing, corner and matrix."""

    def test_desource_without_sources(self, capsys, graph_file):
        """Test that the rose has nothing to remove."""
        code, out, _ = run(capsys, "--graph", graph_file("R2"), "desource")
        assert code == 0
        assert out.strip() == "no sources"

    def test_desource_writes_graph_and_map(self, capsys, graph_file, temp_dir):
        """Test that --out writes the smaller graph and its .map sidecar."""
        out_path = os.path.join(temp_dir, "a3-v1.graph")
        code, out, _ = run(capsys, "--graph", graph_file("A3"), "desource", "--vertex", "v1", "--out", out_path)
        assert code == 0
        assert out.strip() == "source v1"
        with open(out_path, encoding="utf-8") as f:
            assert parse_graph(f.read()).vertices == ("v2", "v3")
        with open(f"{out_path}.map", encoding="utf-8") as f:
            assert "f => 1*f" in f.read().splitlines()

    def test_desource_all(self, capsys, graph_file):
        """Test repeated removal on A3."""
        code, out, _ = run(capsys, "--graph", graph_file("A3"), "desource")
        assert code == 0
        assert out.splitlines()[:2] == ["source v1", "source v2"]

    def test_desing(self, capsys, graph_file, temp_dir):
        """Test that the tail of a point is written as a generated graph."""
        out_path = os.path.join(temp_dir, "point-tail.graph")
        code, _, _ = run(capsys, "--graph", graph_file("point"), "desing", "--depth", "2", "--out", out_path)
        assert code == 0
        code, out, _ = run(capsys, "--graph", out_path, "--generated", "normalize", "1*v")
        assert code == 0
        assert out.strip() == "1*v"

    def test_generated_graph_needs_flag(self, capsys, graph_file, temp_dir):
        """Test that ~tail: identifiers are refused without --generated."""
        out_path = os.path.join(temp_dir, "point-tail.graph")
        run(capsys, "--graph", graph_file("point"), "desing", "--depth", "1", "--out", out_path)
        code, _, _ = run(capsys, "--graph", out_path, "normalize", "1*v")
        assert code == 2

    def test_corner_on_graph_with_source(self, capsys, graph_file):
        """Test that A2 is refused with exit code 1."""
        code, _, err = run(capsys, "--graph", graph_file("A2"), "corner", "realize")
        assert code == 1
        assert "v1" in err

    def test_corner_realize(self, capsys, graph_file):
        """Test t+ and p on the single loop."""
        code, out, _ = run(capsys, "--graph", graph_file("R1"), "corner", "realize")
        assert code == 0
        assert out.splitlines()[0] == "t+ = 1*e"
        assert out.splitlines()[2] == "p = 1*v"

    def test_corner_witness(self, capsys, graph_file):
        """Test a structural witness on the rose."""
        code, out, _ = run(capsys, "--graph", graph_file("R2"), "corner", "witness", "1*y1")
        assert code == 0
        assert out.strip().splitlines()[-1] == "VERIFIED"

    def test_corner_witness_prints_decomposition(self, capsys, graph_file):
        """Test that e on the single loop decomposes as <v>*t+^1."""
        code, out, _ = run(capsys, "--graph", graph_file("R1"), "corner", "witness", "1*e")
        assert code == 0
        assert out.splitlines()[0] == "a = <1*v>*t+^1"

    def test_matrix_degree(self, capsys, graph_file):
        """Test deg e12(v) = -1 with shifts 0,1."""
        code, out, _ = run(
            capsys, "--graph", graph_file("point"), "matrix", "degree", "--shifts", "0,1",
            "--entry", "1", "2", "1*v",
        )
        assert code == 0
        assert out.strip() == "-1"

    def test_matrix_transport(self, capsys, graph_file):
        """Test the transported witness of e12(e)."""
        code, out, _ = run(
            capsys, "--graph", graph_file("A2"), "matrix", "transport", "--shifts", "0,0",
            "--entry", "1", "2", "1*e",
        )
        assert code == 0
        assert out.splitlines()[0] == "y = e2,1(1*e^*)"

    def test_bad_shifts(self, capsys, graph_file):
        """Test that malformed shifts are a usage error."""
        code, _, _ = run(
            capsys, "--graph", graph_file("point"), "matrix", "degree", "--shifts", "0,x",
            "--entry", "1", "1", "1*v",
        )
        assert code == 2


class TestUnexpectedErrors:
    """Test cases for the catch-all error path."""

    @patch("main.realize_lpa", side_effect=RuntimeError("boom"))
    @patch("main.logging")
    def test_unexpected_exception(self, mock_logging, mock_realize, capsys, graph_file):
        """Test that an unexpected exception is logged and exits with 1."""
        code, _, _ = run(capsys, "--graph", graph_file("R1"), "corner", "realize")
        assert code == 1
        mock_logging.error.assert_called_once()
