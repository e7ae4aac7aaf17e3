import json

from gpchoice.cli import main
from helpers import PROBLEM_DIR

EX1_CASE1 = str(PROBLEM_DIR / "example1_case1.json")
EX2_CASE6 = str(PROBLEM_DIR / "example2_case6.json")


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def machine_doc(out):
    doc = json.loads(out)
    assert isinstance(doc, dict)
    return doc


class TestSolveCommand:
    def test_example1_text_report(self, capsys):
        code, out, _ = run(capsys, "solve", EX1_CASE1)
        assert code == 0
        assert "z: 11.01098" in out
        assert "c = 1 " in out and "p = -1 " in out and "a = 1 " in out

    def test_example2_text_report(self, capsys):
        code, out, _ = run(capsys, "solve", EX2_CASE6)
        assert code == 0
        assert "z: 50.60611" in out
        assert "p = -3 " in out

    def test_machine_report_shape_and_values(self, capsys):
        code, out, _ = run(capsys, "solve", EX1_CASE1, "--format", "machine")
        assert code == 0
        doc = machine_doc(out)
        assert set(doc) == {
            "status", "z", "x", "w", "lambda", "gap", "chosen", "timing_ms",
        }
        assert doc["status"] == "optimal"
        assert round(doc["z"], 4) == 11.011
        assert doc["chosen"]["c"]["value"] == 1.0
        assert doc["chosen"]["p"]["value"] == -1.0
        assert doc["chosen"]["a"]["value"] == 1.0
        assert len(doc["x"]) == 2 and len(doc["w"]) == 5

    def test_machine_report_round_trips(self, capsys):
        _, out, _ = run(capsys, "solve", EX1_CASE1, "--format", "machine")
        doc = machine_doc(out)
        assert json.loads(json.dumps(doc)) == doc

    def test_machine_report_is_stable_across_runs(self, capsys):
        _, first, _ = run(capsys, "solve", EX1_CASE1, "--format", "machine")
        _, second, _ = run(capsys, "solve", EX1_CASE1, "--format", "machine")
        a, b = json.loads(first), json.loads(second)
        a.pop("timing_ms"), b.pop("timing_ms")  # wall clock differs by nature
        assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)

    def test_all_assignments_table_has_27_rows(self, capsys):
        code, out, _ = run(
            capsys, "solve", EX1_CASE1, "--all-assignments", "--format", "machine"
        )
        assert code == 0
        doc = machine_doc(out)
        assert len(doc["assignments"]) == 27

    def test_oracle_flag_appends_check(self, capsys):
        code, out, _ = run(capsys, "solve", EX1_CASE1, "--oracle")
        assert code == 0
        assert "oracle:" in out

    def test_seed_flag_is_accepted_and_ignored(self, capsys):
        code, _, _ = run(capsys, "solve", EX1_CASE1, "--seed", "123")
        assert code == 0

    def test_tolerance_flag(self, capsys):
        code, out, _ = run(capsys, "solve", EX1_CASE1, "--tolerance", "1e-6")
        assert code == 0
        assert "z: 11.01098" in out

    def test_missing_file_exits_2(self, capsys):
        code, out, err = run(capsys, "solve", "no_such_file.json")
        assert code == 2
        assert out == ""

    def test_empty_file_exits_2(self, capsys, tmp_path):
        path = tmp_path / "empty.json"
        path.write_text("")
        code, out, _ = run(capsys, "solve", str(path))
        assert code == 2
        assert out == ""

    def test_undefined_set_exits_3_and_names_it(self, capsys, tmp_path):
        doc = json.loads((PROBLEM_DIR / "example1_case1.json").read_text())
        doc["candidate_sets"] = doc["candidate_sets"][:2]  # drop set "a"
        path = tmp_path / "broken.json"
        path.write_text(json.dumps(doc))
        code, out, err = run(capsys, "solve", str(path))
        assert code == 3
        assert out == ""
        assert "a" in err

    def test_plain_problem_without_sets(self, capsys, tmp_path):
        doc = json.loads((PROBLEM_DIR / "example1_case1.json").read_text())
        doc["objective"][0]["coefficient"] = 1
        doc["objective"][0]["exponents"]["x1"] = -1
        doc["constraints"][0]["terms"][0]["coefficient"] = 1
        del doc["candidate_sets"]
        path = tmp_path / "plain.json"
        path.write_text(json.dumps(doc))
        code, out, _ = run(capsys, "solve", str(path))
        assert code == 0
        assert "z: 11.01098" in out

    def test_unreachable_tolerance_exits_5_with_residuals(self, capsys, tmp_path):
        doc = json.loads((PROBLEM_DIR / "example1_case1.json").read_text())
        doc["objective"][0]["coefficient"] = 1
        doc["objective"][0]["exponents"]["x1"] = -1
        doc["constraints"][0]["terms"][0]["coefficient"] = 1
        del doc["candidate_sets"]
        path = tmp_path / "plain.json"
        path.write_text(json.dumps(doc))
        code, out, err = run(capsys, "solve", str(path), "--tolerance", "1e-30")
        assert code == 5
        assert "iteration_limit" in out
        assert "stationarity" in err

    def test_infeasible_problem_exits_4(self, capsys, tmp_path):
        doc = {
            "format": "gp-problem/1",
            "variables": ["x1", "x2"],
            "objective": [{"coefficient": 1, "exponents": {"x1": 1, "x2": 1}}],
            "constraints": [
                {"terms": [{"coefficient": 1, "exponents": {"x1": 1, "x2": 1}}],
                 "bound": 1}
            ],
        }
        path = tmp_path / "degenerate.json"
        path.write_text(json.dumps(doc))
        code, out, _ = run(capsys, "solve", str(path), "--format", "machine")
        assert code == 4
        doc_out = machine_doc(out)
        assert doc_out["status"] in ("infeasible", "unbounded")
        assert doc_out["z"] is None


class TestDualCommand:
    def test_example1_rows_and_weights(self, capsys):
        code, out, _ = run(
            capsys, "dual", EX1_CASE1,
            "--assign", "c=01", "--assign", "p=10", "--assign", "a=01",
        )
        assert code == 0
        assert "w01 + w02 + w03 = 1" in out
        assert "-w01 + w03 + w11 = 0" in out
        assert "-3*w02 + w03 + w12 = 0" in out
        assert "w01 = 0.4387805" in out
        assert "dual value: 11.01098" in out

    def test_single_monomial_objective_gives_unit_weight(self, capsys, tmp_path):
        doc = {
            "format": "gp-problem/1",
            "variables": ["x1"],
            "objective": [{"coefficient": 5, "exponents": {"x1": 0}}],
        }
        path = tmp_path / "single.json"
        path.write_text(json.dumps(doc))
        code, out, _ = run(capsys, "dual", str(path))
        assert code == 0
        assert "w01 = 1" in out

    def test_invalid_bit_pattern_exits_3(self, capsys):
        code, out, err = run(
            capsys, "dual", EX1_CASE1,
            "--assign", "c=11", "--assign", "p=10", "--assign", "a=01",
        )
        assert code == 3
        assert out == ""
        assert "c" in err

    def test_missing_assignment_exits_3(self, capsys):
        code, _, err = run(capsys, "dual", EX1_CASE1, "--assign", "c=01")
        assert code == 3
        assert "p" in err or "assign" in err

    def test_unknown_set_name_exits_3(self, capsys):
        code, _, err = run(
            capsys, "dual", EX1_CASE1,
            "--assign", "c=01", "--assign", "p=10", "--assign", "a=01",
            "--assign", "zz=00",
        )
        assert code == 3
        assert "zz" in err

    def test_malformed_assign_exits_3(self, capsys):
        code, _, _ = run(capsys, "dual", EX1_CASE1, "--assign", "c:01")
        assert code == 3

    def test_machine_format(self, capsys):
        code, out, _ = run(
            capsys, "dual", EX1_CASE1, "--format", "machine",
            "--assign", "c=01", "--assign", "p=10", "--assign", "a=01",
        )
        assert code == 0
        doc = machine_doc(out)
        assert doc["status"] == "optimal"
        assert round(doc["z"], 3) == 11.011
        assert len(doc["rows"]) == 3


class TestValidateCommand:
    def test_valid_file(self, capsys):
        code, out, _ = run(capsys, "validate", EX1_CASE1)
        assert code == 0
        assert "ok" in out

    def test_syntax_error_exits_2(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{]")
        code, _, _ = run(capsys, "validate", str(path))
        assert code == 2

    def test_semantic_error_exits_3(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"format": "gp-problem/1", "variables": ["x"],
                                    "objective": [], "mystery": 1}))
        code, _, _ = run(capsys, "validate", str(path))
        assert code == 3
