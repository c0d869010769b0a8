"""End-to-end tests for the command line interface.

Commands run in process through main(argv) so exit codes and output can
be asserted directly.
"""

import json
from pathlib import Path

import numpy as np
import pytest

from qpp import Context, LabeledProjector, PrePostScenario, StateVector, load, save
from qpp import single_qubit_scenario
from qpp.cli import Check, Report, main

GOLDEN = Path(__file__).parent / "data" / "verify_cabello_golden.json"


def qubit(theta):
    return StateVector([np.cos(theta), np.sin(theta)])


def write_scenario(tmp_path, s, name="scenario.json"):
    path = tmp_path / name
    path.write_bytes(save(s))
    return str(path)


class TestVerifyCabello:
    def test_text_report(self, capsys):
        assert main(["verify", "cabello"]) == 0
        out = capsys.readouterr().out
        assert "overall: PASS" in out
        assert "selection_probability" in out
        assert "FAIL" not in out

    def test_json_matches_golden(self, capsys):
        assert main(["verify", "cabello", "--json"]) == 0
        out = capsys.readouterr().out
        assert out == GOLDEN.read_text()

    def test_json_round_trips_through_report(self, capsys):
        main(["verify", "cabello", "--json"])
        doc = json.loads(capsys.readouterr().out)
        assert Report.from_dict(doc).to_dict() == doc

    def test_export_writes_loadable_scenario(self, tmp_path, capsys):
        target = tmp_path / "cabello.json"
        assert main(["verify", "cabello", "--export", str(target)]) == 0
        s = load(target.read_bytes())
        assert s.metadata["name"] == "cabello"
        assert main(["check", str(target)]) == 0
        assert "UNSAT" in capsys.readouterr().out

    def test_export_to_missing_directory_fails(self, tmp_path, capsys):
        target = tmp_path / "nodir" / "cabello.json"
        assert main(["verify", "cabello", "--export", str(target)]) == 3
        assert "export failed" in capsys.readouterr().err


class TestVerifyHardy:
    def test_angles_pass(self, capsys):
        assert main(["verify", "hardy", "--theta-a", "0.9", "--theta-b", "0.9"]) == 0
        out = capsys.readouterr().out
        assert "overall: PASS" in out
        assert "probability_below_bound" in out

    def test_degenerate_angles_exit_2(self, capsys):
        assert main(["verify", "hardy", "--theta-a", "0", "--theta-b", "0.5"]) == 2
        assert "degenerate configuration" in capsys.readouterr().err

    def test_missing_angles_exit_2(self, capsys):
        assert main(["verify", "hardy"]) == 2
        assert main(["verify", "hardy", "--theta-a", "0.4"]) == 2

    def test_conflicting_flags_exit_2(self, capsys):
        assert main(["verify", "hardy", "--optimal", "--theta-a", "0.4"]) == 2
        assert "--optimal" in capsys.readouterr().err

    def test_optimal_mode(self, capsys):
        assert main(["verify", "hardy", "--optimal", "--grid", "16"]) == 0
        out = capsys.readouterr().out
        assert "optimal_probability" in out
        assert "overall: PASS" in out


class TestCheck:
    def test_satisfiable_file(self, tmp_path, capsys):
        path = write_scenario(tmp_path, single_qubit_scenario(2, 9))
        assert main(["check", path, "--json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["overall"] is True
        assert doc["details"]["status"] == "SAT"
        assert doc["details"]["witnesses_total"] == 4
        assert len(doc["details"]["witnesses"]) == 4

    def test_witness_truncation(self, tmp_path, capsys):
        path = write_scenario(tmp_path, single_qubit_scenario(2, 9))
        assert main(["check", path, "--json", "--max-witnesses", "1"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert len(doc["details"]["witnesses"]) == 1
        assert doc["details"]["witnesses_total"] == 4

    def test_unsat_file_reports_trace(self, tmp_path, capsys):
        target = tmp_path / "cab.json"
        main(["verify", "cabello", "--export", str(target)])
        capsys.readouterr()
        assert main(["check", str(target), "--json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["details"]["status"] == "UNSAT"
        assert [t["conclusion"] for t in doc["details"]["trace"]] == [
            "delta+=1", "delta-=1", "CONFLICT",
        ]

    def test_unsat_without_certificate(self, tmp_path, capsys):
        from conftest import ks18_scenario

        path = write_scenario(tmp_path, ks18_scenario())
        assert main(["check", path, "--json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["details"]["status"] == "UNSAT"
        assert doc["details"]["assignments_examined"] == 2 ** 18
        assert doc["details"]["forced_values"] == []
        assert doc["details"]["trace_note"] == "UNSAT without unit-propagation certificate"

    def test_validation_failure_exit_2(self, tmp_path, capsys):
        s = PrePostScenario(
            dim=2, pre=qubit(0.3), post=StateVector([-np.sin(0.3), np.cos(0.3)]),
            projectors=(LabeledProjector("up", qubit(0.0)),
                        LabeledProjector("down", qubit(np.pi / 2.0))),
            contexts=(Context(("up", "down")),),
        )
        path = write_scenario(tmp_path, s)
        assert main(["check", path, "--json"]) == 2
        doc = json.loads(capsys.readouterr().out)
        assert doc["overall"] is False
        names = [f["name"] for f in doc["details"]["validation_failures"]]
        assert "postselection_possible" in names

    def test_parse_error_exit_3(self, tmp_path, capsys):
        path = tmp_path / "broken.json"
        path.write_bytes(b"{broken")
        assert main(["check", str(path)]) == 3
        assert "parse error" in capsys.readouterr().err

    def test_missing_file_exit_3(self, capsys):
        assert main(["check", "/no/such/file.json"]) == 3

    def test_lax_accepts_unknown_fields(self, tmp_path, capsys):
        doc = json.loads(save(single_qubit_scenario(1, 5)))
        doc["annotation"] = "hand edited"
        path = tmp_path / "extra.json"
        path.write_text(json.dumps(doc))
        assert main(["check", str(path)]) == 3
        assert "annotation" in capsys.readouterr().err
        assert main(["check", str(path), "--lax"]) == 0

    def test_negative_max_witnesses_exit_2(self, tmp_path):
        path = write_scenario(tmp_path, single_qubit_scenario(1, 5))
        assert main(["check", path, "--max-witnesses", "-1"]) == 2


class TestToleranceOverride:
    def off_norm_doc(self):
        return {
            "dim": 2,
            "pre": [[1.0 + 5e-7, 0.0], [0.0, 0.0]],
            "post": [[0.6, 0.0], [0.8, 0.0]],
            "projectors": [
                {"label": "up", "state": [[1.0, 0.0], [0.0, 0.0]]},
                {"label": "down", "state": [[0.0, 0.0], [1.0, 0.0]]},
            ],
            "contexts": [["up", "down"]],
        }

    def test_env_var_loosens_tolerance(self, tmp_path, capsys, monkeypatch):
        path = tmp_path / "off.json"
        path.write_text(json.dumps(self.off_norm_doc()))
        monkeypatch.delenv("QPP_TOL", raising=False)
        assert main(["check", str(path)]) == 3
        capsys.readouterr()
        monkeypatch.setenv("QPP_TOL", "1e-3")
        assert main(["check", str(path)]) == 0
        assert "SAT" in capsys.readouterr().out

    def test_invalid_env_var_exit_2(self, capsys, monkeypatch):
        monkeypatch.setenv("QPP_TOL", "not-a-number")
        assert main(["verify", "cabello"]) == 2
        assert "QPP_TOL" in capsys.readouterr().err
        monkeypatch.setenv("QPP_TOL", "-1e-9")
        assert main(["verify", "cabello"]) == 2
        monkeypatch.setenv("QPP_TOL", "nan")
        assert main(["verify", "cabello"]) == 2


class TestOptimize:
    def test_argument_validation(self, capsys):
        assert main(["optimize", "hardy", "--grid", "8"]) == 2
        assert main(["optimize", "hardy", "--refine-tol", "0"]) == 2
        assert main(["optimize", "hardy", "--threads", "0"]) == 2
        assert main(["optimize", "cabello-family", "--exclusivity-tol", "0"]) == 2

    def test_hardy_json(self, capsys):
        assert main(["optimize", "hardy", "--grid", "16", "--json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        target = ((5.0 ** 0.5 - 1.0) / 2.0) ** 5
        assert abs(doc["details"]["objective"] - target) < 1e-6
        assert set(doc["details"]["parameters"]) == {"theta_a", "theta_b"}

    def test_cabello_family_json(self, capsys):
        assert main(["optimize", "cabello-family", "--json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert abs(doc["details"]["objective"] - 1.0 / 9.0) < 1e-6
        assert abs(doc["details"]["parameters"]["c"] - 1.0 / 3.0) < 1e-4
        assert abs(doc["details"]["parameters"]["p"] - 0.5) < 1e-4
        assert doc["details"]["exclusivity_tol"] == 1e-9

    def test_convergence_failure_exit_4(self, capsys):
        code = main(["optimize", "hardy", "--grid", "16", "--refine-tol", "1e-40"])
        assert code == 4
        assert "refinement" in capsys.readouterr().err


class TestUsage:
    def test_no_arguments(self, capsys):
        assert main([]) == 2

    def test_unknown_subcommand(self, capsys):
        assert main(["frobnicate"]) == 2

    def test_help_exits_zero(self, capsys):
        assert main(["--help"]) == 0
        assert main(["verify", "--help"]) == 0


class TestReportModel:
    def test_check_round_trip(self):
        c = Check("x", 1.0, 1.5, 0.5, False)
        assert Check.from_dict(c.to_dict()) == c
        assert c.to_dict()["pass"] is False

    def test_report_round_trip(self):
        r = Report("demo", (Check("a", True, True, None, True),), {"k": [1, 2]})
        assert Report.from_dict(r.to_dict()) == r
        assert r.overall is True

    def test_render_text_shows_failures(self):
        r = Report("demo", (Check("a", 0.0, 1.0, 1.0, False),))
        text = r.render_text()
        assert "FAIL" in text
        assert "overall: FAIL" in text
