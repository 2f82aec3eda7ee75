import json
import math

import pytest

from momentcone import (
    AtomicMeasure,
    MomentSequence,
    Polynomial,
    measure_to_dict,
    moments_of_measure,
    moments_to_dict,
    poly_to_dict,
)
from momentcone.cli import main, render_json, thread_count


@pytest.fixture
def workdir(tmp_path):
    def write(name, obj):
        path = tmp_path / name
        path.write_text(json.dumps(obj))
        return str(path)

    files = {
        "xsq": write("xsq.json", poly_to_dict(Polynomial.monomial((2,)))),
        "zero": write("zero.json", poly_to_dict(Polynomial.zero(1))),
        "one_two_x": write(
            "one_two_x.json", poly_to_dict(Polynomial(1, {(0,): 1.0, (1,): 2.0}))
        ),
        "one_minus_xsq": write(
            "one_minus_xsq.json", poly_to_dict(Polynomial(1, {(0,): 1.0, (2,): -1.0}))
        ),
        "x1": write("x1.json", poly_to_dict(Polynomial.variable(1, 0))),
        "delta_half": write(
            "delta_half.json",
            moments_to_dict(moments_of_measure(AtomicMeasure(((0.5,),), (1.0,)), 6)),
        ),
        "indefinite": write(
            "indefinite.json",
            moments_to_dict(MomentSequence(1, 2, {(0,): 1.0, (1,): 0.0, (2,): -1.0})),
        ),
        "lebesgue": write(
            "lebesgue.json",
            moments_to_dict(
                MomentSequence(
                    1,
                    10,
                    {(k,): (2.0 / (k + 1) if k % 2 == 0 else 0.0) for k in range(11)},
                )
            ),
        ),
        "measure": write(
            "measure.json", measure_to_dict(AtomicMeasure(((0.5,),), (1.0,)))
        ),
        "broken": write("broken.json", {"unexpected": True}),
    }
    files["dir"] = tmp_path
    return files


class TestRenderJson:
    def test_floats_round_trip(self):
        payload = {"a": 0.1, "b": 1.0 / 3.0, "c": 16.0}
        parsed = json.loads(render_json(payload))
        assert parsed == payload

    def test_infinity_becomes_string(self):
        assert json.loads(render_json({"v": math.inf}))["v"] == "+inf"

    def test_deterministic(self):
        payload = {"xs": [1.5, 2.5], "flag": True, "name": "run"}
        assert render_json(payload) == render_json(payload)


class TestThreadCount:
    def test_env_override(self, monkeypatch):
        monkeypatch.setenv("MOMENTCONE_THREADS", "3")
        assert thread_count() == 3

    def test_rejects_nonpositive(self, monkeypatch):
        monkeypatch.setenv("MOMENTCONE_THREADS", "0")
        with pytest.raises(ValueError):
            thread_count()

    def test_default_positive(self, monkeypatch):
        monkeypatch.delenv("MOMENTCONE_THREADS", raising=False)
        assert thread_count() >= 1


class TestNormCommand:
    def test_single_term(self, workdir, capsys):
        assert main(["norm", "--f", workdir["xsq"], "--p", "1", "--r", "4"]) == 0
        assert capsys.readouterr().out.strip() == "16"

    def test_zero_polynomial(self, workdir, capsys):
        assert main(["norm", "--f", workdir["zero"], "--p", "2", "--r", "1"]) == 0
        assert capsys.readouterr().out.strip() == "0"

    def test_twelve_significant_digits(self, workdir, capsys):
        assert main(["norm", "--f", workdir["one_two_x"], "--p", "2", "--r", "3"]) == 0
        assert capsys.readouterr().out.strip() == "3.60555127546"

    def test_parse_error_exit_one(self, workdir, capsys):
        assert main(["norm", "--f", workdir["broken"], "--p", "2", "--r", "1"]) == 1
        assert "error" in capsys.readouterr().err


class TestEvalContCommand:
    def test_continuous_point(self, workdir, capsys):
        assert main(["eval-cont", "--x", "0.9", "--p", "2", "--r", "1"]) == 0
        out = capsys.readouterr().out
        assert out.startswith("continuous")
        assert "2.29415733871" in out

    def test_boundary_divergence(self, capsys):
        assert main(["eval-cont", "--x", "1", "--p", "2", "--r", "1"]) == 2
        out = capsys.readouterr().out
        assert out.startswith("not continuous")
        assert "+inf" in out

    def test_weighted_closed_box(self, capsys):
        assert main(["eval-cont", "--x", "2", "--p", "1", "--r", "4"]) == 0


class TestPsdCheckCommand:
    def test_pass(self, workdir, capsys):
        assert main(["psd-check", "--moments", workdir["delta_half"], "--d", "3"]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["pass"] is True

    def test_fail_exit_two(self, workdir, capsys):
        assert main(["psd-check", "--moments", workdir["indefinite"], "--d", "1"]) == 2
        report = json.loads(capsys.readouterr().out)
        assert report["pass"] is False
        assert report["min_eigenvalue"] == pytest.approx(-1.0, abs=1e-10)


class TestQmCheckCommand:
    def test_box_generator_report(self, workdir, capsys):
        code = main(
            [
                "qm-check",
                "--moments",
                workdir["lebesgue"],
                "--g",
                workdir["one_minus_xsq"],
                "--N",
                "1",
                "--d",
                "1",
            ]
        )
        assert code == 0
        report = json.loads(capsys.readouterr().out)
        eigs = [entry["min_eigenvalue"] for entry in report["generators"]]
        assert eigs == pytest.approx([2.0 / 3.0, 4.0 / 15.0, 4.0 / 15.0], rel=1e-12)
        assert report["pass"] is True


class TestSqrtApproxCommand:
    def test_error_table(self, workdir, capsys):
        assert main(["sqrt-approx", "--f", workdir["x1"], "--i", "10"]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["errors"][-1]["max_coefficient_error"] == pytest.approx(0.1, abs=1e-12)
        assert len(report["h"]["terms"]) == 11

    def test_negative_constant_exit_two(self, workdir, capsys, tmp_path):
        path = tmp_path / "neg.json"
        path.write_text(json.dumps(poly_to_dict(Polynomial.constant(1, -1.0))))
        assert main(["sqrt-approx", "--f", str(path), "--i", "3"]) == 2


class TestSosApproxCommand:
    def test_certified_run(self, workdir, capsys):
        code = main(
            [
                "sos-approx",
                "--f",
                workdir["one_minus_xsq"],
                "--p",
                "1",
                "--r",
                "1",
                "--eps",
                "1",
                "--dmax",
                "2",
            ]
        )
        assert code == 0
        report = json.loads(capsys.readouterr().out)
        assert report["success"] is True
        assert report["D"] == 2
        assert report["distance"] == pytest.approx(2.5, abs=1e-9)
        assert report["gram_mineig"] >= -1e-8

    def test_eps_zero_inconclusive(self, workdir, capsys):
        code = main(
            [
                "sos-approx",
                "--f",
                workdir["one_minus_xsq"],
                "--p",
                "1",
                "--r",
                "1",
                "--eps",
                "0",
                "--dmax",
                "2",
                "--max-iters",
                "500",
            ]
        )
        assert code == 2
        report = json.loads(capsys.readouterr().out)
        assert report["reason"] == "inconclusive"


class TestRecoverMeasureCommand:
    def test_success(self, workdir, capsys):
        code = main(
            [
                "recover-measure",
                "--moments",
                workdir["delta_half"],
                "--p",
                "2",
                "--r",
                "1",
                "--grid",
                "101",
            ]
        )
        assert code == 0
        report = json.loads(capsys.readouterr().out)
        assert report["success"] is True
        assert report["residual"] <= 1e-6
        assert report["box"] == {"lower": [-1.0], "upper": [1.0]}

    def test_failure_exit_two(self, workdir, capsys):
        code = main(
            [
                "recover-measure",
                "--moments",
                workdir["indefinite"],
                "--p",
                "1",
                "--r",
                "1",
                "--grid",
                "51",
            ]
        )
        assert code == 2


class TestPipelineCommand:
    def test_full_chain_passes(self, workdir, capsys):
        code = main(
            ["pipeline", "--moments", workdir["delta_half"], "--p", "2", "--r", "1"]
        )
        assert code == 0
        report = json.loads(capsys.readouterr().out)
        assert report["hypothesis"]["pass"] is True
        assert report["psd"]["pass"] is True
        assert report["recovery"]["pass"] is True
        assert report["pass"] is True

    def test_indefinite_fails_psd_and_recovery(self, workdir, capsys):
        code = main(
            ["pipeline", "--moments", workdir["indefinite"], "--p", "2", "--r", "1"]
        )
        assert code == 2
        report = json.loads(capsys.readouterr().out)
        assert report["psd"]["pass"] is False
        assert report["recovery"]["pass"] is False

    def test_unbounded_hypothesis_flagged(self, workdir, capsys, tmp_path):
        s = moments_of_measure(AtomicMeasure(((2.0,),), (1.0,)), 6)
        path = tmp_path / "delta_two.json"
        path.write_text(json.dumps(moments_to_dict(s)))
        code = main(["pipeline", "--moments", str(path), "--p", "1", "--r", "1"])
        assert code == 2
        report = json.loads(capsys.readouterr().out)
        assert report["hypothesis"]["growing"] is True
        assert report["hypothesis"]["pass"] is False
        assert report["recovery"]["pass"] is False


class TestMomentsCommand:
    def test_moments_of_point_mass(self, workdir, capsys):
        assert main(["moments", "--measure", workdir["measure"], "--degree", "4"]) == 0
        report = json.loads(capsys.readouterr().out)
        values = {tuple(e["exp"]): e["s"] for e in report["values"]}
        assert values[(0,)] == 1.0
        assert values[(3,)] == pytest.approx(0.125)


class TestDeterminism:
    def test_byte_identical_reports(self, workdir, capsys):
        args = ["pipeline", "--moments", workdir["delta_half"], "--p", "2", "--r", "1"]
        main(args)
        first = capsys.readouterr().out
        main(args)
        second = capsys.readouterr().out
        assert first == second

    def test_output_file(self, workdir, tmp_path):
        out = tmp_path / "report.json"
        code = main(
            [
                "psd-check",
                "--moments",
                workdir["delta_half"],
                "--d",
                "2",
                "--out",
                str(out),
            ]
        )
        assert code == 0
        assert json.loads(out.read_text())["pass"] is True
