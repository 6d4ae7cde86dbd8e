"""Command-line surface: subcommands, scenario validation, exit codes."""

import json
import math
import shutil
import subprocess

import pytest

from h2body import (
    Family,
    Params,
    analytic_trajectory,
    build_relative_equilibrium,
    initial_state,
    partner_distance,
    read_trajectory_csv,
)
from h2body.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write_json(path, doc):
    path.write_text(json.dumps(doc))
    return str(path)


def simulate_scenario(tmp_path, **overrides):
    re = build_relative_equilibrium(
        Family.ELLIPTIC, 0.5, 0.5, Params(1.0, 1.0, 1.0)
    )
    z = initial_state(re).as_array()
    doc = {
        "mode": "simulate",
        "params": {"m1": 1.0, "m2": 1.0, "k": 1.0},
        "initial_state": dict(
            zip(("x1", "y1", "x2", "y2", "px1", "py1", "px2", "py2"), map(float, z))
        ),
        "integrator": {"t_end": re.period, "sample_dt": re.period / 64.0},
    }
    doc.update(overrides)
    return write_json(tmp_path / "scenario.json", doc), re


class TestEquilibriumCommand:
    def test_equal_mass_elliptic(self, capsys):
        code, out, _ = run(capsys, "equilibrium", "elliptic", "0.5")
        assert code == 0
        doc = json.loads(out)
        assert doc["family"] == "elliptic"
        assert doc["omega2"] == pytest.approx(1.2322343865586145, rel=1e-12)
        assert doc["period"] == pytest.approx(
            2.0 * math.pi / math.sqrt(doc["omega2"]), rel=1e-12
        )
        assert doc["d2"] == pytest.approx(0.5, rel=1e-12)
        assert doc["intrinsic"]["ok"] is True
        assert doc["stability"]["verdict"] in ("stable", "unstable", "degenerate")
        assert doc["momentum"]["h"] == pytest.approx(0.0, abs=1e-12)

    def test_seventeen_digit_round_trip(self, capsys):
        # the JSON floats must reproduce the in-process doubles exactly
        code, out, _ = run(capsys, "equilibrium", "elliptic", "0.5", "--m1", "2.5")
        assert code == 0
        doc = json.loads(out)
        params = Params(2.5, 1.0, 1.0)
        re = build_relative_equilibrium(
            Family.ELLIPTIC, 0.5, partner_distance(0.5, params), params
        )
        assert doc["omega"] == re.omega
        assert doc["d2"] == re.d2
        assert doc["theta1"] == re.theta1

    def test_hyperbolic_has_no_period(self, capsys):
        code, out, _ = run(capsys, "equilibrium", "hyperbolic", "0.7", "--m2", "1.5")
        assert code == 0
        doc = json.loads(out)
        assert doc["period"] is None
        assert doc["generator"]["E"] == 0.0
        assert doc["generator"]["H"] != 0.0
        assert doc["intrinsic"]["expected_orientation"] == "equal"

    def test_sign_flag(self, capsys):
        code, out, _ = run(capsys, "equilibrium", "elliptic", "0.5", "--sign", "-1")
        assert code == 0
        assert json.loads(out)["omega"] < 0.0

    def test_out_file(self, capsys, tmp_path):
        path = tmp_path / "re.json"
        code, out, _ = run(
            capsys, "equilibrium", "elliptic", "0.5", "--out", str(path)
        )
        assert code == 0
        assert out == ""
        assert json.loads(path.read_text())["family"] == "elliptic"

    def test_invalid_distance_exits_2(self, capsys):
        code, _, err = run(capsys, "equilibrium", "elliptic", "-0.5")
        assert code == 2
        assert "error" in err

    def test_unknown_family_rejected_by_parser(self):
        with pytest.raises(SystemExit) as exc:
            main(["equilibrium", "parabolic", "0.5"])
        assert exc.value.code == 2


class TestStabilityCommand:
    def test_oracles_agree_on_stable_point(self, capsys):
        code, out, _ = run(capsys, "stability", "0.4")
        assert code == 0
        doc = json.loads(out)
        assert doc["oracles_agree"] is True
        assert doc["rig_block_max_error"] < 1e-9 * max(
            1.0, max(abs(v) for row in doc["rig_block_closed"] for v in row)
        )
        assert doc["internal_rel_error"] < 1e-5
        assert doc["report"]["verdict"] == "stable"
        assert doc["intrinsic_bound_stable"] is True
        assert doc["threshold_d1"] == pytest.approx(
            math.atanh(1.0 / math.sqrt(3.0)), abs=1e-12
        )
        assert doc["membership"]["complement_norm"] < 1e-7

    def test_unstable_point(self, capsys):
        code, out, _ = run(capsys, "stability", "1.2")
        assert code == 0
        doc = json.loads(out)
        assert doc["report"]["verdict"] == "unstable"
        assert doc["intrinsic_bound_stable"] is False
        assert doc["internal_closed"] < 0.0

    def test_mass_ratio_changes_threshold(self, capsys):
        code, out, _ = run(capsys, "stability", "0.4", "--m1", "2.0")
        assert code == 0
        doc = json.loads(out)
        assert doc["mass_ratio"] == pytest.approx(2.0)
        assert doc["threshold_d1"] < math.atanh(1.0 / math.sqrt(3.0))


class TestThresholdCurveCommand:
    def test_curve_csv(self, capsys):
        code, out, _ = run(capsys, "threshold-curve", "0.5", "2.0", "5")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "#schema=v1"
        assert lines[1] == "c,u0,d1"
        assert len(lines) == 7
        mid = [float(v) for v in lines[4].split(",")]
        assert mid[0] == pytest.approx(1.0, rel=1e-12)
        assert mid[1] == pytest.approx(1.0 / math.sqrt(3.0), abs=1e-12)
        assert mid[2] == pytest.approx(math.atanh(mid[1]), rel=1e-12)

    def test_monotone_threshold(self, capsys):
        code, out, _ = run(capsys, "threshold-curve", "0.1", "10", "9")
        assert code == 0
        rows = [
            [float(v) for v in line.split(",")]
            for line in out.strip().splitlines()[2:]
        ]
        u0s = [r[1] for r in rows]
        assert all(a > b for a, b in zip(u0s, u0s[1:]))

    def test_out_file(self, capsys, tmp_path):
        path = tmp_path / "curve.csv"
        code, out, _ = run(
            capsys, "threshold-curve", "0.5", "2.0", "3", "--out", str(path)
        )
        assert code == 0
        assert out == ""
        assert path.read_text().startswith("#schema=v1\n")

    def test_bad_range_exits_2(self, capsys):
        code, _, err = run(capsys, "threshold-curve", "2.0", "0.5", "5")
        assert code == 2
        assert "c_min" in err


class TestSimulateCommand:
    def test_closed_orbit_run(self, capsys, tmp_path):
        scenario, re = simulate_scenario(tmp_path)
        outdir = tmp_path / "out"
        code, _, _ = run(
            capsys, "simulate", "--scenario", scenario, "--out", str(outdir)
        )
        assert code == 0
        rec = read_trajectory_csv(outdir / "trajectory.csv")
        report = json.loads((outdir / "conservation.json").read_text())
        assert report["completed"] is True
        assert report["error"] is None
        assert report["samples"] == rec.t.shape[0]
        assert max(report["drift"].values()) < 1e-7
        # the trajectory tracks the exact motion
        final = analytic_trajectory(re, float(rec.t[-1])).as_array()
        assert max(abs(a - b) for a, b in zip(rec.states[-1], final)) < 1e-6

    def test_collision_scenario_exits_3(self, capsys, tmp_path):
        scenario, _ = simulate_scenario(
            tmp_path,
            initial_state={
                "x1": 0.0,
                "y1": 1.0,
                "x2": 0.0,
                "y2": 1.2,
                "px1": 0.0,
                "py1": 0.0,
                "px2": 0.0,
                "py2": 0.0,
            },
            integrator={"t_end": 5.0},
        )
        outdir = tmp_path / "out"
        code, _, err = run(
            capsys, "simulate", "--scenario", scenario, "--out", str(outdir)
        )
        assert code == 3
        assert "collision" in err
        report = json.loads((outdir / "conservation.json").read_text())
        assert report["completed"] is False
        assert report["error"] == "collision"
        rec = read_trajectory_csv(outdir / "trajectory.csv")
        assert rec.distance[-1] == pytest.approx(1e-8, rel=1e-2)

    def test_rel_tol_override_loosens_drift(self, capsys, tmp_path):
        scenario, _ = simulate_scenario(tmp_path)
        tight_dir, loose_dir = tmp_path / "tight", tmp_path / "loose"
        assert (
            run(capsys, "simulate", "--scenario", scenario, "--out", str(tight_dir))[0]
            == 0
        )
        assert (
            run(
                capsys,
                "simulate",
                "--scenario",
                scenario,
                "--out",
                str(loose_dir),
                "--rel-tol",
                "1e-5",
                "--abs-tol",
                "1e-8",
            )[0]
            == 0
        )
        tight = json.loads((tight_dir / "conservation.json").read_text())
        loose = json.loads((loose_dir / "conservation.json").read_text())
        assert loose["drift"]["energy"] > 10.0 * tight["drift"]["energy"]

    def test_unknown_field_exits_2(self, capsys, tmp_path):
        scenario, _ = simulate_scenario(tmp_path, extra_field=1)
        code, _, err = run(capsys, "simulate", "--scenario", scenario)
        assert code == 2
        assert "extra_field" in err

    def test_wrong_mode_exits_2(self, capsys, tmp_path):
        scenario, _ = simulate_scenario(tmp_path, mode="perturb")
        code, _, err = run(capsys, "simulate", "--scenario", scenario)
        assert code == 2
        assert "mode" in err

    def test_missing_file_exits_2(self, capsys, tmp_path):
        code, _, err = run(
            capsys, "simulate", "--scenario", str(tmp_path / "nope.json")
        )
        assert code == 2
        assert "cannot read scenario" in err

    def test_bad_initial_state_exits_2(self, capsys, tmp_path):
        scenario, _ = simulate_scenario(tmp_path)
        doc = json.loads(open(scenario).read())
        doc["initial_state"]["y1"] = -1.0
        scenario2 = write_json(tmp_path / "bad.json", doc)
        code, _, err = run(capsys, "simulate", "--scenario", scenario2)
        assert code == 2
        assert "invalid initial state" in err


class TestPerturbCommand:
    @staticmethod
    def _scenario(tmp_path, **protocol_overrides):
        protocol = {
            "scale": 1e-4,
            "n_trials": 2,
            "seed": 7,
            "horizon_periods": 0.5,
        }
        protocol.update(protocol_overrides)
        doc = {
            "mode": "perturb",
            "params": {"m1": 1.0, "m2": 1.0, "k": 1.0},
            "equilibrium": {"family": "elliptic", "d1": math.atanh(0.4)},
            "protocol": protocol,
        }
        return write_json(tmp_path / "perturb.json", doc)

    def test_stable_report(self, capsys, tmp_path):
        scenario = self._scenario(tmp_path)
        code, out, _ = run(capsys, "perturb", "--scenario", scenario)
        assert code == 0
        doc = json.loads(out)
        assert doc["n_escaped"] == 0
        assert doc["n_bounded"] == 2
        assert doc["protocol"]["seed"] == 7
        assert doc["max_distance_deviation"] < 1e-2
        assert len(doc["trials"]) == 2

    def test_seed_override(self, capsys, tmp_path):
        scenario = self._scenario(tmp_path)
        code, out, _ = run(
            capsys, "perturb", "--scenario", scenario, "--seed", "123"
        )
        assert code == 0
        assert json.loads(out)["protocol"]["seed"] == 123

    def test_horizon_exclusivity(self, capsys, tmp_path):
        scenario = self._scenario(tmp_path, horizon=5.0)
        code, _, err = run(capsys, "perturb", "--scenario", scenario)
        assert code == 2
        assert "exactly one" in err

    def test_hyperbolic_rejects_period_horizon(self, capsys, tmp_path):
        doc = json.loads(open(self._scenario(tmp_path)).read())
        doc["equilibrium"] = {"family": "hyperbolic", "d1": 0.5}
        scenario = write_json(tmp_path / "hyp.json", doc)
        code, _, err = run(capsys, "perturb", "--scenario", scenario)
        assert code == 2
        assert "horizon" in err

    def test_bad_sign_exits_2(self, capsys, tmp_path):
        doc = json.loads(open(self._scenario(tmp_path)).read())
        doc["equilibrium"]["sign"] = 2
        scenario = write_json(tmp_path / "sign.json", doc)
        code, _, err = run(capsys, "perturb", "--scenario", scenario)
        assert code == 2
        assert "sign" in err


class TestErrorPlumbing:
    """Exit codes 4 and 5 cannot be reached with healthy inputs, so these
    patch the underlying call and only exercise the reporting path."""

    def test_step_underflow_exits_4(self, capsys, tmp_path, monkeypatch):
        import h2body.cli as cli_mod
        from h2body.sim import StepSizeUnderflow

        def fail(state, params, config):
            raise StepSizeUnderflow("step size underflow at t=0.1", record=None)

        monkeypatch.setattr(cli_mod, "integrate", fail)
        scenario, _ = simulate_scenario(tmp_path)
        code, _, err = run(
            capsys, "simulate", "--scenario", scenario, "--out", str(tmp_path / "o")
        )
        assert code == 4
        assert "underflow" in err

    def test_oracle_mismatch_exits_5(self, capsys, monkeypatch):
        import h2body.cli as cli_mod

        monkeypatch.setattr(cli_mod, "internal_block_oracle", lambda re: 1e6)
        code, out, err = run(capsys, "stability", "0.4")
        assert code == 5
        assert "oracle mismatch" in err
        # the document is still emitted so the mismatch can be inspected
        assert json.loads(out)["oracles_agree"] is False

    def test_threshold_residual_exits_5(self, capsys, monkeypatch):
        import h2body.cli as cli_mod
        from h2body.stability import MassRatioCurve

        monkeypatch.setattr(
            cli_mod,
            "threshold",
            lambda c: MassRatioCurve(c=c, u0=0.5, d1=math.atanh(0.5), residual=1e-6),
        )
        code, _, err = run(capsys, "threshold-curve", "0.5", "2.0", "3")
        assert code == 5
        assert "residual" in err


def test_console_script_installed(tmp_path):
    exe = shutil.which("h2body")
    assert exe is not None, "console script not on PATH"
    proc = subprocess.run(
        [exe, "equilibrium", "elliptic", "0.5"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["family"] == "elliptic"
