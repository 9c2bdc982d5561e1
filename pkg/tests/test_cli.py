import json

import numpy as np
import pytest

from synccool import io
from synccool.cli import main


def write_cfg(tmp_path, **overrides):
    doc = {
        "engine": "semiclassical",
        "physical": {"n_atoms": 6, "kappa": 780.0, "delta": 390.0,
                     "w_pump": 10.0, "n_gamma_c": 40.0},
        "integration": {"dt": 2e-3, "t_end": 2.0, "sample_every": 0.5},
        "initial": {"p2_initial": 5.0},
        "n_traj": 3,
        "master_seed": 21,
    }
    doc.update(overrides)
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(doc))
    return path


class TestSimulateSc:
    def test_run_produces_outputs(self, tmp_path):
        cfg = write_cfg(tmp_path)
        out = tmp_path / "run"
        assert main(["simulate-sc", "--config", str(cfg), "--out", str(out)]) == 0
        cols, comment = io.read_table(out / "timeseries.csv")
        assert comment == io.TIMESERIES_SCHEMA
        for ch in ("time", "p2_mean", "p2_stderr", "xdagx", "kurtosis"):
            assert ch in cols
        meta = json.loads((out / "metadata.json").read_text())
        assert meta["status"] == "completed"
        assert meta["config"]["master_seed"] == 21

    def test_byte_identical_reruns_and_thread_invariance(self, tmp_path):
        cfg = write_cfg(tmp_path)
        outs = []
        for name, threads in (("a", "1"), ("b", "1"), ("c", "2")):
            out = tmp_path / name
            assert main(["simulate-sc", "--config", str(cfg), "--out", str(out),
                         "--threads", threads]) == 0
            outs.append((out / "timeseries.csv").read_bytes())
        assert outs[0] == outs[1] == outs[2]

    def test_seed_override_changes_results(self, tmp_path):
        cfg = write_cfg(tmp_path)
        out1, out2 = tmp_path / "s1", tmp_path / "s2"
        main(["simulate-sc", "--config", str(cfg), "--out", str(out1)])
        main(["simulate-sc", "--config", str(cfg), "--out", str(out2),
              "--seed", "99"])
        assert ((out1 / "timeseries.csv").read_bytes()
                != (out2 / "timeseries.csv").read_bytes())
        meta = json.loads((out2 / "metadata.json").read_text())
        assert meta["config"]["master_seed"] == 99

    def test_force_mode_variant(self, tmp_path):
        cfg = write_cfg(tmp_path, integration={"dt": 2e-3, "t_end": 1.0,
                                               "force_mode": "friction-only"})
        out = tmp_path / "fric"
        assert main(["simulate-sc", "--config", str(cfg), "--out", str(out)]) == 0
        meta = json.loads((out / "metadata.json").read_text())
        assert meta["config"]["integration"]["force_mode"] == "friction-only"

    def test_invalid_config_exit_code(self, tmp_path, capsys):
        cfg = write_cfg(tmp_path)
        doc = json.loads(cfg.read_text())
        doc["physical"]["kappa"] = -5.0
        cfg.write_text(json.dumps(doc))
        with pytest.raises(SystemExit) as exc:
            main(["simulate-sc", "--config", str(cfg), "--out",
                  str(tmp_path / "x")])
        assert exc.value.code == 2
        err = json.loads(capsys.readouterr().err)
        assert "error" in err and "message" in err

    def test_blowup_exit_code_names_trajectory(self, tmp_path, capsys):
        # an absurdly large step makes the cumulant flow diverge immediately;
        # depending on where it explodes this surfaces as a non-finite state
        # or as an indefinite noise covariance, both exit 3 with the trajectory
        cfg = write_cfg(tmp_path, integration={"dt": 50.0, "t_end": 500.0,
                                               "sample_every": 50.0})
        with pytest.raises(SystemExit) as exc:
            main(["simulate-sc", "--config", str(cfg), "--out",
                  str(tmp_path / "x")])
        assert exc.value.code == 3
        err = json.loads(capsys.readouterr().err)
        assert err["error"] in ("NumericalBlowupError", "PSDViolationError")
        assert err["trajectory"] == 0

    def test_wrong_engine_rejected(self, tmp_path):
        cfg = write_cfg(tmp_path, engine="meanfield")
        with pytest.raises(SystemExit) as exc:
            main(["simulate-sc", "--config", str(cfg), "--out",
                  str(tmp_path / "x")])
        assert exc.value.code == 2

    def test_config_and_preset_exclusive(self, tmp_path):
        cfg = write_cfg(tmp_path)
        with pytest.raises(SystemExit) as exc:
            main(["simulate-sc", "--config", str(cfg), "--preset", "fig3c",
                  "--out", str(tmp_path / "x")])
        assert exc.value.code == 2


class TestSimulateMf:
    def test_run_produces_outputs(self, tmp_path):
        cfg = write_cfg(tmp_path, engine="meanfield",
                        physical={"n_atoms": 50, "kappa": 780.0, "delta": 390.0,
                                  "w_pump": 10.0, "n_gamma_c": 40.0},
                        integration={"dt": 2e-3, "t_end": 2.0,
                                     "sample_every": 0.5,
                                     "snapshot_times": [1.0]})
        out = tmp_path / "mf"
        assert main(["simulate-mf", "--config", str(cfg), "--out", str(out)]) == 0
        cols, _ = io.read_table(out / "timeseries.csv")
        for ch in ("time", "p2_mean", "x_abs2", "xdagx", "cos_arg_x"):
            assert ch in cols
        snap, comment = io.read_table(out / "snapshot_t1.csv")
        assert comment == io.SNAPSHOT_SCHEMA
        assert {"x", "p", "s_re", "s_im", "z"} <= set(snap)
        assert (out / "final_state.csv").exists()

    def test_determinism(self, tmp_path):
        cfg = write_cfg(tmp_path, engine="meanfield",
                        physical={"n_atoms": 30, "kappa": 780.0, "delta": 390.0,
                                  "w_pump": 10.0, "n_gamma_c": 40.0})
        a, b = tmp_path / "a", tmp_path / "b"
        main(["simulate-mf", "--config", str(cfg), "--out", str(a)])
        main(["simulate-mf", "--config", str(cfg), "--out", str(b)])
        assert ((a / "timeseries.csv").read_bytes()
                == (b / "timeseries.csv").read_bytes())


class TestSteadyStateCmd:
    def test_profiles_have_fig7_structure(self, tmp_path):
        out = tmp_path / "ss"
        assert main(["steady-state", "--preset", "fig7", "--out", str(out)]) == 0
        cols, comment = io.read_table(out / "profiles.csv")
        assert comment == io.PROFILE_SCHEMA
        x, s0, z0 = cols["x"], cols["s0"], cols["z0"]
        # dipole flips sign across each node of cos(kx)
        for node in (np.pi / 2, 3 * np.pi / 2):
            before = s0[x < node][-1]
            after = s0[x > node][0]
            assert before * after < 0
        # inversion maximal (= 1) at the nodes
        i_node = int(np.argmin(np.abs(x - np.pi / 2)))
        assert z0[i_node] == pytest.approx(1.0, abs=1e-4)
        assert np.max(z0) <= 1.0 + 1e-12
        sol = json.loads((out / "solution.json").read_text())
        assert sol["x2"] == pytest.approx(0.044951, abs=1e-6)
        assert sol["omega0"] == pytest.approx(5.0)

    def test_pinned_regime(self, tmp_path):
        out = tmp_path / "pin"
        assert main(["steady-state", "--preset", "fig7", "--out", str(out),
                     "--regime", "pinned", "--delta-pin", "1.0"]) == 0
        sol = json.loads((out / "solution.json").read_text())
        assert sol["x2"] == pytest.approx(0.09375, rel=1e-10)


class TestSweepCmd:
    def test_emits_triplet(self, tmp_path):
        out = tmp_path / "sweep"
        assert main(["sweep", "--preset", "fig10", "--out", str(out),
                     "--delta-steps", "5", "--w-steps", "40"]) == 0
        p2w, _ = io.read_table(out / "p2_vs_w.csv")
        assert len(p2w["w_over_ngc"]) == 40
        wmin, _ = io.read_table(out / "wmin_vs_delta.csv")
        p2min, _ = io.read_table(out / "p2min_vs_delta.csv")
        assert len(wmin["delta_over_half_kappa"]) == 5
        assert np.all(p2min["p2_min"] > 0)


class TestSpectrumCmd:
    def test_constant_series_empty_peaks(self, tmp_path):
        series = tmp_path / "timeseries.csv"
        t = np.linspace(0, 50, 256)
        io.write_table(series, io.TIMESERIES_SCHEMA,
                       {"time": t, "xdagx": np.full(256, 0.25)})
        out = tmp_path / "spec"
        assert main(["spectrum", str(series), "--out", str(out)]) == 0
        peaks, _ = io.read_table(out / "peaks.csv")
        assert peaks["omega"].size == 0

    def test_oscillation_peaks(self, tmp_path):
        series = tmp_path / "timeseries.csv"
        t = np.arange(0, 100, 0.05)
        io.write_table(series, io.TIMESERIES_SCHEMA,
                       {"time": t, "cos_arg_x": np.cos(5.0 * t)})
        out = tmp_path / "spec"
        assert main(["spectrum", str(series), "--channel", "cos_arg_x",
                     "--out", str(out)]) == 0
        peaks, _ = io.read_table(out / "peaks.csv")
        best = peaks["omega"][np.argsort(peaks["height"])[-2:]]
        assert np.allclose(np.sort(np.abs(best)), [5.0, 5.0], atol=0.1)

    def test_missing_channel(self, tmp_path):
        series = tmp_path / "timeseries.csv"
        io.write_table(series, io.TIMESERIES_SCHEMA,
                       {"time": np.linspace(0, 10, 64),
                        "p2_mean": np.zeros(64)})
        with pytest.raises(SystemExit) as exc:
            main(["spectrum", str(series), "--channel", "nope",
                  "--out", str(tmp_path / "x")])
        assert exc.value.code == 2
