import json
import math
import subprocess
import sys

import numpy as np
import pytest

from qinv.cli import (
    EXIT_CONFIG,
    EXIT_NUMERIC,
    EXIT_OK,
    EXIT_REGIME,
    load_config,
    main,
    roundtrip_checksum,
)

from conftest import REF

REF_SU2 = {
    "algebra": "su2", "j": 0.5, "Omega": 1.0, "G": 0.25, "omega": 0.5,
    "steps": 2048, "integrator": "magnus2", "initial_n": 0,
}
REF_SU11 = {
    "algebra": "su11", "Omega": 1.0, "G": 0.25, "omega": 0.5,
    "steps": 2048, "integrator": "magnus2", "initial_n": 0,
}


def write_config(tmp_path, obj, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


def read_csv(path):
    lines = path.read_text().splitlines()
    header = lines[0].split(",")
    rows = [line.split(",") for line in lines[1:]]
    return header, rows


class TestConfig:
    def test_defaults(self, tmp_path):
        cfg = load_config(write_config(tmp_path, {
            "algebra": "su11", "Omega": 1.0, "G": 0.25, "omega": 0.5,
        }))
        assert cfg.fock_dim == 48
        assert cfg.steps == 4096
        assert cfg.integrator == "magnus2"
        assert cfg.initial_n == 0
        assert cfg.t_final == pytest.approx(REF.period)

    @pytest.mark.parametrize("mutation,field", [
        ({"G": None}, "G"),                                # missing
        ({"algebra": "su3"}, "algebra"),
        ({"j": 0.4}, "j"),
        ({"steps": 4}, "steps"),
        ({"integrator": "euler"}, "integrator"),
        ({"initial_n": 99}, "initial_n"),
        ({"fock_dim": 48}, "fock_dim"),                    # forbidden for su2
        ({"bogus_key": 1}, "bogus_key"),
    ])
    def test_rejects_bad_field(self, tmp_path, mutation, field):
        obj = dict(REF_SU2)
        for k, v in mutation.items():
            if v is None:
                obj.pop(k, None)
            else:
                obj[k] = v
        from qinv.errors import ConfigError
        with pytest.raises(ConfigError) as err:
            load_config(write_config(tmp_path, obj))
        assert err.value.field == field

    def test_su11_forbids_j(self, tmp_path):
        obj = dict(REF_SU11)
        obj["j"] = 0.5
        from qinv.errors import ConfigError
        with pytest.raises(ConfigError, match="'j'"):
            load_config(write_config(tmp_path, obj))


class TestVerifyCommand:
    def test_reference_passes(self, tmp_path, capsys):
        code = main(["verify", "--config", write_config(tmp_path, REF_SU2)])
        report = json.loads(capsys.readouterr().out)
        assert code == EXIT_OK
        assert report["all_passed"] is True
        assert report["regime"] == "unbroken"
        names = {c["name"] for c in report["checks"]}
        assert "pseudo_hermiticity" in names and "invariant_equation" in names

    def test_su11_reference_passes(self, tmp_path, capsys):
        code = main(["verify", "--config", write_config(tmp_path, REF_SU11)])
        report = json.loads(capsys.readouterr().out)
        assert code == EXIT_OK
        assert report["all_passed"] is True
        assert report["pt_checker"] == "parity-conjugation"
        assert report["sin_sq_half"] == pytest.approx(0.025658350974743116, rel=1e-12)

    def test_broken_regime_exit_2(self, tmp_path, capsys):
        obj = dict(REF_SU2, G=1.0)
        code = main(["verify", "--config", write_config(tmp_path, obj)])
        report = json.loads(capsys.readouterr().out)
        assert code == EXIT_REGIME
        assert report["regime"] == "broken"

    def test_missing_field_exit_64(self, tmp_path, capsys):
        obj = dict(REF_SU2)
        del obj["G"]
        code = main(["verify", "--config", write_config(tmp_path, obj)])
        err = capsys.readouterr().err
        assert code == EXIT_CONFIG
        assert "'G'" in err


class TestSolveCommand:
    def test_decoupled_phase_column(self, tmp_path):
        obj = dict(REF_SU2, G=0.0, steps=256, t_final=3.0)
        out = tmp_path / "sol.csv"
        code = main(["solve", "--config", write_config(tmp_path, obj), "--out", str(out)])
        assert code == EXIT_OK
        header, rows = read_csv(out)
        assert header[:3] == ["t", "re_psi_0", "im_psi_0"]
        assert header[-4:] == ["eta_norm", "invariant_residual",
                               "phase_numeric", "phase_analytic"]
        icol = header.index("phase_numeric")
        for row in rows:
            t = float(row[0])
            assert abs(float(row[icol]) - (-0.5 * t)) <= 1e-9  # -lambda Omega t

    def test_reference_run_phase_match_and_conservation(self, tmp_path):
        out = tmp_path / "sol.csv"
        code = main(["solve", "--config", write_config(tmp_path, REF_SU2),
                     "--out", str(out)])
        assert code == EXIT_OK
        header, rows = read_csv(out)
        inum = header.index("phase_numeric")
        iana = header.index("phase_analytic")
        ieta = header.index("eta_norm")
        nums = np.array([float(r[inum]) for r in rows])
        anas = np.array([float(r[iana]) for r in rows])
        etas = np.array([float(r[ieta]) for r in rows])
        assert np.abs(nums - anas).max() <= 1e-6
        assert np.abs(etas - etas[0]).max() <= 1e-8
        # 17 significant digits round-trip: re-parse, re-format, same text
        meta = json.loads((tmp_path / "sol.csv.meta.json").read_text())
        assert roundtrip_checksum(str(out)) == meta["data_checksum"]

    def test_su11_beyond_horizon_exit_70(self, tmp_path, capsys):
        out = tmp_path / "sol.csv"
        code = main(["solve", "--config", write_config(tmp_path, REF_SU11),
                     "--out", str(out)])
        assert code == EXIT_NUMERIC

    def test_su11_within_horizon(self, tmp_path):
        obj = dict(REF_SU11, t_final=1.5)
        out = tmp_path / "sol.json"
        code = main(["solve", "--config", write_config(tmp_path, obj),
                     "--out", str(out), "--format", "json"])
        assert code == EXIT_OK
        cols = json.loads(out.read_text())["columns"]
        assert len(cols["t"]) == obj["steps"] + 1
        diffs = [abs(a - b) for a, b in zip(cols["phase_numeric"], cols["phase_analytic"])]
        assert max(diffs) <= 1e-6


class TestPhasesCommand:
    def test_su2_reference_table(self, tmp_path):
        out = tmp_path / "ph.csv"
        code = main(["phases", "--config", write_config(tmp_path, REF_SU2),
                     "--out", str(out)])
        assert code == EXIT_OK
        header, rows = read_csv(out)
        assert header == ["n", "lambda_n", "lr_total", "dynamic", "geometric",
                          "berry_exact", "berry_adiabatic", "arbitration_winner"]
        assert len(rows) == 2
        top = rows[0]
        assert float(top[1]) == 0.5
        assert float(top[5]) == pytest.approx(-0.19056955002898116, abs=1e-12)
        assert {row[-1] for row in rows} == {"generic"}  # constant across rows

    def test_decoupled_berry_columns_zero(self, tmp_path):
        obj = dict(REF_SU2, G=0.0, steps=256)
        out = tmp_path / "ph.csv"
        assert main(["phases", "--config", write_config(tmp_path, obj),
                     "--out", str(out)]) == EXIT_OK
        header, rows = read_csv(out)
        for row in rows:
            assert float(row[5]) == 0.0 and float(row[6]) == 0.0

    def test_su11_guarded_rows(self, tmp_path):
        obj = dict(REF_SU11, steps=1024)
        out = tmp_path / "ph.csv"
        assert main(["phases", "--config", write_config(tmp_path, obj),
                     "--out", str(out)]) == EXIT_OK
        header, rows = read_csv(out)
        assert 0 < len(rows) < 48          # boundary states excluded
        assert float(rows[0][1]) == 0.25   # lambda_0 = 1/4
        assert {row[-1] for row in rows} == {"generic"}


class TestSweepCommand:
    def grid_config(self, count=5):
        return dict(REF_SU2, grid={"G": {"min": 0.0, "max": 1.0, "count": count}})

    def test_boundary_flip(self, tmp_path):
        out = tmp_path / "sw.csv"
        code = main(["sweep", "--config", write_config(tmp_path, self.grid_config()),
                     "--out", str(out)])
        assert code == EXIT_OK
        header, rows = read_csv(out)
        assert header == ["Omega", "G", "omega", "regime", "epsilon",
                          "sinh_sq_half", "berry_exact"]
        regimes = [(float(r[1]), r[3]) for r in rows]
        assert regimes == [(0.0, "unbroken"), (0.25, "unbroken"), (0.5, "unbroken"),
                           (0.75, "broken"), (1.0, "broken")]
        assert rows[3][4] == ""  # broken rows have empty numeric fields

    def test_single_point_matches_phases_values(self, tmp_path):
        cfg = dict(REF_SU2, grid={"G": {"min": 0.25, "max": 0.25, "count": 1}})
        out = tmp_path / "sw.csv"
        assert main(["sweep", "--config", write_config(tmp_path, cfg),
                     "--out", str(out)]) == EXIT_OK
        _, rows = read_csv(out)
        assert len(rows) == 1
        assert float(rows[0][4]) == pytest.approx(math.atanh(-1 / 3), rel=1e-14)
        assert float(rows[0][6]) == pytest.approx(-0.19056955002898116, abs=1e-12)

    def test_thread_determinism(self, tmp_path):
        cfg = write_config(tmp_path, dict(
            REF_SU2,
            grid={"G": {"min": 0.0, "max": 0.7, "count": 8},
                  "omega": {"min": 0.1, "max": 2.0, "count": 6}},
        ))
        out1, out4 = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(["sweep", "--config", cfg, "--out", str(out1)]) == EXIT_OK
        assert main(["sweep", "--config", cfg, "--out", str(out4), "--threads", "4"]) == EXIT_OK
        assert out1.read_bytes() == out4.read_bytes()

    def test_repeated_runs_byte_identical(self, tmp_path):
        cfg = write_config(tmp_path, self.grid_config(9))
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        main(["sweep", "--config", cfg, "--out", str(out1)])
        main(["sweep", "--config", cfg, "--out", str(out2)])
        assert out1.read_bytes() == out2.read_bytes()
        meta1 = json.loads((tmp_path / "a.csv.meta.json").read_text())
        assert roundtrip_checksum(str(out1)) == meta1["data_checksum"]

    def test_missing_grid_exit_64(self, tmp_path, capsys):
        out = tmp_path / "sw.csv"
        code = main(["sweep", "--config", write_config(tmp_path, REF_SU2),
                     "--out", str(out)])
        assert code == EXIT_CONFIG


class TestEntryPoint:
    def test_module_invocation(self, tmp_path):
        proc = subprocess.run(
            [sys.executable, "-m", "qinv", "--version"],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0
        assert proc.stdout.startswith("qinv ")

    def test_missing_out_is_config_error(self, tmp_path):
        code = main(["solve", "--config", write_config(tmp_path, REF_SU2)])
        assert code == EXIT_CONFIG

    def test_bad_cli_usage_is_config_error(self):
        assert main(["solve"]) == EXIT_CONFIG
