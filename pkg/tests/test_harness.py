import json
import os

import numpy as np
import pytest

from zrbr.cli import main
from zrbr.config import SimConfig
from zrbr.errors import ConfigurationError
from zrbr.harness import (
    EXIT_CAP_EXCEEDED,
    EXIT_OK,
    EXIT_VALIDATION,
    INEQUALITY_CAPS,
    cmd_epsilon_scaling,
    cmd_fuzz,
    cmd_norms,
    cmd_picard,
    cmd_region,
    cmd_simulate,
    config_from_dict,
    format_float,
    load_config,
    read_snapshot,
    write_snapshot,
)
from zrbr.model import ModelParams, ZRState
from zrbr.spectral import ComplexField, Grid

BASE_DOC = {
    "dim": 2,
    "n": 16,
    "length": 4 * np.pi,
    "dt": 1e-3,
    "t_end": 0.02,
    "sigma2": -1.0,
    "W": 1.0,
    "D": 0.5,
    "epsilon": 1.0,
    "recipe": "gaussian",
    "width": 1.0,
    "normalize_h1": 1.0,
    "diagnostics_stride": 5,
}


def write_config(tmp_path, doc=None):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(doc if doc is not None else BASE_DOC))
    return str(path)


class TestConfigLoading:
    def test_unknown_keys_are_hard_errors(self):
        with pytest.raises(ConfigurationError, match="typo_key"):
            config_from_dict({**BASE_DOC, "typo_key": 1})

    def test_missing_file(self):
        with pytest.raises(ConfigurationError):
            load_config("/nonexistent/cfg.json")

    def test_invalid_json(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text("{not json")
        with pytest.raises(ConfigurationError):
            load_config(str(p))

    def test_echo_round_trips_input(self):
        cfg, echo = config_from_dict(BASE_DOC)
        assert echo == BASE_DOC
        assert cfg.params.sigma2 == -1.0

    def test_seed_override(self):
        doc = {**BASE_DOC, "recipe": "random-band-limited", "seed": 1}
        cfg, echo = config_from_dict(doc, seed_override=99)
        assert cfg.seed == 99
        assert echo["seed"] == 99


def test_format_float_round_trips():
    rng = np.random.default_rng(0)
    for x in rng.normal(scale=1e8, size=50):
        assert float(format_float(x)) == x
    assert float(format_float(0.1)) == 0.1


class TestSnapshots:
    def test_write_read_roundtrip_exact(self, tmp_path):
        grid = Grid(2, 8, 5.0)
        rng = np.random.default_rng(1)
        st = ZRState(
            ComplexField(grid, rng.normal(size=grid.shape) + 1j * rng.normal(size=grid.shape)),
            ComplexField(grid, rng.normal(size=grid.shape) + 0j),
            ComplexField(grid, rng.normal(size=grid.shape) + 0j),
        )
        path = str(tmp_path / "state.bin")
        write_snapshot(path, st)
        back = read_snapshot(path)
        np.testing.assert_array_equal(back.psi.values, st.psi.values)
        np.testing.assert_array_equal(back.rho.values, st.rho.values)
        assert back.grid == grid

    def test_magic_checked(self, tmp_path):
        path = tmp_path / "junk.bin"
        path.write_bytes(b"not a snapshot at all")
        with pytest.raises(ConfigurationError):
            read_snapshot(str(path))


class TestSimulate:
    def test_zero_horizon_emits_single_row(self, tmp_path):
        cfg, echo = config_from_dict({**BASE_DOC, "t_end": 0.0})
        code, report = cmd_simulate(cfg, echo, str(tmp_path / "out"))
        assert code == EXIT_OK
        csv = (tmp_path / "out" / "diagnostics.csv").read_text().strip().splitlines()
        assert len(csv) == 2  # header + t=0 row
        assert report["payload"]["n_rows"] == 1

    def test_runs_are_byte_identical(self, tmp_path):
        for tag in ("a", "b"):
            cfg, echo = config_from_dict(BASE_DOC)
            cmd_simulate(cfg, echo, str(tmp_path / tag))
        assert (tmp_path / "a" / "diagnostics.csv").read_bytes() == (
            tmp_path / "b" / "diagnostics.csv"
        ).read_bytes()
        assert (tmp_path / "a" / "report.json").read_bytes() == (
            tmp_path / "b" / "report.json"
        ).read_bytes()

    def test_divergence_reported_with_exit_code(self, tmp_path):
        cfg, echo = config_from_dict({**BASE_DOC, "blowup_factor": 0.5, "t_end": 0.01})
        code, report = cmd_simulate(cfg, echo, str(tmp_path / "out"))
        assert code == 3
        assert report["payload"]["diverged_at"] is not None


class TestEpsilonScaling:
    def test_constant_proxy_and_zero_slope(self, tmp_path):
        cfg, echo = config_from_dict(BASE_DOC)
        code, report = cmd_epsilon_scaling(cfg, echo, [1.0, 0.5], str(tmp_path / "out"))
        assert code == EXIT_OK
        rows = report["payload"]["rows"]
        assert [r["T_proxy"] for r in rows] == [BASE_DOC["t_end"]] * 2
        assert report["payload"]["alpha_hat"] == 0.0
        assert report["payload"]["t_proxy_nondecreasing"]

    def test_list_must_descend(self, tmp_path):
        cfg, echo = config_from_dict(BASE_DOC)
        with pytest.raises(ConfigurationError):
            cmd_epsilon_scaling(cfg, echo, [0.5, 1.0], str(tmp_path / "out"))
        with pytest.raises(ConfigurationError):
            cmd_epsilon_scaling(cfg, echo, [], str(tmp_path / "out"))


class TestRegionCommand:
    def test_csv_row_count_matches_lattice(self, tmp_path):
        res = 5e-3
        code, report = cmd_region(2, res, str(tmp_path / "out"))
        assert code == EXIT_OK
        n_b1 = len(np.arange(0.5 + res, 1.0, res))
        n_b2 = len(np.arange(0.0, 0.5 + 0.5 * res, res))
        lines = (tmp_path / "out" / "region_d2.csv").read_text().strip().splitlines()
        assert len(lines) - 1 == n_b1 * n_b2
        assert report["payload"]["reference_box_contained"]

    def test_d3_report_carries_witnesses(self, tmp_path):
        _, report = cmd_region(3, 5e-3, str(tmp_path / "out"))
        assert not report["payload"]["reference_box_contained"]
        assert report["payload"]["witnesses"]

    def test_coarse_resolution_rejected(self, tmp_path):
        with pytest.raises(ConfigurationError):
            cmd_region(2, 0.05, str(tmp_path / "out"))


class TestFuzzCommand:
    def test_deterministic_reports(self, tmp_path):
        for tag in ("a", "b"):
            cmd_fuzz(200, 77, str(tmp_path / tag))
        assert (tmp_path / "a" / "report.json").read_bytes() == (
            tmp_path / "b" / "report.json"
        ).read_bytes()

    def test_cap_exceeded_signals_exit_code(self, tmp_path, monkeypatch):
        monkeypatch.setitem(INEQUALITY_CAPS, "ineq1", 1e-12)
        code, report = cmd_fuzz(50, 1, str(tmp_path / "out"))
        assert code == EXIT_CAP_EXCEEDED
        flagged = [r for r in report["payload"]["results"] if not r["within_cap"]]
        assert flagged


class TestPicardCommand:
    def test_contraction_table(self, tmp_path):
        doc = {**BASE_DOC, "normalize_h1": 1e-3, "t_end": 0.0}
        cfg, echo = config_from_dict(doc)
        code, report = cmd_picard(cfg, echo, [0.1], 3, str(tmp_path / "out"), n_time=32)
        assert code == EXIT_OK
        per_T = report["payload"]["per_T"]
        assert len(per_T) == 1
        assert per_T[0]["contraction_factor"] < 1.0


class TestNormsCommand:
    def test_zero_recipe_all_zero(self, tmp_path):
        code, report = cmd_norms("zero", 1.0, 0.6, "schrodinger", 0, str(tmp_path / "out"))
        assert code == EXIT_OK
        p = report["payload"]
        assert p["xsb_norm"] == 0.0
        assert p["ys_norm"] == 0.0
        assert p["embedding_ratio"] == 0.0

    def test_unknown_recipe_rejected(self, tmp_path):
        with pytest.raises(ConfigurationError):
            cmd_norms("fractal", 1.0, 0.6, "schrodinger", 0, str(tmp_path / "out"))

    def test_unknown_dispersion_rejected(self, tmp_path):
        with pytest.raises(ConfigurationError):
            cmd_norms("zero", 1.0, 0.6, "elastic", 0, str(tmp_path / "out"))


class TestCli:
    def test_validation_exit_code(self, tmp_path):
        path = write_config(tmp_path, {**BASE_DOC, "bogus": 1})
        assert main(["--config", path, "simulate"]) == EXIT_VALIDATION

    def test_missing_config_is_validation_error(self):
        assert main(["simulate"]) == EXIT_VALIDATION

    def test_simulate_and_norms_commands(self, tmp_path):
        path = write_config(tmp_path)
        out = str(tmp_path / "sim")
        assert main(["--config", path, "--out", out, "simulate"]) == EXIT_OK
        assert os.path.exists(os.path.join(out, "diagnostics.csv"))
        out2 = str(tmp_path / "norms")
        assert main(["--seed", "3", "--out", out2, "norms", "--recipe", "one-mode"]) == EXIT_OK

    def test_region_command(self, tmp_path):
        out = str(tmp_path / "reg")
        code = main(["--out", out, "region", "--d", "2", "--resolution", "0.005"])
        assert code == EXIT_OK
        report = json.loads((tmp_path / "reg" / "report.json").read_text())
        assert report["command"] == "region"
