"""Config parsing, command execution, exit codes, determinism, and golden
files for the command-line pipeline."""

import json
import math
import xml.etree.ElementTree as ET

import numpy as np
import pytest

import workdist.cli as cli
from workdist.errors import ConfigError
from conftest import FIXTURES, GOLDEN

FLAGSHIP = FIXTURES / "flagship.json"
CQED5 = FIXTURES / "cqed_alpha5.json"
CQED25 = FIXTURES / "cqed_alpha25.json"

MINIMAL = b"""{
  "system": {"initial_state": {"bloch": [0.0, 1.0, 0.0]}},
  "drive": {"bloch": [0.7853981633974483, 0.0, 0.0]}
}"""


def read_rows(path):
    rows = []
    for line in path.read_text().splitlines():
        if not line.startswith("#"):
            rows.append([float(x) for x in line.split(",")])
    return rows


class TestParseConfig:
    def test_minimal_defaults(self):
        cfg = cli.parse_config(MINIMAL)
        assert cfg.omega_a == 1.0
        assert cfg.dephase is False
        assert cfg.cqed["theta_points"] == 720
        assert cfg.cqed["fock_cutoff"] is None
        assert cfg.scheme_a["samples"] == 2048
        assert cfg.pointer["grid_points"] == 2048
        # cutoff rule applied when instantiated
        assert cli._dispersive(cfg).fock_cutoff == math.ceil(2.5 ** 2 + 6 * 2.5 + 10)

    def test_both_state_representations_rejected(self):
        doc = json.loads(MINIMAL)
        doc["system"]["initial_state"] = {"bloch": [0, 1, 0], "rho": [[[1, 0], [0, 0]],
                                                                      [[0, 0], [0, 0]]]}
        with pytest.raises(ConfigError, match="system.initial_state"):
            cli.parse_config(json.dumps(doc).encode())

    def test_neither_state_representation_rejected(self):
        doc = json.loads(MINIMAL)
        doc["system"]["initial_state"] = {}
        with pytest.raises(ConfigError, match="system.initial_state"):
            cli.parse_config(json.dumps(doc).encode())

    def test_both_drive_representations_rejected(self):
        doc = json.loads(MINIMAL)
        doc["drive"] = {"bloch": [0, 0, 0], "unitary": [[[1, 0], [0, 0]],
                                                        [[0, 0], [1, 0]]]}
        with pytest.raises(ConfigError, match="drive"):
            cli.parse_config(json.dumps(doc).encode())

    def test_explicit_rho_and_unitary(self):
        doc = {
            "system": {"initial_state": {"rho": [[[0.5, 0], [0, -0.5]],
                                                 [[0, 0.5], [0.5, 0]]]}},
            "drive": {"unitary": [[[0, 0], [1, 0]], [[1, 0], [0, 0]]]},
        }
        cfg = cli.parse_config(json.dumps(doc).encode())
        np.testing.assert_allclose(cfg.state.rho, [[0.5, -0.5j], [0.5j, 0.5]])
        np.testing.assert_allclose(cfg.unitary, [[0, 1], [1, 0]])

    def test_unknown_key_named(self):
        doc = json.loads(MINIMAL)
        doc["scheme_a"] = {"window": 1.0}
        with pytest.raises(ConfigError, match="scheme_a.window"):
            cli.parse_config(json.dumps(doc).encode())

    def test_bad_samples_named(self):
        doc = json.loads(MINIMAL)
        doc["scheme_a"] = {"samples": 1000}
        with pytest.raises(ConfigError, match="scheme_a.samples"):
            cli.parse_config(json.dumps(doc).encode())

    def test_invalid_json(self):
        with pytest.raises(ConfigError, match="invalid JSON"):
            cli.parse_config(b"{nope")

    def test_fixture_round_trip(self):
        raw = FLAGSHIP.read_bytes()
        cfg = cli.parse_config(raw)
        canon = cli.serialize_config(cfg)
        again = cli.parse_config(canon.encode())
        assert cli.serialize_config(again) == canon


class TestRun:
    def test_scheme_a_flagship_atoms(self, tmp_path):
        cfg = cli.parse_config(FLAGSHIP.read_bytes())
        files = cli.run("scheme-a", cfg, out_dir=str(tmp_path))
        atoms = read_rows(tmp_path / "scheme_a_atoms.csv")
        got = {row[0]: row[1] for row in atoms}
        assert got == {-1.0: pytest.approx(0.25), -0.5: pytest.approx(-0.5),
                       0.0: pytest.approx(0.5), 0.5: pytest.approx(0.5),
                       1.0: pytest.approx(0.25)}
        assert len(files) == 2

    def test_moments_columns_agree(self, tmp_path):
        cfg = cli.parse_config(FLAGSHIP.read_bytes())
        cli.run("moments", cfg, out_dir=str(tmp_path))
        rows = read_rows(tmp_path / "moments.csv")
        assert [int(r[0]) for r in rows] == [1, 2, 3, 4, 5, 6]
        assert rows[0][1] == pytest.approx(0.5, abs=1e-12)
        for order, analytic, fd in rows[:2]:
            assert fd == pytest.approx(analytic, abs=1e-6)

    def test_dephase_flag_drops_interference(self, tmp_path):
        doc = json.loads(FLAGSHIP.read_bytes())
        doc["system"]["dephase"] = True
        cfg = cli.parse_config(json.dumps(doc).encode())
        cli.run("scheme-a", cfg, out_dir=str(tmp_path))
        atoms = read_rows(tmp_path / "scheme_a_atoms.csv")
        assert {row[0] for row in atoms} == {-1.0, 0.0, 1.0}
        assert all(row[3] == 0 for row in atoms)

    def test_cqed_angular_coherent_vs_incoherent(self, tmp_path):
        # alpha = 5 resolved regime: dephasing leaves the record unchanged
        raw = CQED5.read_bytes()
        cfg = cli.parse_config(raw)
        cli.run("cqed-angular", cfg, out_dir=str(tmp_path / "coh"))
        doc = json.loads(raw)
        doc["system"]["dephase"] = True
        cfg_in = cli.parse_config(json.dumps(doc).encode())
        cli.run("cqed-angular", cfg_in, out_dir=str(tmp_path / "in"))
        coh = np.array(read_rows(tmp_path / "coh" / "cqed_angular.csv"))
        inc = np.array(read_rows(tmp_path / "in" / "cqed_angular.csv"))
        np.testing.assert_array_equal(coh[:, 0], inc[:, 0])
        assert np.max(np.abs(coh[:, 1] - inc[:, 1])) <= 1e-3

    def test_husimi_rows_sorted_and_threaded_identical(self, tmp_path, monkeypatch):
        cfg = cli.parse_config(CQED25.read_bytes())
        cli.run("cqed-husimi", cfg, out_dir=str(tmp_path / "a"))
        monkeypatch.setenv("WORKDIST_THREADS", "3")
        cli.run("cqed-husimi", cfg, out_dir=str(tmp_path / "b"))
        a = (tmp_path / "a" / "cqed_husimi.csv").read_bytes()
        b = (tmp_path / "b" / "cqed_husimi.csv").read_bytes()
        assert a == b
        rows = read_rows(tmp_path / "a" / "cqed_husimi.csv")
        keys = [(r[0], r[1]) for r in rows]
        assert keys == sorted(keys)

    def test_svg_outputs_are_xml(self, tmp_path):
        cfg = cli.parse_config(FLAGSHIP.read_bytes())
        files = cli.run("scheme-a", cfg, out_dir=str(tmp_path), svg=True)
        svgs = [f for f in files if f.endswith(".svg")]
        assert svgs
        for path in svgs:
            root = ET.parse(path).getroot()
            assert root.tag.endswith("svg")

    def test_header_carries_config_hash(self, tmp_path):
        raw = FLAGSHIP.read_bytes()
        cfg = cli.parse_config(raw)
        cli.run("pointer", cfg, out_dir=str(tmp_path))
        head = (tmp_path / "pointer_distribution.csv").read_text().splitlines()[:4]
        import hashlib
        assert head[2] == f"# config-sha256: {hashlib.sha256(raw).hexdigest()}"


class TestMainExitCodes:
    def test_success(self, tmp_path, capsys):
        rc = cli.main(["scheme-a", "--config", str(FLAGSHIP), "--out", str(tmp_path)])
        assert rc == 0
        assert "scheme_a_atoms.csv" in capsys.readouterr().out

    def test_unknown_command_usage(self, capsys):
        rc = cli.main(["frobnicate", "--config", str(FLAGSHIP)])
        assert rc == 2
        assert "usage" in capsys.readouterr().err.lower()

    def test_config_error_is_2(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text('{"system": {}, "drive": {"bloch": [0,0,0]}}')
        rc = cli.main(["scheme-a", "--config", str(bad), "--out", str(tmp_path)])
        assert rc == 2
        assert "system.initial_state" in capsys.readouterr().err

    def test_numerical_failure_is_3(self, tmp_path, capsys):
        doc = json.loads(CQED25.read_bytes())
        doc["cqed"]["fock_cutoff"] = 8
        bad = tmp_path / "cutoff.json"
        bad.write_text(json.dumps(doc))
        rc = cli.main(["cqed-angular", "--config", str(bad), "--out", str(tmp_path)])
        assert rc == 3
        assert "numerical failure" in capsys.readouterr().err

    def test_io_error_is_4(self, tmp_path, capsys):
        blocker = tmp_path / "blocked"
        blocker.write_text("not a directory")
        rc = cli.main(["pointer", "--config", str(FLAGSHIP), "--out", str(blocker)])
        assert rc == 4

    def test_missing_config_file_is_4(self, tmp_path):
        rc = cli.main(["pointer", "--config", str(tmp_path / "nope.json")])
        assert rc == 4

    def test_print_defaults(self, capsys):
        rc = cli.main(["scheme-a", "--print-defaults"])
        assert rc == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["cqed"]["theta_points"] == 720


class TestDeterminismAndGolden:
    FIXTURE_COMMANDS = [
        (FLAGSHIP, ("scheme-a", "pointer", "moments")),
        (CQED5, ("cqed-angular", "cqed-scheme-a")),
        (CQED25, ("cqed-angular", "cqed-husimi")),
    ]

    def _run_all(self, base):
        outputs = {}
        for fixture, commands in self.FIXTURE_COMMANDS:
            cfg = cli.parse_config(fixture.read_bytes())
            for command in commands:
                out_dir = base / fixture.stem / command
                for path in cli.run(command, cfg, out_dir=str(out_dir)):
                    if path.endswith(".csv"):
                        rel = f"{fixture.stem}/{command}/{path.rsplit('/', 1)[-1]}"
                        with open(path, "rb") as fh:
                            outputs[rel] = fh.read().replace(b"\r\n", b"\n")
        return outputs

    def test_byte_identical_across_runs(self, tmp_path):
        first = self._run_all(tmp_path / "run1")
        second = self._run_all(tmp_path / "run2")
        assert first.keys() == second.keys()
        for key in first:
            assert first[key] == second[key], f"{key} differs between runs"

    def test_matches_committed_golden(self, tmp_path):
        from conftest import csv_matches_golden
        got = self._run_all(tmp_path / "run")
        for key, payload in got.items():
            golden = GOLDEN / key
            assert golden.exists(), f"missing golden file {key}"
            assert csv_matches_golden(payload, golden.read_bytes()), \
                f"{key} differs from golden"
