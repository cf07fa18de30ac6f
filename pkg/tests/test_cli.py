import numpy as np
import pytest

from specsense.cli import main
from specsense.detectors import ed_threshold, eme_threshold, mme_threshold
from specsense.iqfile import write_iq
from specsense.rng import make_rng
from specsense.signals import SampleBlock

H0_SCENARIO = """
name: cli-h0
m: 2
l: 4
ns: 2000
trials: 8
master_seed: 5
detectors: [MME, ED]
"""

H1_SCENARIO = """
name: cli-h1
m: 2
p: 1
l: 4
ns: 2000
trials: 6
master_seed: 5
snr_grid_db: [-8.0]
signal:
  kind: iid-bpsk
channel:
  kind: random-gaussian
  orders: [2]
detectors: [MME, ED]
"""


class TestRun:
    def test_h0_run_writes_csv(self, tmp_path, capsys):
        scenario = tmp_path / "h0.yaml"
        scenario.write_text(H0_SCENARIO)
        out = tmp_path / "out.csv"
        assert main(["run", str(scenario), "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert lines[0].startswith("scenario,detector")
        assert len(lines) == 3
        assert "rate=" in capsys.readouterr().out

    def test_h1_run(self, tmp_path, capsys):
        scenario = tmp_path / "h1.yaml"
        scenario.write_text(H1_SCENARIO)
        assert main(["run", str(scenario)]) == 0
        assert "-8 dB" in capsys.readouterr().out

    def test_trials_and_seed_override(self, tmp_path):
        scenario = tmp_path / "h0.yaml"
        scenario.write_text(H0_SCENARIO)
        out1 = tmp_path / "a.csv"
        out2 = tmp_path / "b.csv"
        assert main(["run", str(scenario), "--trials", "4", "--seed", "77", "--out", str(out1)]) == 0
        assert main(["run", str(scenario), "--trials", "4", "--seed", "77", "--out", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()
        assert ",77" in out1.read_text().splitlines()[1]

    def test_invalid_scenario_fails_with_message(self, tmp_path, capsys):
        scenario = tmp_path / "bad.yaml"
        scenario.write_text("name: broken\nm: 2\nl: 4\nns: 4\ntrials: 1\ndetectors: [MME]\n")
        assert main(["run", str(scenario)]) == 1
        assert "error" in capsys.readouterr().err

    def test_missing_file_fails(self, tmp_path, capsys):
        assert main(["run", str(tmp_path / "nope.yaml")]) == 1
        assert "error" in capsys.readouterr().err


class TestRoc:
    def test_roc_runs(self, tmp_path):
        scenario = tmp_path / "h1.yaml"
        scenario.write_text(H1_SCENARIO)
        out = tmp_path / "roc.csv"
        assert main(["roc", str(scenario), "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert len(lines) > 10  # two rows per threshold per detector


class TestTable1:
    def test_passes(self, capsys):
        assert main(["table1"]) == 0
        out = capsys.readouterr().out
        assert "worst deviation" in out
        assert "FAIL" not in out


class TestThresholds:
    def test_prints_formula_values(self, capsys):
        assert main(["thresholds", "--ns", "100000", "--m", "4", "--l", "8", "--pfa", "0.1"]) == 0
        out = capsys.readouterr().out
        assert f"{mme_threshold(100000, 4, 8, 0.1):.10g}" in out
        assert f"{eme_threshold(100000, 4, 8, 0.1):.10g}" in out
        assert f"{ed_threshold(100000, 4, 0.1):.10g}" in out

    def test_regime_error_exit_code(self, capsys):
        assert main(["thresholds", "--ns", "10", "--m", "4", "--l", "8", "--pfa", "0.1"]) == 1
        assert "error" in capsys.readouterr().err


class TestIngest:
    def test_with_sidecar(self, tmp_path, capsys):
        path = tmp_path / "capture.dat"
        write_iq(SampleBlock(make_rng(91).standard_normal((2, 16)), sample_rate=1e6), path)
        assert main(["ingest", str(path)]) == 0
        out = capsys.readouterr().out
        assert "2 channel(s) x 16 real samples" in out

    def test_with_explicit_format(self, tmp_path, capsys):
        path = tmp_path / "bare.iq"
        np.arange(8, dtype="<f4").tofile(path)
        assert main(["ingest", str(path), "--format", "iq"]) == 0
        assert "4 complex samples" in capsys.readouterr().out

    def test_truncated_fails(self, tmp_path, capsys):
        path = tmp_path / "bad.iq"
        path.write_bytes(b"\x01\x02\x03")
        assert main(["ingest", str(path), "--format", "real"]) == 1
        assert "error" in capsys.readouterr().err
