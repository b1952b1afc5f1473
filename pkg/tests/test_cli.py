"""Tests for the command-line front end."""

import json

import pytest

from topa.main import EXIT_OK, EXIT_RUNTIME, EXIT_USAGE, main
from topa.schemas import BenchReport, RunReport
from topa.services.fileio import read_checkpoint, read_tts

SMALL = ["--dims", "6,5,4", "--ranks", "2,2,2", "--t", "16", "--coeffs", "0.6", "--core-d", "0"]
STREAM = ["--ranks", "2,2,2", "--t0", "12", "--max-iter", "30", "--varphi", "10", "--seed", "5"]


@pytest.fixture
def tts_file(tmp_path):
    """Small generated TTS1 file (dims (6, 5, 4), T=16)."""
    path = tmp_path / "small.tts"
    assert main(["gen", *SMALL, "--seed", "11", "-o", str(path)]) == EXIT_OK
    return path


class TestGen:
    """Tests for the gen subcommand."""

    def test_reference_file_size(self, tmp_path, capsys):
        """20x20x20 real tensors with T=70: 30 header + payload + 4 checksum bytes."""
        path = tmp_path / "s.tts"
        code = main(
            ["gen", "--dims", "20,20,20", "--ranks", "4,4,4", "--t", "70",
             "--rho", "0.1", "--seed", "7", "-o", str(path)]
        )
        assert code == EXIT_OK
        assert path.stat().st_size == 30 + 20 * 20 * 20 * 70 * 8 + 4
        assert "T=70" in capsys.readouterr().out

    def test_deterministic(self, tmp_path):
        """Same flags and seed give identical files."""
        a, b = tmp_path / "a.tts", tmp_path / "b.tts"
        main(["gen", *SMALL, "--seed", "3", "-o", str(a)])
        main(["gen", *SMALL, "--seed", "3", "-o", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_missing_output(self):
        """No output path from -o or the config is a usage error."""
        assert main(["gen", *SMALL]) == EXIT_USAGE

    def test_output_from_config(self, tmp_path):
        """The config file may name the output path."""
        out = tmp_path / "from_cfg.tts"
        cfg = tmp_path / "gen.json"
        cfg.write_text(json.dumps({"output": str(out)}))
        assert main(["gen", *SMALL, "--config", str(cfg)]) == EXIT_OK
        assert read_tts(out).t == 16

    def test_invalid_config(self, tmp_path):
        """Ranks larger than dims exit with the usage code."""
        code = main(["gen", "--dims", "3,3", "--ranks", "4,4", "-o", str(tmp_path / "x.tts")])
        assert code == EXIT_USAGE

    def test_from_text(self, tmp_path):
        """A delimited text series is imported into TTS1."""
        text = tmp_path / "series.csv"
        text.write_text("1,2,3,4,5,6\n7,8,9,10,11,12\n")
        out = tmp_path / "series.tts"
        assert main(["gen", "--from-text", str(text), "--dims", "2,3", "-o", str(out)]) == EXIT_OK
        record = read_tts(out)
        assert record.dims == (2, 3)
        assert record.t == 2
        assert record.tensors[1][1, 2] == 12.0


class TestStream:
    """Tests for the stream subcommand."""

    def test_report_file(self, tts_file, tmp_path):
        """A report with one entry per streaming step is written."""
        out = tmp_path / "report.json"
        assert main(["stream", str(tts_file), *STREAM, "-o", str(out)]) == EXIT_OK
        report = RunReport.model_validate_json(out.read_text())
        assert report.method == "topa"
        assert len(report.nrmse_per_step) == 4
        assert report.config["hyper"]["max_iter_stage1"] == 30

    def test_report_to_stdout(self, tts_file, capsys):
        """Without -o the report goes to stdout."""
        assert main(["stream", str(tts_file), *STREAM, "--method", "topa-init"]) == EXIT_OK
        report = json.loads(capsys.readouterr().out)
        assert report["method"] == "topa-init"

    def test_aaw_flags(self, tts_file, capsys):
        """AAW flags reach the window configuration."""
        code = main(
            ["stream", str(tts_file), *STREAM, "--method", "topa-aaw",
             "--tau", "5", "--alpha-damp", "0.8", "--beta", "0.5"]
        )
        assert code == EXIT_OK
        report = json.loads(capsys.readouterr().out)
        assert report["config"]["aaw"] == {"tau": 5, "alpha_damp": 0.8, "beta": 0.5}
        assert len(report["mean_weight_per_step"]) == 4

    def test_checkpoint_out(self, tts_file, tmp_path):
        """--checkpoint-out stores the final state."""
        ckpt = tmp_path / "final.tpa"
        code = main(
            ["stream", str(tts_file), *STREAM, "--checkpoint-out", str(ckpt),
             "-o", str(tmp_path / "r.json")]
        )
        assert code == EXIT_OK
        state, hyper = read_checkpoint(ckpt)
        assert state.t == 16
        assert hyper.ranks == (2, 2, 2)

    def test_output_paths_from_config(self, tts_file, tmp_path, capsys):
        """Output and checkpoint paths may come from the config file."""
        out, ckpt = tmp_path / "r.json", tmp_path / "final.tpa"
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"output": str(out), "checkpoint-out": str(ckpt)}))
        assert main(["stream", str(tts_file), *STREAM, "--config", str(cfg)]) == EXIT_OK
        assert RunReport.model_validate_json(out.read_text()).method == "topa"
        assert read_checkpoint(ckpt)[0].t == 16
        assert capsys.readouterr().out == ""

    def test_flags_override_config(self, tts_file, tmp_path):
        """Flags win over the JSON config file, which fills the rest."""
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"ranks": [2, 2, 2], "t0": 12, "max-iter": 20, "lambda": 0.5}))
        out = tmp_path / "r.json"
        assert main(["stream", str(tts_file), "--config", str(cfg), "--t0", "13", "-o", str(out)]) == EXIT_OK
        report = RunReport.model_validate_json(out.read_text())
        assert report.config["t0"] == 13
        assert report.config["hyper"]["max_iter_stage1"] == 20
        assert report.config["hyper"]["lam"] == 0.5
        assert len(report.nrmse_per_step) == 3

    def test_zero_iterations_rejected(self, tts_file):
        """--iters 0 is a usage error."""
        with pytest.raises(SystemExit) as exc:
            main(["stream", str(tts_file), *STREAM, "--iters", "0"])
        assert exc.value.code == EXIT_USAGE

    def test_missing_ranks(self, tts_file):
        """Ranks are required."""
        assert main(["stream", str(tts_file), "--t0", "12"]) == EXIT_USAGE

    def test_window_not_longer_than_lag(self, tts_file):
        """tau <= p + d exits with the usage code."""
        code = main(["stream", str(tts_file), *STREAM, "--method", "topa-aaw", "--tau", "2", "--p", "2"])
        assert code == EXIT_USAGE

    def test_corrupt_file(self, tts_file, tmp_path):
        """A damaged file is a runtime failure."""
        data = bytearray(tts_file.read_bytes())
        data[40] ^= 0xFF
        bad = tmp_path / "bad.tts"
        bad.write_bytes(bytes(data))
        assert main(["stream", str(bad), *STREAM]) == EXIT_RUNTIME

    def test_missing_file(self, tmp_path):
        """A missing input file is a runtime failure."""
        assert main(["stream", str(tmp_path / "none.tts"), *STREAM]) == EXIT_RUNTIME

    def test_series_too_short(self, tts_file):
        """t0 covering the whole series leaves nothing to stream."""
        code = main(["stream", str(tts_file), "--ranks", "2,2,2", "--t0", "16"])
        assert code == EXIT_RUNTIME


class TestBench:
    """Tests for the bench subcommand."""

    def test_report_and_table(self, tmp_path, capsys):
        """JSON report to -o, aligned table to stdout."""
        out = tmp_path / "bench.json"
        code = main(
            ["bench", *SMALL, "--t0", "12", "--max-iter", "20", "--seeds", "0,1",
             "--workers", "1", "-o", str(out)]
        )
        assert code == EXIT_OK
        report = BenchReport.model_validate_json(out.read_text())
        assert [m.method for m in report.methods] == ["topa", "offline-refit"]
        assert len(report.runs) == 4
        assert "offline-refit" in capsys.readouterr().out

    def test_single_run_matches_stream(self, tmp_path, capsys):
        """One replica aggregates to the stream report of the same seed."""
        tts = tmp_path / "s.tts"
        main(["gen", *SMALL, "--seed", "4", "-o", str(tts)])
        stream_out = tmp_path / "stream.json"
        main(["stream", str(tts), "--ranks", "2,2,2", "--t0", "12", "--max-iter", "20",
              "--seed", "4", "-o", str(stream_out)])
        bench_out = tmp_path / "bench.json"
        main(["bench", *SMALL, "--t0", "12", "--max-iter", "20", "--seeds", "4",
              "--methods", "topa", "--workers", "1", "-o", str(bench_out)])

        single = RunReport.model_validate_json(stream_out.read_text())
        bench = BenchReport.model_validate_json(bench_out.read_text())
        assert bench.methods[0].mean_nrmse == pytest.approx(single.mean_nrmse, rel=1e-12)

    def test_output_from_config(self, tmp_path, capsys):
        """The config file may name the report path."""
        out = tmp_path / "bench.json"
        cfg = tmp_path / "bench_cfg.json"
        cfg.write_text(json.dumps({"output": str(out), "seeds": [0], "methods": ["topa"]}))
        code = main(["bench", *SMALL, "--t0", "12", "--max-iter", "20", "--workers", "1",
                     "--config", str(cfg)])
        assert code == EXIT_OK
        assert BenchReport.model_validate_json(out.read_text()).seeds == [0]
        assert capsys.readouterr().out.splitlines()[0].split()[0] == "method"

    def test_unknown_method(self):
        """An unknown method name is a usage error."""
        assert main(["bench", *SMALL, "--methods", "nope", "--runs", "1", "--workers", "1"]) == EXIT_USAGE
