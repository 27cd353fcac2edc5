import json

import numpy as np
import pytest

from hetsched.cli import main
from hetsched.kernels import random_image, write_pgm

DEMV_DOC = {
    "composition": "sequential",
    "clock_hz": 100e6,
    "stages": [
        {"label": "x-load", "iterations": 64, "ii": 1, "latency": 10, "power_w": 2.0},
        {"label": "compute", "iterations": 1024, "ii": 1, "latency": 20, "power_w": 4.0},
    ],
}


@pytest.fixture
def demv_pipeline_file(tmp_path):
    path = tmp_path / "demv.json"
    path.write_text(json.dumps(DEMV_DOC))
    return path


class TestModelCommand:
    def test_reports_cycles_and_power(self, demv_pipeline_file, capsys):
        assert main(["model", "--pipeline", str(demv_pipeline_file)]) == 0
        out = capsys.readouterr().out
        assert "1118" in out
        assert "avg_power_w" in out and "3.88235294" in out

    def test_empty_pipeline_reports_zeros(self, tmp_path, capsys):
        path = tmp_path / "empty.json"
        path.write_text('{"composition": "concurrent", "clock_hz": 1e6, "stages": []}')
        assert main(["model", "--pipeline", str(path)]) == 0
        out = capsys.readouterr().out
        assert "cycles" in out

    def test_malformed_json_exits_nonzero(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text("{nope")
        assert main(["model", "--pipeline", str(path)]) != 0
        assert "error:" in capsys.readouterr().err

    def test_missing_file_exits_nonzero(self, capsys):
        assert main(["model", "--pipeline", "/nonexistent.json"]) != 0
        assert "error:" in capsys.readouterr().err


class TestCalibrateCommand:
    def test_fit_and_profile_output(self, tmp_path, capsys):
        csv = tmp_path / "m.csv"
        csv.write_text("items,seconds\n1000,2.0\n2000,4.2\n")
        profile = tmp_path / "device.json"
        code = main(["calibrate", "--csv", str(csv), "--name", "zynq", "--out", str(profile)])
        assert code == 0
        assert "0.00208" in capsys.readouterr().out
        doc = json.loads(profile.read_text())
        assert doc["name"] == "zynq"
        assert doc["time_coeff_s_per_item"] == pytest.approx(0.00208)

    def test_invalid_csv(self, tmp_path, capsys):
        csv = tmp_path / "m.csv"
        csv.write_text("wrong,header\n1,2\n")
        assert main(["calibrate", "--csv", str(csv)]) != 0


class TestScheduleCommand:
    def test_alpha_split_with_reference_column(self, capsys):
        code = main(
            [
                "schedule",
                "--items",
                "8388608",
                "--alpha",
                "0.85",
                "--reference-speedup",
                "1.79",
            ]
        )
        assert code == 0
        out = capsys.readouterr().out
        assert "4534383" in out and "3854225" in out
        assert "2.17647059" in out
        assert "1.79" in out

    def test_even_split(self, capsys):
        assert main(["schedule", "--items", "1000", "--alpha", "1.0"]) == 0
        out = capsys.readouterr().out
        assert out.count("500") >= 2

    def test_sparse_case_split(self, capsys):
        assert main(["schedule", "--items", "2943887", "--alpha", "3.2"]) == 0
        out = capsys.readouterr().out
        assert "700925" in out and "2242962" in out

    def test_profiles_and_baselines(self, tmp_path, capsys):
        fpga = tmp_path / "fpga.json"
        gpu = tmp_path / "gpu.json"
        fpga.write_text(json.dumps({"name": "fpga", "time_coeff_s_per_item": 1e-9, "active_power_w": 2.0}))
        gpu.write_text(json.dumps({"name": "gpu", "time_coeff_s_per_item": 0.5e-9, "active_power_w": 8.0}))
        out_dir = tmp_path / "rep"
        code = main(
            [
                "schedule",
                "--items",
                "1000000",
                "--profile-fpga",
                str(fpga),
                "--profile-gpu",
                str(gpu),
                "--baseline-time",
                "5e-4",
                "--baseline-energy",
                "4e-3",
                "--out",
                str(out_dir),
            ]
        )
        assert code == 0
        text = (out_dir / "schedule.txt").read_text()
        csv = (out_dir / "schedule.csv").read_text()
        assert "speedup" in text and "energy_factor" in text
        assert csv.splitlines()[0].startswith("items,")

    def test_byte_identical_reports(self, tmp_path):
        args = ["schedule", "--items", "12345", "--alpha", "2.5", "--out"]
        assert main(args + [str(tmp_path / "a")]) == 0
        assert main(args + [str(tmp_path / "b")]) == 0
        assert (tmp_path / "a/schedule.txt").read_bytes() == (tmp_path / "b/schedule.txt").read_bytes()
        assert (tmp_path / "a/schedule.csv").read_bytes() == (tmp_path / "b/schedule.csv").read_bytes()

    def test_nonpositive_items_rejected(self, capsys):
        assert main(["schedule", "--items", "0", "--alpha", "1.0"]) != 0

    def test_alpha_or_profiles_required(self, capsys):
        assert main(["schedule", "--items", "10"]) != 0


class TestRunCommand:
    def test_histogram_from_pgm(self, tmp_path, capsys):
        img = random_image(64, 48, seed=3)
        pgm = tmp_path / "img.pgm"
        write_pgm(pgm, img)
        out = tmp_path / "out"
        code = main(["run", "--kernel", "histogram", "--input", str(pgm), "--out", str(out)])
        assert code == 0
        report = (out / "report.txt").read_text()
        assert "identical bins" in report
        assert "exact" in report
        hist_lines = (out / "histogram.csv").read_text().splitlines()
        assert hist_lines[0] == "bin,count"
        counts = np.array([int(line.split(",")[1]) for line in hist_lines[1:]])
        assert counts.sum() == 64 * 48
        trace_lines = (out / "trace.csv").read_text().splitlines()
        assert trace_lines[0] == "stage,iteration,start_cycle,finish_cycle"

    def test_histogram_synthetic_is_deterministic(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        args = ["run", "--kernel", "histogram", "--width", "80", "--height", "60", "--seed", "9"]
        assert main(args + ["--out", str(a)]) == 0
        assert main(args + ["--out", str(b)]) == 0
        assert (a / "report.txt").read_bytes() == (b / "report.txt").read_bytes()
        assert (a / "histogram.csv").read_bytes() == (b / "histogram.csv").read_bytes()

    def test_demv_synthetic(self, tmp_path):
        out = tmp_path / "out"
        code = main(
            ["run", "--kernel", "demv", "--rows", "32", "--cols", "20", "--unroll", "4", "--out", str(out)]
        )
        assert code == 0
        assert (out / "y.csv").read_text().splitlines()[0] == "index,value"

    def test_spmv_from_matrix_market(self, tmp_path):
        mtx = tmp_path / "m.mtx"
        mtx.write_text("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 2 2.0\n2 1 -1.0\n")
        out = tmp_path / "out"
        code = main(["run", "--kernel", "spmv", "--input", str(mtx), "--out", str(out)])
        assert code == 0
        report = (out / "report.txt").read_text()
        assert "csr_vs_densified_rel_err" in report

    def test_missing_input_file(self, tmp_path, capsys):
        code = main(["run", "--kernel", "histogram", "--input", "/missing.pgm", "--out", str(tmp_path / "o")])
        assert code != 0


class TestSimulateCommand:
    def test_trace_and_agreement(self, demv_pipeline_file, tmp_path, capsys):
        trace = tmp_path / "trace.csv"
        code = main(
            ["simulate", "--pipeline", str(demv_pipeline_file), "--alloc", "4096", "--trace", str(trace)]
        )
        assert code == 0
        out = capsys.readouterr().out
        assert "1118" in out and "exact" in out
        assert trace.read_text().splitlines()[0] == "stage,iteration,start_cycle,finish_cycle"

    def test_arena_env_override(self, demv_pipeline_file, monkeypatch, capsys):
        monkeypatch.setenv("HETSCHED_ARENA_BYTES", "1024")
        code = main(["simulate", "--pipeline", str(demv_pipeline_file), "--alloc", "2048"])
        assert code != 0
        assert "exhausted" in capsys.readouterr().err

    def test_arena_env_passes_when_big_enough(self, demv_pipeline_file, monkeypatch, capsys):
        monkeypatch.setenv("HETSCHED_ARENA_BYTES", "8192")
        assert main(["simulate", "--pipeline", str(demv_pipeline_file), "--alloc", "2048"]) == 0
        out = capsys.readouterr().out
        assert "arena_bytes" in out and "8192" in out
