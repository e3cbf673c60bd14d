import json

import pytest

from modfa.cli import main
from modfa.circuit import parse


def _run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_compile_report_opt_rz(capsys):
    code, out, _ = _run(capsys, "compile", "--p", "11", "--k", "3,5,7",
                        "--scheme", "opt-rz", "--length", "11", "--emit", "report")
    assert code == 0
    report = json.loads(out)
    assert report["cx"] == 44
    assert set(report) == {"sx", "rz", "cx", "x", "depth", "qubits"}


def test_compile_rz_unoptimized_counts(capsys):
    # the transpiled single-qubit phase scheme needs 2 sx and j+2 rz
    code, out, _ = _run(capsys, "compile", "--p", "11", "--k", "1", "--scheme", "rz",
                        "--length", "5", "--emit", "report", "--no-optimize")
    assert code == 0
    report = json.loads(out)
    assert report["sx"] == 2 and report["rz"] == 7


def test_compile_optimized_merges_rotations(capsys):
    code, out, _ = _run(capsys, "compile", "--p", "11", "--k", "1", "--scheme", "rz",
                        "--length", "5", "--emit", "report")
    assert code == 0
    report = json.loads(out)
    assert report["sx"] == 2 and report["rz"] == 1


def test_compile_emit_circuit_parses(capsys):
    code, out, _ = _run(capsys, "compile", "--p", "11", "--k", "1", "--scheme", "ry",
                        "--length", "2", "--emit", "circuit", "--no-optimize")
    assert code == 0
    c = parse(out)
    assert c.num_qubits == 1
    assert [g.name for g in c.gates].count("sx") == 4


def test_compile_emit_both_files(tmp_path, capsys):
    base = tmp_path / "out"
    code, out, _ = _run(capsys, "compile", "--p", "5", "--k", "1", "--scheme", "rz",
                        "--length", "3", "--emit", "both", "--output", str(base))
    assert code == 0 and out == ""
    parse((tmp_path / "out.circuit.txt").read_text())
    json.loads((tmp_path / "out.report.json").read_text())


def test_compile_usage_errors(capsys):
    code, _, err = _run(capsys, "compile", "--p", "11", "--k", "1",
                        "--scheme", "opt-rz", "--length", "2")
    assert code == 2
    assert "3 multiplier" in err
    code, _, _ = _run(capsys, "compile", "--p", "9", "--k", "1",
                      "--scheme", "ry", "--length", "2")
    assert code == 2
    code, _, _ = _run(capsys, "compile", "--p", "11", "--k", "one",
                      "--scheme", "ry", "--length", "2")
    assert code == 2


def test_missing_flags_exit_2(capsys):
    assert main(["compile", "--p", "11"]) == 2
    capsys.readouterr()


def test_sweep_csv_and_member_rows(capsys):
    code, out, _ = _run(capsys, "sweep", "--p", "11", "--k", "3,5,7",
                        "--scheme", "opt-rz", "--max-length", "22")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 24
    for length in (0, 11, 22):
        fields = lines[1 + length].split(",")
        assert fields[0] == str(length)
        assert float(fields[4]) == pytest.approx(1.0, abs=1e-9)


def test_sweep_negative_length_is_usage_error(capsys):
    code, _, err = _run(capsys, "sweep", "--p", "11", "--k", "1", "--scheme", "rz",
                        "--max-length", "-1")
    assert code == 2 and "max length" in err


def test_sweep_noise_requires_shots(tmp_path, capsys):
    cfg = tmp_path / "noise.cfg"
    cfg.write_text("depol_1q = 0.001\n")
    code, _, err = _run(capsys, "sweep", "--p", "11", "--k", "1", "--scheme", "rz",
                        "--max-length", "3", "--noise", str(cfg))
    assert code == 2 and "--shots" in err


def test_sweep_noisy_is_byte_identical_across_runs(tmp_path, capsys):
    cfg = tmp_path / "noise.cfg"
    cfg.write_text(
        "depol_1q = 0.001\ndepol_2q = 0.01\nreadout_p01 = 0.02\nreadout_p10 = 0.02\n"
    )
    argv = ["sweep", "--p", "11", "--k", "3,5,7", "--scheme", "opt-rz",
            "--max-length", "12", "--noise", str(cfg), "--shots", "1024", "--seed", "1"]
    out_a = tmp_path / "a.csv"
    out_b = tmp_path / "b.csv"
    assert main(argv + ["--output", str(out_a)]) == 0
    assert main(argv + ["--output", str(out_b)]) == 0
    capsys.readouterr()
    assert out_a.read_bytes() == out_b.read_bytes()


def test_sweep_zero_noise_tracks_ideal(tmp_path, capsys):
    # with a zero-noise config the sampled column concentrates on the ideal one
    import math

    cfg = tmp_path / "zero.cfg"
    cfg.write_text("depol_1q = 0.0\n")
    code, out, _ = _run(capsys, "sweep", "--p", "11", "--k", "3,5,7",
                        "--scheme", "opt-rz", "--max-length", "22",
                        "--noise", str(cfg), "--shots", "8192", "--seed", "1")
    assert code == 0
    for line in out.splitlines()[1:]:
        fields = line.split(",")
        ideal, noisy = float(fields[4]), float(fields[5])
        sigma = math.sqrt(ideal * (1 - ideal) / 8192)
        assert abs(noisy - ideal) <= 3 * sigma + 1e-12


def test_sweep_json_format(capsys):
    code, out, _ = _run(capsys, "sweep", "--p", "5", "--k", "1", "--scheme", "ry",
                        "--max-length", "2", "--format", "json")
    assert code == 0
    rows = [json.loads(line) for line in out.splitlines()]
    assert [r["length"] for r in rows] == [0, 1, 2]


def test_search_k_deterministic(capsys):
    argv = ["search-k", "--p", "11", "--d", "4", "--mode", "random",
            "--trials", "500", "--seed", "9"]
    code_a, out_a, _ = _run(capsys, *argv)
    code_b, out_b, _ = _run(capsys, *argv)
    assert code_a == code_b == 0
    assert out_a == out_b
    payload = json.loads(out_a)
    assert set(payload) == {"k_set", "worst_case"}


def test_search_k_exhaustive(capsys):
    code, out, _ = _run(capsys, "search-k", "--p", "5", "--d", "2")
    assert code == 0
    payload = json.loads(out)
    assert len(payload["k_set"]) == 2


def test_search_k_usage_errors(capsys):
    code, _, err = _run(capsys, "search-k", "--p", "11", "--d", "3")
    assert code == 2 and "power of two" in err
    code, _, err = _run(capsys, "search-k", "--p", "11", "--d", "4", "--mode", "random")
    assert code == 2 and "--trials" in err


def test_missing_noise_file_is_runtime_error(capsys):
    code, _, _ = _run(capsys, "sweep", "--p", "5", "--k", "1", "--scheme", "rz",
                      "--max-length", "1", "--noise", "/nonexistent/noise.cfg",
                      "--shots", "16", "--seed", "0")
    assert code == 1
