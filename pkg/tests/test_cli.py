import json
import math

import numpy as np
import pytest

from leaffun.cli import fmt, main

PI2 = 2.6220575542921198
ETA2 = 1.3110287771460599


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestFormatting:
    def test_fifteen_digits_inside_band(self):
        assert fmt(0.5) == "0.5"
        assert fmt(2.6220575542921198) == "2.62205755429212"
        assert fmt(0.0) == "0"
        assert fmt(123456.75) == "123456.75"

    def test_scientific_outside_band(self):
        assert "e" in fmt(1e-5)
        assert "e" in fmt(2.5e7)
        assert "e" not in fmt(1e-4)
        assert "e" not in fmt(999999.5)


class TestConstants:
    def test_rows(self, capsys):
        code, out, _ = run(capsys, "constants", "--n-max", "3")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "n, pi_n, eta_n, zeta_n"
        assert lines[1].startswith("1, 3.14159265358979, N/A, N/A")
        assert lines[2].startswith("2, 2.62205755429212, 1.31102877714606, "
                                   "1.85407467730137")
        assert lines[3].startswith("3, 2.42865064788758, 0.701091052662727")

    def test_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["constants", "--n-max", "0"])
        assert exc.value.code == 2
        with pytest.raises(SystemExit) as exc:
            main(["constants", "--n-max", "17"])
        assert exc.value.code == 2


class TestEval:
    def test_trivial_zero(self, capsys):
        code, out, _ = run(capsys, "eval", "sleaf", "2", "0")
        assert code == 0
        assert out.strip() == "0"

    def test_sine_reduction(self, capsys):
        code, out, _ = run(capsys, "eval", "sleaf", "1", "1.5707963")
        assert code == 0
        assert float(out) == pytest.approx(1.0, abs=1e-9)

    def test_near_pole_warns_but_evaluates(self, capsys):
        code, out, err = run(capsys, "eval", "cleafh", "2", "1.311")
        assert code == 0
        assert "pole" in err
        assert float(out) > 1e3

    def test_inside_guard_band_is_domain_error(self, capsys):
        code, out, err = run(capsys, "eval", "cleafh", "2", str(ETA2))
        assert code == 3
        assert "pole" in err
        assert out == ""

    def test_sleafh_domain_error(self, capsys):
        code, _, err = run(capsys, "eval", "sleafh", "2", "2.5")
        assert code == 3
        assert "1.854" in err


class TestWave:
    def test_csv_shape_and_header(self, tmp_path, capsys):
        out = tmp_path / "wave.csv"
        code, _, _ = run(capsys, "wave", "--id", "1", "--t-max", "2.0",
                         "--dt", "0.25", "--channels",
                         "exact,numeric,residual,envelope", "--out", str(out))
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "t,x_exact,x_numeric,residual,envelope"
        assert len(lines) == 1 + 9
        row = lines[1].split(",")
        assert float(row[1]) == pytest.approx(math.sqrt(2), abs=1e-12)

    def test_bit_stable(self, tmp_path, capsys):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for path in (a, b):
            run(capsys, "wave", "--id", "9", "--t-max", "6.0", "--dt", "0.01",
                "--channels", "exact,numeric", "--out", str(path))
        assert a.read_bytes() == b.read_bytes()

    def test_period_scales_with_omega(self, tmp_path, capsys):
        # same solution at omega and 2*omega: periods pi_2 and pi_2/2
        xs = {}
        for omega in (1.0, 2.0):
            path = tmp_path / f"w{omega}.csv"
            run(capsys, "wave", "--id", "1", "--omega", str(omega),
                "--t-max", str(3 * PI2), "--dt", str(PI2 / 64), "--out", str(path))
            rows = [line.split(",") for line in
                    path.read_text().splitlines()[1:]]
            xs[omega] = np.array([float(r[1]) for r in rows])
        n = 64  # samples per pi_2
        assert np.max(np.abs(xs[1.0][n:] - xs[1.0][:-n])) < 1e-9
        assert np.max(np.abs(xs[2.0][n // 2:] - xs[2.0][:-n // 2])) < 1e-9

    def test_damped_envelope_decay(self, tmp_path, capsys):
        plain = tmp_path / "plain.csv"
        damped = tmp_path / "damped.csv"
        run(capsys, "wave", "--id", "1", "--t-max", "4.0", "--dt", "0.5",
            "--out", str(plain))
        run(capsys, "wave", "--id", "1", "--beta", "0.5", "--t-max", "4.0",
            "--dt", "0.5", "--channels", "exact,envelope", "--out", str(damped))
        rows_p = [line.split(",") for line in plain.read_text().splitlines()[1:]]
        rows_d = [line.split(",") for line in damped.read_text().splitlines()[1:]]
        for rp, rd in zip(rows_p, rows_d):
            t = float(rp[0])
            assert float(rd[2]) == pytest.approx(math.exp(-t / 4), rel=1e-12)
            assert float(rd[1]) == pytest.approx(
                math.exp(-t / 4) * float(rp[1]), rel=1e-10)

    def test_pole_rows_are_blank(self, tmp_path, capsys):
        out = tmp_path / "divergent.csv"
        code, _, err = run(capsys, "wave", "--id", "13", "--t-max", "4.0",
                           "--dt", "1.0", "--out", str(out))
        assert code == 0
        assert "undefined" in err
        lines = out.read_text().splitlines()
        blank = [line for line in lines[1:] if line.endswith(",")]
        assert len(blank) == 2  # t = 2 and t = 3 sit past the first pole

    def test_numeric_matches_verify_report(self, tmp_path, capsys):
        from leaffun.verify import agreement_check, VerifyConfig
        from leaffun.duffing import SolutionSpec

        out = tmp_path / "id1.csv"
        T = PI2
        run(capsys, "wave", "--id", "1", "--t-max", str(3 * T),
            "--dt", str(3 * T / 1500), "--channels", "exact,numeric",
            "--out", str(out))
        rows = [line.split(",") for line in out.read_text().splitlines()[1:]]
        dev = max(abs(float(r[1]) - float(r[2])) for r in rows)
        rep = agreement_check(SolutionSpec(1), VerifyConfig())
        assert dev < 1e-6
        assert dev <= 3 * rep.worst_residual + 1e-9

    def test_usage_errors(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["wave", "--id", "1", "--t-max", "1", "--dt", "-0.1"])
        assert exc.value.code == 2
        with pytest.raises(SystemExit) as exc:
            main(["wave", "--id", "1", "--t-max", "1e6", "--dt", "1e-3"])
        assert exc.value.code == 2  # sample-count cap
        with pytest.raises(SystemExit) as exc:
            main(["wave", "--id", "1", "--t-max", "1", "--dt", "0.1",
                  "--channels", "exact,bogus"])
        assert exc.value.code == 2

    def test_io_error(self, capsys):
        code, _, err = run(capsys, "wave", "--id", "1", "--t-max", "1",
                           "--dt", "0.5", "--out", "/nonexistent/dir/x.csv")
        assert code == 4
        assert "i/o error" in err


class TestVerifyCommand:
    def test_subset_passes(self, capsys, tmp_path):
        out = tmp_path / "reports.jsonl"
        code, stdout, _ = run(capsys, "verify", "--ids", "14", "--damped",
                              "--out", str(out))
        assert code == 0
        assert "0 failed" in stdout
        lines = out.read_text().strip().splitlines()
        assert any(json.loads(ln)["check_id"] == "residual:id=14:damped"
                   for ln in lines)

    def test_hopeless_tolerance_reports_failures(self, capsys):
        code, stdout, _ = run(capsys, "verify", "--ids", "3", "--undamped",
                              "--tol", "1e-15")
        assert code == 1
        assert "fail" in stdout


class TestSimulate:
    def test_harmonic(self, capsys):
        code, out, _ = run(capsys, "simulate", "--alpha1", "1", "--x0", "0",
                           "--v0", "1", "--t-max", "3.14159", "--dt", "0.5")
        assert code == 0
        rows = [line.split(",") for line in out.strip().splitlines()[1:]]
        for r in rows:
            assert float(r[1]) == pytest.approx(math.sin(float(r[0])), abs=1e-7)

    def test_blowup_note(self, capsys):
        code, out, err = run(capsys, "simulate", "--alpha1", "-3",
                             "--alpha2", "-2", "--x0", "0", "--v0", "1.41421356",
                             "--t-max", "5", "--cap", "1e4")
        assert code == 0
        assert "exceeded" in err
