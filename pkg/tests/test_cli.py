import json

import pytest

from hypbm.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestKernelCommand:
    def test_reference_point(self, capsys):
        code, out, _ = run_cli(capsys, "kernel", "--d", "3", "--t", "1", "--r", "1")
        assert code == 0
        header, row = out.strip().splitlines()
        assert header == "d,t,r,q,log_q"
        assert row.startswith("3,1.0,1.0,0.0198757484")

    def test_density_zero_at_origin(self, capsys):
        code, out, _ = run_cli(capsys, "density", "--d", "3", "--t", "1", "--r", "0")
        assert code == 0
        assert out.strip().splitlines()[1] == "3,1.0,0.0,0.0"


class TestTailCommand:
    def test_d2_center(self, capsys):
        code, out, _ = run_cli(capsys, "tail", "--d", "2", "--t", "100", "--x", "0")
        assert code == 0
        row = out.strip().splitlines()[1].split(",")
        assert 0.5 < float(row[3]) < 0.6
        assert row[5] == "even_decomposition"

    def test_negative_x_list(self, capsys):
        code, out, _ = run_cli(capsys, "tail", "--d", "3", "--t", "4", "--x", "-1,0,1")
        assert code == 0
        vals = [float(line.split(",")[3]) for line in out.strip().splitlines()[1:]]
        assert vals == sorted(vals, reverse=True)

    def test_x_range(self, capsys):
        code, out, _ = run_cli(capsys, "tail", "--d", "3", "--t", "4", "--x-range", "-1:1:0.5")
        assert code == 0
        assert len(out.strip().splitlines()) == 6  # header + 5 values

    def test_json_format(self, capsys):
        code, out, _ = run_cli(capsys, "tail", "--d", "3", "--t", "1", "--x", "0", "--format", "json")
        assert code == 0
        payload = json.loads(out)
        assert payload["meta"]["tool"] == "hypbm"
        assert payload["rows"][0]["method"] == "closed_form_d3"


class TestSweepCommand:
    def test_log_range_schema(self, capsys):
        code, out, _ = run_cli(capsys, "sweep", "--d", "3", "--t-log-range", "10:1000:5")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "d,t,delta,argmax_x,evaluations"
        assert len(lines) == 6
        deltas = [float(line.split(",")[2]) for line in lines[1:]]
        assert all(d > 0 for d in deltas)
        assert deltas == sorted(deltas, reverse=True)


class TestSimulateCommand:
    def test_schema_and_determinism(self, capsys, tmp_path):
        args = (
            "simulate", "--d", "3", "--t", "2", "--x", "0",
            "--paths", "2000", "--step", "0.01", "--seed", "7",
        )
        f1, f2 = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main([*args, "--out", str(f1)]) == 0
        assert main([*args, "--out", str(f2)]) == 0
        assert f1.read_bytes() == f2.read_bytes()
        header = f1.read_text().splitlines()[0]
        assert header == "d,t,x,estimate,standard_error,paths,seed"


class TestVerifyCommand:
    def test_identities_suite(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "identities")
        assert code == 0
        assert all(line.startswith("PASS") for line in out.strip().splitlines())

    def test_unknown_suite_exits_2(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["verify", "nonsense"])
        assert exc.value.code == 2


class TestErrorPaths:
    def test_invalid_arguments_exit_2(self):
        with pytest.raises(SystemExit) as exc:
            main(["tail", "--d", "3"])  # missing --t/--x
        assert exc.value.code == 2

    def test_numerical_failure_exit_1(self, capsys):
        # direct oracle path is not defined above t = 50 in the verify suite
        code = main(["tail", "--d", "3", "--t", "-4", "--x", "0"])
        assert code == 1
        assert "numerical failure" in capsys.readouterr().err
