import pytest

from apnorm import __version__
from apnorm.errors import NumericError
from apnorm.lab import cli, write_norms

LINEAR = """
phase.kind = linear
phase.slope = 1
lambda.min = 8
lambda.max = 32
lambda.count = 3
p = 1
threads = 1
"""


@pytest.fixture
def table(tmp_path, norm_rows):
    path = tmp_path / "norms.csv"
    write_norms(norm_rows(), path)
    return path


class TestNorms:
    def test_prints_table_without_output(self, write_config, capsys):
        assert cli.main(["norms", str(write_config(LINEAR))]) == cli.EXIT_OK
        out = capsys.readouterr().out
        assert out.startswith("lambda,p,norm_lo,norm_hi,band_K,tail,engine\n")
        assert out.count("\n") == 4

    def test_writes_csv_and_plot(self, write_config, tmp_path, capsys):
        csv_path, svg_path = tmp_path / "n.csv", tmp_path / "n.svg"
        text = LINEAR + f"output.csv = {csv_path}\noutput.plot = {svg_path}\n"
        assert cli.main(["norms", str(write_config(text))]) == cli.EXIT_OK
        assert csv_path.exists() and svg_path.exists()
        assert "wrote 3 rows" in capsys.readouterr().out

    def test_config_error_exits_one(self, write_config, capsys):
        path = write_config("seed = 1\nbogus = 2\n", name="exp.cfg")
        assert cli.main(["norms", str(path)]) == cli.EXIT_INPUT
        assert f"{path}:2: unknown key" in capsys.readouterr().err

    def test_missing_config(self, tmp_path):
        assert cli.main(["norms", str(tmp_path / "absent.cfg")]) == cli.EXIT_INPUT

    def test_numeric_failure_exits_three(self, write_config, monkeypatch):
        def fail(self, write=True):
            raise NumericError("no convergence")

        monkeypatch.setattr(cli.Experiment, "run_norms", fail)
        assert cli.main(["norms", str(write_config(LINEAR))]) == cli.EXIT_NUMERIC

    def test_memory_error_exits_three(self, write_config, monkeypatch):
        def fail(self, write=True):
            raise MemoryError

        monkeypatch.setattr(cli.Experiment, "run_norms", fail)
        assert cli.main(["norms", str(write_config(LINEAR))]) == cli.EXIT_NUMERIC


class TestFit:
    def test_expected_exponent(self, table, capsys):
        code = cli.main(["fit", str(table), "--p", "1", "--expect", "0.45:0.55"])
        assert code == cli.EXIT_OK
        out = capsys.readouterr().out
        assert "window: p=1 exponent=0.500000" in out
        assert "full:" in out

    def test_exponent_outside(self, table, capsys):
        code = cli.main(["fit", str(table), "--p", "1", "--expect", "0.6:0.7"])
        assert code == cli.EXIT_VIOLATION
        assert "FAIL" in capsys.readouterr().out

    def test_explicit_window(self, table, capsys):
        code = cli.main(["fit", str(table), "--p", "1", "--window", "64:512"])
        assert code == cli.EXIT_OK
        assert "full:" not in capsys.readouterr().out

    def test_too_few_rows_is_input_error(self, table):
        code = cli.main(["fit", str(table), "--p", "1", "--window", "64:128"])
        assert code == cli.EXIT_INPUT

    def test_bad_range(self, table):
        with pytest.raises(SystemExit) as info:
            cli.main(["fit", str(table), "--p", "1", "--window", "64"])
        assert info.value.code == 2


class TestEnvelopes:
    def test_matching_growth(self, table, capsys):
        args = ["envelopes", str(table), "--kind", "c2", "--p", "1"]
        assert cli.main(args + ["--max-ratio", "1.01"]) == cli.EXIT_OK
        assert "spread=1" in capsys.readouterr().out

    def test_spread_violation(self, table):
        args = ["envelopes", str(table), "--kind", "log", "--max-ratio", "1.5"]
        assert cli.main(args) == cli.EXIT_VIOLATION

    def test_lower_envelope_with_modulus(self, table):
        args = ["envelopes", str(table), "--kind", "lower", "--alpha", "0.5"]
        assert cli.main(args + ["--use", "hi"]) == cli.EXIT_OK


class TestPlot:
    def test_plot_with_overlay(self, table, tmp_path):
        out = tmp_path / "plot.svg"
        args = ["plot", str(table), "--out", str(out), "--envelope", "c2"]
        assert cli.main(args + ["--envelope", "lower"]) == cli.EXIT_OK
        assert out.read_text(encoding="utf-8").count("apnorm data") == 1

    def test_unknown_p_is_input_error(self, table, tmp_path):
        args = ["plot", str(table), "--out", str(tmp_path / "x.svg"), "--p", "1.5"]
        assert cli.main(args) == cli.EXIT_INPUT


class TestWitness:
    def test_constant_phase_has_nothing_to_check(self, write_config, capsys):
        text = "phase.kind = linear\nphase.slope = 0\nlambda.count = 1\nthreads = 1\n"
        with pytest.warns(UserWarning):
            assert cli.main(["witness", str(write_config(text))]) == cli.EXIT_OK
        assert "witness: 0/0 passed" in capsys.readouterr().out


class TestParser:
    def test_version(self, capsys):
        with pytest.raises(SystemExit) as info:
            cli.main(["--version"])
        assert info.value.code == 0
        assert __version__ in capsys.readouterr().out

    def test_command_required(self):
        with pytest.raises(SystemExit):
            cli.main([])
