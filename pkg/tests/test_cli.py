import pytest

from walshmax.cli import main
from walshmax.dyadic import load_step_function, save_step_function
from walshmax.experiments import counterexample
from walshmax.transform import partial_sum


def run(capsys, *argv) -> tuple[int, str, str]:
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestCoreCommands:
    def test_index(self, capsys):
        code, out, _ = run(capsys, "index", "5")
        assert code == 0
        assert out.strip() == "low=0 high=2 rho=2 V=4"

    def test_blocks(self, capsys):
        code, out, _ = run(capsys, "blocks", "13")
        assert code == 0
        assert "(0,0) (2,3)" in out

    def test_boundary(self, capsys):
        code, out, _ = run(capsys, "boundary", "--s", "3", "9", "13")
        assert code == 0
        assert "{0, 2, 3}" in out and "cardinality=3" in out

    def test_dirichlet_norm(self, capsys):
        code, out, _ = run(capsys, "dirichlet", "--n", "3", "--norm")
        assert code == 0
        assert out.strip() == "3/2"

    def test_dirichlet_summary_and_fixture(self, capsys, tmp_path):
        fx = tmp_path / "d5.txt"
        code, out, _ = run(capsys, "dirichlet", "--n", "5", "--output", str(fx))
        assert code == 0
        assert "V=4" in out and "norm=7/4" in out
        f = load_step_function(fx)
        assert f.resolution == 4

    def test_partial_sum_roundtrip(self, capsys, tmp_path):
        fx = tmp_path / "f.txt"
        out_fx = tmp_path / "s.txt"
        f = counterexample(3, 5)
        save_step_function(f, fx)
        code, out, _ = run(
            capsys, "partial-sum", "--input", str(fx), "--n", "9", "--output", str(out_fx)
        )
        assert code == 0
        assert load_step_function(out_fx) == partial_sum(f, 9)

    def test_hpnorm(self, capsys, tmp_path):
        fx = tmp_path / "f.txt"
        save_step_function(counterexample(4, 6), fx)
        code, out, _ = run(capsys, "hpnorm", "--input", str(fx))
        assert code == 0
        assert "H_1 norm = 1 " in out

    def test_atom_check_valid(self, capsys, tmp_path):
        from walshmax.hardy import random_atom

        fx = tmp_path / "a.txt"
        save_step_function(random_atom(3, 1, 2, 6).values, fx)
        code, out, _ = run(
            capsys, "atom-check", "--input", str(fx), "--support-depth", "2"
        )
        assert code == 0
        assert out.startswith("valid atom")

    def test_atom_check_invalid(self, capsys, tmp_path):
        from walshmax.dyadic import StepFunction

        fx = tmp_path / "a.txt"
        save_step_function(StepFunction(4, [1] * 16), fx)
        code, out, _ = run(
            capsys, "atom-check", "--input", str(fx), "--support-depth", "2"
        )
        assert code == 0
        assert out.startswith("INVALID atom")
        assert "mean" in out

    def test_blowup_witness(self, capsys):
        code, out, _ = run(capsys, "blowup", "--nk", "8", "--mode", "witness")
        assert code == 0
        assert "11/8" in out  # (nk + 3)/8
        assert "nk/8 = 1" in out

    def test_blowup_auto_picks_witness_when_deep(self, capsys):
        code, out, _ = run(capsys, "blowup", "--nk", "16")
        assert code == 0
        assert "mode=witness" in out
        assert "19/8" in out  # (nk + 3)/8 stays exact at depth


class TestErrors:
    def test_unknown_command(self, capsys):
        with pytest.raises(SystemExit) as e:
            main(["frobnicate"])
        assert e.value.code == 2

    def test_bad_parameter_range(self, capsys):
        code, _, err = run(capsys, "blowup", "--nk", "2")
        assert code == 2
        assert "--nk" in err

    def test_resolution_overflow(self, capsys):
        code, _, err = run(capsys, "blowup", "--nk", "15", "--mode", "full")
        assert code == 2
        assert "witness" in err

    def test_missing_fixture(self, capsys):
        code, _, err = run(capsys, "hpnorm", "--input", "/nonexistent/f.txt")
        assert code == 2


class TestSweepCommands:
    def test_lebesgue_writes_csv_and_figure(self, capsys, tmp_path):
        out = tmp_path / "leb.csv"
        code, stdout, _ = run(
            capsys, "lebesgue-sweep", "--n-max", "32", "--output", str(out)
        )
        assert code == 0
        assert out.exists()
        assert out.with_suffix(".png").exists()
        header = out.read_text().splitlines()[0]
        assert header.startswith("n,V,norm_exact,norm_decimal")

    def test_no_figures_flag(self, capsys, tmp_path):
        out = tmp_path / "leb.csv"
        code, *_ = run(
            capsys,
            "lebesgue-sweep", "--n-max", "8", "--output", str(out), "--no-figures",
        )
        assert code == 0
        assert out.exists()
        assert not out.with_suffix(".png").exists()

    def test_weaktype_byte_identical_reruns(self, capsys, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for path in (a, b):
            code, *_ = run(
                capsys,
                "weaktype-sweep", "--count", "5", "--m-min", "3", "--m-max", "4",
                "--resolution", "7", "--seed", "11", "--threads", "1",
                "--output", str(path), "--no-figures",
            )
            assert code == 0
        assert a.read_bytes() == b.read_bytes()

    def test_snorm_sweep(self, capsys, tmp_path):
        out = tmp_path / "s.csv"
        code, stdout, _ = run(
            capsys,
            "snorm-sweep", "--n-max", "16", "--trials", "5",
            "--resolution", "6", "--output", str(out), "--no-figures",
        )
        assert code == 0
        assert "empirical constant" in stdout

    def test_conjecture(self, capsys, tmp_path):
        out = tmp_path / "c.csv"
        code, stdout, _ = run(
            capsys,
            "conjecture", "--family", "allones", "--s-min", "3", "--s-max", "5",
            "--resolution", "7", "--output", str(out), "--no-figures",
        )
        assert code == 0
        assert out.read_text().startswith("# exploratory")

    def test_outdir_env(self, capsys, tmp_path, monkeypatch):
        monkeypatch.setenv("WALSHMAX_OUTDIR", str(tmp_path))
        code, stdout, _ = run(
            capsys, "lebesgue-sweep", "--n-max", "4", "--no-figures"
        )
        assert code == 0
        assert list(tmp_path.glob("lebesgue-sweep-*.csv"))
