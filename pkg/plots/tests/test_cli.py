"""The command-line surface end to end."""

import pytest

from treeperc_plot.cli import main


class TestCli:
    def test_curve_end_to_end(self, curve_csv, tmp_path, capsys):
        out = tmp_path / "curve.svg"
        rc = main(["--kind", "curve", "--input", curve_csv, "--out", str(out)])
        assert rc == 0
        assert out.exists()
        assert "wrote" in capsys.readouterr().out

    def test_all_kinds_run(self, curve_csv, growth_csv, decay_csv,
                           offpointa_csv, tmp_path):
        for kind, path in [("curve", curve_csv), ("growth", growth_csv),
                           ("decay", decay_csv), ("offpointa", offpointa_csv)]:
            out = tmp_path / f"{kind}.svg"
            assert main(["--kind", kind, "--input", path,
                         "--out", str(out)]) == 0
            assert out.exists()

    def test_schema_violation_exits_two(self, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text("a,b,c\n1,2,3\n")
        rc = main(["--kind", "curve", "--input", str(bad),
                   "--out", str(tmp_path / "x.svg")])
        assert rc == 2
        assert "does not match" in capsys.readouterr().err

    def test_wrong_quantity_exits_two(self, growth_csv, tmp_path, capsys):
        rc = main(["--kind", "curve", "--input", growth_csv,
                   "--out", str(tmp_path / "x.svg")])
        assert rc == 2
        assert "curve_point" in capsys.readouterr().err

    def test_missing_input_exits_two(self, tmp_path):
        rc = main(["--kind", "curve", "--input", str(tmp_path / "no.csv"),
                   "--out", str(tmp_path / "x.svg")])
        assert rc == 2

    def test_unknown_kind_is_usage_error(self, curve_csv, tmp_path):
        with pytest.raises(SystemExit) as exc:
            main(["--kind", "sparkline", "--input", curve_csv,
                  "--out", str(tmp_path / "x.svg")])
        assert exc.value.code == 2
