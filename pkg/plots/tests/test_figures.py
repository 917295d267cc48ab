"""Each figure builder renders from schema rows alone.

SVG output is asserted on content markers (titles, endpoint labels), and
on byte-for-byte determinism across renders, which is what makes figure
diffs in version control meaningful.
"""

import pytest

from treeperc_plot.figures import (plot_curve, plot_decay, plot_growth,
                                   plot_offpointa)
from treeperc_plot.schema import SchemaError, read_rows

from conftest import write_csv


class TestCurve:
    def test_renders_with_endpoint_markers(self, curve_csv, tmp_path):
        out = tmp_path / "curve.svg"
        plot_curve(read_rows(curve_csv), str(out))
        svg = out.read_text()
        assert svg.startswith("<?xml")
        assert "critical curve" in svg
        assert "rho -" in svg        # endpoint annotations survive escaping
        assert "1/(d-1)" in svg

    def test_deterministic_bytes(self, curve_csv, tmp_path):
        a, b = tmp_path / "a.svg", tmp_path / "b.svg"
        rows = read_rows(curve_csv)
        plot_curve(rows, str(a))
        plot_curve(rows, str(b))
        assert a.read_bytes() == b.read_bytes()

    def test_rejects_wrong_quantity(self, growth_csv, tmp_path):
        with pytest.raises(SchemaError, match="curve_point"):
            plot_curve(read_rows(growth_csv), str(tmp_path / "x.svg"))

    def test_rejects_all_failed_points(self, tmp_path):
        rows = [{"graph": "TxT", "d": 3, "quantity": "curve_point",
                 "rho": 1.0, "trials": 0, "censored": 2, "seed": 1,
                 "config_hash": "ffffffffffff"}]
        path = write_csv(tmp_path / "failed.csv", rows)
        with pytest.raises(SchemaError, match="empty"):
            plot_curve(read_rows(path), str(tmp_path / "x.svg"))


class TestOtherKinds:
    def test_growth(self, growth_csv, tmp_path):
        out = tmp_path / "g.svg"
        plot_growth(read_rows(growth_csv), str(out))
        assert "chemical ball growth" in out.read_text()

    def test_growth_censored_variant(self, tmp_path):
        from conftest import growth_rows
        path = write_csv(tmp_path / "gc.csv", growth_rows(censor_last=True))
        out = tmp_path / "gc.svg"
        plot_growth(read_rows(path), str(out))
        assert "censored" in out.read_text()

    def test_decay(self, decay_csv, tmp_path):
        out = tmp_path / "d.svg"
        plot_decay(read_rows(decay_csv), str(out))
        svg = out.read_text()
        assert "two-point decay" in svg

    def test_offpointa(self, offpointa_csv, tmp_path):
        out = tmp_path / "o.svg"
        plot_offpointa(read_rows(offpointa_csv), str(out))
        assert "off-method inequality" in out.read_text()

    def test_png_output(self, curve_csv, tmp_path):
        out = tmp_path / "curve.png"
        plot_curve(read_rows(curve_csv), str(out))
        assert out.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
