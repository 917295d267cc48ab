"""The reader must refuse anything that is not the one true header."""

import pytest

from treeperc_plot.schema import COLUMNS, SchemaError, read_rows, select

from conftest import HASH, curve_rows, write_csv


class TestHeader:
    def test_reads_valid_file(self, curve_csv):
        rows = read_rows(curve_csv)
        assert len(rows) == 7
        assert rows[0].quantity == "curve_point"
        assert rows[3].p1 == pytest.approx(0.2144)
        assert rows[0].config_hash == HASH

    def test_permuted_columns_rejected(self, tmp_path, curve_csv):
        with open(curve_csv) as fh:
            lines = fh.read().splitlines()
        head = lines[0].split(",")
        head[0], head[1] = head[1], head[0]
        bad = tmp_path / "permuted.csv"
        bad.write_text("\n".join([",".join(head)] + lines[1:]) + "\n")
        with pytest.raises(SchemaError, match="does not match"):
            read_rows(str(bad))

    def test_truncated_header_rejected(self, tmp_path):
        bad = tmp_path / "short.csv"
        bad.write_text(",".join(COLUMNS[:-1]) + "\n")
        with pytest.raises(SchemaError, match="does not match"):
            read_rows(str(bad))

    def test_empty_file_rejected(self, tmp_path):
        bad = tmp_path / "empty.csv"
        bad.write_text("")
        with pytest.raises(SchemaError, match="empty file"):
            read_rows(str(bad))

    def test_missing_file_rejected(self, tmp_path):
        with pytest.raises(SchemaError, match="cannot read"):
            read_rows(str(tmp_path / "nope.csv"))


class TestRows:
    def test_field_count_checked(self, tmp_path):
        bad = tmp_path / "ragged.csv"
        bad.write_text(",".join(COLUMNS) + "\nTxT,3\n")
        with pytest.raises(SchemaError, match="line 2"):
            read_rows(str(bad))

    def test_non_numeric_rejected(self, tmp_path):
        rows = curve_rows()
        rows[0]["p1"] = "not-a-number"
        path = write_csv(tmp_path / "bad.csv", rows)
        with pytest.raises(SchemaError, match="p1"):
            read_rows(path)

    def test_empty_fields_become_none(self, tmp_path):
        rows = curve_rows()
        rows[0]["rho"] = ""
        rows[0]["censored"] = ""
        path = write_csv(tmp_path / "sparse.csv", rows)
        got = read_rows(path)[0]
        assert got.rho is None
        assert got.censored is None

    def test_quantity_required(self, tmp_path):
        rows = curve_rows()
        rows[0]["quantity"] = ""
        path = write_csv(tmp_path / "noq.csv", rows)
        with pytest.raises(SchemaError, match="required"):
            read_rows(path)

    def test_select(self, curve_csv):
        rows = read_rows(curve_csv)
        assert len(select(rows, "curve_point")) == 7
        assert select(rows, "G") == []
