"""Config handling and the command-line surface, end to end.

The reproducibility contract matters more than any single estimate: a
rerun with the same resolved config must produce byte-identical CSVs, and
the worker count must never leak into results (trials are seeded by global
index, workers only partition them).
"""

import csv
import json
import os

import pytest

from treeperc.cli import _chunks, main
from treeperc.config import (ExperimentConfig, UsageError, load_config,
                             validate)
from treeperc.records import COLUMNS


def write_toml(tmp_path, text):
    p = tmp_path / "exp.toml"
    p.write_text(text)
    return str(p)


class TestConfig:
    def test_toml_round_trip(self, tmp_path):
        path = write_toml(tmp_path, """
[experiment]
graph = "TxZ"
d = 4
seed = 99
workers = 2

[params]
p1 = 0.23
r = 5
trials = 77
""")
        cfg = load_config(path)
        assert (cfg.graph, cfg.d, cfg.seed, cfg.workers) == ("TxZ", 4, 99, 2)
        assert (cfg.p1, cfg.r, cfg.trials) == (0.23, 5, 77)

    def test_unknown_key_rejected(self, tmp_path):
        path = write_toml(tmp_path, "[params]\npee_one = 0.2\n")
        with pytest.raises(UsageError, match="unknown config key"):
            load_config(path)

    def test_unknown_section_rejected(self, tmp_path):
        path = write_toml(tmp_path, "[paramz]\np1 = 0.2\n")
        with pytest.raises(UsageError, match="unknown config section"):
            load_config(path)

    def test_missing_file(self):
        with pytest.raises(UsageError, match="not found"):
            load_config("/nonexistent/exp.toml")

    def test_invalid_toml(self, tmp_path):
        path = write_toml(tmp_path, "not toml ][")
        with pytest.raises(UsageError, match="not valid TOML"):
            load_config(path)

    def test_validate_requirements(self):
        cfg = ExperimentConfig(command="gball", p1=0.2, r=3, trials=0)
        with pytest.raises(UsageError, match="trials"):
            validate(cfg)
        cfg = ExperimentConfig(command="gball", graph="T4", p1=0.2, r=3,
                               trials=5)
        with pytest.raises(UsageError, match="graph"):
            validate(cfg)
        cfg = ExperimentConfig(command="offpointa", p1=0.2, r=2, trials=5)
        with pytest.raises(UsageError, match="missing required parameter 'w'"):
            validate(cfg)
        cfg = ExperimentConfig(command="triangle", graph="TxZ", p1=0.2, r=2)
        with pytest.raises(UsageError, match="runs on TxT"):
            validate(cfg)
        cfg = ExperimentConfig(command="gball", p1=1.2, r=3, trials=5)
        with pytest.raises(UsageError, match="p1"):
            validate(cfg)

    def test_p2_defaults_to_p1(self):
        cfg = validate(ExperimentConfig(command="gball", p1=0.3, r=2, trials=5))
        assert cfg.p2 == 0.3

    def test_hash_tracks_estimand_only(self):
        a = ExperimentConfig(command="gball", p1=0.2, r=3, trials=5)
        b = ExperimentConfig(command="gball", p1=0.2, r=3, trials=5,
                             workers=8, out="elsewhere")
        c = ExperimentConfig(command="gball", p1=0.21, r=3, trials=5)
        assert a.config_hash() == b.config_hash()
        assert a.config_hash() != c.config_hash()


class TestChunks:
    def test_partition(self):
        for total, parts in [(10, 3), (7, 7), (5, 8), (1, 4), (100, 1)]:
            blocks = _chunks(total, parts)
            assert sum(n for _, n in blocks) == total
            flat = [i for s, n in blocks for i in range(s, s + n)]
            assert flat == list(range(total))


def read_csv(path):
    with open(path) as fh:
        return list(csv.reader(fh))


class TestCliEndToEnd:
    def gball_args(self, out, extra=()):
        return ["gball", "--p1", "0.15", "--trials", "40", "--r", "3",
                "--seed", "9", "--out", str(out), *extra]

    def test_gball_writes_schema_and_sidecar(self, tmp_path, capsys):
        out = tmp_path / "res"
        assert main(self.gball_args(out)) == 0
        rows = read_csv(out / "gball.csv")
        assert rows[0] == COLUMNS
        assert len(rows) == 1 + 4
        side = json.loads((out / "gball.json").read_text())
        assert side["command"] == "gball"
        assert side["rows"] == 4
        assert side["config"]["p1"] == 0.15
        assert "wrote 4 rows" in capsys.readouterr().out

    def test_rerun_byte_identical(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        assert main(self.gball_args(a)) == 0
        assert main(self.gball_args(b)) == 0
        assert (a / "gball.csv").read_bytes() == (b / "gball.csv").read_bytes()

    def test_worker_count_invisible_in_results(self, tmp_path):
        a, b = tmp_path / "w1", tmp_path / "w2"
        assert main(self.gball_args(a, ["--workers", "1"])) == 0
        assert main(self.gball_args(b, ["--workers", "2"])) == 0
        assert (a / "gball.csv").read_bytes() == (b / "gball.csv").read_bytes()

    def test_connprob_two_specs(self, tmp_path):
        out = tmp_path / "cp"
        rc = main(["connprob", "--p1", "0.15", "--trials", "60",
                   "--spec", "1", "1", "--spec", "2", "0",
                   "--seed", "4", "--out", str(out)])
        assert rc == 0
        rows = read_csv(out / "connprob.csv")
        head = rows[0]
        got = {(r[head.index("k1")], r[head.index("k2")]) for r in rows[1:]}
        assert got == {("1", "1"), ("2", "0")}
        for r in rows[1:]:
            lo = float(r[head.index("estimate_low")])
            hi = float(r[head.index("estimate_high")])
            assert 0.0 <= lo <= hi <= 1.0

    def test_invade_row(self, tmp_path):
        out = tmp_path / "inv"
        rc = main(["invade", "--graph", "tree", "--target-size", "2000",
                   "--seeds", "1", "2", "--out", str(out)])
        assert rc == 0
        rows = read_csv(out / "invade.csv")
        head = rows[0]
        assert rows[1][head.index("quantity")] == "pc_invade"
        lo = float(rows[1][head.index("estimate_low")])
        hi = float(rows[1][head.index("estimate_high")])
        assert 0.4 < lo <= hi < 0.6

    def test_schramm_invariance_sidecar(self, tmp_path):
        out = tmp_path / "sch"
        rc = main(["schramm", "--p1", "0.1", "--trials", "60",
                   "--spec", "1", "1", "--checks", "invariance",
                   "--seed", "6", "--out", str(out)])
        assert rc == 0
        rows = read_csv(out / "schramm.csv")
        head = rows[0]
        quantities = [r[head.index("quantity")] for r in rows[1:]]
        assert quantities == ["invariance_edge_p", "invariance_degree_p"]
        rep = json.loads((out / "invariance.json").read_text())
        assert rep["realizations"] == 60

    def test_usage_error_exits_two(self, tmp_path, capsys):
        rc = main(["gball", "--trials", "5", "--r", "2",
                   "--out", str(tmp_path / "x")])
        assert rc == 2
        assert "missing required parameter 'p1'" in capsys.readouterr().err

    def test_curve_small_grid(self, tmp_path):
        out = tmp_path / "cv"
        rc = main(["curve", "--target-size", "1500", "--rho-grid", "0.5", "1.0",
                   "--seeds", "3", "--out", str(out)])
        assert rc == 0
        rows = read_csv(out / "curve.csv")
        head = rows[0]
        assert len(rows) == 3
        rhos = [float(r[head.index("rho")]) for r in rows[1:]]
        assert rhos == [0.5, 1.0]
        p1s = [float(r[head.index("p1")]) for r in rows[1:]]
        assert p1s[0] > p1s[1]
