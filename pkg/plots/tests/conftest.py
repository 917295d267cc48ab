import csv

import pytest

from treeperc_plot.schema import COLUMNS

HASH = "a1b2c3d4e5f6"


def write_csv(path, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(COLUMNS)
        for row in rows:
            w.writerow([row.get(c, "") for c in COLUMNS])
    return str(path)


def curve_rows():
    pts = [
        (0.0078125, 0.4929, 0.00385),
        (0.125, 0.4094, 0.0512),
        (0.5, 0.2926, 0.1463),
        (1.0, 0.2144, 0.2144),
        (2.0, 0.1463, 0.2926),
        (8.0, 0.0512, 0.4094),
        (128.0, 0.0038, 0.4929),
    ]
    return [
        {"graph": "TxT", "d": 3, "quantity": "curve_point", "rho": rho,
         "p1": p1, "p2": p2, "estimate_low": p1 - 0.001,
         "estimate_high": p1 + 0.001, "stderr": 0.001, "trials": 2,
         "censored": 0, "seed": 21, "config_hash": HASH}
        for rho, p1, p2 in pts
    ]


def growth_rows(censor_last=False):
    rows = []
    for r, g in enumerate([1.0, 2.3, 4.1, 6.6, 9.8]):
        rows.append({"graph": "TxT", "d": 3, "p1": 0.2144, "p2": 0.2144,
                     "quantity": "G", "r": r, "estimate_low": g,
                     "estimate_high": "" if (censor_last and r == 4) else g,
                     "stderr": 0.05, "trials": 1000,
                     "censored": 3 if (censor_last and r == 4) else 0,
                     "seed": 5, "config_hash": HASH})
    return rows


def decay_rows():
    rows = []
    for k, g in [(2, 0.018), (3, 0.0048), (4, 0.0008), (5, 0.0003)]:
        rows.append({"graph": "TxT", "d": 3, "p1": 0.2144, "p2": 0.2144,
                     "quantity": "connprob", "k1": k, "k2": k,
                     "estimate_low": g, "estimate_high": g * 1.05,
                     "stderr": g / 10, "trials": 12000, "censored": 1,
                     "seed": 7, "config_hash": HASH})
    return rows


def offpointa_rows():
    common = {"graph": "TxT", "d": 3, "p1": 0.2144, "p2": 0.2144,
              "k1": 3, "k2": 3, "r": 4, "trials": 1500, "seed": 9,
              "config_hash": HASH}
    return [
        dict(common, quantity="offpointa_lhs", estimate_low=140.2,
             estimate_high=141.0, stderr=2.2, censored=4),
        dict(common, quantity="offpointa_rhs", estimate_low=120.5,
             estimate_high=120.5, stderr=5.0, censored=0),
        dict(common, quantity="offpointa_nabla", estimate_low=0.21,
             estimate_high=0.21, stderr=0.02, censored=0),
    ]


@pytest.fixture
def curve_csv(tmp_path):
    return write_csv(tmp_path / "curve.csv", curve_rows())


@pytest.fixture
def growth_csv(tmp_path):
    return write_csv(tmp_path / "gball.csv", growth_rows())


@pytest.fixture
def decay_csv(tmp_path):
    return write_csv(tmp_path / "connprob.csv", decay_rows())


@pytest.fixture
def offpointa_csv(tmp_path):
    return write_csv(tmp_path / "offpointa.csv", offpointa_rows())
