"""Small statistical helpers shared by the estimators and acceptance checks."""

from __future__ import annotations

import numpy as np
from scipy import stats as sps


def mean_stderr(xs) -> tuple[float, float]:
    a = np.asarray(xs, dtype=float)
    if a.size == 0:
        return float("nan"), float("nan")
    if a.size == 1:
        return float(a[0]), float("nan")
    return float(a.mean()), float(a.std(ddof=1) / np.sqrt(a.size))


def binomial_stderr(successes: int, n: int) -> float:
    if n <= 0:
        return float("nan")
    p = successes / n
    return float(np.sqrt(p * (1.0 - p) / n))


def fit_slope(x, y) -> tuple[float, float]:
    """Least-squares slope of y on x with its standard error."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    res = sps.linregress(x, y)
    return float(res.slope), float(res.stderr)


def bootstrap_ratio_lower(numer, denom, level: float = 0.95, reps: int = 2000,
                          seed: int = 0) -> float:
    """One-sided lower confidence bound for mean(numer)/mean(denom).

    numer and denom are paired per-trial samples; resampling is over trials,
    preserving the pairing.
    """
    numer = np.asarray(numer, dtype=float)
    denom = np.asarray(denom, dtype=float)
    n = numer.size
    rng = np.random.default_rng(seed)
    idx = rng.integers(0, n, size=(reps, n))
    num_means = numer[idx].mean(axis=1)
    den_means = denom[idx].mean(axis=1)
    ratios = num_means / np.where(den_means == 0, np.nan, den_means)
    return float(np.nanquantile(ratios, 1.0 - level))


def bootstrap_median_ratio_lower(shells_hi, shells_lo, level: float = 0.95,
                                 reps: int = 2000, seed: int = 0) -> float:
    """Lower confidence bound for pooled-median(hi)/pooled-median(lo).

    Each argument is a list of per-trial value lists (possibly empty);
    bootstrap resamples whole trials and pools before taking medians.
    """
    rng = np.random.default_rng(seed)
    hi = [np.asarray(s, dtype=float) for s in shells_hi]
    lo = [np.asarray(s, dtype=float) for s in shells_lo]
    nh, nl = len(hi), len(lo)
    ratios = []
    for _ in range(reps):
        ph = np.concatenate([hi[i] for i in rng.integers(0, nh, size=nh)] or [np.array([])])
        pl = np.concatenate([lo[i] for i in rng.integers(0, nl, size=nl)] or [np.array([])])
        if ph.size == 0 or pl.size == 0:
            continue
        med_lo = np.median(pl)
        if med_lo > 0:
            ratios.append(np.median(ph) / med_lo)
    if not ratios:
        return float("nan")
    return float(np.quantile(ratios, 1.0 - level))


def two_sample_chi2(counts_a: dict, counts_b: dict) -> tuple[float, float]:
    """Chi-square homogeneity test of two categorical count tables.

    Categories absent from both samples are dropped; returns (statistic, p).
    """
    cats = sorted(set(counts_a) | set(counts_b), key=str)
    table = np.array(
        [[counts_a.get(c, 0) for c in cats], [counts_b.get(c, 0) for c in cats]]
    )
    keep = table.sum(axis=0) > 0
    table = table[:, keep]
    if table.shape[1] < 2 or table.sum(axis=1).min() == 0:
        return 0.0, 1.0
    stat, p, _, _ = sps.chi2_contingency(table)
    return float(stat), float(p)
