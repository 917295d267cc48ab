"""Monte Carlo estimators over independent percolation environments.

All estimators draw one fresh Config per trial, seeded as
mix64(master_seed, trial_index, purpose_tag), so results do not depend on
how trials are chunked across workers.  Censoring policy: whenever a cap
bites, estimates carry a (lower, upper) bracket and the censored count is
reported rather than silently resolved.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np

from . import rng
from .percolation import Config, explore
from .stats import binomial_stderr, mean_stderr
from .trees import sample_level_point


@dataclass
class GrowthEstimate:
    """Mean chemical ball volumes Ghat(r') for every r' up to the probed radius."""

    radii: list[int]
    mean: np.ndarray
    stderr: np.ndarray
    samples: np.ndarray          # trials x radii matrix of |B_chem(r')|
    truncated_fraction: float
    trials: int

    def at(self, r: int) -> tuple[float, float]:
        i = self.radii.index(r)
        return float(self.mean[i]), float(self.stderr[i])


def estimate_G(graph, p1, p2, r, trials, seed, n_cap=1_000_000,
               first_trial=0, record_shell_norms=False):
    """Estimate G(r') = E|B_chem(r')| for all r' <= r from independent trials.

    Cumulative shell counts make the estimate monotone in r' by construction.
    Truncated trials contribute lower bounds and are counted in
    truncated_fraction.  Optionally returns the per-trial outermost-shell
    norm lists alongside (for ballisticity summaries).
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    sizes = np.zeros((trials, r + 1), dtype=np.int64)
    shell_norm_lists = [] if record_shell_norms else None
    truncated = 0
    for t in range(trials):
        cfg = Config(graph, p1, p2, seed=rng.mix64(seed, first_trial + t, rng.GBALL))
        st = explore(cfg, r_cap=r, n_cap=n_cap, record_shell_norms=record_shell_norms)
        if st.truncated:
            truncated += 1
        counts = np.zeros(r + 1, dtype=np.int64)
        counts[: len(st.shell_counts)] = st.shell_counts
        sizes[t] = np.cumsum(counts)
        if shell_norm_lists is not None:
            norms = st.shell_norms[r] if len(st.shell_norms) > r else []
            shell_norm_lists.append(norms)
    mean = sizes.mean(axis=0)
    stderr = sizes.std(axis=0, ddof=1) / np.sqrt(trials) if trials > 1 else np.full(r + 1, np.nan)
    est = GrowthEstimate(list(range(r + 1)), mean, stderr, sizes, truncated / trials, trials)
    if record_shell_norms:
        return est, shell_norm_lists
    return est


@dataclass
class ClassEstimate:
    """Bracketed connection probability estimate for one symmetry class."""

    spec: tuple[int, int]
    lower: float
    upper: float
    stderr: float
    trials: int
    hits: int
    censored: int


@dataclass
class ClassFunction:
    """Connection probability estimates indexed by class (k1, k2).

    A class is the orbit of a vertex under root-fixing symmetries: the pair
    of coordinate distances.  r_cap is the chemical-length restriction of
    the connection event (None for plain connectivity).
    """

    graph_kind: str
    d: int
    p1: float
    p2: float
    r_cap: int | None
    entries: dict = field(default_factory=dict)

    def lower_fn(self):
        e = self.entries
        return lambda k1, k2: e[(k1, k2)].lower if (k1, k2) in e else 0.0

    def upper_fn(self):
        e = self.entries
        return lambda k1, k2: e[(k1, k2)].upper if (k1, k2) in e else 0.0


def connection_prob_table(graph, p1, p2, specs, trials, seed,
                          r_cap=None, n_cap=1_000_000, first_trial=0):
    """Estimate P(0 <-> x) (r_cap-restricted if set) for several classes at once.

    Each trial samples one uniform target per class and runs a single
    exploration of the cluster of the root; sharing the environment across
    classes leaves each class estimate unbiased (targets are independent of
    the environment) and costs one walk instead of len(specs).

    A target not found counts as disconnected only when the exploration was
    exhaustive: the frontier died out, or a radius cap was reached without
    the vertex budget biting (breadth-first order then guarantees every
    vertex within the cap radius was seen).  Otherwise the trial is
    censored for that class.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    specs = list(specs)
    for s in specs:
        if s[0] < 0 or s[1] < 0:
            raise ValueError(f"bad class {s}")
    hits = {s: 0 for s in specs}
    censored = {s: 0 for s in specs}
    for t in range(trials):
        ti = first_trial + t
        sampler = random.Random(rng.mix64(seed, ti, rng.LEVEL))
        targets = {}
        for s in specs:
            targets.setdefault(sample_level_point(graph, s, sampler), []).append(s)
        cfg = Config(graph, p1, p2, seed=rng.mix64(seed, ti, rng.CONNPROB))
        st = explore(cfg, r_cap=r_cap, n_cap=n_cap,
                     targets=targets.keys(), stop_on_targets=True)
        exhausted = st.complete or (r_cap is not None and not st.truncated
                                    and not st.stopped_early)
        for v, ss in targets.items():
            if v in st.found:
                for s in ss:
                    hits[s] += 1
            elif not exhausted:
                for s in ss:
                    censored[s] += 1
    out = ClassFunction(graph.kind, graph.d, p1, p2, r_cap)
    for s in specs:
        lo = hits[s] / trials
        up = (hits[s] + censored[s]) / trials
        mid_err = binomial_stderr(hits[s] + censored[s] // 2, trials)
        out.entries[s] = ClassEstimate(s, lo, up, mid_err, trials, hits[s], censored[s])
    return out


def connection_prob_class(graph, p1, p2, spec, trials, seed,
                          r_cap=None, n_cap=1_000_000) -> ClassEstimate:
    """Estimate P(0 <-> x) for one class; see connection_prob_table."""
    if tuple(spec) == (0, 0):
        return ClassEstimate((0, 0), 1.0, 1.0, 0.0, trials, trials, 0)
    table = connection_prob_table(graph, p1, p2, [tuple(spec)], trials, seed,
                                  r_cap=r_cap, n_cap=n_cap)
    return table.entries[tuple(spec)]


@dataclass
class BallisticitySummary:
    """Norm distribution over the outermost chemical shell, pooled over trials."""

    r: int
    median: float
    q1: float
    q3: float
    mean: float
    pooled_count: int
    empty_shells: int
    trials: int
    per_trial_norms: list


def extrinsic_ballisticity(graph, p1, p2, r, trials, seed, n_cap=1_000_000):
    """Summarize |x| over the shell at chemical distance exactly r.

    Trials whose cluster dies before radius r contribute empty shells; those
    are skipped in the pooling and counted.  Keeps per-trial norm lists so
    callers can bootstrap over trials.
    """
    _, shell_norms = estimate_G(graph, p1, p2, r, trials, seed,
                                n_cap=n_cap, record_shell_norms=True)
    pooled = np.array([x for s in shell_norms for x in s], dtype=float)
    empty = sum(1 for s in shell_norms if not s)
    if pooled.size == 0:
        return BallisticitySummary(r, float("nan"), float("nan"), float("nan"),
                                   float("nan"), 0, empty, trials, shell_norms)
    q1, med, q3 = np.percentile(pooled, [25, 50, 75])
    return BallisticitySummary(r, float(med), float(q1), float(q3),
                               float(pooled.mean()), pooled.size, empty, trials,
                               shell_norms)


@dataclass
class MomentReport:
    """Empirical moments of |B_chem(r)| against the tree-diagram bound."""

    r: int
    ghat: float
    moments: dict                # n -> (estimate, stderr, bound, within)
    tail: dict                   # lam -> observed frequency
    tail_reference_c: float      # best-fit c in 2 exp(-c lam), reporting only
    truncated_fraction: float
    inconclusive: bool
    trials: int


def moment_tail_check(graph, p1, p2, r, trials, seed, n_cap=1_000_000,
                      orders=(1, 2, 3), lams=(2.0, 4.0, 8.0)):
    """Check E|B_chem(r)|^n <= (2 n G(r)^2)^n within sampling error.

    The bound uses the estimated Ghat(r) itself.  Tail frequencies
    P(|B| > lam Ghat(r)^2) are reported against the reference shape
    2 exp(-c lam) with c fitted by least squares on the observed points;
    the fit is reporting-only.  Inconclusive when more than 1% of trials
    were truncated.
    """
    est = estimate_G(graph, p1, p2, r, trials, seed, n_cap=n_cap)
    sizes = est.samples[:, r].astype(float)
    ghat = float(sizes.mean())
    moments = {}
    for n in orders:
        vals = sizes ** n
        m, se = mean_stderr(vals)
        bound = (2.0 * n * ghat * ghat) ** n
        moments[n] = (m, se, bound, m <= bound + 3.0 * (se if np.isfinite(se) else 0.0))
    tail = {}
    scale = ghat * ghat
    for lam in lams:
        tail[lam] = float((sizes > lam * scale).mean())
    pts = [(lam, f) for lam, f in tail.items() if f > 0]
    if pts:
        xs = np.array([p[0] for p in pts])
        ys = np.log(np.array([p[1] for p in pts]) / 2.0)
        c = float(-(xs @ ys) / (xs @ xs))
    else:
        c = float("inf")
    return MomentReport(r, ghat, moments, tail, c, est.truncated_fraction,
                        est.truncated_fraction > 0.01, trials)


@dataclass
class StabilityReport:
    """Mean cluster size under an increasing cap schedule."""

    caps: list[int]
    means: list[float]
    stderrs: list[float]
    final_relative_change: float
    stable: bool
    trials: int


def subcritical_stability(graph, p1, p2, trials, seed, caps=(2500, 5000, 10000, 20000),
                          tolerance=0.02):
    """Estimate E|C(0)| under each cap and check the estimate has stabilized.

    One exploration per trial at the largest cap; the deterministic
    breadth-first order makes min(cluster size, cap) exactly what a run
    capped at any smaller budget would have explored, so all cap levels
    share trials (a pathwise coupling, not a re-simulation).  Stable when
    the last cap doubling moves the mean by less than the tolerance.
    """
    caps = sorted(caps)
    if trials < 2:
        raise ValueError("need at least two trials")
    n_max = caps[-1]
    sizes = np.zeros(trials, dtype=np.int64)
    for t in range(trials):
        cfg = Config(graph, p1, p2, seed=rng.mix64(seed, t, rng.STABILITY))
        st = explore(cfg, n_cap=n_max)
        sizes[t] = st.size
    means, errs = [], []
    for cap in caps:
        clipped = np.minimum(sizes, cap).astype(float)
        m, se = mean_stderr(clipped)
        means.append(m)
        errs.append(se)
    change = abs(means[-1] - means[-2]) / means[-1] if means[-1] > 0 else float("inf")
    return StabilityReport(list(caps), means, errs, change, change < tolerance, trials)
