"""Restricted triangle diagrams on products of trees: brute force and exact
polynomial-time reduction.

A two-point weight g is a class function: g(k1, k2) depends only on the pair
of coordinate distances.  The closed restricted triangle at radius r is

    sum over u, v in B(r) of  g(0,u) g(u,v) g(v,0),

and the open variant anchors the third factor at a point w, replacing
g(v,0) by g(v,w).  brute_triangle enumerates the product ball explicitly
and is the oracle; the reduced computation decomposes each tree coordinate
by geodesic projections, with the exact first-step branching counts d at a
degenerate geodesic, d-1 at its two ends and d-2 in its interior, and runs
in time polynomial in r.  Both paths accept exact Fractions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import rng
from .stats import mean_stderr
from .trees import enumerate_words, tree_distance, word_mul


def path_profile_count(d: int, D: int, i: int, ell: int) -> int:
    """Vertices at offset ell from position i along a geodesic of length D.

    Every vertex projects to a unique geodesic position; branching off uses
    d directions when the geodesic is a single vertex, d-1 at either end,
    d-2 in the interior, then d-1 per further step.
    """
    if not (0 <= i <= D) or ell < 0:
        return 0
    if ell == 0:
        return 1
    if D == 0:
        first = d
    elif i == 0 or i == D:
        first = d - 1
    else:
        first = d - 2
    return first * (d - 1) ** (ell - 1)


def _coordinate_table(d, W, alpha_max, gamma_max=None, delta_max=None):
    """Pair counts in one tree coordinate, indexed (alpha, beta, gamma, delta).

    Counts pairs (u, v) with |u| = alpha, d(u, v) = beta, |v| = gamma and
    d(v, w) = delta for an anchor w at distance W from the root.  v is
    classified by its projection onto the 0..w geodesic (position m, offset
    h), u by its projection onto the 0..v geodesic; the double profile count
    is exact by distance transitivity of the tree.  gamma_max or delta_max
    (at least one) bounds the v range.
    """
    if gamma_max is None and delta_max is None:
        raise ValueError("need a bound on v")
    tab: dict[tuple[int, int, int, int], int] = {}
    h_cap = []
    if gamma_max is not None:
        h_cap.append(lambda m: gamma_max - m)
    if delta_max is not None:
        h_cap.append(lambda m: delta_max - W + m)
    for m in range(W + 1):
        hmax = min(cap(m) for cap in h_cap)
        for h in range(max(0, hmax) + 1):
            if h > hmax:
                continue
            wv = path_profile_count(d, W, m, h)
            if wv == 0:
                continue
            gamma = m + h
            delta = h + W - m
            for i in range(min(gamma, alpha_max) + 1):
                for ell in range(alpha_max - i + 1):
                    wu = path_profile_count(d, gamma, i, ell)
                    if wu == 0:
                        continue
                    key = (i + ell, gamma - i + ell, gamma, delta)
                    tab[key] = tab.get(key, 0) + wv * wu
    return tab


def _combine(t1, t2, g1, g2, g3, alpha_cap, gamma_cap=None, delta_cap=None):
    total = 0
    g1c: dict = {}
    g2c: dict = {}
    g3c: dict = {}
    items2 = list(t2.items())
    for (a1, b1, c1, e1), w1 in t1.items():
        for (a2, b2, c2, e2), w2 in items2:
            if a1 + a2 > alpha_cap:
                continue
            if gamma_cap is not None and c1 + c2 > gamma_cap:
                continue
            if delta_cap is not None and e1 + e2 > delta_cap:
                continue
            ka = (a1, a2)
            fa = g1c.get(ka)
            if fa is None:
                fa = g1c[ka] = g1(a1, a2)
            kb = (b1, b2)
            fb = g2c.get(kb)
            if fb is None:
                fb = g2c[kb] = g2(b1, b2)
            ke = (e1, e2)
            fe = g3c.get(ke)
            if fe is None:
                fe = g3c[ke] = g3(e1, e2)
            total += w1 * w2 * fa * fb * fe
    return total


def open_triangle(d: int, g, w_class: tuple[int, int], r: int):
    """Restricted open triangle over u, v in B(r), third factor anchored at w.

    Exact reduction by per-coordinate geodesic projections; at
    w_class = (0, 0) this is the closed restricted triangle.  g may return
    Fractions for exact arithmetic.
    """
    if r < 0:
        raise ValueError("radius must be nonnegative")
    W1, W2 = w_class
    if W1 < 0 or W2 < 0:
        raise ValueError("anchor class must be nonnegative")
    t1 = _coordinate_table(d, W1, r, gamma_max=r)
    t2 = _coordinate_table(d, W2, r, gamma_max=r)
    return _combine(t1, t2, g, g, g, alpha_cap=r, gamma_cap=r)


def reduced_triangle(d: int, g, r: int):
    """Closed restricted triangle over u, v in B(r), exactly, in poly(r) time."""
    return open_triangle(d, g, (0, 0), r)


def open_triangle_mixed(d, g1, g2, g3, w_class, r):
    """Open triangle with per-factor weights over the natural supports.

    u ranges over |u| <= r (the support of a radius-restricted first
    factor), v over d(v, w) <= r (third factor's support), so with
    restricted end factors the sum covers every nonzero term of the full
    two-point diagram rather than clipping v to B(r).
    """
    W1, W2 = w_class
    t1 = _coordinate_table(d, W1, r, delta_max=r)
    t2 = _coordinate_table(d, W2, r, delta_max=r)
    return _combine(t1, t2, g1, g2, g3, alpha_cap=r, delta_cap=r)


def _anchor_word(W: int):
    """A fixed reduced representative of length W (letters alternate 0, 1)."""
    return tuple(i % 2 for i in range(W))


def enumerate_product_ball(d: int, r: int):
    """All product vertices with |x1| + |x2| <= r, as (word, word) pairs."""
    words = {k: list(enumerate_words(d, k)) for k in range(r + 1)}
    out = []
    for k1 in range(r + 1):
        for k2 in range(r + 1 - k1):
            for a in words[k1]:
                for b in words[k2]:
                    out.append((a, b))
    return out


def brute_triangle(d: int, g, r: int, w_class: tuple[int, int] = (0, 0)):
    """Restricted (open) triangle by explicit enumeration of B(r) pairs.

    The oracle for the reduced computation: every pair (u, v) in the product
    ball is visited and classified by exact tree distances.  Cost is
    quadratic in the ball volume, so keep r small.
    """
    w1 = _anchor_word(w_class[0])
    w2 = _anchor_word(w_class[1])
    ball = enumerate_product_ball(d, r)
    classes: dict[tuple, int] = {}
    vside = [(v, tree_distance(v[0], w1), tree_distance(v[1], w2)) for v in ball]
    for u in ball:
        ua, ub = u
        la, lb = len(ua), len(ub)
        for v, dw1, dw2 in vside:
            key = (la, lb, tree_distance(ua, v[0]), tree_distance(ub, v[1]), dw1, dw2)
            classes[key] = classes.get(key, 0) + 1
    total = 0
    cache: dict = {}
    for (a1, a2, b1, b2, e1, e2), cnt in classes.items():
        ka = (a1, a2)
        fa = cache.get(ka)
        if fa is None:
            fa = cache[ka] = g(a1, a2)
        kb = (b1, b2)
        fb = cache.get(kb)
        if fb is None:
            fb = cache[kb] = g(b1, b2)
        ke = (e1, e2)
        fe = cache.get(ke)
        if fe is None:
            fe = cache[ke] = g(e1, e2)
        total += cnt * fa * fb * fe
    return total


def oded_bound(d: int, x_class: tuple[int, int], C: float = 1.0) -> float:
    """The transience-based two-point bound C |x|^2 (d-1)^(-|x|/2)."""
    n = x_class[0] + x_class[1]
    return C * n * n * (d - 1) ** (-n / 2.0)


def yzr_bound(d: int, s: int, w_class: tuple[int, int]) -> float:
    """Geometric part of the open-triangle estimate: 9 s^8 (d-1)^(-|w|/2)."""
    n = w_class[0] + w_class[1]
    return 9.0 * float(s) ** 8 * (d - 1) ** (-n / 2.0)


def level_sum_identity(d: int, s: int) -> tuple[Fraction, Fraction]:
    """Sum (d-1)^j levels times (d-1)^-j over a depth-s forward subtree.

    The forward subtree of a non-root vertex has exactly (d-1)^j vertices at
    distance j, so each level contributes exactly 1.  Returns the exact pair
    (including the j = 0 root level, excluding it) = (s + 1, s).
    """
    if s < 0:
        raise ValueError("depth must be nonnegative")
    q = Fraction(1, d - 1)
    with_root = sum((Fraction((d - 1) ** j) * q ** j for j in range(s + 1)),
                    Fraction(0))
    return with_root, with_root - 1


@dataclass
class OffpointaReport:
    """Both sides of the off-method inequality with their uncertainties."""

    r: int
    w_class: tuple[int, int]
    lhs_lower: float
    lhs_upper: float
    lhs_stderr: float
    ghat: float
    ghat_stderr: float
    nabla_upper: float
    nabla_sigma: float
    rhs: float
    sigma_combined: float
    ok: bool
    censored_trials: int
    trials: int


def offpointa_check(graph, p1, p2, r, w_class, trials, seed,
                    n_cap=200_000, table_trials=2000) -> OffpointaReport:
    """Monte Carlo check of  E #{(x, y): 0 <->_r x, xw <->_r y, 0 </-> y}
    >= Ghat(r)^2 (1 - nabla_hat(w; r)) - 3 sigma.

    The left side is counted pathwise: per trial, explore the cluster of 0,
    take X = B_chem(0, r), and for each x in X explore B_chem(xw, r) in the
    same environment, counting the y outside the cluster of 0 (definitive
    only when that cluster was completely explored; otherwise the pair is
    censored and contributes to the upper bracket only).

    nabla_hat uses radius-restricted tables for the outer factors (their
    exact supports) and unrestricted upper brackets for the middle factor,
    biasing nabla upward and the right side downward, the valid direction
    for this inequality.  Its sigma is an all-up shift bound, which
    overstates the propagated error (conservative).
    """
    from .estimators import connection_prob_table
    from .percolation import Config, explore

    if graph.kind != "TxT":
        raise ValueError("off-method check runs on TxT")

    w1 = _anchor_word(w_class[0])
    w2 = _anchor_word(w_class[1])
    lhs_lo = np.zeros(trials)
    lhs_hi = np.zeros(trials)
    gsize = np.zeros(trials)
    censored_trials = 0
    for t in range(trials):
        cfg = Config(graph, p1, p2, seed=rng.mix64(seed, t, rng.OFFPOINTA))
        st = explore(cfg, n_cap=n_cap, keep_visited=True, keep_depths=True)
        cluster = st.visited
        ball = [v for v, dep in st.depths.items() if dep <= r]
        gsize[t] = len(ball)
        definitive = st.complete
        if not definitive:
            censored_trials += 1
        lo = hi = 0
        for x in ball:
            anchor = (word_mul(x[0], w1), word_mul(x[1], w2))
            st2 = explore(cfg, origin=anchor, r_cap=r, n_cap=n_cap, keep_visited=True)
            for y in st2.visited:
                if y in cluster:
                    continue
                hi += 1
                if definitive:
                    lo += 1
        lhs_lo[t] = lo
        lhs_hi[t] = hi
    lhs_mean, lhs_se = mean_stderr(lhs_lo)
    ghat, ghat_se = mean_stderr(gsize)

    specs_r = [(i, j) for i in range(r + 1) for j in range(r + 1 - i)]
    bmax = 2 * r + w_class[0] + w_class[1]
    specs_mid = [(i, j) for i in range(bmax + 1) for j in range(bmax + 1 - i)]
    g_r = connection_prob_table(graph, p1, p2, specs_r, table_trials,
                                rng.mix64(seed, 1, rng.TRIANGLE), r_cap=r,
                                n_cap=n_cap)
    g_mid = connection_prob_table(graph, p1, p2, specs_mid, table_trials,
                                  rng.mix64(seed, 2, rng.TRIANGLE), n_cap=n_cap)
    up_r = g_r.upper_fn()
    up_mid = g_mid.upper_fn()
    nabla = open_triangle_mixed(graph.d, up_r, up_mid, up_r, w_class, r)
    sig = 1.0 / (table_trials ** 0.5)
    shifted = open_triangle_mixed(
        graph.d,
        lambda a, b: min(1.0, up_r(a, b) + sig),
        lambda a, b: min(1.0, up_mid(a, b) + sig),
        lambda a, b: min(1.0, up_r(a, b) + sig),
        w_class, r)
    nabla_sigma = shifted - nabla
    rhs = ghat * ghat * (1.0 - nabla)
    sigma_combined = ((2.0 * ghat * abs(1.0 - nabla) * ghat_se) ** 2
                      + (ghat * ghat * nabla_sigma) ** 2
                      + lhs_se ** 2) ** 0.5
    ok = lhs_mean >= rhs - 3.0 * sigma_combined
    return OffpointaReport(r, tuple(w_class), lhs_mean, float(np.mean(lhs_hi)),
                           lhs_se, ghat, ghat_se, float(nabla),
                           float(nabla_sigma), float(rhs), float(sigma_combined),
                           bool(ok), censored_trials, trials)
