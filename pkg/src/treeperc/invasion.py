"""Invasion percolation and critical curve estimation.

Edges carry the same hashed uniform weights as the percolation Configs.
Along the anisotropic ray (p1, p2) = (t, rho t) an edge is open at ray
position t exactly when its effective weight (the raw uniform on coordinate
1, the raw uniform divided by rho on coordinate 2) is below t, so greedy
growth by minimal effective weight is invasion percolation for the ray, and
the largest effective weight accepted in the late stage of a long run
estimates the critical ray position p1_c.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np

from . import rng
from .percolation import edge_uniform, reset_word_hash_memo


@dataclass
class InvasionResult:
    graph_kind: str
    d: int
    rho: float
    target_size: int
    size: int
    p1_hat: float
    p2_hat: float
    q3_max: float
    q4_max: float
    uncertainty: float
    heap_peak: int
    budget_hit: bool
    seed: int
    trace: np.ndarray | None = None


def invade(graph, rho, target_size, seed, max_heap=None, audit=False,
           keep_trace=False) -> InvasionResult:
    """Grow the invasion cluster to target_size accepted vertices.

    The frontier is a lazy heap of (effective weight, neighbor); stale
    entries for already-invaded vertices are dropped on pop.  Heap ties
    break on the neighbor vertex tuple, so reruns are bit-identical.
    p1_hat is the largest effective weight accepted in the second half of
    the run; the gap between the third- and fourth-quarter maxima is kept
    as a convergence scale.  With ``audit`` every acceptance asserts it does
    not exceed the next frontier weight (heap order sanity).  ``max_heap``
    bounds frontier memory; hitting it flags the result partial.
    """
    if rho <= 0:
        raise ValueError("rho must be positive")
    if target_size < 4:
        raise ValueError("target size too small for tail estimates")
    # At extreme rho the cluster runs deep down one tree and every vertex
    # carries a long word; the hash memo would keep them all alive across
    # invasions, so start each run with it empty and drop it again at the
    # end.  Estimator workloads rebuild their short-word entries cheaply.
    reset_word_hash_memo()
    stream_seed = rng.mix64(seed, rng.INVADE)
    root = graph.root
    invaded = {root}
    heap: list = []
    inv_rho = 1.0 / rho

    def push_edges(v):
        for key, other, coord in graph.incident(v):
            if other in invaded:
                continue
            w = edge_uniform(graph, stream_seed, key)
            if coord == 2:
                w *= inv_rho
            heapq.heappush(heap, (w, other))

    push_edges(root)
    accepted = 0
    half_start = target_size // 2
    q3_end = (3 * target_size) // 4
    tail_max = 0.0
    q3_max = 0.0
    q4_max = 0.0
    heap_peak = len(heap)
    budget_hit = False
    trace = np.zeros(target_size) if keep_trace else None
    try:
        while accepted < target_size and heap:
            w, v = heapq.heappop(heap)
            if v in invaded:
                continue
            if audit and heap:
                assert w <= heap[0][0], "acceptance above frontier minimum"
            invaded.add(v)
            accepted += 1
            if trace is not None:
                trace[accepted - 1] = w
            if accepted > half_start:
                if w > tail_max:
                    tail_max = w
                if accepted <= q3_end:
                    if w > q3_max:
                        q3_max = w
                elif w > q4_max:
                    q4_max = w
            push_edges(v)
            if len(heap) > heap_peak:
                heap_peak = len(heap)
            if max_heap is not None and len(heap) > max_heap:
                budget_hit = True
                break
    finally:
        reset_word_hash_memo()
    p1 = tail_max
    p2 = min(1.0, rho * p1)
    return InvasionResult(graph.kind, graph.d, rho, target_size, accepted,
                          p1, p2, q3_max, q4_max, abs(q3_max - q4_max),
                          heap_peak, budget_hit, seed, trace)


@dataclass
class CurvePoint:
    rho: float
    p1: float
    p2: float
    spread: float
    n_seeds: int
    failures: int


def critical_curve(graph, rho_grid, target_size, seeds, max_heap=None):
    """Estimate (p1_c, p2_c) along a grid of ray slopes.

    Each point averages invasions over the given seeds; the spread (max
    absolute deviation of p1 from its mean) is the per-point uncertainty.
    A failing run (budget) is recorded and skipped, never fatal to the
    remaining grid.
    """
    points = []
    for rho in rho_grid:
        vals = []
        failures = 0
        for s in seeds:
            try:
                res = invade(graph, rho, target_size, s, max_heap=max_heap)
            except (MemoryError, ValueError):
                failures += 1
                continue
            if res.budget_hit:
                failures += 1
                continue
            vals.append(res.p1_hat)
        if vals:
            p1 = float(np.mean(vals))
            spread = float(max(abs(v - p1) for v in vals))
            points.append(CurvePoint(rho, p1, min(1.0, rho * p1), spread,
                                     len(vals), failures))
        else:
            points.append(CurvePoint(rho, float("nan"), float("nan"),
                                     float("nan"), 0, failures))
    return points
