"""Lazy Bernoulli bond percolation on infinite graphs.

A Config never materializes its graph.  Each edge carries a uniform draw
computed on first touch as a hash of (stream seed, canonical edge key) and
memoized; the edge is open when the draw falls below the density of its
coordinate.  Hashing makes the environment independent of query order, and
two Configs sharing a seed at different densities are monotonically coupled
through the shared draws.  The same mechanism supplies invasion weights.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache

from .rng import _MASK, mix64, unit_uniform


@lru_cache(maxsize=1 << 20)
def _word_hash(w) -> int:
    return mix64(len(w), *w)


def reset_word_hash_memo() -> None:
    """Drop the memoized word hashes.

    Near-critical estimator runs keep words short and the memo small; a deep
    invasion at extreme anisotropy walks hundreds of letters down one tree
    and would otherwise leave a full-size memo of long tuples pinned for the
    life of the process.
    """
    _word_hash.cache_clear()


def _edge_hash_tree(seed: int, key) -> int:
    base, coord, letter = key
    return mix64(seed, _word_hash(base), coord, letter)


def _edge_hash_txt(seed: int, key) -> int:
    (a, b), coord, letter = key
    return mix64(seed, _word_hash(a), _word_hash(b), coord, letter)


def _edge_hash_txz(seed: int, key) -> int:
    (a, n), coord, letter = key
    return mix64(seed, _word_hash(a), n & _MASK, coord, letter)


_EDGE_HASH = {"tree": _edge_hash_tree, "TxT": _edge_hash_txt, "TxZ": _edge_hash_txz}


def edge_uniform(graph, seed: int, key) -> float:
    """The memoless uniform draw of one canonical edge under a stream seed."""
    return unit_uniform(_EDGE_HASH[graph.kind](seed, key))


class Config:
    """One percolation environment at fixed densities over a lazy edge store."""

    __slots__ = ("graph", "p1", "p2", "seed", "_u", "_ehash")

    def __init__(self, graph, p1: float, p2: float | None = None, seed: int = 0):
        if p2 is None:
            p2 = p1
        if not (0.0 <= p1 <= 1.0 and 0.0 <= p2 <= 1.0):
            raise ValueError("densities must lie in [0, 1]")
        self.graph = graph
        self.p1 = p1
        self.p2 = p2
        self.seed = seed
        self._u: dict = {}
        self._ehash = _EDGE_HASH[graph.kind]

    def edge_uniform(self, key) -> float:
        """Memoized uniform draw of one canonical edge key."""
        u = self._u.get(key)
        if u is None:
            u = unit_uniform(self._ehash(self.seed, key))
            self._u[key] = u
        return u

    def edge_state(self, key, coord: int) -> bool:
        """Whether the edge is open; consistent across repeated queries."""
        return self.edge_uniform(key) < (self.p1 if coord == 1 else self.p2)

    def touched_edges(self) -> int:
        return len(self._u)


@dataclass
class ClusterStats:
    """What one breadth-first exploration saw.

    shell_counts[i] is the number of cluster vertices at chemical distance
    exactly i from the origin (the last entry is a lower bound when the
    exploration was truncated by its vertex budget).  ``complete`` means the
    frontier died out within the caps, so the listed vertices are the whole
    cluster (or the whole chemical ball when a radius cap was set and the
    frontier "died inside it").
    """

    shell_counts: list[int]
    norm_histogram: Counter
    truncated: bool
    frontier_alive: int
    explored_edges: int
    complete: bool
    stopped_early: bool
    found: dict = field(default_factory=dict)
    shell_norms: list[list[int]] | None = None
    visited: set | None = None
    depths: dict | None = None

    @property
    def size(self) -> int:
        return sum(self.shell_counts)

    def ball_size(self, r: int) -> int:
        """|B_chem(r)|: cumulative shell count up to chemical distance r."""
        return sum(self.shell_counts[: r + 1])


def explore(
    cfg: Config,
    origin=None,
    r_cap: int | None = None,
    n_cap: int = 1_000_000,
    targets=(),
    stop_on_targets: bool = False,
    record_shell_norms: bool = False,
    keep_visited: bool = False,
    keep_depths: bool = False,
) -> ClusterStats:
    """Breadth-first exploration of the open cluster of ``origin``.

    Shells are chemical-distance levels; neighbor enumeration order is the
    graph's fixed (coordinate, letter) order, so the walk is deterministic
    given (seed, densities, caps).  ``r_cap`` bounds the chemical radius,
    ``n_cap`` the number of explored vertices.  ``targets`` are vertices
    whose discovery is recorded with their chemical distance; with
    ``stop_on_targets`` the walk stops once every target has been found
    (positive resolution only; proving a target disconnected requires the
    frontier to die out, i.e. ``complete``).
    """
    graph = cfg.graph
    if origin is None:
        origin = graph.root
    target_set = set(targets)
    found: dict = {}
    if origin in target_set:
        found[origin] = 0
    visited = {origin}
    depths = {origin: 0} if keep_depths else None
    current = [origin]
    shells = [1]
    norms = Counter((graph.norm(origin),))
    shell_norms = [[graph.norm(origin)]] if record_shell_norms else None
    edges = 0
    truncated = False
    stopped_early = False
    r = 0
    while current:
        if stop_on_targets and target_set and len(found) == len(target_set):
            stopped_early = True
            break
        if r_cap is not None and r >= r_cap:
            break
        nxt: list = []
        nxt_norms: list[int] | None = [] if record_shell_norms else None
        for idx, v in enumerate(current):
            if truncated:
                break
            for key, other, coord in graph.incident(v):
                edges += 1
                if other in visited or not cfg.edge_state(key, coord):
                    continue
                if len(visited) >= n_cap:
                    truncated = True
                    break
                visited.add(other)
                nxt.append(other)
                norms[graph.norm(other)] += 1
                if nxt_norms is not None:
                    nxt_norms.append(graph.norm(other))
                if depths is not None:
                    depths[other] = r + 1
                if other in target_set and other not in found:
                    found[other] = r + 1
        if truncated:
            if nxt:
                shells.append(len(nxt))
                if shell_norms is not None:
                    shell_norms.append(nxt_norms)
            frontier_alive = (len(current) - idx) + len(nxt)
            return ClusterStats(
                shells, norms, True, frontier_alive, edges, False, False, found,
                shell_norms, visited if keep_visited else None, depths,
            )
        if not nxt:
            current = []
            break
        shells.append(len(nxt))
        if shell_norms is not None:
            shell_norms.append(nxt_norms)
        current = nxt
        r += 1
    frontier_alive = len(current)
    complete = not stopped_early and not current
    return ClusterStats(
        shells, norms, False, frontier_alive, edges, complete, stopped_early,
        found, shell_norms, visited if keep_visited else None, depths,
    )
