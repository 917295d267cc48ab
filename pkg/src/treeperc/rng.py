"""Deterministic stream seeding.

Every random draw in the package flows from 64-bit seeds derived with
``mix64``, a SplitMix64-style finalizer folded over integer parts.  Purpose
tags keep streams of different estimators disjoint under a shared master
seed, so per-trial seeds are reproducible regardless of worker count or
query order.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1

# Purpose tags, one per independent stream family.
GBALL = 1
CONNPROB = 2
TRIANGLE = 3
OFFPOINTA = 4
SCHRAMM = 5
INVADE = 6
CURVE = 7
LEVEL = 8
DEGREE = 9
INVARIANCE = 10
BALLISTIC = 11
MOMENT = 12
STABILITY = 13
RETURN = 14


def mix64(*parts: int) -> int:
    """Fold integer parts into one 64-bit value (SplitMix64 constants)."""
    h = 0
    for p in parts:
        h ^= p & _MASK
        h = (h + 0x9E3779B97F4A7C15) & _MASK
        h = ((h ^ (h >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        h = ((h ^ (h >> 27)) * 0x94D049BB133111EB) & _MASK
        h ^= h >> 31
    return h


def unit_uniform(h: int) -> float:
    """Map a 64-bit hash to [0, 1) using its top 53 bits."""
    return (h >> 11) * (2.0 ** -53)
