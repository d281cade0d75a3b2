"""Occurrence counting and the support thresholds built on it.

An occurrence of a pattern is an increasing tuple of event indices inside one
segment whose symbols spell the pattern and whose first and last timestamps
are at most ``window`` apart. Occurrences are counted greedily: take the
leftmost start whose earliest completion fits the window, count it, and
resume strictly after its last event. This is the earliest-end greedy, so it
also yields the maximum number of non-overlapping occurrences, which is what
makes counts anti-monotone under subsequence containment.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable

import numpy as np

from . import _kernels
from .model import EventLog, Pattern

Window = int | None  # None means unbounded


def as_fraction(value: Fraction | int | float | str) -> Fraction:
    """Exact value of a threshold; floats go through their shortest repr (0.02 -> 1/50)."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(value)


def check_window(window: Window) -> None:
    if window is not None and (int(window) != window or window <= 0):
        raise ValueError(f"window must be a positive integer or None, got {window!r}")


def _span(window: Window) -> int:
    return _kernels.UNBOUNDED if window is None else int(window)


def _pack(patterns: list[Pattern]) -> tuple[np.ndarray, np.ndarray]:
    width = max(len(p) for p in patterns)
    packed = np.full((len(patterns), width), -1, dtype=np.int64)
    for r, p in enumerate(patterns):
        packed[r, : len(p)] = p
    return packed, np.array([len(p) for p in patterns], dtype=np.int64)


def count_many(patterns: Iterable[Pattern], log: EventLog, window: Window = None) -> list[int]:
    """Occurrence counts of several patterns in one kernel call."""
    patterns = list(patterns)
    if not patterns:
        return []
    if any(len(p) == 0 for p in patterns):
        raise ValueError("cannot count the empty pattern")
    check_window(window)
    if not log.events:
        return [0] * len(patterns)
    packed, lengths = _pack(patterns)
    counts = _kernels.count_batch(*log.arrays, packed, lengths, _span(window))
    return counts.tolist()


def count_occurrences(s: Pattern, log: EventLog, window: Window = None) -> int:
    if len(s) == 0:
        raise ValueError("cannot count the empty pattern")
    return count_many([tuple(s)], log, window)[0]


def count_occurrences_oracle(s: Pattern, log: EventLog, window: Window = None) -> int:
    """Literal simulation of the greedy rule, one segment at a time.

    Slow on purpose (quadratic in the worst case); shares nothing with the
    kernels and exists to check them.
    """
    if len(s) == 0:
        raise ValueError("cannot count the empty pattern")
    check_window(window)
    total = 0
    for a, b in log.segments:
        syms = [e.symbol.id for e in log.events[a:b]]
        times = [e.timestamp for e in log.events[a:b]]
        n = len(syms)
        pos = 0
        while pos < n:
            found = None
            for start in range(pos, n):
                if syms[start] != s[0]:
                    continue
                j, k = start, 1
                while k < len(s):
                    j += 1
                    while j < n and syms[j] != s[k]:
                        j += 1
                    if j >= n:
                        break
                    k += 1
                if k < len(s):
                    break  # later starts cannot complete either
                if window is None or times[j] - times[start] <= window:
                    found = j
                    break
            if found is None:
                break
            total += 1
            pos = found + 1
    return total


def min_count(min_supp: Fraction | float | str, n: int) -> int:
    """Smallest occurrence count whose support ``count / n`` reaches ``min_supp``."""
    frac = as_fraction(min_supp)
    if not 0 < frac <= 1:
        raise ValueError(f"min_supp must be in (0, 1], got {min_supp}")
    if n < 0:
        raise ValueError("log size must be non-negative")
    return math.ceil(frac * n)


def frequent_floor(min_supp, n: int) -> int:
    # count 0 is never frequent, even for an empty log
    return max(1, min_count(min_supp, n))


def border_floor(min_nbd_supp, n: int) -> int:
    """Lowest count kept in the negative border (at least one occurrence)."""
    frac = as_fraction(min_nbd_supp)
    if frac < 0:
        raise ValueError("min_nbd_supp must be non-negative")
    return max(1, math.ceil(frac * n))
