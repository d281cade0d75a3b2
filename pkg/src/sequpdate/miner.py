"""Level-wise miner for frequent sequences and their negative border.

This is the from-scratch path: initial mining, the re-run baseline in
benchmarks, and the reference the incremental updates are checked against.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import StateValidationError
from .model import EventLog, Pattern, canonical_key, delete_one_subsequences
from .occurrence import (
    Window,
    as_fraction,
    border_floor,
    check_window,
    count_many,
    frequent_floor,
)


@dataclass(frozen=True)
class Params:
    """Mining thresholds. ``0 <= min_nbd_supp < min_supp <= 1``; ``window=None`` is unbounded."""

    min_supp: Fraction
    min_nbd_supp: Fraction = Fraction(0)
    window: Window = None

    def __post_init__(self):
        object.__setattr__(self, "min_supp", as_fraction(self.min_supp))
        object.__setattr__(self, "min_nbd_supp", as_fraction(self.min_nbd_supp))
        if not 0 < self.min_supp <= 1:
            raise ValueError(f"min_supp must be in (0, 1], got {self.min_supp}")
        if not 0 <= self.min_nbd_supp < self.min_supp:
            raise ValueError(
                f"min_nbd_supp must satisfy 0 <= min_nbd_supp < min_supp, got {self.min_nbd_supp}"
            )
        check_window(self.window)
        if self.window is not None:
            object.__setattr__(self, "window", int(self.window))

    def frequent_floor(self, n: int) -> int:
        return frequent_floor(self.min_supp, n)

    def border_floor(self, n: int) -> int:
        return border_floor(self.min_nbd_supp, n)


@dataclass
class MiningState:
    """Frequent set ``L`` and negative border ``NBD`` of one log, with exact counts."""

    params: Params
    db_size: int
    frequent: dict[Pattern, int] = field(default_factory=dict)
    negative_border: dict[Pattern, int] = field(default_factory=dict)

    def level(self, m: int) -> dict[Pattern, int]:
        return {s: c for s, c in self.frequent.items() if len(s) == m}

    def border_level(self, m: int) -> dict[Pattern, int]:
        return {s: c for s, c in self.negative_border.items() if len(s) == m}

    @property
    def max_length(self) -> int:
        return max((len(s) for s in (*self.frequent, *self.negative_border)), default=0)

    def canonical(self) -> MiningState:
        """Same state with both maps in canonical pattern order."""
        return MiningState(
            self.params,
            self.db_size,
            dict(sorted(self.frequent.items(), key=lambda kv: canonical_key(kv[0]))),
            dict(sorted(self.negative_border.items(), key=lambda kv: canonical_key(kv[0]))),
        )

    def violations(self, namer=None) -> list[str]:
        """Every invariant violation, as human-readable strings (empty when valid).

        ``namer`` renders a pattern for the messages (default: the id tuple).
        """
        fmt = namer or str
        out = []
        hi = self.params.frequent_floor(self.db_size)
        lo = self.params.border_floor(self.db_size)
        if self.db_size < 0:
            out.append(f"negative db_size {self.db_size}")
        for s in self.frequent.keys() & self.negative_border.keys():
            out.append(f"{fmt(s)} is both frequent and in the negative border")
        for s, c in self.frequent.items():
            if len(s) == 0:
                out.append("empty pattern in frequent set")
                continue
            if c < hi:
                out.append(f"frequent {fmt(s)} has count {c} < {hi}")
            if len(s) > 1:
                missing = [t for t in delete_one_subsequences(s) if t not in self.frequent]
                if missing:
                    out.append(f"frequent {fmt(s)} has infrequent subsequence {fmt(missing[0])}")
        for s, c in self.negative_border.items():
            if len(s) == 0:
                out.append("empty pattern in negative border")
                continue
            if not lo <= c < hi:
                out.append(f"negative-border {fmt(s)} has count {c} outside [{lo}, {hi})")
            if len(s) > 1:
                missing = [t for t in delete_one_subsequences(s) if t not in self.frequent]
                if missing:
                    out.append(f"negative-border {fmt(s)} has infrequent subsequence {fmt(missing[0])}")
        return out

    def validate(self) -> None:
        problems = self.violations()
        if problems:
            raise StateValidationError("; ".join(problems[:5]) + (" ..." if len(problems) > 5 else ""))


def self_join_candidates(level: dict[Pattern, int] | set[Pattern]) -> set[Pattern]:
    """Length-``m`` candidates from one level of length-``m-1`` frequent patterns.

    ``alpha`` joins ``beta`` when ``alpha[1:] == beta[:-1]``; the result
    ``alpha + beta[-1:]`` survives only if all its delete-one subsequences are
    in ``level``.
    """
    keys = set(level)
    if not keys:
        return set()
    lengths = {len(s) for s in keys}
    if len(lengths) != 1:
        raise ValueError(f"mixed pattern lengths {sorted(lengths)}")
    by_prefix: dict[Pattern, list[Pattern]] = defaultdict(list)
    for beta in keys:
        by_prefix[beta[:-1]].append(beta)
    out = set()
    for alpha in keys:
        for beta in by_prefix.get(alpha[1:], ()):
            gamma = alpha + beta[-1:]
            if all(t in keys for t in delete_one_subsequences(gamma)):
                out.add(gamma)
    return out


def classify(counts: dict[Pattern, int], hi: int, lo: int):
    """Split counted candidates into (frequent, border) by the two floors."""
    freq, border = {}, {}
    for s, c in counts.items():
        if c >= hi:
            freq[s] = c
        elif c >= lo:
            border[s] = c
    return freq, border


def mine(log: EventLog, params: Params) -> MiningState:
    """Mine ``log`` from scratch, one pattern length per pass."""
    n = len(log)
    hi, lo = params.frequent_floor(n), params.border_floor(n)
    frequent: dict[Pattern, int] = {}
    border: dict[Pattern, int] = {}
    candidates = [(x,) for x in sorted(set(log.symbol_ids()))]
    while candidates:
        counts = dict(zip(candidates, count_many(candidates, log, params.window)))
        level, level_border = classify(counts, hi, lo)
        frequent.update(level)
        border.update(level_border)
        if not level:
            break
        candidates = sorted(self_join_candidates(level), key=canonical_key)
    return MiningState(params, n, frequent, border).canonical()
