"""Decremental update: drop an old time-prefix ``dd`` from a mined log ``DB``.

Candidates are the stored frequent set and negative border of ``DB``. A
pattern can only be frequent after the deletion if its support in ``DB`` was
at least ``min_freq = min_supp * (|DB| - |dd|) / |DB|``, which lets border
patterns below that level be skipped without touching ``dd``.

The update is single-pass and therefore incomplete: a pattern that was never
a candidate in ``DB`` is not recovered. :func:`recall_report` measures the
gap against a fresh re-mine.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import LogOrderError, ParamsMismatchError, StateValidationError
from .miner import MiningState, Params, mine
from .model import EventLog, Pattern, _split_at, canonical_key, delete_one_subsequences
from .occurrence import as_fraction, count_many


def min_freq(params: Params | Fraction | float | str, db_size: int, dd_size: int) -> Fraction:
    """Lowest support in ``DB`` that can still be frequent once ``dd`` is gone."""
    supp = params.min_supp if isinstance(params, Params) else as_fraction(params)
    if db_size <= 0:
        raise ValueError("original log must be non-empty")
    if not 0 <= dd_size <= db_size:
        raise ValueError(f"deleted size {dd_size} outside [0, {db_size}]")
    return supp * Fraction(db_size - dd_size, db_size)


@dataclass
class RecallNote:
    """Comparison of a decremental result with a re-mine of the remaining log."""

    missing_frequent: dict[Pattern, int] = field(default_factory=dict)
    missing_border: dict[Pattern, int] = field(default_factory=dict)
    wrong_counts: dict[Pattern, tuple[int, int]] = field(default_factory=dict)
    false_frequent: list[Pattern] = field(default_factory=list)

    @property
    def complete(self) -> bool:
        return not self.missing_frequent

    @property
    def sound(self) -> bool:
        return not self.wrong_counts and not self.false_frequent

    def summary(self) -> str:
        return (
            f"missing_frequent={len(self.missing_frequent)} missing_border={len(self.missing_border)} "
            f"wrong_counts={len(self.wrong_counts)} false_frequent={len(self.false_frequent)}"
        )


@dataclass
class DeletionReport:
    new_state: MiningState
    min_freq: Fraction
    candidates_examined: int = 0
    skipped_below_min_freq: int = 0
    boundary_corrections: int = 0  # occurrences that straddled the cut inside a segment
    closure_removed: int = 0
    seconds: float = 0.0
    recall_note: RecallNote | None = None


def _prefix_cut(dd_log: EventLog, full_db_log: EventLog) -> int:
    """Check that ``dd_log`` is a time-prefix split of ``full_db_log``; return its length."""
    k = len(dd_log)
    if k > len(full_db_log) or full_db_log.events[:k] != dd_log.events:
        raise LogOrderError("deleted log is not a prefix of the original log")
    if 0 < k < len(full_db_log) and full_db_log.events[k - 1].timestamp == full_db_log.events[k].timestamp:
        raise LogOrderError("deleted prefix splits events that share a timestamp")
    expected, _ = _split_at(full_db_log, k)
    if expected.segments != dd_log.segments:
        raise LogOrderError("deleted log's segment boundaries do not match the original log")
    return k


def _split_segment(full_db_log: EventLog, k: int) -> int | None:
    for j, (a, b) in enumerate(full_db_log.segments):
        if a < k < b:
            return j
    return None


def dus_update(
    state_db: MiningState,
    dd_log: EventLog,
    full_db_log: EventLog,
    params: Params,
) -> DeletionReport:
    """Maintain ``state_db`` after deleting the prefix ``dd_log`` of ``full_db_log``.

    ``occur(s, U)`` is obtained as ``occur(s, DB) - occur(s, dd)``. When the
    cut falls inside a segment, an occurrence may straddle it; that segment
    is recounted whole and split so the result stays exact.
    """
    t0 = time.perf_counter()
    if state_db.params != params:
        raise ParamsMismatchError(f"state was mined with {state_db.params}, update requested {params}")
    if state_db.db_size != len(full_db_log):
        raise StateValidationError(
            f"state covers {state_db.db_size} events but the original log has {len(full_db_log)}"
        )
    k = _prefix_cut(dd_log, full_db_log)
    db_size, dd_size = len(full_db_log), k
    u_size = db_size - dd_size
    floor = min_freq(params, db_size, dd_size) if db_size else params.min_supp

    report = DeletionReport(MiningState(params, u_size), floor)
    if dd_size == 0:
        # nothing to subtract; the border filter below would otherwise empty NBD for no reason
        report.new_state = state_db.canonical()
        report.seconds = time.perf_counter() - t0
        return report
    candidates: dict[Pattern, int] = {**state_db.frequent, **state_db.negative_border}
    report.candidates_examined = len(candidates)
    if params.min_nbd_supp <= floor:
        kept = {s: c for s, c in candidates.items() if s in state_db.frequent or Fraction(c, db_size) >= floor}
        report.skipped_below_min_freq = len(candidates) - len(kept)
        candidates = kept

    ordered = sorted(candidates, key=canonical_key)
    window = params.window
    removed = dict(zip(ordered, count_many(ordered, dd_log, window))) if ordered else {}
    j = _split_segment(full_db_log, k)
    if j is not None and ordered:
        a, b = full_db_log.segments[j]
        whole = EventLog.single(full_db_log.events[a:b])
        head = EventLog.single(full_db_log.events[a:k])
        tail = EventLog.single(full_db_log.events[k:b])
        for s, cw, ch, ct in zip(
            ordered, count_many(ordered, whole, window), count_many(ordered, head, window),
            count_many(ordered, tail, window),
        ):
            extra = cw - ch - ct
            if extra:
                removed[s] += extra
                report.boundary_corrections += 1

    hi, lo = params.frequent_floor(u_size), params.border_floor(u_size)
    frequent: dict[Pattern, int] = {}
    border: dict[Pattern, int] = {}
    for s in ordered:
        c = candidates[s] - removed[s]
        if c >= hi:
            frequent[s] = c
        elif c >= lo:
            border[s] = c

    # deletion can demote a subsequence while a longer candidate survives on counts
    for m in sorted({len(s) for s in frequent}):
        if m < 2:
            continue
        for s in [s for s in frequent if len(s) == m]:
            if any(t not in frequent for t in delete_one_subsequences(s)):
                del frequent[s]
                report.closure_removed += 1
    for s in [s for s in border if len(s) > 1]:
        if any(t not in frequent for t in delete_one_subsequences(s)):
            del border[s]
            report.closure_removed += 1

    report.new_state = MiningState(params, u_size, frequent, border).canonical()
    report.seconds = time.perf_counter() - t0
    return report


def recall_report(new_state: MiningState, remaining_log: EventLog) -> RecallNote:
    """Diff a decremental result against ``mine`` on the remaining log."""
    ref = mine(remaining_log, new_state.params)
    note = RecallNote()
    for s, c in ref.frequent.items():
        got = new_state.frequent.get(s)
        if got is None:
            note.missing_frequent[s] = c
        elif got != c:
            note.wrong_counts[s] = (got, c)
    for s, c in ref.negative_border.items():
        if s not in new_state.negative_border:
            note.missing_border[s] = c
    note.false_frequent = [s for s in new_state.frequent if s not in ref.frequent]
    return note
