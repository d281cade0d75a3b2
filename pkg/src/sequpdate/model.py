"""Event logs, symbol interning and the subsequence helpers shared by the miners.

A log is a time-ordered list of events split into *segments*. Segments mark
batch boundaries (the original database, each appended increment); no
occurrence of a pattern is allowed to straddle one, which is what makes
occurrence counts add up exactly across batches.
"""

from __future__ import annotations

import bisect
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator

import numpy as np

from .errors import LogFormatError, LogOrderError

#: A pattern is a tuple of dense symbol ids; order matters and repeats are allowed.
Pattern = tuple[int, ...]

_TIMESTAMP = re.compile(r"[+-]?\d+")


@dataclass(frozen=True, order=True)
class EventSymbol:
    id: int
    name: str = field(compare=False)

    def __hash__(self) -> int:
        return hash(self.id)


class SymbolTable:
    """Bijection between alarm-type names and dense ids ``0..n-1``."""

    def __init__(self, names: Iterable[str] = ()):
        self._names: list[str] = []
        self._ids: dict[str, int] = {}
        for name in names:
            self.intern(name)

    def intern(self, name: str) -> EventSymbol:
        sid = self._ids.get(name)
        if sid is None:
            if not name or "," in name or "\n" in name:
                raise ValueError(f"invalid symbol name {name!r}")
            sid = len(self._names)
            self._names.append(name)
            self._ids[name] = sid
        return EventSymbol(sid, name)

    def id_of(self, name: str) -> int:
        return self._ids[name]

    def name_of(self, sid: int) -> str:
        return self._names[sid]

    def symbol(self, sid: int) -> EventSymbol:
        return EventSymbol(sid, self._names[sid])

    def encode(self, names: Iterable[str]) -> Pattern:
        return tuple(self._ids[n] for n in names)

    def decode(self, pattern: Pattern) -> tuple[str, ...]:
        return tuple(self._names[i] for i in pattern)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(self._names)

    def copy(self) -> SymbolTable:
        return SymbolTable(self._names)

    def __len__(self) -> int:
        return len(self._names)

    def __contains__(self, name: object) -> bool:
        return name in self._ids

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SymbolTable) and self._names == other._names

    def __repr__(self) -> str:
        return f"SymbolTable({self._names!r})"


@dataclass(frozen=True)
class Event:
    symbol: EventSymbol
    timestamp: int

    def __post_init__(self):
        if self.timestamp < 0:
            raise ValueError(f"negative timestamp {self.timestamp}")


@dataclass(frozen=True, eq=True)
class EventLog:
    """Immutable, time-ordered event list with batch segments.

    ``segments`` are half-open ``(start, stop)`` index ranges that tile
    ``range(len(events))`` in order; an empty log has no segments.
    """

    events: tuple[Event, ...] = ()
    segments: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "events", tuple(self.events))
        object.__setattr__(self, "segments", tuple((int(a), int(b)) for a, b in self.segments))
        pos = 0
        for a, b in self.segments:
            if a != pos or b <= a:
                raise ValueError(f"segments must tile the log without gaps or empties: {self.segments}")
            pos = b
        if pos != len(self.events):
            raise ValueError(f"segments cover {pos} of {len(self.events)} events")
        for i in range(1, len(self.events)):
            if self.events[i].timestamp < self.events[i - 1].timestamp:
                raise LogOrderError(f"events out of time order at index {i}")

    @classmethod
    def single(cls, events: Iterable[Event]) -> EventLog:
        events = tuple(events)
        return cls(events, ((0, len(events)),) if events else ())

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, str]], table: SymbolTable) -> EventLog:
        """Build a one-segment log from ``(timestamp, name)`` pairs (already sorted)."""
        return cls.single(Event(table.intern(name), int(t)) for t, name in pairs)

    def __len__(self) -> int:
        return len(self.events)

    def __iter__(self) -> Iterator[Event]:
        return iter(self.events)

    @property
    def first_timestamp(self) -> int | None:
        return self.events[0].timestamp if self.events else None

    @property
    def last_timestamp(self) -> int | None:
        return self.events[-1].timestamp if self.events else None

    def segment(self, index: int) -> EventLog:
        a, b = self.segments[index]
        return EventLog.single(self.events[a:b])

    def symbol_ids(self) -> list[int]:
        return [e.symbol.id for e in self.events]

    @cached_property
    def arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """``(symbols, times, seg_starts, seg_stops)`` as int64 arrays for the kernels."""
        symbols = np.fromiter((e.symbol.id for e in self.events), dtype=np.int64, count=len(self.events))
        times = np.fromiter((e.timestamp for e in self.events), dtype=np.int64, count=len(self.events))
        starts = np.array([a for a, _ in self.segments], dtype=np.int64)
        stops = np.array([b for _, b in self.segments], dtype=np.int64)
        return symbols, times, starts, stops


def parse_log(text: str | Iterable[str], table: SymbolTable) -> EventLog:
    """Parse ``timestamp,symbol`` lines into a single-segment log.

    Blank lines and lines starting with ``#`` are skipped. The result is
    stably sorted by timestamp. Unseen symbols are appended to ``table`` in
    order of first appearance in the input.
    """
    lines = text.splitlines() if isinstance(text, str) else text
    rows: list[tuple[int, EventSymbol]] = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise LogFormatError(f"expected 'timestamp,symbol', got {raw!r}", lineno)
        ts_text, name = parts[0].strip(), parts[1].strip()
        if not _TIMESTAMP.fullmatch(ts_text):
            raise LogFormatError(f"timestamp {ts_text!r} is not an integer", lineno)
        ts = int(ts_text)
        if ts < 0:
            raise LogFormatError(f"negative timestamp {ts}", lineno)
        if not name:
            raise LogFormatError("empty symbol", lineno)
        rows.append((ts, table.intern(name)))
    rows.sort(key=lambda r: r[0])
    return EventLog.single(Event(sym, ts) for ts, sym in rows)


def serialize_log(log: EventLog) -> str:
    """Inverse of :func:`parse_log` for one-segment logs (segments are flattened)."""
    return "".join(f"{e.timestamp},{e.symbol.name}\n" for e in log.events)


def concat(base: EventLog, increment: EventLog) -> EventLog:
    """Append a later batch; both logs keep their own segment boundaries."""
    if base.events and increment.events and base.last_timestamp > increment.first_timestamp:
        raise LogOrderError(
            f"increment starts at t={increment.first_timestamp} "
            f"before the base ends at t={base.last_timestamp}"
        )
    shift = len(base)
    segments = base.segments + tuple((a + shift, b + shift) for a, b in increment.segments)
    return EventLog(base.events + increment.events, segments)


def split_prefix(log: EventLog, cutoff: float) -> tuple[EventLog, EventLog]:
    """Split off every event with ``timestamp < cutoff``.

    Leading segments go whole into the deleted part; the segment containing
    the cut is split in two. ``concat(*split_prefix(log, c))`` has the same
    events as ``log`` (with one extra boundary if a segment was split).
    """
    times = [e.timestamp for e in log.events]
    k = bisect.bisect_left(times, cutoff)
    return _split_at(log, k)


def _split_at(log: EventLog, k: int) -> tuple[EventLog, EventLog]:
    head, tail = [], []
    for a, b in log.segments:
        if b <= k:
            head.append((a, b))
        elif a >= k:
            tail.append((a - k, b - k))
        else:
            head.append((a, k))
            tail.append((0, b - k))
    return EventLog(log.events[:k], head), EventLog(log.events[k:], tail)


def delete_one_subsequences(s: Pattern) -> list[Pattern]:
    """The ``len(s)`` patterns obtained by dropping one position, in position order."""
    if len(s) < 2:
        raise ValueError("need a pattern of length >= 2")
    return [s[:i] + s[i + 1:] for i in range(len(s))]


def is_subsequence(a: Pattern, b: Pattern) -> bool:
    """True iff ``a`` can be obtained from ``b`` by deleting positions."""
    it = iter(b)
    return all(x in it for x in a)


def canonical_key(s: Pattern) -> tuple[int, Pattern]:
    """Output ordering: shorter first, then lexicographic by symbol id."""
    return len(s), s
