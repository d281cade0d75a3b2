"""Deterministic synthetic alarm logs with planted patterns.

The generator uses :class:`random.Random` (Mersenne Twister) seeded with the
given integer and only ever calls ``random()``, whose output stream CPython
guarantees across versions and platforms. Each step draws one uniform
``u``: if it falls inside the cumulative planted rates, the corresponding
pattern is emitted symbol by symbol, with noise symbols inserted between
consecutive pattern symbols (each insertion happens with probability
``noise_rate``, repeatedly); otherwise a single uniform noise symbol is
emitted. Timestamps start at ``start`` and advance by 1, 2 or 3 per event.
Symbol ``i`` is named like a spreadsheet column: ``a`` .. ``z``, ``aa``, ``ab`` ...
"""

from __future__ import annotations

import random
from typing import Sequence

from .model import Event, EventLog, SymbolTable


def symbol_name(i: int) -> str:
    name = ""
    i += 1
    while i:
        i, r = divmod(i - 1, 26)
        name = chr(ord("a") + r) + name
    return name


def alphabet_table(size: int) -> SymbolTable:
    return SymbolTable(symbol_name(i) for i in range(size))


def parse_planted(spec: str) -> tuple[tuple[str, ...], float]:
    """``"a,b,c:0.05"`` -> ``(("a", "b", "c"), 0.05)``."""
    names, _, rate = spec.rpartition(":")
    if not names:
        raise ValueError(f"planted pattern must look like 'a,b,c:0.05', got {spec!r}")
    return tuple(n.strip() for n in names.split(",")), float(rate)


def generate(
    seed: int,
    alphabet: int,
    length: int,
    planted: Sequence[tuple[Sequence[str], float]] = (),
    noise_rate: float = 0.0,
    *,
    start: int = 0,
    table: SymbolTable | None = None,
) -> EventLog:
    """Generate a single-segment log; same arguments give the same log."""
    if alphabet < 1:
        raise ValueError("alphabet must be at least 1")
    if length < 0:
        raise ValueError("length must be non-negative")
    if not 0 <= noise_rate < 1:
        raise ValueError("noise_rate must be in [0, 1)")
    names = [symbol_name(i) for i in range(alphabet)]
    known = set(names)
    patterns = []
    for pat, rate in planted:
        if not 0 <= rate <= 1:
            raise ValueError(f"planted rate {rate} outside [0, 1]")
        unknown = [x for x in pat if x not in known]
        if unknown or not pat:
            raise ValueError(f"planted pattern {tuple(pat)} uses symbols outside the alphabet of {alphabet}")
        patterns.append((tuple(pat), rate))
    if sum(rate for _, rate in patterns) > 1:
        raise ValueError("planted rates sum to more than 1")

    table = table if table is not None else SymbolTable()
    symbols = [table.intern(n) for n in names]
    by_name = dict(zip(names, symbols))
    rng = random.Random(seed)
    events: list[Event] = []
    t = start

    def emit(sym) -> None:
        nonlocal t
        if events:
            t += 1 + int(rng.random() * 3)
        events.append(Event(sym, t))

    def noise():
        return symbols[int(rng.random() * alphabet)]

    while len(events) < length:
        u = rng.random()
        acc = 0.0
        chosen = None
        for pat, rate in patterns:
            acc += rate
            if u < acc:
                chosen = pat
                break
        if chosen is None:
            emit(noise())
            continue
        for j, name in enumerate(chosen):
            if j:
                while rng.random() < noise_rate and len(events) < length:
                    emit(noise())
            if len(events) >= length:
                break
            emit(by_name[name])
    return EventLog.single(events)
