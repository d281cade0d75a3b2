"""Incremental-versus-rerun timing harness.

Each cell of the grid mines the base log once, then walks the increments:
for every increment it times a full re-mine of the grown log against an
incremental update from the previous state. The frequent sets are compared
after both timers have stopped, and a mismatch aborts the run.
"""

from __future__ import annotations

import csv
import gc
import io
import time
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .errors import ConsistencyError
from .ius import ius_update
from .miner import MiningState, Params, mine
from .model import EventLog, concat
from .occurrence import Window, as_fraction, count_many
from .state_io import format_fraction

FIELDS = (
    "db_size", "inc_size", "min_supp", "min_nbd_supp", "window",
    "t_rerun", "t_ius", "speedup", "nbd_size", "nbd_size_rerun", "frequent_size",
)


@dataclass
class BenchRecord:
    db_size: int
    inc_size: int
    min_supp: Fraction
    min_nbd_supp: Fraction
    window: Window
    t_rerun: float
    t_ius: float
    nbd_size: int
    nbd_size_rerun: int
    frequent_size: int

    @property
    def speedup(self) -> float:
        return self.t_rerun / self.t_ius

    def row(self) -> dict[str, str]:
        d = asdict(self)
        d["min_supp"] = format_fraction(self.min_supp)
        d["min_nbd_supp"] = format_fraction(self.min_nbd_supp)
        d["window"] = "inf" if self.window is None else str(self.window)
        d["t_rerun"] = f"{self.t_rerun:.6f}"
        d["t_ius"] = f"{self.t_ius:.6f}"
        d["speedup"] = f"{self.speedup:.3f}"
        return {k: str(d[k]) for k in FIELDS}


def grid(min_supps: Iterable, min_nbd_supps: Iterable) -> list[tuple[Fraction, Fraction]]:
    """All valid ``(min_supp, min_nbd_supp)`` pairs; pairs with nbd >= supp are skipped."""
    out = []
    for s in map(as_fraction, min_supps):
        for b in map(as_fraction, min_nbd_supps):
            if 0 <= b < s:
                out.append((s, b))
    return out


def _warm_up(log: EventLog, window: Window) -> None:
    # first kernel call may JIT-compile; keep that out of every timed region
    if log.events:
        count_many([(log.events[0].symbol.id,)], log, window)


def _clock(fn, repeat: int = 1):
    # like timeit: collector off inside the timed region, so neither side pays
    # for a full collection triggered by objects the caller keeps alive
    best = float("inf")
    enabled = gc.isenabled()
    for _ in range(max(1, repeat)):
        gc.collect()
        gc.disable()
        try:
            t0 = time.perf_counter()
            out = fn()
            best = min(best, time.perf_counter() - t0)
        finally:
            if enabled:
                gc.enable()
    return out, max(best, 1e-9)


def run_bench(
    base: EventLog,
    increments: Sequence[EventLog],
    cells: Sequence[tuple[Fraction, Fraction]],
    window: Window = None,
    repeat: int = 1,
    on_state: Callable[[MiningState], None] | None = None,
) -> list[BenchRecord]:
    """One record per (cell, increment).

    ``repeat`` > 1 keeps the best of that many timings for both sides.
    ``on_state`` sees every state the run produces, base mines included.
    """
    _warm_up(base, window)
    records = []
    for min_supp, min_nbd in cells:
        params = Params(min_supp, min_nbd, window)
        log = base
        state = mine(log, params)
        if on_state:
            on_state(state)
        for inc in increments:
            grown = concat(log, inc)
            ref, t_rerun = _clock(lambda: mine(grown, params), repeat)
            report, t_ius = _clock(lambda: ius_update(state, inc, log, params), repeat)
            new = report.new_state
            if new.frequent != ref.frequent:
                raise ConsistencyError(
                    f"incremental and rerun frequent sets differ at |DB|={len(log)}, |db|={len(inc)}, "
                    f"min_supp={min_supp}, min_nbd_supp={min_nbd}"
                )
            records.append(BenchRecord(
                len(log), len(inc), params.min_supp, params.min_nbd_supp, window,
                t_rerun, t_ius, len(new.negative_border), len(ref.negative_border), len(new.frequent),
            ))
            if on_state:
                on_state(new)
            state, log = new, grown
    return records


def to_csv(records: Iterable[BenchRecord]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=FIELDS, lineterminator="\n")
    writer.writeheader()
    for r in records:
        writer.writerow(r.row())
    return buf.getvalue()
