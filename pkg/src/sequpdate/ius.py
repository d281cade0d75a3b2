"""Incremental update: fold a later batch ``db`` into a state mined over ``DB``.

Every pattern frequent in ``U = DB + db`` is frequent in ``DB`` or in ``db``
(counts add across the batch boundary and each part fell short of its own
floor otherwise). So the frequent set of ``U`` is obtained exactly by
re-classifying the two stored frequent sets; the stored negative borders
save log scans, and a cross join between the parts adds border candidates.

Work proceeds one pattern length at a time, because "all subsequences are
frequent in U" can only be decided once the shorter levels of ``U`` are done.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .candgen import count_and_band, cross_join
from .errors import ConsistencyError, ParamsMismatchError, StateValidationError
from .miner import MiningState, Params, mine
from .model import EventLog, Pattern, canonical_key, concat, delete_one_subsequences
from .occurrence import count_many


@dataclass
class PhaseStats:
    examined: int = 0
    reused: int = 0  # count taken from a stored set
    scanned: int = 0  # count obtained by scanning a log
    skipped: int = 0  # some subsequence not frequent in U

    def add(self, other: PhaseStats) -> None:
        self.examined += other.examined
        self.reused += other.reused
        self.scanned += other.scanned
        self.skipped += other.skipped


@dataclass
class UpdateReport:
    new_state: MiningState
    phases: dict[str, PhaseStats] = field(default_factory=dict)
    db_scans: int = 0  # patterns counted in the increment
    DB_scans: int = 0  # patterns counted in the original log
    U_scans: int = 0  # cross-join candidates counted in the union
    candidates_generated: int = 0
    candidates_pruned: int = 0
    cascade_pruned: int = 0
    seconds: dict[str, float] = field(default_factory=dict)
    inc_state: MiningState | None = None

    @property
    def total_seconds(self) -> float:
        return sum(self.seconds.values())


def _by_level(d: dict[Pattern, int]) -> dict[int, dict[Pattern, int]]:
    out: dict[int, dict[Pattern, int]] = {}
    for s, c in d.items():
        out.setdefault(len(s), {})[s] = c
    return out


def _subs_frequent(s: Pattern, frequent: dict[Pattern, int]) -> bool:
    return len(s) == 1 or all(t in frequent for t in delete_one_subsequences(s))


class _Update:
    def __init__(self, state_db, state_inc, db_log, full_db_log, u, params):
        self.params = params
        self.db_log, self.full_db_log, self.u = db_log, full_db_log, u
        self.L_DB, self.N_DB = state_db.frequent, state_db.negative_border
        self.L_db, self.N_db = state_inc.frequent, state_inc.negative_border
        # working copies, shrunk by the prune cascade
        self.work = {
            "L_DB": _by_level(self.L_DB),
            "N_DB": _by_level(self.N_DB),
            "L_db": _by_level(self.L_db),
            "N_db": _by_level(self.N_db),
        }
        n = len(u)
        self.hi, self.lo = params.frequent_floor(n), params.border_floor(n)
        self.LU: dict[Pattern, int] = {}
        self.NU: dict[Pattern, int] = {}
        self.resolved: set[Pattern] = set()
        # patterns infrequent in U, per side, whose stored supersequences are skipped
        self.gone: dict[str, set[Pattern]] = {"DB": set(), "db": set()}
        self.report = UpdateReport(MiningState(params, n))
        for name in ("P1", "P2", "P3", "P4"):
            self.report.phases[name] = PhaseStats()

    def _time(self, key: str, t0: float) -> None:
        self.report.seconds[key] = self.report.seconds.get(key, 0.0) + time.perf_counter() - t0

    def _members(self, key: str, m: int) -> list[Pattern]:
        """Working-set members of length ``m``, after applying the prune cascade.

        Stored sets are downward closed, so a stored pattern contains a
        pruned one iff one of its delete-one subsequences was pruned or
        cascaded away; checking that level by level is the same cascade.
        """
        level = self.work[key].get(m, {})
        gone = self.gone[key[2:]]
        if m >= 2 and gone:
            doomed = [t for t in level if any(x in gone for x in delete_one_subsequences(t))]
            for t in doomed:
                del level[t]
                gone.add(t)
            self.report.cascade_pruned += len(doomed)
        return sorted(level, key=canonical_key)

    def _phase(self, name, members, own, lookups, scan_log, may_be_frequent, prune_side):
        """Shared body of the four reclassification phases.

        ``own`` gives the stored count on the member's side; ``lookups`` are
        the stored sets tried, in order, for the other side's count before
        falling back to scanning ``scan_log``.
        """
        stats = PhaseStats()
        fetched: dict[Pattern, int] = {}
        to_scan: list[Pattern] = []
        eligible = []
        for s in members:
            stats.examined += 1
            if not _subs_frequent(s, self.LU):
                stats.skipped += 1
                continue
            eligible.append(s)
            for table in lookups:
                if s in table:
                    fetched[s] = table[s]
                    stats.reused += 1
                    break
            else:
                to_scan.append(s)
        if to_scan:
            fetched.update(zip(to_scan, count_many(to_scan, scan_log, self.params.window)))
            stats.scanned += len(to_scan)
            if scan_log is self.db_log:
                self.report.db_scans += len(to_scan)
            else:
                self.report.DB_scans += len(to_scan)
        for s in eligible:
            total = own[s] + fetched[s]
            self.resolved.add(s)
            if total >= self.hi:
                if not may_be_frequent:
                    raise ConsistencyError(
                        f"{name}: {s} reaches count {total} >= {self.hi} in the union "
                        "but is frequent in neither part"
                    )
                self.LU[s] = total
                continue
            if prune_side:
                self.gone[prune_side].add(s)
            if total >= self.lo:
                self.NU[s] = total
        self.report.phases[name].add(stats)

    def level(self, m: int) -> None:
        t0 = time.perf_counter()
        # P1: frequent in DB; db count from L_db, then N_db, else scan db
        self._phase(
            "P1", self._members("L_DB", m), self.L_DB, (self.L_db, self.N_db),
            self.db_log, True, "DB",
        )
        # P2: frequent only in db; DB count from N_DB, else scan DB
        members = [s for s in self._members("L_db", m) if s not in self.L_DB]
        self._phase(
            "P2", members, self.L_db, (self.N_DB,), self.full_db_log, True, "db",
        )
        # P3: border of DB not frequent in db; a pattern in both borders sums the stored counts
        members = [s for s in self._members("N_DB", m) if s not in self.L_db]
        self._phase("P3", members, self.N_DB, (self.N_db,), self.db_log, False, None)
        # P4: border of db only
        members = [s for s in self._members("N_db", m) if s not in self.L_DB and s not in self.N_DB]
        self._phase("P4", members, self.N_db, (), self.full_db_log, False, None)
        self._time("reclassify", t0)

        if m >= 2:
            t0 = time.perf_counter()
            prev = [s for s in self.LU if len(s) == m - 1]
            batch = cross_join(
                [s for s in prev if s in self.L_DB],
                [s for s in prev if s in self.L_db],
                prev,
                [s for s in self.LU if len(s) == m],
            )
            self.report.candidates_generated += len(batch) + batch.pruned
            self.report.candidates_pruned += batch.pruned
            batch = batch.without(self.resolved)
            self.report.U_scans += len(batch)
            self.NU.update(count_and_band(batch, self.u, self.params))
            self._time("extend", t0)

    def run(self) -> UpdateReport:
        m = 1
        while True:
            before = len(self.LU)
            self.level(m)
            if len(self.LU) == before:
                break
            m += 1
        state = MiningState(self.params, len(self.u), self.LU, self.NU).canonical()
        self.report.new_state = state
        return self.report


def ius_update(
    state_db: MiningState,
    db_log: EventLog,
    full_db_log: EventLog,
    params: Params,
    *,
    state_inc: MiningState | None = None,
) -> UpdateReport:
    """Update ``state_db`` (mined over ``full_db_log``) with the later batch ``db_log``.

    ``state_inc`` may carry a state already mined over ``db_log``; otherwise
    the increment is mined here (and that time is reported as ``mine_db``).
    The frequent set of the result equals ``mine(concat(full_db_log, db_log))``.
    """
    if state_db.params != params:
        raise ParamsMismatchError(f"state was mined with {state_db.params}, update requested {params}")
    if state_db.db_size != len(full_db_log):
        raise StateValidationError(
            f"state covers {state_db.db_size} events but the original log has {len(full_db_log)}"
        )
    u = concat(full_db_log, db_log)
    t0 = time.perf_counter()
    if state_inc is None:
        state_inc = mine(db_log, params)
    elif state_inc.params != params:
        raise ParamsMismatchError("increment state was mined with different parameters")
    elif state_inc.db_size != len(db_log):
        raise StateValidationError("increment state does not match the increment log")
    mine_seconds = time.perf_counter() - t0
    update = _Update(state_db, state_inc, db_log, full_db_log, u, params)
    update.report.seconds["mine_db"] = mine_seconds
    report = update.run()
    report.inc_state = state_inc
    return report
