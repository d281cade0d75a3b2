import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from oracles import brute_force, kernel_counter, next_start, random_log
from sequpdate.errors import LogOrderError, ParamsMismatchError, StateValidationError
from sequpdate.ius import _Update, ius_update
from sequpdate.miner import MiningState, Params, mine
from sequpdate.model import Event, EventLog, SymbolTable, concat, delete_one_subsequences


def pair(seed, alphabet=4, n_db=120, n_inc=40, segments=2):
    rng = random.Random(seed)
    table = SymbolTable()
    db = random_log(rng, table, alphabet, n_db, segments=segments)
    inc = random_log(rng, table, alphabet, n_inc, start=next_start(db, rng))
    return db, inc


def test_merge_arithmetic_from_stored_counts():
    # stored states only: a 4+3, <a,b> 2+2, c 2+1 (c from the increment's border)
    params = Params("0.1", "0.05", 1)
    table = SymbolTable(["a", "b", "c"])
    sym = [table.symbol(i) for i in range(3)]
    db = EventLog.single(Event(sym[i % 3], 10 * i) for i in range(16))
    inc = EventLog.single(Event(sym[i % 3], 1000 + 10 * i) for i in range(15))
    a, b, c = 0, 1, 2
    state_db = MiningState(params, 16, {(a,): 4, (b,): 3, (c,): 2, (a, b): 2}, {})
    state_inc = MiningState(params, 15, {(a,): 3, (b,): 2, (a, b): 2}, {(c,): 1})
    new = ius_update(state_db, inc, db, params, state_inc=state_inc).new_state
    # |U| = 31, floors 4 and 2
    assert new.frequent == {(a,): 7, (b,): 5, (a, b): 4}
    assert new.negative_border[(c,)] == 3


def test_empty_increment_is_identity():
    db, _ = pair(3)
    params = Params("0.05", "0.02", 10)
    state = mine(db, params)
    new = ius_update(state, EventLog(), db, params).new_state
    assert new == state


@given(st.integers(0, 100_000), st.integers(3, 6), st.sampled_from(["0.05", "0.1"]),
       st.booleans(), st.sampled_from([None, 20]))
def test_frequent_set_matches_remine(seed, alphabet, supp, half, window):
    db, inc = pair(seed, alphabet)
    params = Params(supp, Fraction(supp) / 2 if half else 0, window)
    state = mine(db, params)
    report = ius_update(state, inc, db, params)
    ref = mine(concat(db, inc), params)
    assert report.new_state.frequent == ref.frequent
    assert report.new_state.violations() == []


@given(st.integers(0, 100_000), st.sampled_from(["0.05", "0.1"]))
def test_border_entries_are_sound(seed, supp):
    db, inc = pair(seed)
    params = Params(supp, Fraction(supp) / 3, 20)
    new = ius_update(mine(db, params), inc, db, params).new_state
    u = concat(db, inc)
    hi, lo = params.frequent_floor(len(u)), params.border_floor(len(u))
    pats = list(new.negative_border)
    for s, c in zip(pats, kernel_counter(pats, u, params.window)):
        assert new.negative_border[s] == c and lo <= c < hi
        assert len(s) == 1 or all(t in new.frequent for t in delete_one_subsequences(s))


@given(st.integers(0, 100_000), st.sampled_from(["0.05", "0.1", "0.2"]), st.sampled_from([None, 20]))
def test_union_frequent_lies_in_one_part(seed, supp, window):
    db, inc = pair(seed, 3, 80, 30)
    params = Params(supp, 0, window)
    fu, _ = brute_force(concat(db, inc), params, kernel_counter)
    f_db, _ = brute_force(db, params, kernel_counter)
    f_inc, _ = brute_force(inc, params, kernel_counter)
    assert set(fu) <= set(f_db) | set(f_inc)


def test_shared_frequents_need_no_scans():
    rng = random.Random(7)
    table = SymbolTable()
    db = random_log(rng, table, 4, 100)
    shift = db.last_timestamp + 5
    inc = EventLog.single(Event(e.symbol, e.timestamp + shift) for e in db.events)
    params = Params("0.05", "0.02", 10)
    report = ius_update(mine(db, params), inc, db, params)
    p1 = report.phases["P1"]
    assert p1.examined > 0 and p1.scanned == 0
    assert report.phases["P2"].examined == 0


@given(st.integers(0, 100_000))
def test_phase_counters_partition(seed):
    db, inc = pair(seed)
    params = Params("0.05", "0.02", 20)
    report = ius_update(mine(db, params), inc, db, params)
    for stats in report.phases.values():
        assert stats.reused + stats.scanned + stats.skipped == stats.examined
    assert report.db_scans + report.DB_scans == sum(p.scanned for p in report.phases.values())


@given(st.integers(0, 100_000))
def test_prune_cascade_never_drops_a_union_frequent(seed):
    db, inc = pair(seed, 3)
    params = Params("0.1", "0.05", None)
    u = concat(db, inc)
    update = _Update(mine(db, params), mine(inc, params), inc, db, u, params)
    update.run()
    ref = mine(u, params)
    for side in update.gone.values():
        assert not side & ref.frequent.keys()


def test_parameter_mismatch():
    db, inc = pair(1)
    state = mine(db, Params("0.1"))
    with pytest.raises(ParamsMismatchError):
        ius_update(state, inc, db, Params("0.2"))
    with pytest.raises(ParamsMismatchError):
        ius_update(state, inc, db, Params("0.1"), state_inc=mine(inc, Params("0.2")))


def test_state_must_match_original_log():
    db, inc = pair(1)
    state = mine(db, Params("0.1"))
    with pytest.raises(StateValidationError):
        ius_update(state, inc, inc, Params("0.1"))


def test_increment_must_be_later():
    db, inc = pair(1)
    params = Params("0.1")
    with pytest.raises(LogOrderError):
        ius_update(mine(inc, params), db, inc, params)
