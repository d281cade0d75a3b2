"""Frequent event-sequence mining over timestamped alarm logs, with
incremental (append) and decremental (expire a time prefix) maintenance of
the frequent set and its negative border."""

__version__ = "0.1.0"

from .errors import (
    ConsistencyError,
    LogFormatError,
    LogOrderError,
    ParamsMismatchError,
    SeqUpdateError,
    StateFormatError,
    StateValidationError,
    StateVersionError,
)
from .model import Event, EventLog, EventSymbol, SymbolTable, concat, parse_log, serialize_log, split_prefix
from .occurrence import count_many, count_occurrences, min_count
from .miner import MiningState, Params, mine
from .candgen import CandidateBatch, count_and_band, cross_join
from .ius import UpdateReport, ius_update
from .dus import DeletionReport, RecallNote, dus_update, min_freq, recall_report
from .state_io import load_state, read_state, save_state, write_state

__all__ = [
    "CandidateBatch", "ConsistencyError", "DeletionReport", "Event", "EventLog", "EventSymbol",
    "LogFormatError", "LogOrderError", "MiningState", "Params", "ParamsMismatchError", "RecallNote",
    "SeqUpdateError", "StateFormatError", "StateValidationError", "StateVersionError", "SymbolTable",
    "UpdateReport", "concat", "count_and_band", "count_many", "count_occurrences", "cross_join",
    "dus_update", "ius_update", "load_state", "min_count", "min_freq", "mine", "parse_log",
    "read_state", "recall_report", "save_state", "serialize_log", "split_prefix", "write_state",
]
