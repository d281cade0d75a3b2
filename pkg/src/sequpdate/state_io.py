"""Text serialization of a mining state together with its symbol table.

Layout (one record per line, ``\\n`` terminated)::

    sequpdate-state 1
    min_supp 0.05
    min_nbd_supp 0.025
    window inf
    db_size 300
    symbols 3
    S 0 LINK_DOWN
    S 1 POWER ALARM
    S 2 RESET
    F 0 15
    F 0 1 12
    N 2 0 7

``F`` lines (frequent) come first, then ``N`` lines (negative border), each
in canonical order: shorter patterns first, then by symbol ids. A symbol
name is everything after ``S <id> `` and may contain spaces. Thresholds are
exact: finite decimals when possible, otherwise ``p/q``.
"""

from __future__ import annotations

from decimal import Decimal
from fractions import Fraction
from typing import TextIO

from .errors import StateFormatError, StateValidationError, StateVersionError
from .miner import MiningState, Params
from .model import SymbolTable, canonical_key

MAGIC = "sequpdate-state"
VERSION = 1


def format_fraction(value: Fraction) -> str:
    """Shortest exact text for a threshold: ``0.025``, ``1``, or ``1/3``."""
    value = Fraction(value)
    q = value.denominator
    twos = fives = 0
    while q % 2 == 0:
        q //= 2
        twos += 1
    while q % 5 == 0:
        q //= 5
        fives += 1
    if q != 1:
        return f"{value.numerator}/{value.denominator}"
    digits = max(twos, fives)
    text = format(Decimal(value.numerator) / Decimal(value.denominator), f".{digits}f")
    return text.rstrip("0").rstrip(".") if "." in text else text


def parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad threshold {text!r}") from exc


def save_state(state: MiningState, table: SymbolTable) -> str:
    """Render ``state``; refuses states that violate their invariants."""
    problems = state.violations()
    used = {x for s in (*state.frequent, *state.negative_border) for x in s}
    if used and max(used) >= len(table):
        problems.append(f"pattern uses symbol id {max(used)} beyond the table of {len(table)}")
    if problems:
        raise StateValidationError("refusing to save invalid state: " + "; ".join(problems[:5]))
    p = state.params
    lines = [
        f"{MAGIC} {VERSION}",
        f"min_supp {format_fraction(p.min_supp)}",
        f"min_nbd_supp {format_fraction(p.min_nbd_supp)}",
        f"window {'inf' if p.window is None else p.window}",
        f"db_size {state.db_size}",
        f"symbols {len(table)}",
    ]
    lines += [f"S {i} {name}" for i, name in enumerate(table.names)]
    for tag, patterns in (("F", state.frequent), ("N", state.negative_border)):
        for s in sorted(patterns, key=canonical_key):
            lines.append(f"{tag} {' '.join(map(str, s))} {patterns[s]}")
    return "\n".join(lines) + "\n"


def _header(lines: list[str], i: int, key: str) -> str:
    if i >= len(lines):
        raise StateFormatError(f"missing header field {key!r}", i + 1)
    parts = lines[i].split(" ", 1)
    if parts[0] != key or len(parts) != 2 or not parts[1]:
        raise StateFormatError(f"expected '{key} <value>', got {lines[i]!r}", i + 1)
    return parts[1]


def _int(text: str, lineno: int, what: str) -> int:
    if not text.isdigit():
        raise StateFormatError(f"{what} must be a non-negative integer, got {text!r}", lineno)
    return int(text)


def load_state(stream: str | TextIO) -> tuple[MiningState, SymbolTable]:
    """Parse and fully re-validate a state file."""
    text = stream if isinstance(stream, str) else stream.read()
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise StateFormatError("empty state file", 1)
    first = lines[0].split(" ")
    if len(first) != 2 or first[0] != MAGIC:
        raise StateFormatError(f"not a state file (expected '{MAGIC} <version>')", 1)
    if first[1] != str(VERSION):
        raise StateVersionError(f"unsupported state version {first[1]!r}, this build reads {VERSION}")
    try:
        min_supp = parse_fraction(_header(lines, 1, "min_supp"))
        min_nbd = parse_fraction(_header(lines, 2, "min_nbd_supp"))
    except ValueError as exc:
        if isinstance(exc, StateFormatError):
            raise
        raise StateFormatError(str(exc)) from exc
    window_text = _header(lines, 3, "window")
    window = None if window_text == "inf" else _int(window_text, 4, "window")
    db_size = _int(_header(lines, 4, "db_size"), 5, "db_size")
    n_symbols = _int(_header(lines, 5, "symbols"), 6, "symbols")
    try:
        params = Params(min_supp, min_nbd, window)
    except ValueError as exc:
        raise StateValidationError(f"invalid thresholds in header: {exc}") from exc

    table = SymbolTable()
    i = 6
    for sid in range(n_symbols):
        lineno = i + 1
        if i >= len(lines):
            raise StateFormatError(f"expected {n_symbols} symbol lines", lineno)
        parts = lines[i].split(" ", 2)
        if len(parts) != 3 or parts[0] != "S":
            raise StateFormatError(f"expected 'S <id> <name>', got {lines[i]!r}", lineno)
        if _int(parts[1], lineno, "symbol id") != sid:
            raise StateFormatError(f"symbol ids must be dense and in order, expected {sid}", lineno)
        if parts[2] in table:
            raise StateFormatError(f"duplicate symbol name {parts[2]!r}", lineno)
        try:
            table.intern(parts[2])
        except ValueError as exc:
            raise StateFormatError(str(exc), lineno) from exc
        i += 1

    frequent: dict = {}
    border: dict = {}
    seen_border = False
    for lineno, line in enumerate(lines[i:], start=i + 1):
        parts = line.split(" ")
        if len(parts) < 3 or parts[0] not in ("F", "N"):
            raise StateFormatError(f"expected 'F|N <ids> <count>', got {line!r}", lineno)
        ids = tuple(_int(x, lineno, "symbol id") for x in parts[1:-1])
        count = _int(parts[-1], lineno, "count")
        if any(x >= n_symbols for x in ids):
            raise StateFormatError(f"pattern {ids} refers to an unknown symbol", lineno)
        target = frequent if parts[0] == "F" else border
        if parts[0] == "N":
            seen_border = True
        elif seen_border:
            raise StateFormatError("F lines must precede N lines", lineno)
        if ids in frequent or ids in border:
            raise StateValidationError(f"line {lineno}: pattern {table.decode(ids)} listed twice")
        target[ids] = count

    state = MiningState(params, db_size, frequent, border)
    problems = state.violations(namer=lambda s: "<" + " ".join(table.decode(s)) + ">")
    if problems:
        raise StateValidationError("invalid state: " + "; ".join(problems[:5]))
    return state.canonical(), table


def read_state(path) -> tuple[MiningState, SymbolTable]:
    with open(path, encoding="utf-8") as fh:
        return load_state(fh)


def write_state(path, state: MiningState, table: SymbolTable) -> None:
    text = save_state(state, table)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
