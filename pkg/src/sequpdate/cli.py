"""Command-line front end.

Exit status: 0 ok, 1 usage error, 2 unreadable or malformed input, 3 state
validation failure (including version and parameter mismatches), 4 internal
consistency failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
from fractions import Fraction
from typing import Sequence

from . import __version__
from .bench import grid, run_bench, to_csv
from .dus import dus_update, recall_report
from .errors import (
    ConsistencyError,
    LogFormatError,
    LogOrderError,
    StateFormatError,
    StateValidationError,
    ParamsMismatchError,
)
from .gen import generate, parse_planted
from .ius import ius_update
from .miner import MiningState, Params, mine
from .model import EventLog, Pattern, SymbolTable, canonical_key, concat, parse_log, serialize_log, split_prefix
from .occurrence import as_fraction
from .state_io import format_fraction, read_state, write_state

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_STATE, EXIT_CONSISTENCY = 0, 1, 2, 3, 4


_UNSET = object()


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _fraction(text: str) -> Fraction:
    try:
        return as_fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")


def _fractions(text: str) -> list[Fraction]:
    return [_fraction(x) for x in text.split(",") if x.strip()]


def _window(text: str):
    if text.lower() in ("inf", "none", "unbounded"):
        return None
    if not text.isdigit():
        raise argparse.ArgumentTypeError(f"window must be a non-negative integer or 'inf', got {text!r}")
    return int(text)


def _params(min_supp, min_nbd, window) -> Params:
    try:
        return Params(min_supp, min_nbd, window)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _read_log(path: str, table: SymbolTable) -> EventLog:
    with open(path, encoding="utf-8") as fh:
        try:
            return parse_log(fh.read(), table)
        except LogFormatError as exc:
            raise LogFormatError(f"{path}: {exc}") from exc


def _read_logs(paths: Sequence[str], table: SymbolTable) -> EventLog:
    """Each file becomes one segment, in the order given."""
    log = EventLog.single(())
    for path in paths:
        log = concat(log, _read_log(path, table))
    return log


def render(pattern: Pattern, table: SymbolTable) -> str:
    return ",".join(table.decode(pattern))


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _csv(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _check_overrides(state: MiningState, args) -> None:
    p = state.params
    asked = {
        "min_supp": args.min_supp,
        "min_nbd_supp": args.min_nbd_supp,
    }
    for name, value in asked.items():
        if value is not None and value != getattr(p, name):
            raise ParamsMismatchError(
                f"--{name.replace('_', '-')} {format_fraction(value)} does not match the state's "
                f"{format_fraction(getattr(p, name))}"
            )
    if args.window is not _UNSET and args.window != p.window:
        raise ParamsMismatchError(f"--window {args.window} does not match the state's {p.window}")


def cmd_mine(args) -> int:
    params = _params(args.min_supp, args.min_nbd_supp, args.window)
    table = SymbolTable()
    log = _read_logs(args.input, table)
    state = mine(log, params)
    write_state(args.out, state, table)
    print(f"events={len(log)} frequent={len(state.frequent)} negative_border={len(state.negative_border)}",
          file=sys.stderr)
    return EXIT_OK


def cmd_update_add(args) -> int:
    state, table = read_state(args.state)
    _check_overrides(state, args)
    table = table.copy()
    base = _read_logs(args.log, table)
    inc = _read_log(args.increment, table)
    report = ius_update(state, inc, base, state.params)
    new = report.new_state
    write_state(args.out, new, table)
    rows = [
        ("db_size", len(base)), ("inc_size", len(inc)), ("u_size", new.db_size),
        ("frequent", len(new.frequent)), ("negative_border", len(new.negative_border)),
        ("db_scans", report.db_scans), ("DB_scans", report.DB_scans), ("U_scans", report.U_scans),
        ("candidates_generated", report.candidates_generated), ("seconds", f"{report.total_seconds:.6f}"),
    ]
    sys.stdout.write(_csv(("metric", "value"), rows))
    return EXIT_OK


def cmd_update_delete(args) -> int:
    state, table = read_state(args.state)
    _check_overrides(state, args)
    table = table.copy()
    full = _read_logs(args.log, table)
    dd, rest = split_prefix(full, args.before)
    report = dus_update(state, dd, full, state.params)
    write_state(args.out, report.new_state, table)
    header = ["db_size", "dd_size", "u_size", "min_freq", "candidates", "skipped_below_min_freq",
              "frequent", "negative_border"]
    row = [len(full), len(dd), len(rest), format_fraction(report.min_freq), report.candidates_examined,
           report.skipped_below_min_freq, len(report.new_state.frequent), len(report.new_state.negative_border)]
    if args.check_recall:
        note = recall_report(report.new_state, rest)
        header += ["missing_frequent", "missing_border", "wrong_counts", "false_frequent"]
        row += [len(note.missing_frequent), len(note.missing_border), len(note.wrong_counts),
                len(note.false_frequent)]
        for s, c in sorted(note.missing_frequent.items(), key=lambda kv: canonical_key(kv[0])):
            print(f"not recovered: <{render(s, table)}> count {c}", file=sys.stderr)
    sys.stdout.write(_csv(header, [row]))
    if args.log_out:
        os.makedirs(args.log_out, exist_ok=True)
        for i in range(len(rest.segments)):
            path = os.path.join(args.log_out, f"segment-{i:03d}.log")
            with open(path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(serialize_log(rest.segment(i)))
    return EXIT_OK


def _named(state: MiningState, table: SymbolTable, frequent_only: bool):
    out = {}
    for tag, patterns in (("F", state.frequent), ("N", state.negative_border)):
        if tag == "N" and frequent_only:
            continue
        for s, c in patterns.items():
            out[table.decode(s)] = (tag, c)
    return out


def cmd_diff(args) -> int:
    sa, ta = read_state(args.a)
    sb, tb = read_state(args.b)
    a = _named(sa, ta, args.frequent_only)
    b = _named(sb, tb, args.frequent_only)
    rows = []
    for names in sorted(a.keys() | b.keys(), key=lambda n: (len(n), n)):
        pa, pb = a.get(names), b.get(names)
        if pa == pb:
            continue
        if pa is None:
            change = "added"
        elif pb is None:
            change = "removed"
        elif pa[0] != pb[0]:
            change = "reclassified"
        else:
            change = "recounted"
        rows.append((change, ",".join(names), *(pa or ("", "")), *(pb or ("", ""))))
    sys.stdout.write(_csv(("change", "pattern", "a_set", "a_count", "b_set", "b_count"), rows))
    return EXIT_OK


def cmd_show(args) -> int:
    state, table = read_state(args.state)
    n = state.db_size
    rows = []
    for tag, patterns in (("F", state.frequent), ("N", state.negative_border)):
        for s in sorted(patterns, key=canonical_key):
            if args.level is None or len(s) == args.level:
                c = patterns[s]
                rows.append((tag, len(s), render(s, table), c, f"{c / n:.6f}" if n else "0"))
    header = ("set", "length", "pattern", "count", "support")
    if args.csv or not sys.stdout.isatty():
        sys.stdout.write(_csv(header, rows))
        return EXIT_OK
    p = state.params
    print(f"db_size {n}  min_supp {format_fraction(p.min_supp)}  min_nbd_supp {format_fraction(p.min_nbd_supp)}"
          f"  window {'inf' if p.window is None else p.window}")
    if not rows:
        print("(no patterns)")
        return EXIT_OK
    cells = [header] + [tuple(map(str, r)) for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    for r in cells:
        print("  ".join(x.ljust(w) for x, w in zip(r, widths)).rstrip())
    return EXIT_OK


def cmd_gen(args) -> int:
    try:
        planted = [parse_planted(p) for p in args.plant]
        log = generate(args.seed, args.alphabet, args.length, planted, args.noise_rate, start=args.start)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _emit(serialize_log(log), args.out)
    return EXIT_OK


def cmd_bench(args) -> int:
    cells = grid(args.min_supp, args.min_nbd_supp)
    if not cells:
        raise UsageError("no grid cell satisfies 0 <= min_nbd_supp < min_supp <= 1")
    for s, b in cells:
        _params(s, b, args.window)
    table = SymbolTable()
    base = _read_log(args.base, table)
    incs = [_read_log(p, table) for p in args.increment]
    records = run_bench(base, incs, cells, args.window, repeat=args.repeat)
    _emit(to_csv(records), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sequpdate", description="Incremental and decremental frequent-sequence mining.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    m = sub.add_parser("mine", help="mine a log from scratch and save the state")
    m.add_argument("--input", action="append", required=True, help="log file; repeat for more segments")
    m.add_argument("--min-supp", type=_fraction, required=True)
    m.add_argument("--min-nbd-supp", type=_fraction, default=Fraction(0))
    m.add_argument("--window", type=_window, default=None, help="max first-to-last span, or 'inf' (default)")
    m.add_argument("--out", required=True)
    m.set_defaults(func=cmd_mine)

    u = sub.add_parser("update", help="fold in or drop events")
    usub = u.add_subparsers(dest="action", required=True, parser_class=_Parser)
    for name, func in (("add", cmd_update_add), ("delete", cmd_update_delete)):
        a = usub.add_parser(name)
        a.add_argument("--state", required=True)
        a.add_argument("--log", action="append", required=True,
                       help="log file(s) the state was mined from, one per segment, in order")
        a.add_argument("--out", required=True)
        a.add_argument("--min-supp", type=_fraction, default=None, help="must match the state if given")
        a.add_argument("--min-nbd-supp", type=_fraction, default=None, help="must match the state if given")
        a.add_argument("--window", type=_window, default=_UNSET, help="must match the state if given")
        a.set_defaults(func=func)
        if name == "add":
            a.add_argument("--increment", required=True, help="later batch of events")
        else:
            a.add_argument("--before", type=int, required=True, help="delete every event with timestamp < T")
            a.add_argument("--check-recall", action="store_true", help="compare against a fresh re-mine")
            a.add_argument("--log-out", help="directory for the remaining log, one file per segment")

    d = sub.add_parser("diff", help="compare two states by symbol names")
    d.add_argument("--a", required=True)
    d.add_argument("--b", required=True)
    d.add_argument("--frequent-only", action="store_true")
    d.set_defaults(func=cmd_diff)

    s = sub.add_parser("show", help="list the patterns of a state")
    s.add_argument("--state", required=True)
    s.add_argument("--level", type=int, default=None)
    s.add_argument("--csv", action="store_true", help="CSV even on a terminal")
    s.set_defaults(func=cmd_show)

    g = sub.add_parser("gen", help="write a synthetic log")
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--alphabet", type=int, required=True)
    g.add_argument("--length", type=int, required=True)
    g.add_argument("--plant", action="append", default=[], metavar="A,B,C:RATE")
    g.add_argument("--noise-rate", type=float, default=0.0)
    g.add_argument("--start", type=int, default=0)
    g.add_argument("--out", default=None)
    g.set_defaults(func=cmd_gen)

    b = sub.add_parser("bench", help="time re-mining against incremental updates")
    b.add_argument("--base", required=True)
    b.add_argument("--increment", action="append", required=True, help="repeat for successive batches")
    b.add_argument("--min-supp", type=_fractions, required=True, help="comma-separated values")
    b.add_argument("--min-nbd-supp", type=_fractions, required=True, help="comma-separated values")
    b.add_argument("--window", type=_window, default=None)
    b.add_argument("--repeat", type=int, default=1, help="best of N timings per side")
    b.add_argument("--out", default=None)
    b.set_defaults(func=cmd_bench)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, LogFormatError, LogOrderError, StateFormatError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except StateValidationError as exc:
        print(f"state error: {exc}", file=sys.stderr)
        return EXIT_STATE
    except ConsistencyError as exc:
        print(f"internal consistency error: {exc}", file=sys.stderr)
        return EXIT_CONSISTENCY


if __name__ == "__main__":
    sys.exit(main())
