"""Cross-batch candidate generation for the updated log.

Candidates join a pattern frequent in the original log with one frequent in
the increment, in both orders: appending the increment pattern's last symbol
to an original pattern extends its suffix, and the reverse order extends its
prefix. Anything frequent in the union already came out of the
reclassification phases, so these candidates only ever feed the negative
border.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable

from .errors import ConsistencyError
from .miner import Params
from .model import EventLog, Pattern, canonical_key, delete_one_subsequences
from .occurrence import count_many

SUFFIX = "db-suffix-extension"
PREFIX = "db-prefix-extension"
BOTH = "both"


@dataclass
class CandidateBatch:
    length: int
    candidates: dict[Pattern, str] = field(default_factory=dict)  # pattern -> provenance
    pruned: int = 0  # joined but dropped by the subsequence test

    def __len__(self) -> int:
        return len(self.candidates)

    def ordered(self) -> list[Pattern]:
        return sorted(self.candidates, key=canonical_key)

    def without(self, known: Iterable[Pattern]) -> CandidateBatch:
        known = set(known)
        kept = {s: tag for s, tag in self.candidates.items() if s not in known}
        return CandidateBatch(self.length, kept, self.pruned)


def _common_length(*groups: Iterable[Pattern]) -> int | None:
    lengths = {len(s) for g in groups for s in g}
    if len(lengths) > 1:
        raise ValueError(f"mixed pattern lengths {sorted(lengths)}")
    return lengths.pop() if lengths else None


def cross_join(
    l_db: Iterable[Pattern],
    l_inc: Iterable[Pattern],
    l_u: Iterable[Pattern],
    frequent_next: Iterable[Pattern] = (),
) -> CandidateBatch:
    """Join original-side with increment-side patterns of length ``m-1``.

    ``l_u`` is the full length-``m-1`` frequent level of the union (used for
    pruning); ``frequent_next`` holds length-``m`` patterns already frequent
    in the union, which are not emitted again.
    """
    l_db, l_inc, l_u = set(l_db), set(l_inc), set(l_u)
    width = _common_length(l_db, l_inc, l_u)
    if width is None:
        return CandidateBatch(0)
    done = set(frequent_next)
    batch = CandidateBatch(width + 1)
    seen_pruned = set()

    def emit(gamma: Pattern, tag: str):
        if gamma in done or gamma in seen_pruned:
            return
        if any(t not in l_u for t in delete_one_subsequences(gamma)):
            seen_pruned.add(gamma)
            batch.pruned += 1
            return
        old = batch.candidates.get(gamma)
        batch.candidates[gamma] = tag if old in (None, tag) else BOTH

    by_head: dict[Pattern, list[Pattern]] = defaultdict(list)
    by_tail: dict[Pattern, list[Pattern]] = defaultdict(list)
    for beta in l_inc:
        by_head[beta[:-1]].append(beta)
        by_tail[beta[1:]].append(beta)
    for alpha in sorted(l_db):
        for beta in by_head.get(alpha[1:], ()):
            if beta != alpha:
                emit(alpha + beta[-1:], SUFFIX)
        for beta in by_tail.get(alpha[:-1], ()):
            if beta != alpha:
                emit(beta + alpha[-1:], PREFIX)
    return batch


def count_and_band(batch: CandidateBatch, u: EventLog, params: Params) -> dict[Pattern, int]:
    """Count a batch over the union log and keep those inside the border band.

    A candidate reaching the frequent floor here contradicts the guarantee
    that every union-frequent pattern was frequent in one of the two parts,
    so it raises :class:`ConsistencyError` rather than being classified.
    """
    if not batch.candidates:
        return {}
    n = len(u)
    hi, lo = params.frequent_floor(n), params.border_floor(n)
    ordered = batch.ordered()
    into_nbd = {}
    for s, c in zip(ordered, count_many(ordered, u, params.window)):
        if c >= hi:
            raise ConsistencyError(
                f"cross-join candidate {s} has count {c} >= {hi} in the union log "
                "but was frequent in neither part"
            )
        if c >= lo:
            into_nbd[s] = c
    return into_nbd
