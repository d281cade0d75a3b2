"""Batch occurrence-counting kernels.

Both backends implement the same scan. For each pattern we walk a segment
once, keeping ``st[k]``: the latest start index of any embedding of the
pattern's first ``k + 1`` symbols that ends at or before the current event.
Updating ``k`` in descending order lets one event extend every prefix at
most once. When the last symbol arrives and the best start is within the
window, that is the earliest-ending occurrence from the restart point; we
count it and clear the state so matching resumes after it.

``SEQUPDATE_DISABLE_NUMBA=1`` forces the numpy backend. It is also used when
numba cannot be imported.
"""

from __future__ import annotations

import os

import numpy as np

UNBOUNDED = np.iinfo(np.int64).max

try:
    from numba import njit
except ImportError:  # pragma: no cover - exercised only without numba
    njit = None

HAVE_NUMBA = njit is not None
USE_NUMBA = HAVE_NUMBA and os.environ.get("SEQUPDATE_DISABLE_NUMBA", "").strip().lower() in ("", "0", "false", "no")


def count_batch_numpy(symbols, times, seg_starts, seg_stops, patterns, lengths, span):
    """Count every row of ``patterns`` (padded with -1) at once, vectorised over rows."""
    n_pat, width = patterns.shape
    counts = np.zeros(n_pat, dtype=np.int64)
    if n_pat == 0 or symbols.shape[0] == 0:
        return counts
    rows = np.arange(n_pat)
    last = patterns[rows, lengths - 1]
    # one boolean matrix per symbol that occurs in any pattern
    masks = {int(x): patterns == x for x in np.unique(patterns) if x >= 0}
    st = np.full((n_pat, width), -1, dtype=np.int64)
    for a, b in zip(seg_starts.tolist(), seg_stops.tolist()):
        st.fill(-1)
        for i in range(a, b):
            x = int(symbols[i])
            eq = masks.get(x)
            if eq is None:
                continue
            for k in range(width - 1, 0, -1):
                upd = eq[:, k] & (st[:, k - 1] >= 0)
                if upd.any():
                    st[upd, k] = st[upd, k - 1]
            st[eq[:, 0], 0] = i
            start = st[rows, lengths - 1]
            done = (last == x) & (start >= 0)
            if done.any():
                done &= times[i] - times[np.where(done, start, i)] <= span
                if done.any():
                    counts[done] += 1
                    st[done] = -1
    return counts


def _count_batch_py(symbols, times, seg_starts, seg_stops, patterns, lengths, span):
    counts = np.zeros(patterns.shape[0], dtype=np.int64)
    for c in range(patterns.shape[0]):
        m = lengths[c]
        pat = patterns[c]
        st = np.empty(m, dtype=np.int64)
        total = 0
        for g in range(seg_starts.shape[0]):
            for k in range(m):
                st[k] = -1
            for i in range(seg_starts[g], seg_stops[g]):
                x = symbols[i]
                for k in range(m - 1, 0, -1):
                    if pat[k] == x and st[k - 1] >= 0:
                        st[k] = st[k - 1]
                if pat[0] == x:
                    st[0] = i
                if pat[m - 1] == x and st[m - 1] >= 0 and times[i] - times[st[m - 1]] <= span:
                    total += 1
                    for k in range(m):
                        st[k] = -1
        counts[c] = total
    return counts


if HAVE_NUMBA:
    count_batch_numba = njit(cache=True, nogil=True)(_count_batch_py)
else:  # pragma: no cover
    count_batch_numba = None


def count_batch(symbols, times, seg_starts, seg_stops, patterns, lengths, span):
    if USE_NUMBA:
        return count_batch_numba(symbols, times, seg_starts, seg_stops, patterns, lengths, span)
    return count_batch_numpy(symbols, times, seg_starts, seg_stops, patterns, lengths, span)


def backend_name() -> str:
    return "numba" if USE_NUMBA else "numpy"
