"""Time the numba kernel against the numpy fallback on one synthetic workload.

    python benchmarks/bench_kernels.py --length 20000 --alphabet 50 --patterns 2000

Both backends count the same batch; results must match exactly. Output is a
CSV row per backend on stdout.
"""

import argparse
import csv
import random
import sys
import time

import numpy as np

from sequpdate import _kernels
from sequpdate.gen import alphabet_table, generate
from sequpdate.occurrence import _pack, _span


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--length", type=int, default=20_000)
    ap.add_argument("--alphabet", type=int, default=50)
    ap.add_argument("--patterns", type=int, default=2_000)
    ap.add_argument("--max-len", type=int, default=3)
    ap.add_argument("--window", default="10")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args(argv)

    table = alphabet_table(args.alphabet)
    log = generate(args.seed, args.alphabet, args.length, [(("a", "b", "c"), 0.05)], 0.3, table=table)
    rng = random.Random(args.seed)
    pats = [tuple(rng.randrange(args.alphabet) for _ in range(rng.randint(1, args.max_len)))
            for _ in range(args.patterns)]
    window = None if args.window == "inf" else int(args.window)
    call = (*log.arrays, *_pack(pats), _span(window))

    backends = {"numpy": _kernels.count_batch_numpy}
    if _kernels.HAVE_NUMBA:
        backends["numba"] = _kernels.count_batch_numba
        backends["numba"](*call)  # compile outside the timed runs

    results, rows = {}, []
    for name, fn in backends.items():
        best = float("inf")
        for _ in range(args.repeat):
            t0 = time.perf_counter()
            results[name] = fn(*call)
            best = min(best, time.perf_counter() - t0)
        rows.append({"backend": name, "events": len(log), "patterns": len(pats), "window": args.window,
                     "seconds": f"{best:.4f}"})
    if "numba" in results and not np.array_equal(results["numba"], results["numpy"]):
        print("backends disagree", file=sys.stderr)
        return 1
    base = float(rows[0]["seconds"])
    for r in rows:
        r["speedup_vs_numpy"] = f"{base / float(r['seconds']):.1f}"
    w = csv.DictWriter(sys.stdout, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return 0


if __name__ == "__main__":
    sys.exit(main())
