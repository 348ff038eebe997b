"""Minimal-vector count of the Leech lattice and the norm-2 emptiness check.

    python3 scripts/leech_benchmark.py [--bound 4]

Bound 4 enumerates the 196560 minimal vectors (98280 pairs); it takes a
while in pure Python.
"""

import argparse
import time

from evenlat.expr import lattice
from evenlat.roots import short_vectors


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--bound", type=int, default=2)
    args = ap.parse_args()
    t0 = time.perf_counter()
    lat = lattice("Leech")
    t1 = time.perf_counter()
    vs = short_vectors(lat, args.bound)
    t2 = time.perf_counter()
    counts = {}
    for _, n in vs:
        counts[n] = counts.get(n, 0) + 1
    print(f"Gram matrix built in {t1 - t0:.2f}s; det {lat.det}")
    print(f"vectors of norm <= {args.bound}: {2 * len(vs)} ({dict(sorted(counts.items()))} pairs) "
          f"in {t2 - t1:.2f}s")
    if args.bound >= 4:
        assert 2 * counts.get(4, 0) == 196560


if __name__ == "__main__":
    main()
