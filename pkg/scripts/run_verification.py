"""Run every report and write them, with timings, to a directory.

    python3 scripts/run_verification.py [outdir]
"""

import sys
import time
from pathlib import Path

from evenlat.classify import harness as h


def main():
    out = Path(sys.argv[1] if len(sys.argv) > 1 else "reports")
    out.mkdir(parents=True, exist_ok=True)
    ctx = h.Context()
    jobs = [("table1", lambda: h.verify_table1(ctx))]
    jobs += [(f"thm{t}", lambda t=t: h.verify_theorem(t, ctx)) for t in h.THEOREMS]
    jobs += [("complete", lambda: h.verify_complete_list(ctx)),
             ("norm2", lambda: h.verify_norm2_corollary(ctx))]
    failed = 0
    for name, job in jobs:
        t0 = time.perf_counter()
        rep = job()
        dt = time.perf_counter() - t0
        (out / f"{name}.json").write_text(rep.dumps(timing=True))
        c = rep.counts
        failed += c["fail"]
        print(f"{name:9s} {dt:7.2f}s  " + "  ".join(f"{k}={v}" for k, v in c.items() if v))
        timed = [r for r in rep.results if r.seconds is not None]
        for r in sorted(timed, key=lambda r: -r.seconds)[:2]:
            print(f"          slowest: {r.claim.id} {r.seconds:.2f}s")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
