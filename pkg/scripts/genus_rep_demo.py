"""A lattice with a 2-root in the genus of a rootless positive definite lattice.

    python3 scripts/genus_rep_demo.py "E8(2)"      # fails the length preconditions
    python3 scripts/genus_rep_demo.py "Leech"
    python3 scripts/genus_rep_demo.py "A2(2)+E6"
"""

import sys
import time

from evenlat import overlat as ov
from evenlat.expr import lattice
from evenlat.roots import root_decomposition


def main(expr):
    lat = lattice(expr)
    t0 = time.perf_counter()
    try:
        g = ov.genus_rep_with_2roots(lat, shortcut=False)
    except ov.PreconditionFailed as e:
        print(f"{expr}: precondition fails ({e})")
        return 1
    dt = time.perf_counter() - t0
    print(f"{expr}: construction in {dt:.2f}s, [T : L0 + Zv] = {g.index}")
    print(f"  root system of T: {root_decomposition(g.lattice).summary()}")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1] if len(sys.argv) > 1 else "A2(2)+E6"))
