"""Hypothesis strategies shared by the test modules."""

from hypothesis import strategies as st

from evenlat import exactarith as ea
from evenlat.lattice import catalog, direct_sum

BLOCKS = ["A1", "A2", "A3", "A4", "D4", "D5", "E6", "E7", "A1(2)", "A2(2)", "A1(3)", "E6'(3)",
          "D4(2)", "A3(2)"]
INDEF_BLOCKS = ["U", "U(2)", "U(3)", "A1(-1)", "A2(-1)"]


@st.composite
def unimodular(draw, n, steps=6):
    """Product of random elementary row operations and swaps."""
    m = [list(r) for r in ea.identity(n)]
    for _ in range(draw(st.integers(0, steps))):
        if n == 1:
            m[0][0] = -m[0][0]
            continue
        i = draw(st.integers(0, n - 1))
        j = draw(st.integers(0, n - 1).filter(lambda x: x != i))
        op = draw(st.sampled_from(["add", "swap", "neg"]))
        if op == "add":
            c = draw(st.integers(-2, 2))
            m[i] = [a + c * b for a, b in zip(m[i], m[j])]
        elif op == "swap":
            m[i], m[j] = m[j], m[i]
        else:
            m[i] = [-a for a in m[i]]
    return ea.as_matrix(m)


@st.composite
def definite_lattices(draw, max_blocks=3, max_rank=10):
    drawn = draw(st.lists(st.sampled_from(BLOCKS), min_size=1, max_size=max_blocks))
    names, rank = [], 0
    for n in drawn:
        r = catalog(n).rank
        if rank + r <= max_rank:
            names.append(n)
            rank += r
    names = names or ["A1"]
    return direct_sum(*(catalog(n) for n in names)), names


@st.composite
def indefinite_lattices(draw, max_rank=10):
    names = draw(st.lists(st.sampled_from(INDEF_BLOCKS), min_size=1, max_size=2))
    names += draw(st.lists(st.sampled_from(BLOCKS[:8]), min_size=0, max_size=2))
    return direct_sum(*(catalog(n) for n in names)), names


@st.composite
def congruent_copy(draw, lat):
    from evenlat.lattice import Lattice
    t = draw(unimodular(lat.rank))
    return Lattice(ea.congruent(lat.gram, t)), t
