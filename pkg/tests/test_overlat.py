from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from evenlat import exactarith as ea
from evenlat import overlat as ov
from evenlat.discform import discriminant_form, exponent, genus_equal, length
from evenlat.expr import lattice
from evenlat.lattice import Lattice, NotEven
from evenlat.roots import roots

from strategies import unimodular


def test_isotropic_subgroups_3a2():
    d = discriminant_form(lattice("3A2"))
    subs = [h for h in ov.isotropic_subgroups(d) if h.order > 1]
    assert len(subs) == 4 and all(h.order == 3 for h in subs)
    for h in subs:
        step = ov.overlattice(lattice("3A2"), h, d)
        assert step.index == 3 and step.result.det == 3
        assert genus_equal(step.result, lattice("E6"))


def test_non_isotropic_subgroup_rejected():
    d = discriminant_form(lattice("A1"))
    with pytest.raises(NotEven):
        ov.overlattice(lattice("A1"), [(1,)], d)


def test_d8_to_e8():
    m = lattice("D8")
    steps = ov.maximal_even_overlattice(m)
    assert len(steps) == 1 and steps[0].result.det == 1
    assert len(roots(steps[0].result)) == 120


@given(st.sampled_from(["3A2", "8A1", "2A3", "D4+4A1", "A1+A7", "2U(2)+4A1", "U(3)+A2", "4A2",
                        "2D4", "A2+A2(-1)"]))
def test_overlattice_steps(expr):
    m = lattice(expr)
    for step in ov.maximal_even_overlattice(m):
        assert step.result.det * step.index ** 2 == step.base.det
        # base basis written in the result basis reproduces the base Gram matrix
        assert ea.congruent(step.result.gram, step.inclusion) == step.base.gram
        assert abs(ea.det(step.inclusion)) == step.index
    last = ov.maximal_even_overlattice(m)
    top = last[-1].result if last else m
    assert ov.is_maximal(top)


def test_all_even_overlattices_index_bound():
    m = lattice("8A1")
    steps = ov.all_even_overlattices(m, 4)
    assert all(s.index <= 4 for s in steps)
    # order-2 isotropic elements of (Z/2)^8 with q = w/2: weight w in {4, 8}
    assert sum(1 for s in steps if s.index == 2) == 70 + 1


def test_sublattice_from_subgroup():
    m0 = lattice("E8")
    y = (Fraction(1, 2),) + (0,) * 7
    emb = ov.sublattice_from_subgroup(m0, [y])
    assert ov.index_in(emb) == 2 and emb.lattice.det == 4


def test_find_isotropic():
    u2 = lattice("U(2)")
    iv = ov.find_isotropic_primitive(u2)
    assert u2.norm(iv.vector) == 0 and iv.divisibility == 2
    with pytest.raises(ov.NotFound) as e:
        ov.find_isotropic_primitive(lattice("E8"))
    assert e.value.proven


@given(st.sampled_from(["A1", "A2", "D4", "E6", "2A1", "A3"]).flatmap(
    lambda k: unimodular(2 + lattice(k).rank).map(lambda t: (k, t))))
def test_split_u_recovers_genus(data):
    k, t = data
    base = lattice("U+" + k)
    m = Lattice(ea.congruent(base.gram, t))
    sp = ov.split_U(m)
    assert sp.check(m)
    assert genus_equal(sp.complement, lattice(k))


def test_split_u_anisotropic_partner():
    m = lattice("A1(-1)+2A3")
    sp = ov.split_U(m)
    assert sp.check(m) and sp.complement.signature == (5, 0) and sp.complement.det == 32


def test_split_2u():
    m = lattice("U+U(2)+2A3")
    sp = ov.split_2U(m)
    assert sp.check(m)
    assert sp.complement.signature == (6, 0)


def test_split_a1():
    sp = ov.split_A1(lattice("2U+D6+A1"))
    assert sp.check(lattice("2U+D6+A1"))
    assert sp.complement.det == 4
    with pytest.raises(ov.NotFound) as e:
        ov.split_A1(lattice("2U+E8"))
    assert e.value.proven


@pytest.mark.parametrize("expr", ["E6", "4A2", "D4+A2", "2A3"])
def test_genus_rep_construction(expr):
    lat = lattice(expr)
    g = ov.genus_rep_with_2roots(lat, shortcut=False)
    assert g.method == "construction"
    assert genus_equal(g.lattice, lat)
    assert g.lattice.norm(g.root) == 2
    # L0 + Zv sits inside T with the recorded index
    assert abs(ea.det(g.inclusion)) == g.index
    assert g.u_split.check(g.v_complement.lattice)


def test_genus_rep_shortcut():
    g = ov.genus_rep_with_2roots(lattice("8A1"))
    assert g.method == "identity" and lattice("8A1").norm(g.root) == 2


def test_genus_rep_preconditions():
    with pytest.raises(ov.PreconditionFailed):
        ov.genus_rep_with_2roots(lattice("A2(2)+A2(2)"), shortcut=False)
    with pytest.raises(ov.PreconditionFailed):
        ov.genus_rep_with_2roots(lattice("5A1(2)"))
    with pytest.raises(ov.PreconditionFailed):
        ov.genus_rep_with_2roots(lattice("U"))


def test_overlattice_chain_thm42():
    start = lattice("2U(2)+10A1")
    targets = [lattice(e) for e in ["U+U(2)+10A1", "2U+10A1", "2U+D4+6A1", "2U+D6+4A1",
                                    "2U+D8+2A1"]]
    chain = ov.overlattice_chain(start, targets)
    assert [s.index for s in chain.steps] == [2] * 5
    dets = [start.det] + [s.result.det for s in chain.steps]
    assert all(Fraction(a, b) == 4 for a, b in zip(dets, dets[1:]))


def test_exponent_preserving():
    m = lattice("2U(2)+10A1")
    ch = ov.exponent_preserving_overlattice(m)
    assert exponent(ch.result) == exponent(m) == 2
    assert length(ch.result) <= 5
    assert ch.splitting.check(ch.result)
    with pytest.raises(ov.PreconditionFailed):
        ov.exponent_preserving_overlattice(lattice("E8"))


def test_bound_exceeded():
    with pytest.raises(ov.BoundExceeded):
        ov.isotropic_subgroups(discriminant_form(lattice("16A1")))
