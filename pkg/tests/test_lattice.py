import json

import pytest
from hypothesis import given

from evenlat import exactarith as ea
from evenlat.lattice import (Degenerate, Lattice, LatticeError, NotEven, NotSymmetric, catalog,
                             direct_sum, divisibility, from_gram, is_isometric_posdef,
                             load_gram_json, lll, orthogonal_complement, rescale,
                             rescaled_dual)

from strategies import congruent_copy, definite_lattices


@pytest.mark.parametrize("name, rank, det, sig", [
    ("U", 2, -1, (1, 1)),
    ("U(3)", 2, -9, (1, 1)),
    ("A1", 1, 2, (1, 0)),
    ("A5", 5, 6, (5, 0)),
    ("D4", 4, 4, (4, 0)),
    ("D10", 10, 4, (10, 0)),
    ("E6", 6, 3, (6, 0)),
    ("E7", 7, 2, (7, 0)),
    ("E8", 8, 1, (8, 0)),
    ("E8(2)", 8, 256, (8, 0)),
    ("E6'(3)", 6, 243, (6, 0)),
    ("D8'(2)", 8, 64, (8, 0)),
    ("A1(-1)", 1, -2, (0, 1)),
    ("A2(-1)", 2, 3, (0, 2)),
])
def test_catalog(name, rank, det, sig):
    lat = catalog(name)
    assert lat.rank == rank
    assert lat.det == det
    assert lat.signature == sig


def test_leech():
    lat = catalog("Leech")
    assert lat.rank == 24 and lat.det == 1 and lat.is_positive_definite
    assert min(lat.gram[i][i] for i in range(24)) >= 4


@pytest.mark.parametrize("name, exc", [
    ("E9", LatticeError), ("A0", LatticeError), ("D1", LatticeError),
    ("D8'", NotEven), ("A1(0)", LatticeError), ("Q7", LatticeError), ("U2", LatticeError),
])
def test_catalog_errors(name, exc):
    with pytest.raises(exc):
        catalog(name)


def test_validation():
    with pytest.raises(NotSymmetric):
        Lattice(((2, 1), (0, 2)))
    with pytest.raises(NotEven):
        Lattice(((1, 0), (0, 2)))
    with pytest.raises(Degenerate):
        Lattice(((2, 2), (2, 2)))


def test_gram_json_roundtrip(tmp_path):
    lat = catalog("D4")
    p = tmp_path / "d4.json"
    p.write_text(json.dumps(lat.to_json()))
    assert load_gram_json(p) == lat
    p.write_text("[1, 2]")
    with pytest.raises(LatticeError):
        load_gram_json(p)


def test_rescale_and_dual():
    a2 = catalog("A2")
    assert rescale(a2, 3).det == 27
    # A2'(3) is A2 again
    assert rescaled_dual(a2, 3).det == 3
    with pytest.raises(NotEven):
        rescaled_dual(a2, 2)


def test_divisibility():
    u2 = catalog("U(2)")
    assert divisibility((1, 0), u2) == 2
    assert divisibility((1, 0), catalog("U")) == 1
    with pytest.raises(LatticeError):
        divisibility((0, 0), u2)


def test_orthogonal_complement():
    e8 = catalog("E8")
    v = (1, 0, 0, 0, 0, 0, 0, 0)
    emb = orthogonal_complement(v, e8)
    # complement of a root in E8 is E7
    assert emb.lattice.rank == 7 and emb.lattice.det == 2
    for row in emb.embedding:
        assert e8.inner(row, v) == 0
    with pytest.raises(Degenerate):
        orthogonal_complement((1, 0), catalog("U"))


@given(definite_lattices())
def test_direct_sum_det_multiplies(data):
    lat, names = data
    d = 1
    for n in names:
        d *= catalog(n).det
    assert lat.det == d
    assert lat.signature == (lat.rank, 0)


@given(definite_lattices(max_rank=6).flatmap(lambda d: congruent_copy(d[0]).map(lambda c: (d[0], c))))
def test_lll_preserves_lattice(data):
    lat, (copy, _) = data
    red, t = lll(copy)
    assert red.det == lat.det
    assert ea.congruent(copy.gram, ea.transpose(t)) == red.gram


@given(definite_lattices(max_rank=6).flatmap(lambda d: congruent_copy(d[0]).map(lambda c: (d[0], c))))
def test_isometry_of_congruent_copies(data):
    lat, (copy, _) = data
    ok, t = is_isometric_posdef(lat, copy)
    assert ok
    assert ea.matmul(ea.matmul(ea.transpose(t), copy.gram), t) == lat.gram


def test_isometry_negative():
    # both det 15, minima 2 and 4
    a = from_gram([[2, 1], [1, 8]])
    b = from_gram([[4, 1], [1, 4]])
    assert not is_isometric_posdef(a, b)[0]
    assert not is_isometric_posdef(catalog("D4"), direct_sum(catalog("A3"), catalog("A1")))[0]


def test_from_gram_name():
    lat = from_gram([[2, -1], [-1, 2]], "A2")
    assert lat.name == "A2" and lat == catalog("A2")
