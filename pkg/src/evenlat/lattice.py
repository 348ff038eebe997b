"""Even lattices given by integer Gram matrices.

Named lattices use the Cartan matrix of the Dynkin diagram (Bourbaki node
numbering) as Gram matrix; ``U`` is [[0, 1], [1, 0]]; the Leech lattice is
built from the extended binary Golay code.  See ``docs/conventions.md``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Optional, Sequence

from . import exactarith as ea
from .exactarith import IntMatrix


class LatticeError(ValueError):
    pass


class NotSymmetric(LatticeError):
    pass


class NotEven(LatticeError):
    pass


class Degenerate(LatticeError):
    pass


class Unsupported(LatticeError):
    pass


@dataclass(frozen=True)
class Lattice:
    gram: IntMatrix
    name: Optional[str] = field(default=None, compare=False)

    def __post_init__(self):
        g = self.gram
        n = len(g)
        if n == 0 or any(len(row) != n for row in g):
            raise LatticeError("Gram matrix must be square and nonempty")
        for i in range(n):
            for j in range(i):
                if g[i][j] != g[j][i]:
                    raise NotSymmetric(f"Gram matrix not symmetric at ({i}, {j})")
        for i in range(n):
            if g[i][i] % 2:
                raise NotEven(f"diagonal entry {i} is odd ({g[i][i]}): lattice is not even")
        if self.det == 0:
            raise Degenerate("Gram matrix is singular")

    @property
    def rank(self) -> int:
        return len(self.gram)

    @cached_property
    def det(self) -> int:
        return ea.det(self.gram)

    @cached_property
    def signature(self) -> tuple[int, int]:
        return _inertia(self.gram)

    @property
    def is_positive_definite(self) -> bool:
        return self.signature[1] == 0

    @cached_property
    def gram_inverse(self):
        return ea.inverse(self.gram)

    def norm(self, v) -> Fraction | int:
        return ea.bilinear(self.gram, v, v)

    def inner(self, u, v):
        return ea.bilinear(self.gram, u, v)

    def to_json(self) -> dict:
        d = {"gram": [list(r) for r in self.gram]}
        if self.name:
            d["name"] = self.name
        return d

    def __repr__(self) -> str:
        label = self.name or "Lattice"
        return f"<{label}: rank {self.rank}, signature {self.signature}, det {self.det}>"


def from_gram(g: Sequence[Sequence[int]], name: Optional[str] = None) -> Lattice:
    rows = [list(r) for r in g]
    for r in rows:
        for x in r:
            if isinstance(x, float) or (isinstance(x, Fraction) and x.denominator != 1):
                raise LatticeError("Gram entries must be integers")
    return Lattice(ea.as_matrix(rows), name)


def load_gram_json(path) -> Lattice:
    with open(path) as fh:
        data = json.load(fh)
    if not isinstance(data, dict) or "gram" not in data:
        raise LatticeError("Gram JSON must be an object with a 'gram' key")
    return from_gram(data["gram"], data.get("name"))


def _inertia(g) -> tuple[int, int]:
    """(n+, n-) by symmetric congruence diagonalisation over Q."""
    n = len(g)
    m = [[Fraction(x) for x in row] for row in g]
    pos = neg = 0
    active = list(range(n))
    while active:
        piv = next((i for i in active if m[i][i] != 0), None)
        if piv is None:
            # all remaining diagonals vanish: fold an off-diagonal into a diagonal
            pair = next(((i, j) for i in active for j in active if i != j and m[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            # x_i <- x_i + x_j gives (x_i, x_i) = 2 m_ij
            for k in range(n):
                m[i][k] += m[j][k]
            for k in range(n):
                m[k][i] += m[k][j]
            piv = i
        p = m[piv][piv]
        if p > 0:
            pos += 1
        else:
            neg += 1
        active.remove(piv)
        for i in active:
            f = m[i][piv] / p
            if f:
                for k in active:
                    m[i][k] -= f * m[piv][k]
                m[i][piv] = Fraction(0)
    return pos, neg


# ---------------------------------------------------------------- constructors

def _cartan(n: int, edges) -> IntMatrix:
    g = [[2 * int(i == j) for j in range(n)] for i in range(n)]
    for a, b in edges:
        g[a][b] = g[b][a] = -1
    return ea.as_matrix(g)


def gram_A(n: int) -> IntMatrix:
    if n < 1:
        raise LatticeError("A_n needs n >= 1")
    return _cartan(n, [(i, i + 1) for i in range(n - 1)])


def gram_D(n: int) -> IntMatrix:
    if n < 2:
        raise LatticeError("D_n needs n >= 2")
    if n == 2:
        return _cartan(2, [])
    edges = [(i, i + 1) for i in range(n - 2)] + [(n - 3, n - 1)]
    return _cartan(n, edges)


def gram_E(n: int) -> IntMatrix:
    if n not in (6, 7, 8):
        raise LatticeError(f"E_{n} does not exist (n must be 6, 7 or 8)")
    # Bourbaki: 1-3-4-5-6-7-8 chain with 2 attached to 4
    edges = [(0, 2), (1, 3), (2, 3)] + [(i, i + 1) for i in range(3, n - 1)]
    return _cartan(n, edges)


GRAM_U = ((0, 1), (1, 0))


def golay_code_basis() -> list[tuple[int, ...]]:
    """Generator rows of the extended binary Golay code [24, 12, 8]."""
    # g(x) = x^11 + x^10 + x^6 + x^5 + x^4 + x^2 + 1 generates the cyclic [23,12,7] code
    gpoly = [1, 0, 1, 0, 1, 1, 1, 0, 0, 0, 1, 1]  # coefficients of x^0..x^11
    rows = []
    for s in range(12):
        w = [0] * 23
        for i, c in enumerate(gpoly):
            w[s + i] = c
        rows.append(tuple(w + [sum(w) % 2]))
    return rows


def gram_leech() -> IntMatrix:
    """Gram matrix of the Leech lattice from the standard Golay construction.

    Vectors are x/sqrt(8) with x in Z^24; generators are 2c for Golay words
    c, 4e_i - 4e_j, 8e_0 and (-3, 1, ..., 1).
    """
    gens = []
    for c in golay_code_basis():
        gens.append([2 * x for x in c])
    for i in range(1, 24):
        v = [0] * 24
        v[0], v[i] = 4, -4
        gens.append(v)
    v = [0] * 24
    v[0] = 8
    gens.append(v)
    gens.append([-3] + [1] * 23)
    basis = ea.row_basis(gens)
    assert len(basis) == 24
    prod = ea.matmul(basis, ea.transpose(basis))
    return ea.as_matrix([[x // 8 for x in row] for row in prod])


def direct_sum(*lats: Lattice, name: Optional[str] = None) -> Lattice:
    return Lattice(ea.block_diag(*(l.gram for l in lats)), name)


def rescale(lat: Lattice, a: int, name: Optional[str] = None) -> Lattice:
    """L(a): same group, form multiplied by the nonzero integer a."""
    if a == 0:
        raise LatticeError("rescaling factor must be nonzero")
    return Lattice(ea.as_matrix([[a * x for x in row] for row in lat.gram]), name)


def rescaled_dual(lat: Lattice, a: int, name: Optional[str] = None) -> Lattice:
    """L'(a): the dual lattice with form scaled by a, in the dual basis."""
    inv = lat.gram_inverse
    rows = [[a * x for x in row] for row in inv]
    if any(x.denominator != 1 for row in rows for x in row):
        raise NotEven(f"{a} * Gram^-1 is not integral")
    g = ea.as_matrix([[int(x) for x in row] for row in rows])
    if any(g[i][i] % 2 for i in range(len(g))):
        raise NotEven(f"rescaled dual with factor {a} is not even")
    return Lattice(g, name)


_NAME_RE = re.compile(r"^(U|A|D|E|Leech)(\d*)('?)(?:\((-?\d+)\))?$")


def catalog(name: str) -> Lattice:
    """Named lattice: U, U(m), A_n, D_n, E6/7/8, Leech, L(a) and L'(a).

    >>> catalog("E8").det
    1
    """
    key = name.replace(" ", "").replace("_", "")
    m = _NAME_RE.match(key)
    if not m:
        raise LatticeError(f"unknown lattice name {name!r}")
    kind, num, dual, scale = m.groups()
    if kind in ("U", "Leech") and num:
        raise LatticeError(f"unknown lattice name {name!r}")
    if kind in ("A", "D", "E") and not num:
        raise LatticeError(f"{kind} needs a rank in {name!r}")
    if kind == "U":
        g = GRAM_U
    elif kind == "Leech":
        g = _leech_cached()
    elif kind == "A":
        g = gram_A(int(num))
    elif kind == "D":
        g = gram_D(int(num))
    else:
        g = gram_E(int(num))
    base = Lattice(g)
    a = int(scale) if scale is not None else 1
    if dual:
        if kind == "U":
            raise LatticeError("U' is not supported")
        return rescaled_dual(base, a, name=key)
    if a != 1:
        return rescale(base, a, name=key)
    return Lattice(g, key)


_LEECH: list = []


def _leech_cached() -> IntMatrix:
    if not _LEECH:
        _LEECH.append(gram_leech())
    return _LEECH[0]


# ------------------------------------------------------------ vectors

def divisibility(v, lat: Lattice) -> int:
    """Positive generator of the ideal (v, L) = {(v, x) : x in L}."""
    if not any(v):
        raise LatticeError("divisibility of the zero vector is undefined")
    return ea.content(ea.matvec(lat.gram, v))


def is_primitive(v) -> bool:
    return ea.content(v) == 1


@dataclass(frozen=True)
class Embedded:
    lattice: Lattice
    embedding: IntMatrix  # rows: basis of the complement in the ambient basis


def orthogonal_complement(v, lat: Lattice) -> Embedded:
    """The sublattice {x in L : (x, v) = 0} with its inclusion matrix."""
    if not any(v):
        raise LatticeError("zero vector")
    if not is_primitive(v):
        raise LatticeError("orthogonal_complement needs a primitive vector")
    if lat.norm(v) == 0:
        raise Degenerate("complement of an isotropic vector is degenerate")
    row = ea.matvec(lat.gram, v)
    basis = ea.kernel_basis((row,))
    return Embedded(Lattice(ea.congruent(lat.gram, basis)), basis)


def sublattice(lat: Lattice, basis) -> Lattice:
    return Lattice(ea.congruent(lat.gram, basis))


def lll(lat: Lattice) -> tuple[Lattice, IntMatrix]:
    """LLL-reduced copy of a positive definite lattice and the basis change T."""
    g, t = ea.lll_reduce(lat.gram)
    return Lattice(g, lat.name), t


MAX_ISOMETRY_RANK = 12


def is_isometric_posdef(a: Lattice, b: Lattice):
    """Decide isometry of positive definite lattices of rank <= 12.

    Returns (True, T) with T^T G_b T = G_a (columns of T are the images of
    the basis of a, in b-coordinates) or (False, None).
    """
    from .roots import short_vectors

    if a.rank > MAX_ISOMETRY_RANK or b.rank > MAX_ISOMETRY_RANK:
        raise Unsupported(f"isometry test limited to rank <= {MAX_ISOMETRY_RANK}")
    if not (a.is_positive_definite and b.is_positive_definite):
        raise Unsupported("isometry test needs positive definite lattices")
    if a.rank != b.rank or a.det != b.det:
        return False, None
    ar, ta = lll(a)
    ga = ar.gram
    n = a.rank
    top = max(ga[i][i] for i in range(n))
    vecs = short_vectors(b, top)
    by_norm: dict[int, list] = {}
    for v, nv in vecs:
        by_norm.setdefault(nv, []).extend([v, tuple(-x for x in v)])
    cands = [by_norm.get(ga[i][i], []) for i in range(n)]
    if any(not c for c in cands):
        return False, None
    order = sorted(range(n), key=lambda i: (len(cands[i]), i))
    gb = b.gram
    img: dict[int, tuple] = {}
    gimg: dict[int, tuple] = {}

    def rec(pos):
        if pos == n:
            return True
        i = order[pos]
        for w in cands[i]:
            gw = ea.matvec(gb, w)
            if all(ea.dot(gw, img[j]) == ga[i][j] for j in img):
                img[i] = w
                gimg[i] = gw
                if rec(pos + 1):
                    return True
                del img[i]
                del gimg[i]
        return False

    if not rec(0):
        return False, None
    # images of the reduced basis; compose with the reduction of a
    cols = [img[i] for i in range(n)]          # column i = image of reduced vector i
    ta_inv = ea.inverse(ta)
    m_red = ea.transpose(cols)                 # b-coords, columns = images
    t = ea.matmul(m_red, ta_inv)
    t = ea.as_matrix([[int(x) for x in row] for row in t])
    return True, t
