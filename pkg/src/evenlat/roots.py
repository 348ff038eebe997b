"""Short vectors, 2-root systems and coset minima of positive definite lattices.

Enumeration is Fincke-Pohst on an LLL-reduced basis with an exact rational
Cholesky form; no floating point enters a decision.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

import numpy as np
from gmpy2 import mpq

from . import exactarith as ea
from .exactarith import NotPositiveDefinite
from .lattice import Lattice, LatticeError, lll


def _cholesky(g):
    """q with x^T g x = sum_i q[i][i] * (x_i + sum_{j>i} q[i][j] x_j)^2."""
    n = len(g)
    q = [[mpq(x) for x in row] for row in g]
    for i in range(n):
        for j in range(i + 1, n):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                q[k][l] -= q[k][i] * q[i][l]
    return q


def _interval(c, r) -> tuple[int, int]:
    """All integers x with (x + c)^2 <= r, as an inclusive range.

    The float estimate only seeds the search; both ends are settled by exact
    rational comparisons.
    """
    if r < 0:
        return 1, 0
    s = math.sqrt(float(r))
    lo = math.floor(-float(c) - s)
    hi = math.ceil(-float(c) + s)
    while (lo + c) ** 2 > r and lo <= hi:
        lo += 1
    while (lo - 1 + c) ** 2 <= r:
        lo -= 1
    while (hi + c) ** 2 > r and hi >= lo:
        hi -= 1
    while (hi + 1 + c) ** 2 <= r:
        hi += 1
    return lo, hi


def _enumerate(q, bound: Fraction, visit: Callable, center=None, shrink: bool = False):
    """Visit every y with Q(y + center) <= bound in lexicographic order of y.

    ``visit(y, value)`` may return a new (smaller) bound when ``shrink``.
    """
    n = len(q)
    center = [mpq(0)] * n if center is None else [_to_mpq(c) for c in center]
    y = [0] * n
    state = {"bound": _to_mpq(bound)}

    def rec(i, used):
        # used = sum over levels > i of q_kk (y_k + c_k)^2
        c = center[i]
        for j in range(i + 1, n):
            if q[i][j]:
                c += q[i][j] * (y[j] + center[j])
        rem = state["bound"] - used
        lo, hi = _interval(c, rem / q[i][i])
        for x in range(lo, hi + 1):
            val = used + q[i][i] * (x + c) ** 2
            if val > state["bound"]:
                continue
            y[i] = x
            if i == 0:
                nb = visit(tuple(y), _to_fraction(val))
                if shrink and nb is not None:
                    state["bound"] = _to_mpq(nb)
            else:
                rec(i - 1, val)
        y[i] = 0

    rec(n - 1, mpq(0))


def _to_mpq(x):
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    return mpq(x)


def _to_fraction(x) -> Fraction:
    x = mpq(x)
    return Fraction(int(x.numerator), int(x.denominator))


def _reduced(lat: Lattice):
    if not lat.is_positive_definite:
        raise NotPositiveDefinite("lattice is not positive definite")
    red, t = lll(lat)
    return red, t


def short_vectors(lat: Lattice, bound: int) -> list[tuple[tuple[int, ...], int]]:
    """All nonzero v with (v, v) <= bound, one of each pair +-v.

    Vectors are in the lattice's own coordinates, ordered lexicographically by
    their coordinates in the LLL-reduced basis.
    """
    red, t = _reduced(lat)
    q = _cholesky(red.gram)
    found = []

    def visit(y, val):
        if val == 0:
            return None
        first = next(x for x in y if x)
        if first > 0:
            found.append(y)
        return None

    _enumerate(q, Fraction(bound), visit)
    found.sort()
    out = []
    for y in found:
        v = ea.matvec(t, y)
        out.append((v, lat.norm(v)))
    return out


class SearchLimit(LatticeError):
    """An enumeration was stopped by its node cap."""


def vectors_of_norm(lat: Lattice, target: int, max_nodes: Optional[int] = None):
    """All v with (v, v) == target, one of each pair +-v, in enumeration order."""
    red, t = _reduced(lat)
    q = _cholesky(red.gram)
    found = []
    seen = [0]

    def visit(y, val):
        seen[0] += 1
        if max_nodes is not None and seen[0] > max_nodes:
            raise SearchLimit(f"more than {max_nodes} vectors of norm <= {target}")
        if val == target and next(x for x in y if x) > 0:
            found.append(y)

    if target > 0:
        _enumerate(q, Fraction(target), visit)
    return [ea.matvec(t, y) for y in found]


def roots(lat: Lattice) -> list[tuple[int, ...]]:
    """Norm-2 vectors, one per +- pair."""
    return [v for v, n in short_vectors(lat, 2) if n == 2]


def box_vectors(lat: Lattice, bound: int) -> list[tuple[int, ...]]:
    """Naive enumeration over the bounding box; small ranks only."""
    inv = lat.gram_inverse
    n = lat.rank
    lims = [math.isqrt(int(bound * inv[i][i])) + 1 for i in range(n)]
    out = []
    for v in itertools.product(*(range(-m, m + 1) for m in lims)):
        if any(v) and lat.norm(v) <= bound:
            out.append(v)
    return out


# ------------------------------------------------------------ ADE decomposition

ROOT_COUNT = {
    "A": lambda n: n * (n + 1),
    "D": lambda n: 2 * n * (n - 1),
}
E_COUNT = {6: 72, 7: 126, 8: 240}


def identify_component(rank: int, count: int) -> str:
    if rank in E_COUNT and count == E_COUNT[rank]:
        return f"E{rank}"
    if count == rank * (rank + 1):
        return f"A{rank}"
    if rank >= 4 and count == 2 * rank * (rank - 1):
        return f"D{rank}"
    raise RuntimeError(f"no ADE type with rank {rank} and {count} roots")


@dataclass(frozen=True)
class RootComponent:
    type: str
    rank: int
    root_count: int
    basis: tuple[tuple[int, ...], ...]

    @property
    def coxeter_number(self) -> int:
        return self.root_count // self.rank


@dataclass(frozen=True)
class RootDecomposition:
    roots: tuple[tuple[int, ...], ...]
    basis: tuple[tuple[int, ...], ...]
    components: tuple[RootComponent, ...]

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def types(self) -> list[str]:
        return [c.type for c in self.components]

    def summary(self) -> str:
        if not self.components:
            return "no 2-roots"
        counts: dict[str, int] = {}
        for c in self.components:
            counts[c.type] = counts.get(c.type, 0) + 1
        parts = [f"{k if m == 1 else str(m) + k}" for k, m in counts.items()]
        return "+".join(parts)


def _type_key(t: str):
    return (-int(t[1:]), "EDA".index(t[0]))


def root_decomposition(lat: Lattice) -> RootDecomposition:
    """Root sublattice R split into irreducible ADE components."""
    rs = roots(lat)
    g = lat.gram
    grs = [ea.matvec(g, r) for r in rs]
    n = len(rs)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if ea.dot(grs[i], rs[j]) != 0:
                a, b = find(i), find(j)
                if a != b:
                    parent[max(a, b)] = min(a, b)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    comps = []
    for idx in groups.values():
        vecs = [rs[i] for i in idx]
        basis = ea.row_basis(vecs)
        comps.append(RootComponent(identify_component(len(basis), 2 * len(vecs)),
                                   len(basis), 2 * len(vecs), basis))
    comps.sort(key=lambda c: (_type_key(c.type), c.basis))
    total = ea.row_basis(rs) if rs else ()
    return RootDecomposition(tuple(rs), total, tuple(comps))


def coxeter_condition(components) -> bool:
    """All components not of type A1 share one Coxeter number.

    Accepts a RootDecomposition or a list of type names such as ["E8", "D10"].
    """
    if isinstance(components, RootDecomposition):
        hs = {c.coxeter_number for c in components.components if c.type != "A1"}
    else:
        hs = {coxeter_number(t) for t in components if t != "A1"}
    return len(hs) <= 1


def coxeter_number(t: str) -> int:
    kind, n = t[0], int(t[1:])
    if kind == "E":
        return E_COUNT[n] // n
    return ROOT_COUNT[kind](n) // n


# ------------------------------------------------------------ cosets

@dataclass(frozen=True)
class CosetMin:
    minimum: Fraction
    witness: tuple[Fraction, ...]   # a vector of L + gamma attaining the minimum


def coset_min(lat: Lattice, gamma) -> CosetMin:
    """Exact minimum of (v, v) over v in L + gamma (gamma in L (x) Q coords)."""
    red, t = _reduced(lat)
    t_inv = ea.inverse(t)
    gq = [Fraction(x) for x in gamma]
    g_red = [sum(t_inv[i][j] * gq[j] for j in range(len(gq))) for i in range(len(gq))]
    # shift into the fundamental box so the first guess is reasonable
    shift = [-(x + Fraction(1, 2)).__floor__() for x in g_red]
    start = [s + x for s, x in zip(shift, g_red)]
    q = _cholesky(red.gram)
    best_val = ea.bilinear(red.gram, start, start)
    best = {"y": tuple([0] * len(start)), "val": best_val}

    def visit(y, val):
        if val < best["val"] or (val == best["val"] and y < best["y"]):
            best["y"], best["val"] = y, val
        return best["val"]

    _enumerate(q, best_val, visit, center=start, shrink=True)
    y_red = [yi + si for yi, si in zip(best["y"], start)]
    w = tuple(sum(t[i][j] * y_red[j] for j in range(len(y_red))) for i in range(len(y_red)))
    return CosetMin(best["val"], w)


def vectors_in_coset(lat: Lattice, gamma, bound) -> list[tuple[tuple[Fraction, ...], Fraction]]:
    """All v in L + gamma with (v, v) <= bound."""
    red, t = _reduced(lat)
    t_inv = ea.inverse(t)
    gq = [Fraction(x) for x in gamma]
    n = len(gq)
    g_red = [sum(t_inv[i][j] * gq[j] for j in range(n)) for i in range(n)]
    q = _cholesky(red.gram)
    out = []

    def visit(y, val):
        z = [a + b for a, b in zip(y, g_red)]
        out.append((tuple(sum(t[i][j] * z[j] for j in range(n)) for i in range(n)), val))

    _enumerate(q, Fraction(bound), visit, center=g_red)
    return out


@dataclass(frozen=True)
class Norm2Result:
    holds: bool
    cosets: tuple[tuple[tuple[int, ...], CosetMin], ...]   # (A_L coords, minimum)

    @property
    def count(self) -> int:
        return len(self.cosets)


def norm2_check(lat: Lattice) -> Norm2Result:
    """Every coset of L in L' has a vector of norm <= 2; minima with witnesses."""
    from .discform import discriminant_form

    d = discriminant_form(lat)
    rows = []
    for c in d.elements():
        rows.append((c, coset_min(lat, d.lift(c))))
    return Norm2Result(all(m.minimum <= 2 for _, m in rows), tuple(rows))


def norm2_condition(lat: Lattice) -> bool:
    return norm2_check(lat).holds


def norm_residues(lat: Lattice, k: int) -> set[int]:
    """The set {(x, x) mod 2k : x in L}, for any even lattice.

    (x + k z)^2 = x^2 + 2k(x, z) + k^2 z^2 and k^2 z^2 is in 2kZ, so the
    residue only depends on x mod kL; the k^rank classes are enumerated.
    """
    n = lat.rank
    if k ** n > 5_000_000:
        raise LatticeError(f"{k}^{n} classes exceed the enumeration cap")
    g = np.array(lat.gram, dtype=np.int64)
    mod = 2 * k
    seen = set()
    pts = np.array(list(itertools.product(range(k), repeat=n)), dtype=np.int64)
    for chunk in np.array_split(pts, max(1, len(pts) // 65536)):
        vals = np.einsum("ij,jk,ik->i", chunk, g, chunk) % mod
        seen.update(int(x) for x in np.unique(vals))
    return seen


def has_no_2roots(lat: Lattice) -> tuple[Optional[bool], dict]:
    """Decide absence of norm-2 vectors; returns (verdict, witness data).

    Positive definite: exhaustive short-vector enumeration.  Otherwise a
    sufficient test: 2 is not a norm residue mod 2k for some small k; the
    verdict is None when that test is inconclusive.
    """
    if lat.is_positive_definite:
        sv = short_vectors(lat, 2)
        return (not sv), {"method": "short_vectors", "count": len(sv)}
    for k in (2, 3, 4, 6):
        try:
            res = norm_residues(lat, k)
        except LatticeError:
            continue
        if (2 % (2 * k)) not in res:
            return True, {"method": "norm_residues", "modulus": 2 * k, "residues": sorted(res)}
    return None, {"method": "inconclusive"}
