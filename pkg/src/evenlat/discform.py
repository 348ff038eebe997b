"""Discriminant forms (A_M, q) of even lattices and genus fingerprints.

Elements of A_M are coordinate tuples with respect to the SNF generators
g_1..g_k of orders d_1 | ... | d_k.  q-values live in [0, 2), b-values in
[0, 1), both as exact fractions.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, reduce
from typing import Iterator, Optional, Sequence

import numpy as np
import sympy

from . import exactarith as ea
from .lattice import Lattice, LatticeError, Unsupported

MILGRAM_MAX_ORDER = 10**6
BRUTE_FORCE_CAP = 256


class NotTwoElementary(LatticeError):
    pass


def _mod(x: Fraction, m: int) -> Fraction:
    return x - m * (x / m).__floor__()


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % k for k in range(2, math.isqrt(p) + 1))


@dataclass(frozen=True, eq=False)
class DiscriminantForm:
    """A finite quadratic form on Z/d_1 + ... + Z/d_k.

    ``lifts`` (rational vectors in the lattice basis) and ``coord_map`` are
    present when the form comes from a lattice; abstract forms built from
    p-parts or subquotients leave them empty.
    """

    orders: tuple[int, ...]
    q: tuple[Fraction, ...]
    b: tuple[tuple[Fraction, ...], ...]
    lifts: Optional[tuple[tuple[Fraction, ...], ...]] = None
    coord_map: Optional[tuple[tuple[int, ...], ...]] = field(default=None, repr=False)
    gram: Optional[tuple[tuple[int, ...], ...]] = field(default=None, repr=False)

    # ---------------------------------------------------------- group structure
    @property
    def size(self) -> int:
        return math.prod(self.orders)

    @property
    def length(self) -> int:
        return len(self.orders)

    @property
    def exponent(self) -> int:
        return reduce(_lcm, self.orders, 1)

    def elements(self) -> Iterator[tuple[int, ...]]:
        return itertools.product(*(range(d) for d in self.orders))

    def zero(self) -> tuple[int, ...]:
        return tuple(0 for _ in self.orders)

    def add(self, x, y):
        return tuple((a + b) % d for a, b, d in zip(x, y, self.orders))

    def scale(self, n: int, x):
        return tuple((n * a) % d for a, d in zip(x, self.orders))

    def order_of(self, x) -> int:
        return reduce(_lcm, (d // math.gcd(a, d) for a, d in zip(x, self.orders)), 1)

    # ---------------------------------------------------------- form values
    def q_of(self, x) -> Fraction:
        k = len(x)
        s = Fraction(0)
        for i in range(k):
            if x[i]:
                s += x[i] * x[i] * self.q[i]
                for j in range(i + 1, k):
                    if x[j]:
                        s += 2 * x[i] * x[j] * self.b[i][j]
        return _mod(s, 2)

    def b_of(self, x, y) -> Fraction:
        s = Fraction(0)
        for i, a in enumerate(x):
            if a:
                for j, c in enumerate(y):
                    if c:
                        s += a * c * self.b[i][j]
        return _mod(s, 1)

    @cached_property
    def _scaled(self):
        n = ea.common_denominator(list(self.q) + [x for row in self.b for x in row])
        qn = [[0] * self.length for _ in range(self.length)]
        for i in range(self.length):
            for j in range(self.length):
                if i == j:
                    qn[i][i] = int(self.q[i] * n) % (2 * n)
                else:
                    qn[i][j] = int(self.b[i][j] * n) % n
        return n, qn

    def all_q_values(self) -> tuple[np.ndarray, np.ndarray, int]:
        """(elements, N*q mod 2N, N) for every element, vectorised."""
        n, qn = self._scaled
        k = self.length
        if k == 0:
            return np.zeros((1, 0), dtype=np.int64), np.zeros(1, dtype=np.int64), n
        if self.size > MILGRAM_MAX_ORDER * 4:
            raise Unsupported(f"group of order {self.size} is too large to enumerate")
        mx = max(self.orders)
        if mx * mx * 2 * n * k * k > 2**62:
            raise Unsupported("values too large for vectorised enumeration")
        grids = np.meshgrid(*(np.arange(d, dtype=np.int64) for d in self.orders), indexing="ij")
        el = np.stack([g.ravel() for g in grids], axis=1)
        mod = 2 * n
        vals = np.zeros(len(el), dtype=np.int64)
        for i in range(k):
            vals = (vals + el[:, i] * el[:, i] % mod * qn[i][i]) % mod
            for j in range(i + 1, k):
                if qn[i][j]:
                    vals = (vals + 2 * (el[:, i] * el[:, j] % mod) * qn[i][j]) % mod
        return el, vals, n

    # ---------------------------------------------------------- lattice interface
    def lift(self, x) -> tuple[Fraction, ...]:
        if self.lifts is None:
            raise LatticeError("abstract form has no lifts")
        if not self.lifts:
            return tuple(Fraction(0) for _ in range(len(self.gram)))
        n = len(self.lifts[0])
        return tuple(sum((c * g[t] for c, g in zip(x, self.lifts)), Fraction(0)) for t in range(n))

    def coords_of(self, v) -> tuple[int, ...]:
        """Class in A_M of a dual-lattice vector v (lattice coordinates)."""
        if self.coord_map is None:
            raise LatticeError("abstract form has no coordinate map")
        y = [sum(Fraction(a) * b for a, b in zip(row, v)) for row in self.gram]
        if any(t.denominator != 1 for t in y):
            raise LatticeError("vector is not in the dual lattice")
        c = ea.matvec(self.coord_map, [int(t) for t in y])
        return tuple(x % d for x, d in zip(c, self.orders))

    # ---------------------------------------------------------- derived forms
    def subform(self, gens: Sequence[Sequence[int]], orders: Sequence[int]) -> "DiscriminantForm":
        """Abstract form on the subgroup with the given independent generators."""
        k = len(gens)
        q = tuple(self.q_of(g) for g in gens)
        b = tuple(tuple(self.b_of(gens[i], gens[j]) for j in range(k)) for i in range(k))
        return DiscriminantForm(tuple(orders), q, b)

    def p_part_generators(self, p: int) -> tuple[list[tuple[int, ...]], list[int]]:
        gens, ords = [], []
        for i, d in enumerate(self.orders):
            pk = 1
            while d % (pk * p) == 0:
                pk *= p
            if pk > 1:
                g = [0] * self.length
                g[i] = d // pk
                gens.append(tuple(g))
                ords.append(pk)
        return gens, ords

    def p_part(self, p: int) -> "DiscriminantForm":
        gens, ords = self.p_part_generators(p)
        return self.subform(gens, ords)

    @property
    def primes(self) -> list[int]:
        return sorted(sympy.primefactors(self.size)) if self.size > 1 else []

    def __repr__(self) -> str:
        qs = ", ".join(str(x) for x in self.q)
        return f"DiscriminantForm(orders={self.orders}, q=[{qs}])"


def discriminant_form(lat: Lattice) -> DiscriminantForm:
    """(A_M, q) from the SNF G = U D V: generator lifts are V^-1 e_i / d_i."""
    g = lat.gram
    snf = ea.smith_normal_form(g)
    diag = snf.diagonal
    idx = [i for i, d in enumerate(diag) if d > 1]
    orders = tuple(diag[i] for i in idx)
    vinv = snf.V_inv
    n = lat.rank
    lifts = tuple(tuple(Fraction(vinv[t][i], diag[i]) for t in range(n)) for i in idx)
    k = len(idx)
    gl = [[sum(Fraction(g[r][s]) * v[s] for s in range(n)) for r in range(n)] for v in lifts]
    b_raw = [[sum(gl[i][t] * lifts[j][t] for t in range(n)) for j in range(k)] for i in range(k)]
    q = tuple(_mod(b_raw[i][i], 2) for i in range(k))
    b = tuple(tuple(_mod(b_raw[i][j], 1) for j in range(k)) for i in range(k))
    coord_map = tuple(snf.U_inv[i] for i in idx)
    return DiscriminantForm(orders, q, b, lifts, coord_map, g)


# ---------------------------------------------------------------- invariants

def _form(x) -> DiscriminantForm:
    return x if isinstance(x, DiscriminantForm) else discriminant_form(x)


def length(m) -> int:
    return _form(m).length


def exponent(m) -> int:
    return _form(m).exponent


def p_length(m, p: int) -> int:
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    return sum(1 for d in _form(m).orders if d % p == 0)


def level(m) -> int:
    """Smallest m with m*(x, x) in 2Z for all x in the dual lattice."""
    d = _form(m)
    lv = 1
    for i in range(d.length):
        lv = _lcm(lv, (d.q[i] / 2).denominator)
        for j in range(i + 1, d.length):
            lv = _lcm(lv, d.b[i][j].denominator)
    return lv


def gauss_sum(d: DiscriminantForm) -> complex:
    _, vals, n = d.all_q_values()
    counts = np.bincount(vals, minlength=2 * n)
    return sum(int(c) * cmath.exp(1j * math.pi * k / n) for k, c in enumerate(counts) if c)


def milgram_signature(d: DiscriminantForm) -> int:
    """s mod 8 with sum_x exp(pi i q(x)) = sqrt|A| exp(2 pi i s / 8).

    The residue mod 4 is fixed by the exact identity (S zeta_8^-s)^2 = |A|
    in Z[zeta_M]; the remaining sign is read off numerically, where the two
    candidates differ by 2 sqrt|A| >= 2.
    """
    if d.size > MILGRAM_MAX_ORDER:
        raise Unsupported(f"Gauss sum over {d.size} elements exceeds {MILGRAM_MAX_ORDER}")
    _, vals, n = d.all_q_values()
    counts = np.bincount(vals, minlength=2 * n)
    big = _lcm(2 * n, 8)
    x = sympy.Symbol("x")
    phi = sympy.Poly(sympy.cyclotomic_poly(big, x), x)
    step = big // (2 * n)
    coeffs = [0] * big
    for k, c in enumerate(counts):
        if c:
            coeffs[(k * step) % big] += int(c)
    s_poly = sympy.Poly(list(reversed(coeffs)), x)
    eighth = big // 8
    size = d.size
    candidates = []
    for s in range(4):
        shift = sympy.Poly(x ** ((-s * eighth) % big), x)
        t = (s_poly * shift).rem(phi)
        if ((t * t) - size).rem(phi).is_zero:
            candidates.append(s)
    if len(candidates) != 1:
        raise RuntimeError(f"Gauss sum not of Milgram shape: {candidates}")
    s0 = candidates[0]
    numeric = gauss_sum(d) * cmath.exp(-2j * math.pi * s0 / 8)
    if abs(numeric.imag) > 0.5 or abs(abs(numeric.real) - math.sqrt(size)) > 0.5:
        raise RuntimeError("numeric Gauss sum disagrees with the exact residue")
    return s0 if numeric.real > 0 else s0 + 4


def is_two_elementary(m) -> bool:
    return all(x == 2 for x in _form(m).orders)


def two_elementary_delta(d: DiscriminantForm) -> int:
    return 0 if all(x.denominator == 1 for x in d.q) else 1


def two_elementary_invariants(lat: Lattice) -> tuple[int, int, int, int]:
    """(n+, n-, a, delta) for a 2-elementary lattice."""
    d = discriminant_form(lat)
    if not is_two_elementary(d):
        raise NotTwoElementary(f"discriminant group has orders {d.orders}")
    npos, nneg = lat.signature
    return npos, nneg, d.length, two_elementary_delta(d)


def two_elementary_consistency(n: int, a: int) -> str:
    """Existence/uniqueness verdict for 2-elementary lattices of signature (n, 2)."""
    if n < 3:
        raise ValueError("needs n >= 3")
    if a < 0 or a > n + 2 or (n + a) % 2:
        return "impossible"
    if (n - 2) % 4:
        return "unique"
    return "up_to_two"


# ---------------------------------------------------------------- Jordan data

def odd_jordan_invariants(d: DiscriminantForm, p: int) -> tuple[tuple[int, int, int], ...]:
    """Complete invariant of the p-part for odd p: (k, rank, legendre) per scale p^k."""
    part = d.p_part(p)
    gens = [tuple(int(i == j) for j in range(part.length)) for i in range(part.length)]
    ords = list(part.orders)
    blocks: dict[int, list[int]] = {}
    while gens:
        vals = [[part.b_of(x, y) for y in gens] for x in gens]
        best = max(v.denominator for row in vals for v in row)
        piv = next((i for i in range(len(gens)) if vals[i][i].denominator == best), None)
        if piv is None:
            i, j = next((i, j) for i in range(len(gens)) for j in range(len(gens))
                        if vals[i][j].denominator == best)
            gens[i] = part.add(gens[i], gens[j])
            continue
        x = gens.pop(piv)
        ords.pop(piv)
        bxx = part.b_of(x, x)
        pk = bxx.denominator
        u = bxx.numerator % pk
        uinv = pow(u, -1, pk)
        rest = []
        for y in gens:
            w = (part.b_of(x, y) * pk)
            assert w.denominator == 1
            c = (int(w) * uinv) % pk
            rest.append(part.add(y, part.scale(-c, x)))
        gens = rest
        k = 0
        while p ** k < pk:
            k += 1
        blocks.setdefault(k, []).append(u)
    out = []
    for k in sorted(blocks):
        us = blocks[k]
        prod = math.prod(us) % p
        leg = 1 if pow(prod, (p - 1) // 2, p) == 1 else -1
        out.append((k, len(us), leg))
    return tuple(out)


def forms_isomorphic(f: DiscriminantForm, h: DiscriminantForm) -> bool:
    """Backtracking search for a q-preserving group isomorphism f -> h."""
    if sorted(f.orders) != sorted(h.orders):
        return False
    if f.length == 0:
        return True
    els = list(h.elements())
    qh = {e: h.q_of(e) for e in els}
    oh = {e: h.order_of(e) for e in els}
    order = sorted(range(f.length), key=lambda i: -f.orders[i])
    unit = [tuple(int(i == j) for j in range(f.length)) for i in range(f.length)]
    chosen: list = []

    def rec(pos):
        if pos == len(order):
            return True
        i = order[pos]
        gi = unit[i]
        for e in els:
            if oh[e] != f.orders[i] or qh[e] != f.q[i]:
                continue
            if all(h.b_of(e, chosen[t]) == f.b_of(gi, unit[order[t]]) for t in range(pos)):
                chosen.append(e)
                if rec(pos + 1):
                    return True
                chosen.pop()
        return False

    return rec(0)


@dataclass(frozen=True, eq=False)
class GenusSignature:
    """Signature plus per-prime data of the discriminant form.

    Odd primes and elementary 2-parts carry complete closed invariants; a
    non-elementary 2-part keeps its abstract form and is compared by
    exhaustive isomorphism search up to ``BRUTE_FORCE_CAP`` elements.
    """

    signature: tuple[int, int]
    orders: tuple[int, ...]
    odd: tuple[tuple[int, tuple], ...]
    two: tuple
    two_form: Optional[DiscriminantForm] = field(default=None, repr=False)

    def __eq__(self, other):
        if not isinstance(other, GenusSignature):
            return NotImplemented
        if (self.signature, self.orders, self.odd) != (other.signature, other.orders, other.odd):
            return False
        if self.two[0] != other.two[0]:
            return False
        if self.two[0] != "general":
            return self.two == other.two
        if self.two != other.two:  # orders and 2-part Gauss residue
            return False
        if self.two_form.size > BRUTE_FORCE_CAP:
            raise Unsupported(f"prime 2: 2-part of order {self.two_form.size} exceeds "
                              f"brute-force cap {BRUTE_FORCE_CAP}")
        return forms_isomorphic(self.two_form, other.two_form)

    __hash__ = None  # type: ignore[assignment]

    def to_json(self) -> dict:
        out = {
            "signature": list(self.signature),
            "orders": list(self.orders),
            "odd": {str(p): [list(t) for t in inv] for p, inv in self.odd},
            "two": list(self.two),
        }
        if self.two_form is not None:
            out["two_form"] = {"orders": list(self.two_form.orders),
                               "q": [str(x) for x in self.two_form.q]}
        return out


def genus_signature(lat: Lattice) -> GenusSignature:
    d = discriminant_form(lat)
    odd = []
    for p in d.primes:
        if p != 2:
            odd.append((p, odd_jordan_invariants(d, p)))
    two_part = d.p_part(2)
    if two_part.length == 0:
        two: tuple = ("trivial",)
        form = None
    elif all(o == 2 for o in two_part.orders):
        two = ("elementary", two_part.length, two_elementary_delta(two_part),
               milgram_signature(two_part))
        form = None
    else:
        two = ("general", tuple(sorted(two_part.orders)), milgram_signature(two_part))
        form = two_part
    return GenusSignature(lat.signature, d.orders, tuple(odd), two, form)


def genus_equal(a: Lattice, b: Lattice) -> bool:
    """Same signature and isomorphic discriminant forms."""
    if a.signature != b.signature or abs(a.det) != abs(b.det):
        return False
    return genus_signature(a) == genus_signature(b)


# ---------------------------------------------------------------- isotropy

def is_isotropic_element(d: DiscriminantForm, x) -> bool:
    return d.q_of(x) == 0


def isotropic_elements(d: DiscriminantForm) -> list[tuple[int, ...]]:
    """Nonzero x with q(x) = 0 mod 2, in lexicographic order."""
    if d.length == 0:
        return []
    el, vals, _ = d.all_q_values()
    hits = np.nonzero(vals == 0)[0]
    out = [tuple(int(v) for v in el[i]) for i in hits]
    return [x for x in out if any(x)]
