"""Even overlattices, isotropic subgroups and orthogonal splittings.

Coordinates: vectors are row tuples in the basis of the lattice they belong
to.  A "basis" matrix has one basis vector per row, written in the
coordinates of an ambient lattice.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence

from . import exactarith as ea
from .discform import (DiscriminantForm, discriminant_form, genus_equal, isotropic_elements,
                       p_length)
from .lattice import (Embedded, Lattice, LatticeError, NotEven, Unsupported, divisibility,
                      lll, orthogonal_complement)
from .roots import SearchLimit, _cholesky, _enumerate, roots

MAX_GROUP_ORDER = 2**14
MAX_NODES = 10**6


class NotFound(LatticeError):
    """A search came back empty.

    ``proven`` is True when the search was exhaustive (the object provably
    does not exist) and False when a cap stopped it.
    """

    def __init__(self, message: str, proven: bool = False):
        super().__init__(message)
        self.proven = proven


class PreconditionFailed(LatticeError):
    pass


class BoundExceeded(Unsupported):
    pass


class PipelineError(LatticeError):
    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage {stage!r} failed: {cause}")
        self.stage = stage
        self.cause = cause


# ------------------------------------------------------------ subgroups

@dataclass(frozen=True)
class Subgroup:
    generators: tuple[tuple[int, ...], ...]
    elements: frozenset = field(repr=False)

    @property
    def order(self) -> int:
        return len(self.elements)

    def key(self):
        return (self.order, tuple(sorted(self.elements)))


def span(d: DiscriminantForm, gens: Iterable[Sequence[int]]) -> frozenset:
    """All elements of the subgroup generated by ``gens``."""
    elems = {d.zero()}
    for g in gens:
        g = tuple(g)
        if g in elems:
            continue
        new = set(elems)
        frontier = list(elems)
        mult = g
        while mult not in elems:
            for x in frontier:
                new.add(d.add(x, mult))
            mult = d.add(mult, g)
        elems = new
    return frozenset(elems)


def subgroup(d: DiscriminantForm, gens: Iterable[Sequence[int]]) -> Subgroup:
    gens = tuple(tuple(g) for g in gens)
    return Subgroup(gens, span(d, gens))


def is_isotropic_subgroup(d: DiscriminantForm, gens: Sequence[Sequence[int]]) -> bool:
    """q vanishes on every generator and b on every pair (hence on the span)."""
    for i, g in enumerate(gens):
        if d.q_of(g) != 0:
            return False
        for h in gens[i + 1:]:
            if d.b_of(g, h) != 0:
                return False
    return True


def isotropic_subgroups(d: DiscriminantForm, max_order: Optional[int] = None,
                        max_count: int = 10**5) -> list[Subgroup]:
    """Every subgroup H with q|H = 0 mod 2 and b|H = 0 mod 1, |H| <= max_order.

    Grown one isotropic element at a time from {0}; duplicates are removed
    by comparing element sets.  Sorted by (order, elements).
    """
    if d.size > MAX_GROUP_ORDER:
        raise BoundExceeded(f"|A| = {d.size} exceeds {MAX_GROUP_ORDER}")
    cap = d.size if max_order is None else max_order
    iso = isotropic_elements(d)
    trivial = subgroup(d, [])
    found = {trivial.elements: trivial}
    frontier = [trivial]
    while frontier:
        nxt = []
        for h in frontier:
            for x in iso:
                if x in h.elements:
                    continue
                if any(d.b_of(x, g) != 0 for g in h.generators):
                    continue
                # |<H, x>| = |H| * (order of x modulo H)
                k, m = 1, x
                while m not in h.elements:
                    m = d.add(m, x)
                    k += 1
                if h.order * k > cap:
                    continue
                gens = h.generators + (x,)
                elems = span(d, gens)
                if elems not in found:
                    s = Subgroup(gens, elems)
                    found[elems] = s
                    nxt.append(s)
                    if len(found) > max_count:
                        raise BoundExceeded(f"more than {max_count} isotropic subgroups")
        frontier = nxt
    return sorted(found.values(), key=Subgroup.key)


# ------------------------------------------------------------ overlattices

@dataclass(frozen=True)
class OverlatticeStep:
    base: Lattice
    generators: tuple[tuple[int, ...], ...]      # elements of A_base
    result: Lattice
    index: int
    basis: tuple[tuple[Fraction, ...], ...]      # result basis in base coordinates
    inclusion: ea.IntMatrix                      # base basis in result coordinates

    def to_json(self) -> dict:
        return {
            "base": self.base.to_json(),
            "generators": [list(g) for g in self.generators],
            "result": self.result.to_json(),
            "index": self.index,
            "inclusion": [list(r) for r in self.inclusion],
        }


def _gens_of(d: DiscriminantForm, group) -> tuple[tuple[int, ...], ...]:
    if isinstance(group, Subgroup):
        return group.generators
    return tuple(tuple(g) for g in group)


def overlattice(m: Lattice, group, disc: Optional[DiscriminantForm] = None) -> OverlatticeStep:
    """The even overlattice M + <lifts of G> for an isotropic subgroup G of A_M."""
    d = disc if disc is not None else discriminant_form(m)
    gens = _gens_of(d, group)
    if not is_isotropic_subgroup(d, gens):
        raise NotEven("subgroup is not isotropic: the overlattice would not be even")
    n = m.rank
    if not any(any(g) for g in gens):
        ident = ea.identity(n)
        return OverlatticeStep(m, gens, m, 1, tuple(tuple(Fraction(x) for x in r) for r in ident),
                               ident)
    lifts = [d.lift(g) for g in gens]
    den = ea.common_denominator([x for v in lifts for x in v])
    rows = [[den * int(i == j) for j in range(n)] for i in range(n)]
    rows += [[int(x * den) for x in v] for v in lifts]
    bn = ea.row_basis(rows)
    basis = tuple(tuple(Fraction(x, den) for x in r) for r in bn)
    gram = ea.congruent(m.gram, bn)
    d2 = den * den
    if any(x % d2 for row in gram for x in row):
        raise NotEven("lifted subgroup is not integral")
    res = Lattice(ea.as_matrix([[x // d2 for x in row] for row in gram]))
    inv = ea.inverse(bn)
    inclusion = ea.as_matrix([[int(x * den) for x in row] for row in inv])
    index = abs(ea.det(inclusion))
    return OverlatticeStep(m, gens, res, index, basis, inclusion)


def all_even_overlattices(m: Lattice, max_index: int) -> list[OverlatticeStep]:
    d = discriminant_form(m)
    return [overlattice(m, h, d) for h in isotropic_subgroups(d, max_index)]


def is_maximal(m: Lattice) -> bool:
    return not isotropic_elements(discriminant_form(m))


def maximal_even_overlattice(m: Lattice) -> list[OverlatticeStep]:
    """A chain of cyclic steps ending at a maximal even overlattice.

    Each step adjoins the lexicographically first isotropic element of the
    current discriminant form.  Returns [] when M is already maximal.
    """
    chain = []
    cur = m
    while True:
        d = discriminant_form(cur)
        iso = isotropic_elements(d)
        if not iso:
            return chain
        step = overlattice(cur, [iso[0]], d)
        chain.append(step)
        cur = step.result


def maximal_even_overlattices(m: Lattice) -> list[Lattice]:
    """One overlattice per maximal isotropic subgroup of A_M."""
    d = discriminant_form(m)
    subs = isotropic_subgroups(d)
    out = []
    for h in subs:
        if any(h.elements < k.elements for k in subs):
            continue
        out.append(overlattice(m, h, d).result)
    return out


def compose_basis(step_basis, inner) -> tuple[tuple[Fraction, ...], ...]:
    """Rows of ``inner`` (coordinates in the step's result) in base coordinates."""
    n = len(step_basis[0])
    return tuple(tuple(sum((Fraction(r[k]) * step_basis[k][j] for k in range(len(r))), Fraction(0))
                       for j in range(n)) for r in inner)


# ------------------------------------------------------------ sublattices M_G

def sublattice_from_subgroup(m0: Lattice, vectors: Sequence[Sequence]) -> Embedded:
    """M_G = {x in M0 : (x, y) in Z for all y}, y rational in M0 coordinates."""
    n = m0.rank
    if not vectors:
        return Embedded(m0, ea.identity(n))
    rows = []
    for y in vectors:
        if len(y) != n:
            raise LatticeError(f"generator of length {len(y)} for a rank {n} lattice")
        rows.append([sum(m0.gram[i][j] * Fraction(y[j]) for j in range(n)) for i in range(n)])
    den = ea.common_denominator([x for r in rows for x in r])
    irows = [[int(x * den) for x in r] for r in rows]
    basis = ea.congruence_kernel(irows, den)
    return Embedded(Lattice(ea.congruent(m0.gram, basis)), basis)


def index_in(sub: Embedded) -> int:
    return abs(ea.det(sub.embedding))


# ------------------------------------------------------------ isotropic vectors

@dataclass(frozen=True)
class IsotropicVector:
    vector: tuple[int, ...]
    divisibility: int


class _Budget:
    def __init__(self, nodes: int):
        self.left = nodes

    def spend(self, k: int = 1):
        self.left -= k
        if self.left < 0:
            raise SearchLimit("node cap exhausted")


def _primitive(v) -> tuple[int, ...]:
    c = ea.content(v)
    return tuple(x // c for x in v)


def _negative_vector(lat: Lattice) -> tuple[int, ...]:
    """A primitive vector of negative norm (exact symmetric elimination)."""
    g = lat.gram
    n = lat.rank
    for i in range(n):
        if g[i][i] < 0:
            return tuple(int(i == j) for j in range(n))
    # rational orthogonal basis: rows of B with B G B^T diagonal
    basis = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    a = [[Fraction(x) for x in row] for row in g]
    for k in range(n):
        if a[k][k] == 0:
            for j in range(k + 1, n):
                if a[k][j] != 0:
                    # replace e_k by e_k + e_j (or e_k - e_j) to make the pivot nonzero
                    s = 1 if a[k][k] + 2 * a[k][j] + a[j][j] != 0 else -1
                    for t in range(n):
                        a[k][t] += s * a[j][t]
                    for t in range(n):
                        a[t][k] += s * a[t][j]
                    basis[k] = [x + s * y for x, y in zip(basis[k], basis[j])]
                    break
        if a[k][k] == 0:
            continue
        for j in range(k + 1, n):
            f = a[j][k] / a[k][k]
            if f:
                for t in range(n):
                    a[j][t] -= f * a[k][t]
                for t in range(n):
                    a[t][j] -= f * a[t][k]
                basis[j] = [x - f * y for x, y in zip(basis[j], basis[k])]
        if a[k][k] < 0:
            den = ea.common_denominator(basis[k])
            return _primitive([int(x * den) for x in basis[k]])
    raise LatticeError("lattice has no vector of negative norm")


def _l1_candidates(lat: Lattice, budget: _Budget, radius: int) -> Iterator[tuple[int, ...]]:
    """Primitive isotropic vectors by increasing L1 norm (first nonzero entry > 0)."""
    n = lat.rank
    g = lat.gram
    for r in range(1, radius + 1):
        for support in range(1, min(n, r) + 1):
            for pos in itertools.combinations(range(n), support):
                for parts in _compositions(r, support):
                    for signs in itertools.product((1, -1), repeat=support - 1):
                        budget.spend()
                        v = [0] * n
                        v[pos[0]] = parts[0]
                        for p, a, s in zip(pos[1:], parts[1:], signs):
                            v[p] = s * a
                        if math.gcd(*parts) != 1:
                            continue
                        if ea.bilinear(g, v, v) == 0:
                            yield tuple(v)


def _compositions(total: int, k: int):
    if k == 1:
        yield (total,)
        return
    for first in range(1, total - k + 2):
        for rest in _compositions(total - first, k - 1):
            yield (first,) + rest


class _Hit(Exception):
    def __init__(self, vector):
        self.vector = vector


def _structured_search(lat: Lattice, budget: _Budget, accept) -> None:
    """Isotropic vectors k*u + w with u negative and w orthogonal to u.

    For signature (n, 1) the complement P of u is positive definite; k runs
    upwards and w over the vectors of P of norm -k^2 (u, u).  With more
    negative directions the search recurses into P.  ``accept`` raises _Hit
    to stop the search.
    """
    u = _negative_vector(lat)
    comp = orthogonal_complement(u, lat)
    p = comp.lattice
    emb_t = ea.transpose(comp.embedding)
    if p.signature[1] > 0:
        _structured_search(p, budget, lambda c: accept(_primitive(ea.matvec(emb_t, c))))
        return
    red, t = lll(p)
    q = _cholesky(red.gram)
    to_amb = ea.matmul(emb_t, t)          # reduced coordinates -> ambient
    nu = -lat.norm(u)
    k = 1
    while True:
        target = k * k * nu

        def visit(y, val, k=k, target=target):
            budget.spend()
            if val != target:
                return None
            w = ea.matvec(to_amb, y)
            for sgn in (1, -1):
                accept(_primitive(tuple(k * a + sgn * b for a, b in zip(u, w))))
            return None

        _enumerate(q, Fraction(target), visit)
        k += 1


def find_isotropic_primitive(lat: Lattice, div: Optional[int] = None,
                             max_nodes: int = MAX_NODES) -> IsotropicVector:
    """A primitive c with (c, c) = 0, and (c, M) = div Z when ``div`` is given.

    Small vectors by L1 norm are tried first, then the structured search.
    Raises NotFound (never proven) when the node cap is exhausted.
    """
    n_pos, n_neg = lat.signature
    if n_pos == 0 or n_neg == 0:
        raise NotFound("definite lattices have no isotropic vectors", proven=True)
    budget = _Budget(max_nodes)

    def accept(c):
        if lat.norm(c) == 0 and (div is None or divisibility(c, lat) == div):
            raise _Hit(c)

    try:
        for c in _l1_candidates(lat, budget, 3):
            accept(c)
        _structured_search(lat, budget, accept)
    except _Hit as hit:
        return IsotropicVector(tuple(hit.vector), divisibility(hit.vector, lat))
    except SearchLimit:
        pass
    want = "" if div is None else f" with divisibility {div}"
    raise NotFound(f"no primitive isotropic vector{want} within {max_nodes} nodes")


# ------------------------------------------------------------ splittings

@dataclass(frozen=True)
class Splitting:
    """M = X + K with an explicit unimodular witness.

    ``witness`` has rows: the basis of the split summand X followed by the
    basis of K, all in M coordinates, so witness * G * witness^T is block
    diagonal diag(G_X, G_K).
    """
    summand: Lattice
    complement: Optional[Lattice]
    witness: ea.IntMatrix

    def check(self, m: Lattice) -> bool:
        parts = [self.summand.gram] + ([self.complement.gram] if self.complement else [])
        blocks = ea.block_diag(*parts)
        return ea.congruent(m.gram, self.witness) == blocks and ea.is_unimodular(self.witness)

    def to_json(self) -> dict:
        return {
            "summand": [list(r) for r in self.summand.gram],
            "complement": [list(r) for r in self.complement.gram] if self.complement else None,
            "witness": [list(r) for r in self.witness],
        }


def _reduce_complement(k_basis, g):
    """LLL-reduce a positive definite complement; leave indefinite ones alone."""
    k = Lattice(ea.congruent(g, k_basis))
    if k.is_positive_definite:
        red, t = lll(k)
        k_basis = ea.matmul(ea.transpose(t), k_basis)
        k = red
    return k, k_basis


def hyperbolic_pair(lat: Lattice, c) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Complete an isotropic c with (c, M) = Z to (c, d), (c,d) = 1, (d,d) = 0."""
    gc = ea.matvec(lat.gram, c)
    d1 = ea.solve_integral((gc,), (1,))
    if d1 is None:
        raise LatticeError("(c, M) != Z: no hyperbolic partner")
    t = lat.norm(d1) // 2
    d = tuple(a - t * b for a, b in zip(d1, c))
    return tuple(c), d


def split_U(lat: Lattice, max_nodes: int = MAX_NODES) -> Splitting:
    """M = U + K via an isotropic vector of divisibility 1."""
    if lat.rank < 2:
        raise NotFound("rank < 2", proven=True)
    c = find_isotropic_primitive(lat, 1, max_nodes).vector
    c, d = hyperbolic_pair(lat, c)
    g = lat.gram
    kb = ea.kernel_basis((ea.matvec(g, c), ea.matvec(g, d)))
    u = Lattice(((0, 1), (1, 0)), "U")
    if not kb:
        return Splitting(u, None, ea.as_matrix([c, d]))
    k, kb = _reduce_complement(kb, g)
    w = ea.as_matrix([c, d] + [list(r) for r in kb])
    return Splitting(u, k, w)


def split_2U(lat: Lattice, max_nodes: int = MAX_NODES) -> Splitting:
    """M = 2U + L by splitting U twice."""
    s1 = split_U(lat, max_nodes)
    if s1.complement is None:
        raise NotFound("nothing left after the first U", proven=True)
    s2 = split_U(s1.complement, max_nodes)
    kb1 = s1.witness[2:]
    rows2 = ea.matmul(s2.witness, kb1)
    w = ea.as_matrix(list(s1.witness[:2]) + list(rows2))
    u2 = Lattice(ea.block_diag(((0, 1), (1, 0)), ((0, 1), (1, 0))), "2U")
    return Splitting(u2, s2.complement, w)


def _split_root(lat: Lattice, v) -> Splitting:
    """M = Zv + v^perp for a 2-root v with (v, M) = 2Z."""
    comp = orthogonal_complement(v, lat)
    k, kb = _reduce_complement(comp.embedding, lat.gram)
    w = ea.as_matrix([list(v)] + [list(r) for r in kb])
    if not ea.is_unimodular(w):
        raise LatticeError("root does not split off")
    return Splitting(Lattice(((2,),), "A1"), k, w)


def split_A1(lat: Lattice, max_nodes: int = MAX_NODES) -> Splitting:
    """M = A1 + K from a 2-root of divisibility 2.

    Such a root v gives v/2 in M' with q(v/2) = 1/2, so when A_M has no
    element of order 2 with q = 1/2 the answer is a proven NotFound.  Search
    order: roots of the definite part after split_2U (lexicographic), then
    the explicit candidate 2e + b f + w built from an element of A_M with
    q = 1/2 (needs a 2U splitting).
    """
    d = discriminant_form(lat)
    halves = [x for x in d.elements()
              if any(x) and d.order_of(x) == 2 and d.q_of(x) == Fraction(1, 2)]
    if not halves:
        raise NotFound("A_M has no element of order 2 with q = 1/2", proven=True)
    if lat.is_positive_definite:
        for r in roots(lat):
            if divisibility(r, lat) == 2:
                return _split_root(lat, r)
        raise NotFound("no 2-root of divisibility 2", proven=True)
    try:
        s = split_2U(lat, max_nodes)
    except NotFound as e:
        raise NotFound(f"no 2U splitting to search in: {e}") from e
    kb = s.witness[4:]
    if s.complement is not None and s.complement.is_positive_definite:
        for r in roots(s.complement):
            if divisibility(r, s.complement) == 2:
                v = ea.matvec(ea.transpose(kb), r)
                return _split_root(lat, v)
    # 2e + b f + w with w = 2 * lift of an element gamma, q(gamma) = 1/2
    gamma = halves[0]
    y = d.lift(gamma)
    # coordinates of 2y in the 2U + L basis: 2y is in M, so solve exactly
    winv = ea.inverse(s.witness)
    z = [sum(2 * y[i] * winv[i][j] for i in range(lat.rank)) for j in range(lat.rank)]
    zi = [int(x) for x in z]
    if any(Fraction(a) != b for a, b in zip(zi, z)):
        raise LatticeError("twice a lift of an order-2 element is not in M")
    # keep only the L part of 2y, re-solve for the U coordinates
    w_l = [0, 0, 0, 0] + zi[4:]
    w_amb = ea.matvec(ea.transpose(s.witness), w_l)
    nw = lat.norm(w_amb)
    b = (2 - nw) // 4
    e1, f1 = s.witness[0], s.witness[1]
    v = tuple(2 * a + b * c + x for a, c, x in zip(e1, f1, w_amb))
    if lat.norm(v) != 2 or divisibility(v, lat) != 2:
        raise LatticeError("constructed root has the wrong norm or divisibility")
    return _split_root(lat, v)


# ------------------------------------------------------------ genus representatives

@dataclass(frozen=True)
class GenusRepResult:
    """T in the genus of L with a 2-root; ``method`` is "identity" or "construction".

    For the construction the intermediate objects are kept as witnesses:
    M = U + L, the complement M_v of v = e + f, its splitting M_v = U + L0
    and the inclusion of L0 + Zv into T (rows in T coordinates).
    """
    lattice: Lattice
    root: tuple[int, ...]
    method: str
    ambient: Optional[Lattice] = None
    v_complement: Optional[Embedded] = None
    u_split: Optional[Splitting] = None
    l0: Optional[Lattice] = None
    inclusion: Optional[ea.IntMatrix] = None
    index: int = 1

    def to_json(self) -> dict:
        out = {"method": self.method, "gram": [list(r) for r in self.lattice.gram],
               "root": list(self.root), "index": self.index}
        if self.method == "construction":
            out["l0"] = [list(r) for r in self.l0.gram]
            out["inclusion"] = [list(r) for r in self.inclusion]
        return out


def check_length_preconditions(lat: Lattice) -> None:
    d = discriminant_form(lat)
    r = lat.rank
    for p in d.primes:
        lp = p_length(d, p)
        limit = r - 3 if p == 2 else r - 2
        if lp > limit:
            raise PreconditionFailed(f"l(A_L)_{p} = {lp} > {limit}")


def genus_rep_with_2roots(lat: Lattice, max_nodes: int = MAX_NODES,
                          shortcut: bool = True) -> GenusRepResult:
    """A lattice in the genus of a positive definite L that has a 2-root.

    With ``shortcut`` an L that already has 2-roots is returned as is.
    Otherwise: M = U + L, v = e + f, M_v = v^perp = Zu + L; split
    M_v = U + L0.  The complement T of that U inside M is an even
    overlattice of L0 + Zv with U + T = M, hence genus(T) = genus(L), and
    v lies in T.
    """
    if not lat.is_positive_definite:
        raise PreconditionFailed("L must be positive definite")
    if shortcut:
        rs = roots(lat)
        if rs:
            return GenusRepResult(lat, tuple(rs[0]), "identity")
    check_length_preconditions(lat)
    n = lat.rank
    m = Lattice(ea.block_diag(((0, 1), (1, 0)), lat.gram))
    v = (1, 1) + (0,) * n
    try:
        mv = orthogonal_complement(v, m)
    except LatticeError as e:
        raise PipelineError("complement of v", e) from e
    try:
        sp = split_U(mv.lattice, max_nodes)
    except LatticeError as e:
        raise PipelineError("split_U(M_v)", e) from e
    emb = ea.transpose(mv.embedding)
    c = ea.matvec(emb, sp.witness[0])
    d = ea.matvec(emb, sp.witness[1])
    l0_rows = [ea.matvec(emb, r) for r in sp.witness[2:]]
    g = m.gram
    tb = ea.kernel_basis((ea.matvec(g, c), ea.matvec(g, d)))
    t_lat, tb = _reduce_complement(tb, g)
    # express L0 + Zv in the T basis
    inc = []
    tbt = ea.transpose(tb)
    for row in l0_rows + [list(v)]:
        x = ea.solve_integral(tbt, row)
        if x is None:
            raise PipelineError("inclusion", LatticeError("L0 + Zv is not inside T"))
        inc.append(x)
    inclusion = ea.as_matrix(inc)
    index = abs(ea.det(inclusion))
    root = tuple(inc[-1])
    if t_lat.norm(root) != 2:
        raise PipelineError("root", LatticeError("v does not have norm 2 in T"))
    if not genus_equal(t_lat, lat):
        raise PipelineError("genus", LatticeError("T is not in the genus of L"))
    return GenusRepResult(t_lat, root, "construction", m, mv, sp, sp.complement, inclusion, index)


# ------------------------------------------------------------ exponent-preserving overlattices

@dataclass(frozen=True)
class OverlatticeChain:
    steps: tuple[OverlatticeStep, ...]
    start: Lattice
    splitting: Optional[Splitting] = None

    @property
    def result(self) -> Lattice:
        return self.steps[-1].result if self.steps else self.start

    @property
    def index(self) -> int:
        return math.prod(s.index for s in self.steps)


def exponent_preserving_overlattice(m: Lattice, max_nodes: int = 2000) -> OverlatticeChain:
    """An even overlattice M1 with e(M1) = e(M), l(M1) <= 5 and M1 = 2U + L.

    Depth-first over cyclic isotropic steps that keep the exponent; stops at
    the first lattice of length <= 5 that splits 2U.
    """
    if m.signature[1] != 2 or m.signature[0] < 8:
        raise PreconditionFailed("needs signature (n, 2) with n >= 8")
    target = discriminant_form(m).exponent
    budget = [max_nodes]
    seen = set()

    def rec(cur: Lattice, steps: list):
        budget[0] -= 1
        if budget[0] < 0:
            raise SearchLimit("node cap exhausted")
        d = discriminant_form(cur)
        if d.length <= 5:
            try:
                return steps, split_2U(cur)
            except NotFound:
                pass
        for x in isotropic_elements(d):
            step = overlattice(cur, [x], d)
            dr = discriminant_form(step.result)
            if dr.exponent != target:
                continue
            key = step.result.gram
            if key in seen:
                continue
            seen.add(key)
            got = rec(step.result, steps + [step])
            if got is not None:
                return got
        return None

    try:
        got = rec(m, [])
    except SearchLimit:
        raise NotFound(f"node cap {max_nodes} reached; existence is guaranteed, so raise the cap")
    if got is None:
        raise NotFound("search exhausted without a witness; this contradicts the expected "
                       "existence and indicates a bug", proven=True)
    steps, sp = got
    return OverlatticeChain(tuple(steps), m, sp)


def overlattice_chain(start: Lattice, targets: Sequence[Lattice], max_index: int = 2,
                      max_candidates: int = 10**4) -> OverlatticeChain:
    """Cyclic isotropic steps of order <= max_index through the genera of ``targets``.

    At each stage the first isotropic element (lexicographic) whose
    overlattice is genus-equal to the next target is taken.
    """
    steps = []
    cur = start
    for i, tgt in enumerate(targets):
        d = discriminant_form(cur)
        tried = 0
        for x in isotropic_elements(d):
            if d.order_of(x) > max_index:
                continue
            tried += 1
            if tried > max_candidates:
                raise NotFound(f"stage {i}: candidate cap {max_candidates} reached")
            step = overlattice(cur, [x], d)
            if genus_equal(step.result, tgt):
                steps.append(step)
                cur = step.result
                break
        else:
            raise NotFound(f"stage {i}: no overlattice in the target genus", proven=True)
    return OverlatticeChain(tuple(steps), start)
