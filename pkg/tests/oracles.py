"""Independent slow reference implementations used only by the tests."""

import itertools
from fractions import Fraction

from evenlat import exactarith as ea


def q_direct(lat, x_lift):
    """(x, x) mod 2 for a rational vector in lattice coordinates."""
    g = lat.gram
    n = lat.rank
    v = sum(x_lift[i] * g[i][j] * x_lift[j] for i in range(n) for j in range(n))
    return Fraction(v) % 2


def dual_quotient(lat):
    """A_L by brute force: the classes of G^-1 e_i, closed under addition.

    Returns a dict {canonical rep in [0,1)^n (as tuple of Fractions): q}.
    """
    inv = lat.gram_inverse
    n = lat.rank
    gens = [tuple(Fraction(x) % 1 for x in row) for row in inv]
    # reduce mod L: the dual lattice is spanned by the rows of G^-1; classes mod Z^n
    zero = tuple(Fraction(0) for _ in range(n))
    seen = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for v in frontier:
            for g in gens:
                w = tuple((a + b) % 1 for a, b in zip(v, g))
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return {v: q_direct(lat, v) for v in seen}


def brute_isomorphic(f, h) -> bool:
    """Exhaustive search for a q-preserving isomorphism of finite quadratic forms.

    Images of the generators are assigned one at a time; after each
    assignment q is compared on every element of the span built so far.
    """
    if f.size != h.size:
        return False
    if f.size == 1:
        return True
    k = f.length
    els = list(h.elements())

    def order(e):
        m = 1
        for x, o in zip(e, h.orders):
            if x:
                m = m * (o // _gcd(x, o)) // _gcd(m, o // _gcd(x, o))
        return m

    def comb(coeffs, images):
        out = [0] * h.length
        for c, e in zip(coeffs, images):
            for t in range(h.length):
                out[t] = (out[t] + c * e[t]) % h.orders[t]
        return tuple(out)

    cands = [[e for e in els if order(e) == f.orders[i] and h.q_of(e) == f.q[i]] for i in range(k)]

    def rec(i, images):
        if i == k:
            imgs = {comb(x, images) for x in itertools.product(*(range(o) for o in f.orders))}
            return len(imgs) == h.size
        for e in cands[i]:
            trial = images + [e]
            ok = True
            for x in itertools.product(*(range(o) for o in f.orders[:i + 1])):
                if x[i] == 0:
                    continue
                fx = tuple(x) + (0,) * (k - i - 1)
                if h.q_of(comb(x, trial)) != f.q_of(fx):
                    ok = False
                    break
            if ok and rec(i + 1, trial):
                return True
        return False

    return rec(0, [])


def _gcd(a, b):
    import math
    return math.gcd(a, b)


def naive_vectors(lat, bound):
    """Nonzero x with (x, x) <= bound over a generous box, one per +- pair."""
    inv = lat.gram_inverse
    n = lat.rank
    lims = [int((bound * inv[i][i]) ** 0.5) + 2 for i in range(n)]
    out = []
    for v in itertools.product(*(range(-m, m + 1) for m in lims)):
        if not any(v):
            continue
        first = next(x for x in v if x)
        if first < 0:
            continue
        nv = ea.bilinear(lat.gram, v, v)
        if nv <= bound:
            out.append((v, nv))
    return sorted(out)
