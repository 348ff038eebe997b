"""Claim checkers and report assembly.

Every claim in the manifest names a ``kind``; the checker for that kind
composes operations from the other modules and returns a status with the
witness data it relied on.  Reports are plain JSON-ready dicts with claims
ordered by id, and contain no timing unless asked for.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Callable, Optional

from .. import exactarith as ea
from .. import overlat as ov
from ..discform import (discriminant_form, genus_equal, genus_signature, is_two_elementary,
                        level, milgram_signature, two_elementary_consistency,
                        two_elementary_invariants)
from ..expr import lattice as parse_lattice, parse
from ..lattice import Lattice, LatticeError, Unsupported
from ..roots import has_no_2roots, norm2_check, root_decomposition

STATUSES = ("pass", "fail", "unsupported", "cited", "recorded")
THEOREMS = ("4.1", "4.2", "4.3", "4.4", "4.5", "4.6")


def _load(name: str):
    return json.loads(resources.files(__package__).joinpath("data", name).read_text())


def load_table1() -> dict:
    return _load("table1.json")


def load_complete_list() -> dict:
    return _load("complete.json")


def load_manifest() -> dict:
    return _load("claims.json")


# ------------------------------------------------------------ claims and results

@dataclass(frozen=True)
class Claim:
    id: str
    kind: str
    inputs: tuple[str, ...]
    expected: dict
    anchor: dict
    params: dict = field(default_factory=dict)
    note: str = ""

    @classmethod
    def from_json(cls, d: dict) -> "Claim":
        return cls(d["id"], d["kind"], tuple(d.get("inputs", ())), d.get("expected", {}),
                   d["anchor"], d.get("params", {}), d.get("note", ""))


@dataclass
class ClaimResult:
    claim: Claim
    status: str
    observed: dict
    witness: dict = field(default_factory=dict)
    limit: Optional[str] = None
    seconds: Optional[float] = None

    def to_json(self, timing: bool = False) -> dict:
        out = {
            "id": self.claim.id,
            "kind": self.claim.kind,
            "status": self.status,
            "inputs": list(self.claim.inputs),
            "expected": self.claim.expected,
            "observed": self.observed,
            "witness": self.witness,
            "anchor": self.claim.anchor,
        }
        if self.claim.params:
            out["params"] = self.claim.params
        if self.claim.note:
            out["note"] = self.claim.note
        if self.limit is not None:
            out["limit"] = self.limit
        if timing and self.seconds is not None:
            out["seconds"] = round(self.seconds, 3)
        return out


@dataclass
class Report:
    name: str
    results: list[ClaimResult]

    @property
    def counts(self) -> dict:
        c = {s: 0 for s in STATUSES}
        for r in self.results:
            c[r.status] += 1
        return c

    @property
    def ok(self) -> bool:
        return self.counts["fail"] == 0

    def to_json(self, timing: bool = False) -> dict:
        res = sorted(self.results, key=lambda r: r.claim.id)
        return {"report": self.name, "summary": self.counts,
                "claims": [r.to_json(timing) for r in res]}

    def dumps(self, timing: bool = False) -> str:
        return json.dumps(jsonable(self.to_json(timing)), indent=1, sort_keys=True) + "\n"

    def lines(self) -> list[str]:
        return [f"{r.status.upper():11s} {r.claim.id}" for r in sorted(self.results, key=lambda r: r.claim.id)]


def jsonable(x):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else x.numerator
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, (bool, int, float, str)) or x is None:
        return x
    if hasattr(x, "to_json"):
        return jsonable(x.to_json())
    return str(x)


def _mat(m) -> list:
    return [list(r) for r in m]


# ------------------------------------------------------------ context

class Context:
    """Lattice cache shared by the checkers of one run.

    Every lattice built along the way is registered, so that the Milgram
    cross-check can cover the whole closure of the run.
    """

    def __init__(self):
        self._by_expr: dict[str, Lattice] = {}
        self.closure: dict[tuple, str] = {}

    def lat(self, expr: str) -> Lattice:
        if expr not in self._by_expr:
            lat = parse_lattice(expr)
            self._by_expr[expr] = lat
            self.register(lat, str(parse(expr)))
        return self._by_expr[expr]

    def register(self, lat: Lattice, label: str) -> None:
        self.closure.setdefault(lat.gram, label)


def invariants(lat: Lattice) -> dict:
    d = discriminant_form(lat)
    out = {
        "signature": list(lat.signature),
        "det": lat.det,
        "orders": list(d.orders),
        "length": d.length,
        "exponent": d.exponent,
        "level": level(d),
    }
    if is_two_elementary(d):
        _, _, a, delta = two_elementary_invariants(lat)
        out["two_elementary"] = {"a": a, "delta": delta}
    return out


# ------------------------------------------------------------ checkers

Checker = Callable[[Claim, Context], ClaimResult]
CHECKERS: dict[str, Checker] = {}


def checker(kind: str):
    def deco(fn):
        CHECKERS[kind] = fn
        return fn
    return deco


def _verdict(ok: bool) -> str:
    return "pass" if ok else "fail"


@checker("cited")
def _cited(c: Claim, ctx: Context) -> ClaimResult:
    return ClaimResult(c, "cited", {"verified": False, "label": "cited, not verified"})


@checker("genus_equal")
def _genus_equal(c: Claim, ctx: Context) -> ClaimResult:
    a, b = (ctx.lat(e) for e in c.inputs)
    eq = genus_equal(a, b)
    wit = {"fingerprints": [genus_signature(a).to_json(), genus_signature(b).to_json()]}
    return ClaimResult(c, _verdict(eq == c.expected["equal"]), {"equal": eq}, wit)


@checker("coxeter")
def _coxeter(c: Claim, ctx: Context) -> ClaimResult:
    from ..roots import coxeter_condition

    lat = ctx.lat(c.inputs[0])
    rd = root_decomposition(lat)
    obs = {
        "types": rd.types,
        "coxeter_numbers": [k.coxeter_number for k in rd.components],
        "root_counts": [k.root_count for k in rd.components],
        "rank": rd.rank,
        "condition": coxeter_condition(rd),
    }
    exp = c.expected
    # components are compared as a multiset of (type, h) pairs
    ok = (sorted(zip(obs["types"], obs["coxeter_numbers"]))
          == sorted(zip(exp["types"], exp["coxeter_numbers"])))
    ok &= obs["condition"] == exp["condition"]
    return ClaimResult(c, _verdict(ok), obs, {"root_pairs": len(rd.roots)})


@checker("no_2roots")
def _no_roots(c: Claim, ctx: Context) -> ClaimResult:
    obs, wit = {}, {}
    verdicts = []
    for e in c.inputs:
        v, w = has_no_2roots(ctx.lat(e))
        obs[e] = v
        wit[e] = w
        verdicts.append(v)
    if any(v is None for v in verdicts):
        return ClaimResult(c, "unsupported", obs, wit, limit="norm residues mod 4, 6, 8, 12 inconclusive")
    return ClaimResult(c, _verdict(all(verdicts) == c.expected["no_2roots"]), obs, wit)


@checker("maximal")
def _maximal(c: Claim, ctx: Context) -> ClaimResult:
    obs = [ov.is_maximal(ctx.lat(e)) for e in c.inputs]
    wit = {}
    for e, m in zip(c.inputs, obs):
        if not m:
            d = discriminant_form(ctx.lat(e))
            from ..discform import isotropic_elements
            wit[e] = {"isotropic_element": list(isotropic_elements(d)[0])}
    return ClaimResult(c, _verdict(obs == c.expected["maximal"]), {"maximal": obs}, wit)


@checker("invariant")
def _invariant(c: Claim, ctx: Context) -> ClaimResult:
    obs = {}
    ok = True
    for e in c.inputs:
        inv = invariants(ctx.lat(e))
        obs[e] = inv
        for k, v in c.expected.items():
            got = sorted(inv[k]) if k == "orders" else inv[k]
            ok &= got == v
    return ClaimResult(c, _verdict(ok), obs)


@checker("two_elementary")
def _two_elementary(c: Claim, ctx: Context) -> ClaimResult:
    n = c.expected["n"]
    a_obs, wit = [], {}
    ok = True
    for e in c.inputs:
        lat = ctx.lat(e)
        if not is_two_elementary(lat):
            a_obs.append(None)
            ok = False
            continue
        npos, nneg, a, delta = two_elementary_invariants(lat)
        a_obs.append(a)
        wit[e] = {"signature": [npos, nneg], "a": a, "delta": delta}
        ok &= (npos, nneg) == (n, 2)
    verdicts = [two_elementary_consistency(n, a) if a is not None else None for a in a_obs]
    ok &= a_obs == c.expected["a"]
    if c.expected.get("verdict") is not None:
        ok &= all(v == c.expected["verdict"] for v in verdicts)
    return ClaimResult(c, _verdict(ok), {"a": a_obs, "verdicts": verdicts}, wit)


@checker("two_elementary_scan")
def _scan(c: Claim, ctx: Context) -> ClaimResult:
    n, amax = c.params["n"], c.params["a_max"]
    table = {a: two_elementary_consistency(n, a) for a in range(amax + 1)}
    allowed = [a for a, v in table.items() if v != "impossible"]
    ok = allowed == c.expected["allowed"]
    ok &= all(table[a] == c.expected["verdict"] for a in allowed)
    return ClaimResult(c, _verdict(ok), {"allowed": allowed, "verdicts": table})


@checker("chain")
def _chain(c: Claim, ctx: Context) -> ClaimResult:
    start = ctx.lat(c.inputs[0])
    targets = [ctx.lat(e) for e in c.inputs[1:]]
    step_index = c.expected["step_index"]
    try:
        chain = ov.overlattice_chain(start, targets, max_index=step_index)
    except ov.NotFound as e:
        return ClaimResult(c, "fail" if e.proven else "unsupported", {"error": str(e)},
                           limit=None if e.proven else "candidate cap")
    steps = []
    ok = True
    prev = start
    for s, tgt, name in zip(chain.steps, targets, c.inputs[1:]):
        ctx.register(s.result, f"chain step towards {name}")
        ratio = Fraction(abs(prev.det), abs(s.result.det))
        ok &= s.index == step_index and ratio == c.expected["det_ratio"]
        ok &= s.result.det * s.index ** 2 == prev.det
        ok &= abs(ea.det(s.inclusion)) == s.index
        ok &= genus_equal(s.result, tgt)
        steps.append({"target": name, "index": s.index, "det": s.result.det,
                      "generator": list(s.generators[0]), "inclusion": _mat(s.inclusion),
                      "gram": _mat(s.result.gram)})
        prev = s.result
    obs = {"dets": [start.det] + [s.result.det for s in chain.steps],
           "indices": [s.index for s in chain.steps]}
    return ClaimResult(c, _verdict(ok), obs, {"steps": steps})


@checker("exponent_overlattice")
def _exp_over(c: Claim, ctx: Context) -> ClaimResult:
    m = ctx.lat(c.inputs[0])
    try:
        chain = ov.exponent_preserving_overlattice(m)
    except ov.NotFound as e:
        return ClaimResult(c, "fail" if e.proven else "unsupported", {"error": str(e)},
                           limit=None if e.proven else "overlattice search node cap")
    m1 = chain.result
    ctx.register(m1, f"exponent-preserving overlattice of {c.inputs[0]}")
    d1 = discriminant_form(m1)
    sp = chain.splitting
    l_part = sp.complement
    ctx.register(l_part, "definite part of M1")
    obs = {"exponent": d1.exponent, "length": d1.length, "det": m1.det,
           "splits_2U": sp.check(m1), "index": chain.index}
    wit = {"steps": [{"generator": list(s.generators[0]), "index": s.index} for s in chain.steps],
           "split_witness": _mat(sp.witness), "definite_part": _mat(l_part.gram)}
    try:
        g = ov.genus_rep_with_2roots(l_part, shortcut=False)
        ctx.register(g.lattice, "genus representative with 2-roots")
        obs["genus_rep_has_roots"] = g.lattice.norm(g.root) == 2 and genus_equal(g.lattice, l_part)
        wit["genus_rep"] = g.to_json()
    except ov.PreconditionFailed as e:
        g = ov.genus_rep_with_2roots(l_part, shortcut=True)
        obs["genus_rep_has_roots"] = g.lattice.norm(g.root) == 2
        wit["genus_rep"] = {"method": g.method, "precondition": str(e)}
    ok = (obs["exponent"] == c.expected["exponent"] and obs["length"] <= c.expected["max_length"]
          and obs["splits_2U"] == c.expected["splits_2U"]
          and obs["genus_rep_has_roots"] == c.expected["genus_rep_has_roots"]
          and d1.exponent == discriminant_form(m).exponent)
    return ClaimResult(c, _verdict(ok), obs, wit)


@checker("level_pair")
def _level_pair(c: Claim, ctx: Context) -> ClaimResult:
    a_exp, n = c.expected["a"], c.expected["n"]
    lats = [ctx.lat(e) for e in c.inputs]
    obs = {"levels": [], "a": [], "delta": []}
    ok = True
    for lat in lats:
        npos, nneg, a, delta = two_elementary_invariants(lat)
        ok &= (npos, nneg) == (n, 2) and a == a_exp
        obs["levels"].append(level(lat))
        obs["a"].append(a)
        obs["delta"].append(delta)
    obs["genus_equal"] = genus_equal(*lats)
    obs["verdict"] = two_elementary_consistency(n, a_exp)
    ok &= obs["levels"] == c.expected["levels"] and not obs["genus_equal"]
    ok &= obs["verdict"] == "up_to_two"
    return ClaimResult(c, _verdict(ok), obs)


def _matches_one(lat: Lattice, names, ctx: Context) -> Optional[str]:
    for nm in names:
        if genus_equal(lat, ctx.lat(nm)):
            return nm
    return None


def chain_basis(steps) -> list[list[Fraction]]:
    """Basis of the last result of a chain, in coordinates of the first base."""
    basis = [list(r) for r in steps[0].basis]
    for s in steps[1:]:
        basis = [list(v) for v in ov.compose_basis(basis, s.basis)]
    return basis


@checker("maximal_overlattice")
def _max_over(c: Claim, ctx: Context) -> ClaimResult:
    names = c.expected["genus_one_of"]
    obs, wit = {}, {}
    ok = True
    for e in c.inputs:
        m = ctx.lat(e)
        steps = ov.maximal_even_overlattice(m)
        m0 = steps[-1].result if steps else m
        ctx.register(m0, f"maximal overlattice of {e}")
        hit = _matches_one(m0, names, ctx)
        obs[e] = hit
        wit[e] = {"index": math.prod(s.index for s in steps), "gram": _mat(m0.gram),
                  "maximal": ov.is_maximal(m0)}
        ok &= hit is not None and wit[e]["maximal"]
    return ClaimResult(c, _verdict(ok), obs, wit)


def _index2_sublattices(m0: Lattice):
    """All M_G for G of order 2 in (1/2 M0')/M0', in lexicographic order of z."""
    inv = m0.gram_inverse
    n = m0.rank
    for bits in range(1, 2 ** n):
        z = [(bits >> (n - 1 - i)) & 1 for i in range(n)]
        y = [sum(inv[i][j] * z[j] for j in range(n)) / 2 for i in range(n)]
        yield z, ov.sublattice_from_subgroup(m0, [y])


@checker("sublattice_genera")
def _sub_genera(c: Claim, ctx: Context) -> ClaimResult:
    m0 = ctx.lat(c.params["m0"])
    want = c.expected["realized"]
    found: dict[str, dict] = {}
    dets = set()
    count = 0
    for z, emb in _index2_sublattices(m0):
        count += 1
        dets.add(emb.lattice.det)
        for nm in want:
            if nm not in found and genus_equal(emb.lattice, ctx.lat(nm)):
                found[nm] = {"z": z, "basis": _mat(emb.embedding)}
                ctx.register(emb.lattice, f"index-2 sublattice of {c.params['m0']}")
    ok = dets == {c.expected["det"]} and all(nm in found for nm in want)
    obs = {"sublattices": count, "dets": sorted(dets), "realized": sorted(found)}
    return ClaimResult(c, _verdict(ok), obs, found)


@checker("index2_structures")
def _index2_structures(c: Claim, ctx: Context) -> ClaimResult:
    m0 = ctx.lat(c.params["m0"])
    want = c.expected["structures"]
    seen: dict[str, dict] = {}
    dets = set()
    for z, emb in _index2_sublattices(m0):
        lat = emb.lattice
        dets.add(lat.det)
        key = ",".join(str(o) for o in sorted(discriminant_form(lat).orders))
        entry = seen.setdefault(key, {"count": 0, "first_z": z, "genus_match": None})
        entry["count"] += 1
        tgt = want.get(key)
        if tgt is not None and entry["genus_match"] is None and genus_equal(lat, ctx.lat(tgt)):
            entry["genus_match"] = tgt
            entry["match_z"] = z
            ctx.register(lat, f"index-2 sublattice of {c.params['m0']}")
    ok = dets == {c.expected["det"]} and set(seen) == set(want)
    ok &= not set(c.expected.get("absent", ())) & set(seen)
    for key, tgt in want.items():
        ok &= key in seen and (tgt is None or seen[key]["genus_match"] == tgt)
    obs = {"dets": sorted(dets), "structures": sorted(seen)}
    return ClaimResult(c, _verdict(ok), obs, {"structures": seen})


@checker("split")
def _split(c: Claim, ctx: Context) -> ClaimResult:
    lat = ctx.lat(c.inputs[0])
    what = c.params["what"]
    fn = {"U": ov.split_U, "2U": ov.split_2U, "A1": ov.split_A1}[what]
    try:
        sp = fn(lat)
    except ov.NotFound as e:
        obs = {"splits": False, "proven": e.proven, "reason": str(e)}
        if c.expected["splits"]:
            st = "fail" if e.proven else "unsupported"
            return ClaimResult(c, st, obs, limit=None if e.proven else "search node cap")
        ok = e.proven == c.expected.get("proven", e.proven)
        return ClaimResult(c, _verdict(ok), obs)
    obs = {"splits": True, "witness_ok": sp.check(lat)}
    if sp.complement is not None:
        ctx.register(sp.complement, f"complement of {what} in {c.inputs[0]}")
        obs["complement_signature"] = list(sp.complement.signature)
        obs["complement_det"] = sp.complement.det
    ok = c.expected["splits"] and obs["witness_ok"]
    if "complement_genus" in c.expected:
        g = genus_equal(sp.complement, ctx.lat(c.expected["complement_genus"]))
        obs["complement_genus_equal"] = g
        ok &= g
    return ClaimResult(c, _verdict(ok), obs, sp.to_json())


@checker("norm2")
def _norm2(c: Claim, ctx: Context) -> ClaimResult:
    lat = ctx.lat(c.inputs[0])
    res = norm2_check(lat)
    mins = [m.minimum for _, m in res.cosets]
    obs = {"holds": res.holds, "cosets": res.count, "max_coset_min": max(mins)}
    wit = {"cosets": [{"class": list(k), "minimum": m.minimum, "witness": list(m.witness)}
                      for k, m in res.cosets]}
    if c.expected.get("record_only"):
        return ClaimResult(c, "recorded", obs, wit)
    ok = res.holds == c.expected["holds"] and res.count == c.expected["cosets"]
    return ClaimResult(c, _verdict(ok), obs, wit)


# ------------------------------------------------------------ isotropy analysis

def _in_dual(v, basis, gram) -> bool:
    """v (rational, ambient coords) pairs integrally with every basis row."""
    n = len(v)
    gv = [sum(gram[i][j] * v[j] for j in range(n)) for i in range(n)]
    return all(sum(Fraction(b[i]) * gv[i] for i in range(n)).denominator == 1 for b in basis)


def relative_dual_generators(m: Lattice, m0_basis) -> list[tuple[Fraction, ...]]:
    """Generators v_1..v_t of M'/M0' for M < M0, chosen greedily.

    Elements of A_M are scanned in lexicographic order; an element is kept
    when it is not in the span of M0' and the generators kept so far.
    Assumes M'/M0' is elementary abelian of odd prime exponent p, which the
    caller checks through the returned orders.
    """
    d = discriminant_form(m)
    g = m.gram
    # [M0 : M] = |det basis|^-1 in M coordinates
    size = abs(Fraction(1) / _det_frac(m0_basis))
    gens: list[tuple[Fraction, ...]] = []
    span: list[tuple[Fraction, ...]] = [tuple(Fraction(0) for _ in range(m.rank))]
    for x in d.elements():
        if len(span) >= size:
            break
        v = d.lift(x)
        if any(_in_dual(tuple(a - b for a, b in zip(v, s)), m0_basis, g) for s in span):
            continue
        gens.append(v)
        p = _order_mod(v, m0_basis, g)
        span = [tuple(s_i + k * v_i for s_i, v_i in zip(s, v)) for s in span for k in range(p)]
    return gens


def _order_mod(v, basis, g) -> int:
    k = 1
    while not _in_dual(tuple(k * x for x in v), basis, g):
        k += 1
    return k


def _det_frac(rows) -> Fraction:
    den = 1
    for r in rows:
        den = den * ea.common_denominator(r) // math.gcd(den, ea.common_denominator(r))
    mat = [[int(x * den) for x in r] for r in rows]
    return Fraction(ea.det(mat), den ** len(rows))


@checker("isotropy")
def _isotropy(c: Claim, ctx: Context) -> ClaimResult:
    exp = c.expected
    m = ctx.lat(c.inputs[0])
    g = m.gram
    steps = ov.maximal_even_overlattice(m)
    m0 = steps[-1].result
    ctx.register(m0, f"maximal overlattice of {c.inputs[0]}")
    basis = chain_basis(steps)
    obs: dict = {"m0_genus": genus_equal(m0, ctx.lat(exp["m0_genus"])),
                 "index": math.prod(s.index for s in steps)}
    vs = relative_dual_generators(m, basis)
    obs["t"] = len(vs)
    binv = ea.inverse([[x for x in r] for r in basis])
    n = m.rank

    def in_m0(v):
        return tuple(sum(v[i] * binv[i][j] for i in range(n)) for j in range(n))

    def form(u, w):
        return sum(u[i] * g[i][j] * w[j] for i in range(n) for j in range(n))

    ys = [in_m0(v) for v in vs]
    ok = obs["m0_genus"] and obs["t"] == exp["t"]
    mi = []
    for v, y in zip(vs, ys):
        sub = ov.sublattice_from_subgroup(m0, [y])
        ctx.register(sub.lattice, "M_i")
        q3 = 3 * form(v, v)
        row = {"det": sub.lattice.det, "genus": genus_equal(sub.lattice, ctx.lat(exp["m_i_genus"])),
               "3q_in_2Z": q3.denominator == 1 and q3.numerator % 2 == 0,
               "3v_in_M0": all((3 * x).denominator == 1 for x in y)}
        ok &= (row["det"] == exp["m_i_det"] and row["genus"] and row["3q_in_2Z"]
               and row["3v_in_M0"])
        mi.append(row)
    mij = []
    for i in range(len(vs)):
        for j in range(i + 1, len(vs)):
            sub = ov.sublattice_from_subgroup(m0, [ys[i], ys[j]])
            ctx.register(sub.lattice, "M_ij")
            d = discriminant_form(sub.lattice)
            b3 = 3 * form(vs[i], vs[j])
            row = {"pair": [i, j], "det": sub.lattice.det, "orders": list(d.orders),
                   "exponent": d.exponent,
                   "genus": genus_equal(sub.lattice, ctx.lat(exp["m_ij_genus"])),
                   "3b_in_Z": b3.denominator == 1}
            ok &= (row["det"] == exp["m_ij_det"] and row["exponent"] == exp["m_ij_exponent"]
                   and row["genus"] and row["3b_in_Z"])
            mij.append(row)
    obs["M_i"] = mi
    obs["M_ij"] = mij
    obs["level"] = level(m)
    ok &= obs["level"] == exp["level"]
    wit = {"v": [list(v) for v in vs], "m0_basis": [list(r) for r in basis]}
    return ClaimResult(c, _verdict(ok), obs, wit)


# ------------------------------------------------------------ runners

def run_claim(c: Claim, ctx: Context) -> ClaimResult:
    t0 = time.perf_counter()
    try:
        res = CHECKERS[c.kind](c, ctx)
    except Unsupported as e:
        res = ClaimResult(c, "unsupported", {"error": str(e)}, limit=str(e))
    res.seconds = time.perf_counter() - t0
    return res


def milgram_claim(ctx: Context, label: str) -> ClaimResult:
    """Gauss-sum signature = n+ - n- mod 8 for every lattice built in the run."""
    c = Claim(f"{label}-milgram-closure", "milgram", (), {"all_agree": True},
              {"location": "discriminant forms", "formula": r"\sum_x e^{\pi i q(x)} = \sqrt{|A|}\, e^{2\pi i (n_+-n_-)/8}"})
    bad, checked = [], 0
    skipped = 0
    for gram, name in sorted(ctx.closure.items(), key=lambda kv: (len(kv[0]), kv[0])):
        lat = Lattice(gram)
        d = discriminant_form(lat)
        try:
            s = milgram_signature(d)
        except Unsupported:
            skipped += 1
            continue
        checked += 1
        npos, nneg = lat.signature
        if (s - (npos - nneg)) % 8:
            bad.append({"lattice": name, "gram": _mat(gram), "milgram": s})
    obs = {"checked": checked, "skipped": skipped, "disagreements": len(bad)}
    return ClaimResult(c, _verdict(not bad), obs, {"counterexamples": bad})


def claims_for(prefix: str) -> list[Claim]:
    return [Claim.from_json(d) for d in load_manifest()["claims"] if d["id"].startswith(prefix)]


def verify_theorem(tid: str, ctx: Optional[Context] = None) -> Report:
    tid = tid.removeprefix("thm")
    if tid not in THEOREMS:
        raise ValueError(f"unknown theorem {tid!r}; expected one of {', '.join(THEOREMS)}")
    ctx = ctx or Context()
    results = [run_claim(c, ctx) for c in claims_for(f"thm{tid}-")]
    results.append(milgram_claim(ctx, f"thm{tid}"))
    return Report(f"thm{tid}", results)


def verify_norm2_corollary(ctx: Optional[Context] = None) -> Report:
    ctx = ctx or Context()
    return Report("norm2", [run_claim(c, ctx) for c in claims_for("cor4.7-")])


def _slug(expr: str) -> str:
    return (expr.lower().replace("+", "-").replace("'", "p").replace("(", "").replace(")", ""))


def verify_table1(ctx: Optional[Context] = None) -> Report:
    ctx = ctx or Context()
    table = load_table1()
    anchor = table["anchor"]
    results = []
    by_n: dict[int, list[tuple[str, Lattice]]] = {}
    for row in table["entries"]:
        n, e = row["n"], row["expr"]
        c = Claim(f"table1-n{n:02d}-{_slug(e)}", "table_entry", (e,), {"signature": [n, 2]}, anchor)
        t0 = time.perf_counter()
        lat = ctx.lat(e)
        obs = invariants(lat)
        obs["even"] = all(lat.gram[i][i] % 2 == 0 for i in range(lat.rank))
        ok = obs["signature"] == [n, 2] and obs["even"]
        wit = {}
        if str(parse(e)).startswith("2U+"):
            sp = ov.split_2U(lat)
            obs["splits_2U"] = sp.check(lat)
            ok &= obs["splits_2U"]
            wit["split_witness"] = _mat(sp.witness)
        d = discriminant_form(lat)
        obs["milgram"] = milgram_signature(d)
        ok &= (obs["milgram"] - (n - 2)) % 8 == 0
        r = ClaimResult(c, _verdict(ok), obs, wit)
        r.seconds = time.perf_counter() - t0
        results.append(r)
        by_n.setdefault(n, []).append((e, lat))
    counts = {str(n): len(v) for n, v in by_n.items()}
    c = Claim("table1-counts", "count", (), {"counts": table["counts"], "total": 42},
              table["count_anchor"])
    total = sum(len(v) for v in by_n.values())
    results.append(ClaimResult(c, _verdict(counts == table["counts"] and total == 42),
                               {"counts": counts, "total": total}))
    dups = []
    for n, items in by_n.items():
        for i in range(len(items)):
            for j in range(i + 1, len(items)):
                if genus_equal(items[i][1], items[j][1]):
                    dups.append([items[i][0], items[j][0]])
    c = Claim("table1-distinct-genera", "distinct", (), {"duplicates": []}, anchor)
    results.append(ClaimResult(c, _verdict(not dups), {"duplicates": dups}))
    results.append(milgram_claim(ctx, "table1"))
    return Report("table1", results)


def verify_complete_list(ctx: Optional[Context] = None) -> Report:
    ctx = ctx or Context()
    data = load_complete_list()
    table = {str(parse(r["expr"])): r["n"] for r in load_table1()["entries"]}
    anchor = data["anchor"]
    entries = [str(parse(e)) for e in data["entries"]]
    missing = [e for e in entries if e not in table]
    by_n: dict[int, list[str]] = {}
    for e in entries:
        by_n.setdefault(table.get(e, -1), []).append(e)
    dups = []
    for n, es in by_n.items():
        for i in range(len(es)):
            for j in range(i + 1, len(es)):
                if genus_equal(ctx.lat(es[i]), ctx.lat(es[j])):
                    dups.append([es[i], es[j]])
    results = [
        ClaimResult(Claim("complete-count", "count", (), {"total": 21}, anchor),
                    _verdict(len(entries) == 21 and len(set(entries)) == 21),
                    {"total": len(entries), "distinct": len(set(entries))}),
        ClaimResult(Claim("complete-in-table1", "membership", (), {"missing": []}, anchor),
                    _verdict(not missing), {"missing": missing}),
        ClaimResult(Claim("complete-distinct-genera", "distinct", (), {"duplicates": []}, anchor),
                    _verdict(not dups), {"duplicates": dups}),
    ]
    for ex in data["excluded"]:
        e = str(parse(ex["expr"]))
        c = Claim(f"complete-excluded-{_slug(e)}", "cited", (e,), {}, anchor, note=ex["reason"])
        r = ClaimResult(c, "cited", {"in_table1": e in table, "in_list": e in entries,
                                     "label": "cited, not verified"})
        if e in entries:
            r.status = "fail"
        results.append(r)
    return Report("complete", results)


def verify_all(ctx: Optional[Context] = None) -> Report:
    ctx = ctx or Context()
    results = []
    results += verify_table1(ctx).results
    for t in THEOREMS:
        results += [r for r in verify_theorem(t, ctx).results if r.claim.kind != "milgram"]
    results += verify_complete_list(ctx).results
    results += verify_norm2_corollary(ctx).results
    results = [r for r in results if r.claim.kind != "milgram"]
    results.append(milgram_claim(ctx, "all"))
    return Report("all", results)
