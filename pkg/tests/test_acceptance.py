"""One test per acceptance criterion; each records a single PASS/FAIL line.

All criteria are exact (integer or rational equality); there are no
floating-point tolerances anywhere in this module.
"""

import itertools
import json
import random
from fractions import Fraction

from evenlat import exactarith as ea
from evenlat import overlat as ov
from evenlat.classify import harness as h
from evenlat.discform import (discriminant_form, genus_equal, level,
                              milgram_signature)
from evenlat.expr import lattice
from evenlat.roots import (coxeter_condition, norm2_check, root_decomposition, short_vectors)

from oracles import brute_isomorphic, naive_vectors


def _claim(cid):
    return h.Claim.from_json(next(d for d in h.load_manifest()["claims"] if d["id"] == cid))


def test_01_table1_audit(acceptance):
    table = h.load_table1()["entries"]
    bad = []
    counts = {}
    for row in table:
        lat = lattice(row["expr"])
        even = all(lat.gram[i][i] % 2 == 0 for i in range(lat.rank))
        if not even or lat.signature != (row["n"], 2):
            bad.append(row["expr"])
        counts[row["n"]] = counts.get(row["n"], 0) + 1
    want = {26: 1, 19: 1, 18: 1, 12: 1, 11: 4, 10: 12, 9: 9, 8: 13}
    ok = not bad and counts == want and len(table) == 42
    acceptance(ok, f"42 entries, counts {[counts.get(n) for n in want]} (exact); bad={bad}")


def test_02_genus_identities(acceptance):
    pairs = [("2U+2E8+2A1", "2U+E8+D10"), ("2U+E8+3A1", "2U+E7+D4"), ("2U+9A1", "2U+E8(2)+A1")]
    eqs = [genus_equal(lattice(a), lattice(b)) for a, b in pairs]
    m = lattice("A1(-1)+2A3")
    sp = ov.split_U(m)
    # witness: P G P^T = U + K with P unimodular
    witnessed = (ea.congruent(m.gram, sp.witness) == ea.block_diag(((0, 1), (1, 0)), sp.complement.gram)
                 and ea.is_unimodular(sp.witness))
    acceptance(all(eqs) and witnessed, f"genus_equal {eqs}, U-split witness {witnessed} (exact)")


def test_03_roots_and_coxeter(acceptance):
    want = {"E8": (240, 30), "D10": (180, 18), "E7": (126, 18), "D4": (24, 6)}
    got = {}
    for t in want:
        comp = root_decomposition(lattice(t)).components
        got[t] = (comp[0].root_count, comp[0].coxeter_number) if len(comp) == 1 else None
    conds = [coxeter_condition(["E8", "D10"]), coxeter_condition(["E7", "D4"]),
             coxeter_condition(["E8", "E8"]), coxeter_condition(["E8", "A1", "A1", "A1"]),
             coxeter_condition(root_decomposition(lattice("2E8")))]
    ok = got == want and conds == [False, False, True, True, True]
    acceptance(ok, f"(roots, h) {got}; condition {conds} (exact)")


def test_04_no_2roots(acceptance):
    # the definite part of 2U(3)+E6'(3) is its E6'(3) block
    m = lattice("2U(3)+E6'(3)")
    block = tuple(tuple(r[4:]) for r in m.gram[4:])
    assert block == lattice("E6'(3)").gram
    found = {}
    for name in ["E8(2)", "E6'(3)", "Leech"]:
        found[name] = len(short_vectors(lattice(name), 2))
    found["definite part of 2U(3)+E6'(3)"] = len(short_vectors(ea_lattice(block), 2))
    acceptance(all(v == 0 for v in found.values()), f"vectors of norm <= 2: {found} (exact)")


def ea_lattice(g):
    from evenlat.lattice import Lattice
    return Lattice(g)


def test_05_thm42_chain(acceptance):
    start = lattice("2U(2)+10A1")
    names = ["U+U(2)+10A1", "2U+10A1", "2U+D4+6A1", "2U+D6+4A1", "2U+D8+2A1"]
    chain = ov.overlattice_chain(start, [lattice(n) for n in names], max_index=2)
    dets = [start.det] + [s.result.det for s in chain.steps]
    ratios = [Fraction(a, b) for a, b in zip(dets, dets[1:])]
    genus = [genus_equal(s.result, lattice(n)) for s, n in zip(chain.steps, names)]
    idx = [s.index for s in chain.steps]
    ok = len(chain.steps) == 5 and all(genus) and ratios == [4] * 5 and idx == [2] * 5
    acceptance(ok, f"dets {dets}, ratios {[str(r) for r in ratios]}, indices {idx} (exact)")


def test_06_milgram_closure(acceptance, verify_all_runs):
    codes, blobs = verify_all_runs
    report = json.loads(blobs[0])
    claim = next(c for c in report["claims"] if c["kind"] == "milgram")
    obs = claim["observed"]
    # Table 1 is part of the closure; recheck it here independently of the report
    direct = []
    for row in h.load_table1()["entries"]:
        lat = lattice(row["expr"])
        direct.append((milgram_signature(discriminant_form(lat)) - (row["n"] - 2)) % 8 == 0)
    ok = (claim["status"] == "pass" and obs["disagreements"] == 0 and obs["skipped"] == 0
          and obs["checked"] > 42 and all(direct))
    acceptance(ok, f"{obs['checked']} lattices checked, {obs['disagreements']} disagreements, "
                   f"Table 1 direct {sum(direct)}/42 (exact, mod 8)")


def test_07_genus_rep_pipeline(acceptance):
    rows = []
    ok = True
    for expr in ["2U(2)+10A1", "2U(2)+9A1", "2U(2)+8A1"]:
        m = lattice(expr)
        ch = ov.exponent_preserving_overlattice(m)
        split_ok = ch.splitting.check(ch.result)
        definite = ch.splitting.complement
        g = ov.genus_rep_with_2roots(definite, shortcut=False)
        steps_ok = all(s.result.det * s.index ** 2 == s.base.det
                       and ea.congruent(s.result.gram, s.inclusion) == s.base.gram
                       for s in ch.steps)
        witnesses = (g.u_split.check(g.v_complement.lattice)
                     and abs(ea.det(g.inclusion)) == g.index
                     and ea.congruent(g.lattice.gram, g.inclusion)[-1][-1] == 2)
        good = (split_ok and steps_ok and witnesses and g.method == "construction"
                and genus_equal(g.lattice, definite) and g.lattice.norm(g.root) == 2)
        ok &= good
        rows.append(f"{expr}: rank {definite.rank} det {definite.det} index {g.index} {good}")
    acceptance(ok, "; ".join(rows))


def test_08_isotropy_arithmetic(acceptance):
    mi, mij = [], []
    ok = True
    for cid in ["thm4.6-iii2-isotropy-2u-3a2", "thm4.6-iii2-isotropy-2u-e6p3",
                "thm4.6-iii2-isotropy-u-u3-e6p3"]:
        r = h.run_claim(_claim(cid), h.Context())
        ok &= r.status == "pass"
        mi += r.observed["M_i"]
        mij += r.observed["M_ij"]
    ok &= all(x["det"] == 27 and x["3q_in_2Z"] for x in mi)
    ok &= bool(mij) and all(x["det"] == 243 and x["3b_in_Z"] and x["exponent"] == 3 for x in mij)
    levels = [level(lattice(e)) for e in ["U+U(3)+E6'(3)", "2U+E6'(3)", "2U+3A2"]]
    ok &= levels == [3, 3, 3]
    acceptance(ok, f"{len(mi)} M_i (det 27), {len(mij)} M_ij (det 243, exponent 3), "
                   f"levels {levels} (exact)")


def test_09_norm2(acceptance):
    out = {}
    ok = True
    for name, count in [("E8(2)", 256), ("E6'(3)", 243)]:
        lat = lattice(name)
        d = discriminant_form(lat)
        res = norm2_check(lat)
        for cls, m in res.cosets:
            diff = [a - b for a, b in zip(m.witness, d.lift(cls))]
            ok &= all(Fraction(x).denominator == 1 for x in diff)   # witness lies in the coset
            ok &= lat.norm(m.witness) == m.minimum <= 2
        ok &= res.holds and res.count == count
        out[name] = (res.count, str(max(m.minimum for _, m in res.cosets)))
    acceptance(ok, f"(cosets, max minimum) {out} (exact)")


CORPUS = ["A1", "A2", "A3", "A4", "A5", "A6", "A7", "D4", "D5", "D6", "D7", "E6", "E7", "E8", "2A1",
          "3A1", "A1+A2", "2A2", "3A2", "A3+A1", "2A3", "D4+A1", "D4+A2", "E6+A2", "E7+A1",
          "E6+A1", "D6+A1", "A1(2)", "A2(2)", "A1(3)", "E8+3A1", "E7+D4", "2E8+2A1", "E8+D10",
          "U(2)", "U(3)", "U+A1", "U(2)+A1", "2A1+A1(-1)", "A1(-1)+2A3", "U+2A3", "U+A2",
          "U(3)+A2", "A2(-1)+E6", "2U+3A2", "2U+E6", "U+U(2)+2A1", "U+D4+2A1", "U+E8+2A1",
          "A2+A2(-1)", "U(2)+D4", "D4+D4", "U+E7", "E8+A1(-1)", "U+U(3)", "U+E6", "E8+A2(-1)",
          "U+D4", "U(2)+2A1", "2U+A2", "U+E8+A2", "E8+A1+A1(-1)", "U+D6"]


def test_10_oracle_equivalences(acceptance):
    # (a) genus_equal vs signature + brute-force form isomorphism
    lats = [(e, lattice(e)) for e in CORPUS]
    lats = [(e, l) for e, l in lats if abs(l.det) <= 200]
    forms = {e: discriminant_form(l) for e, l in lats}
    mismatches, equal_pairs, compared = [], 0, 0
    for (ea_, a), (eb, b) in itertools.combinations(lats, 2):
        compared += 1
        ref = a.signature == b.signature and brute_isomorphic(forms[ea_], forms[eb])
        got = genus_equal(a, b)
        equal_pairs += ref
        if got != ref:
            mismatches.append((ea_, eb))
    # (b) short_vectors vs naive box enumeration, rank <= 4, bound <= 8
    rng = random.Random(20240613)
    sv_bad = 0
    sv_cases = 0
    for e in ["A1", "A2", "A3", "A4", "D4", "2A1", "A1+A2", "A2(2)", "A1(3)+A2", "2A2", "A3+A1"]:
        base = lattice(e)
        for _ in range(3):
            t = _random_unimodular(rng, base.rank)
            lat = ea_lattice(ea.congruent(base.gram, t))
            for bound in range(1, 9):
                sv_cases += 1
                got = sorted((_canon(v), n) for v, n in short_vectors(lat, bound))
                sv_bad += got != naive_vectors(lat, bound)
    # (c) SNF and HNF reconstruction on 1000 random small matrices
    rec_bad = 0
    for _ in range(1000):
        m, n = rng.randint(1, 5), rng.randint(1, 5)
        a = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(m)]
        s = ea.smith_normal_form(a)
        hh, u = ea.hermite_normal_form(a)
        d = [x for x in s.diagonal if x]
        good = (ea.matmul(ea.matmul(s.U, s.D), s.V) == ea.as_matrix(a)
                and ea.is_unimodular(s.U) and ea.is_unimodular(s.V)
                and all(d[i + 1] % d[i] == 0 for i in range(len(d) - 1))
                and ea.matmul(u, a) == ea.as_matrix(hh) and ea.is_unimodular(u))
        rec_bad += not good
    ok = not mismatches and sv_bad == 0 and rec_bad == 0
    acceptance(ok, f"(a) {compared} pairs, {equal_pairs} genus-equal, {len(mismatches)} mismatches; "
                   f"(b) {sv_cases} enumerations, {sv_bad} mismatches; "
                   f"(c) 1000 matrices, {rec_bad} failures (exact)")


def _canon(v):
    return v if next(x for x in v if x) > 0 else tuple(-x for x in v)


def _random_unimodular(rng, n):
    m = [list(r) for r in ea.identity(n)]
    for _ in range(6):
        if n == 1:
            break
        i, j = rng.sample(range(n), 2)
        c = rng.randint(-2, 2)
        m[i] = [a + c * b for a, b in zip(m[i], m[j])]
    return ea.as_matrix(m)


def test_11_determinism(acceptance, verify_all_runs):
    codes, blobs = verify_all_runs
    same = blobs[0] == blobs[1] and len(blobs[0]) > 0
    acceptance(same and codes == [0, 0],
               f"exit codes {codes}, {len(blobs[0])} bytes, identical={same} (byte equality)")
