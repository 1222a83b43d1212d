"""The ten acceptance criteria, each at its stated tolerance.

Run with pytest (one PASS/FAIL line per criterion appears in the terminal
summary) or directly with ``python tests/test_acceptance.py``.
"""

import itertools
import math
import time
from fractions import Fraction

import numpy as np

from lrcavail import linalg
from lrcavail.analysis import (
    asymptotic_report,
    bound_thm1,
    bound_thm2,
    codebook_from_code,
    dmin_exact,
    erasure_deficiency,
)
from lrcavail.designs import (
    ZigzagSpec,
    build_affine_design,
    build_kirkman15,
    build_zigzag_membership,
    check_assumption1,
    design_to_membership,
    lemma1_counts,
)
from lrcavail.fixtures import code11, code17, code30, example1_code, example1_membership
from lrcavail.lrc import decode_generic, decode_thm3, decode_thm4, encode, erase, repair_symbol, verify_availability
from lrcavail.analysis import subcode_bound

EXPECTED_GROUPS = {  # 1-based repair groups of the (7, 3, 2, 2) code
    1: [(4,), (2, 5)],
    2: [(1, 5), (3, 6)],
    3: [(2, 6), (1, 7)],
}


def criterion(label):
    def wrap(fn):
        fn.criterion = label
        return fn
    return wrap


def _timed(limit, fn, *args):
    t0 = time.perf_counter()
    out = fn(*args)
    elapsed = time.perf_counter() - t0
    assert elapsed < limit, f"took {elapsed:.2f} s, limit {limit} s"
    return out


def _certify_witness(code, erased, d):
    """An erasure set of size d that loses rank, and a weight-d codeword vanishing off it."""
    G = code.generator
    alive = [i for i in range(code.n) if i not in set(erased)]
    assert len(erased) == d
    assert linalg.rank(G.spec, G.rows[:, alive]) < G.k
    ker = linalg.left_kernel(G.spec, G.rows[:, alive])
    cw = G.encode(ker[0])
    assert (cw != 0).sum() == d and not cw[alive].any()


@criterion("criterion 1: (7,3,2,2) example encodes, verifies and repairs")
def test_criterion_1_example1():
    def run():
        code = example1_code()
        for m1, m2, m3 in itertools.product(range(2), repeat=3):
            assert encode(code, [m1, m2, m3]).tolist() == [m1, m2, m3, m1, m1 ^ m2, m2 ^ m3, m1 ^ m3]
        rep = verify_availability(code)
        assert rep.ok and rep.t_achieved == 2 and rep.max_r_used <= 2
        for s, gs in EXPECTED_GROUPS.items():
            got = [tuple(u + 1 for u in e["group"]) for e in rep.groups[s - 1]]
            assert got == gs and all(e["in_span"] and e["size_ok"] for e in rep.groups[s - 1])
        for m in itertools.product(range(2), repeat=3):
            cw = encode(code, list(m)).tolist()
            for i in range(3):
                for j in range(2):
                    assert repair_symbol(code, erase(cw, [i]), i, j) == cw[i]
    _timed(1.0, run)


@criterion("criterion 2: bounds 4/4 and exact distance 3 on the example")
def test_criterion_2_example_bounds():
    def run():
        assert bound_thm1(7, 3, 2, 2) == 4
        assert bound_thm2(7, 3, 2, 2) == 4
        rep = dmin_exact(example1_code(), mode="weight-enum")
        assert rep.method == "weight-enum" and rep.exhaustive and rep.checked == 2**3 - 1
        assert rep.d_min == 3
        assert not rep.optimal_thm1 and not rep.optimal_thm2
    _timed(1.0, run)


@criterion("criterion 3: (17,9,3,2) code has d_min = 5 = bound, all 2380 4-erasure sets recoverable")
def test_criterion_3_code17():
    def run():
        code = code17()
        n, k, r, t = code.params
        assert (n, k, r, t, code.spec.order) == (17, 9, 3, 2, 16)
        assert bound_thm1(n, k, r, t) == 5
        sets = np.array(list(itertools.combinations(range(n), 4)))
        assert len(sets) == 2380
        assert not erasure_deficiency(code.generator, sets).any()
        rep = dmin_exact(code, mode="erasure-rank")
        assert rep.d_min == 5 and rep.exhaustive
        _certify_witness(code, [i for i in range(n) if i not in rep.witness_set], 5)
    _timed(5.0, run)


@criterion("criterion 4: (30,15,3,2) Kirkman code has distance 8, exhaustive over C(30,7)")
def test_criterion_4_code30():
    code = code30()
    n, k, r, t = code.params
    assert (n, k, r, t, code.spec.order) == (30, 15, 3, 2, 32)
    assert bound_thm1(n, k, r, t) == 8
    rep = dmin_exact(code, mode="erasure-rank", budget=3_000_000)
    assert rep.exhaustive and rep.d_min == 8
    assert rep.checked >= math.comb(30, 7)
    _certify_witness(code, [i for i in range(n) if i not in rep.witness_set], 8)
    # structured decoding inside the guarantee
    rng = np.random.default_rng(4)
    for _ in range(2000):
        msg = rng.integers(0, 32, k)
        E = rng.choice(n, 7, replace=False)
        res = decode_thm3(code, erase(encode(code, msg), E))
        assert res.within_guarantee and np.array_equal(res.message, msg)


@criterion("criterion 5: (11,4,2,2) all-symbol code has d_min = 6, all 462 5-erasure sets decode")
def test_criterion_5_code11():
    def run():
        code = code11()
        n, k, r, t = code.params
        N = code.N
        assert (n, k, r, t, code.spec.order) == (11, 4, 2, 2, 128)
        rep = verify_availability(code)
        assert rep.all_symbol and rep.max_r_used <= 2 and rep.t_achieved >= 2
        d_bound = N + N // r - k - k // r + t + 1
        assert d_bound == 6
        rng = np.random.default_rng(5)
        count = 0
        for E in itertools.combinations(range(n), 5):
            msg = rng.integers(0, 128, k)
            res = decode_thm4(code, erase(encode(code, msg), E))
            assert res.within_guarantee and res.path in ("case1", "case2")
            assert np.array_equal(res.message, msg)
            count += 1
        assert count == 462
        d = dmin_exact(code, mode="erasure-rank")
        assert d.d_min == 6 and d.exhaustive
        _certify_witness(code, [i for i in range(n) if i not in d.witness_set], 6)
    _timed(10.0, run)


def _decodable_patterns(code, count, rng):
    out = []
    while len(out) < count:
        sizes = rng.integers(0, code.n - code.k + 1, 4 * count)
        cand = [np.sort(rng.choice(code.n, s, replace=False)) for s in sizes]
        for e in range(code.n - code.k + 1):
            group = [c for c in cand if len(c) == e]
            if not group:
                continue
            ok = erasure_deficiency(code.generator, np.array(group).reshape(len(group), e)) == 0
            out += [g for g, good in zip(group, ok) if good]
    return out[:count]


@criterion("criterion 6: structured decoders agree with generic decoding on 10^4 patterns per fixture")
def test_criterion_6_oracle_equivalence():
    rng = np.random.default_rng(6)
    for code, dec in ((code17(), decode_thm3), (code30(), decode_thm3), (code11(), decode_thm4)):
        pats = _decodable_patterns(code, 10_000, rng)
        assert len(pats) == 10_000
        q = code.spec.order
        for E in pats:
            msg = rng.integers(0, q, code.k)
            rx = erase(encode(code, msg), E)
            a = dec(code, rx).message
            b = decode_generic(code, rx)
            assert np.array_equal(a, b) and np.array_equal(a, msg)


@criterion("criterion 7: Kirkman and zigzag designs pass pair coverage, resolvability and the layout check")
def test_criterion_7_designs():
    def run():
        D = build_kirkman15()
        pairs = {}
        for b in D.blocks:
            for p in itertools.combinations(b, 2):
                pairs[p] = pairs.get(p, 0) + 1
        assert len(pairs) == 105 and set(pairs.values()) == {1}
        assert len(D.classes) == 7
        assert all(sorted(x for b in c for x in b) == list(range(1, 16)) for c in D.classes)
        for r, t in [(2, 2), (3, 2), (2, 3)]:
            R = build_zigzag_membership(ZigzagSpec(r, t))
            assert check_assumption1(R, R.k, r, t).conformant
            cols = [set(b) for b in R.columns]
            for a, b in itertools.combinations(cols, 2):
                assert len(a & b) <= 1
    _timed(5.0, run)


def built_matrices():
    out = []
    designs = [build_kirkman15()] + [build_affine_design(q) for q in (2, 3, 4, 5, 7, 8, 9)]
    for D in designs:
        out += [(design_to_membership(D, t), D.r, t) for t in range(1, D.c + 1)]
    for r, t in [(1, 2), (2, 2), (3, 2), (2, 3), (3, 3), (4, 2)]:
        out.append((build_zigzag_membership(ZigzagSpec(r, t)), r, t))
    return out


@criterion("criterion 8: every conformant built matrix has exactly ceil(kt/r) columns")
def test_criterion_8_lemma1():
    mats = built_matrices() + [(example1_membership(), 2, 2)]
    conformant = 0
    for R, r, t in mats:
        ones, col_cap, row_floor = lemma1_counts(R)
        assert row_floor <= ones <= col_cap
        if check_assumption1(R, R.k, r, t).conformant:
            conformant += 1
            assert R.restrict(t).m == math.ceil(R.k * t / r)
    assert conformant == len(mats) - 1


@criterion("criterion 9: subcode algorithm on the example codebook")
def test_criterion_9_subcode():
    def run():
        code = example1_code()
        n, k, r, t = code.params
        tr = subcode_bound(codebook_from_code(code), code.groups, r, t, 2)
        assert all(s.a <= t * r for s in tr.steps)
        assert all(tr.shrink_ok())
        assert tr.min_iterations == math.ceil((k - 1) / (t * r - t + 1)) == 1
        assert tr.ell >= tr.min_iterations
        d = dmin_exact(code, mode="weight-enum").d_min
        assert tr.bound_value >= d == 3
    _timed(1.0, run)


@criterion("criterion 10: zigzag distance-to-MDS ratio at rate 1/2 strictly increases")
def test_criterion_10_asymptotics():
    def run():
        rows = asymptotic_report("zigzag", 2, range(2, 16), Fraction(1, 2))
        ratios = [x.ratio for x in rows]
        assert all(isinstance(x, Fraction) for x in ratios)
        assert all(a < b for a, b in zip(ratios, ratios[1:]))
        assert all(0 < x < 1 for x in ratios)
        assert all(x.rate == Fraction(1, 2) for x in rows)
        assert ratios[:3] == [Fraction(1, 3), Fraction(11, 25), Fraction(7, 13)]
    _timed(1.0, run)


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]
    tests.sort(key=lambda f: int(f.__name__.split("_")[2]))
    failed = 0
    for fn in tests:
        t0 = time.perf_counter()
        try:
            fn()
            status = "PASS"
        except AssertionError as exc:
            status, failed = f"FAIL ({exc})", failed + 1
        print(f"[{status}] {fn.criterion} ({time.perf_counter() - t0:.2f} s)")
    raise SystemExit(1 if failed else 0)
