import random

import numpy as np
import pytest

from hitkit.formula import Cnf, FormatError
from hitkit.generators import complete_hitting, random_tree_hitting
from hitkit.pit import (
    DUAL,
    ONE,
    X,
    SnsrProof,
    _factor_matrix,
    cnf_sum,
    merge_layer,
    normalize,
    parse_snsr,
    pit_check,
    pit_run,
    serialize_snsr,
    verify_succinct_nsr,
)

from conftest import cube


def raw_value(raw, point, p):
    total = 0
    for c, facs in raw:
        v = c
        for f in facs:
            v *= point[f - 1] if f > 0 else 1 - point[-f - 1]
        total += v
    return total % p


def random_raw(rng, n, m, p):
    out = []
    for _ in range(m):
        facs = [rng.choice([v, -v]) for v in range(1, n + 1) if rng.random() < 0.4]
        facs += [rng.choice(facs)] if facs and rng.random() < 0.3 else []  # repeats
        out.append((rng.randint(0, p - 1), facs))
    return out


def test_normalize_examples():
    s = normalize([(1, [1, 1])], 1)
    assert len(s.terms) == 1 and s.terms[0].xs == 0b10 and s.terms[0].duals == 0
    assert normalize([(1, [1, -1])], 1).terms == ()
    assert normalize([(2, [1])], 1, 2).terms == ()
    s = normalize([(1, [1]), (1, [1])], 1)
    assert len(s.terms) == 2  # like terms stay apart
    with pytest.raises(FormatError):
        normalize([(1, [3])], 2)


def test_normalize_pointwise():
    rng = random.Random(11)
    for _ in range(100):
        n = rng.randint(1, 8)
        p = rng.choice([2, 3, 5])
        raw = random_raw(rng, n, rng.randint(0, 10), p)
        s = normalize(raw, n, p)
        for point in cube(n):
            a = sum(b << i for i, b in enumerate(point))
            assert s.evaluate(a) == raw_value(raw, point, p)


def test_pit_examples():
    assert pit_check(normalize([(1, [1]), (1, [-1])], 1), 1)
    assert not pit_check(normalize([(1, [1])], 1), 1)
    assert pit_check(normalize([], 3), 0)
    assert not pit_check(normalize([], 3), 1)


def test_single_term_layer_size():
    s = normalize([(1, [1, 2])], 2)
    r = pit_run(s, 0)
    assert r.layer_sizes == [1, 1]


def test_merge_dimension_bound():
    rows = np.array([[1], [1]], dtype=np.int64)
    rows, b1 = merge_layer(rows, np.array([X, DUAL], dtype=np.int8), 2)
    assert b1.size <= 2
    rows, b2 = merge_layer(rows, np.array([X, X], dtype=np.int8), 2)
    assert b2.size <= min(2, 2 * (b1.size + 1))


def _poly_mul(a, b, p):
    out = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = ma | mb
            out[m] = (out.get(m, 0) + ca * cb) % p
    return {m: c for m, c in out.items() if c}


def _poly_add(a, b, p, scale=1):
    out = dict(a)
    for m, c in b.items():
        out[m] = (out.get(m, 0) + scale * c) % p
    return {m: c for m, c in out.items() if c}


def _factor_poly(code, v, p):
    if code == X:
        return {frozenset([v]): 1}
    if code == DUAL:
        return {frozenset(): 1, frozenset([v]): p - 1}
    return {frozenset(): 1}


@pytest.mark.parametrize("p", [2, 3])
def test_layer_definitions_reproduce_products(p):
    """Symbolic expansion: every term equals its row over the layer definitions."""
    rng = random.Random(p)
    for _ in range(25):
        n = 4
        s = normalize(random_raw(rng, n, 10, p), n, p)
        if not s.terms:
            continue
        F = _factor_matrix(s)
        rows = np.array([[t.coef] for t in s.terms], dtype=np.int64)
        layer = [{frozenset(): 1}]  # polynomials of [1, y_1..y_k]
        products = [{frozenset(): t.coef} for t in s.terms]
        for v in range(1, n + 1):
            rows, basis = merge_layer(rows, F[:, v], p)
            xpoly = {frozenset([v]): 1}
            family = layer + [_poly_mul(u, xpoly, p) for u in layer]
            new = [{frozenset(): 1}]
            for d in basis.definitions:
                poly = {}
                for coef, f in zip(d, family):
                    if coef:
                        poly = _poly_add(poly, f, p, int(coef))
                new.append(poly)
            layer = new
            products = [_poly_mul(pr, _factor_poly(F[j, v], v, p), p) for j, pr in enumerate(products)]
            for j, pr in enumerate(products):
                got = {}
                for coef, y in zip(rows[j], layer):
                    if coef:
                        got = _poly_add(got, y, p, int(coef))
                assert got == pr


@pytest.mark.parametrize("p", [2, 3])
def test_pit_matches_cube(p):
    rng = random.Random(100 + p)
    seen = {True: 0, False: 0}
    for _ in range(150):
        n = rng.randint(1, 7)
        raw = random_raw(rng, n, rng.randint(0, 12), p)
        # half the time force an identity by appending the complement of the sum
        target = rng.randint(0, p - 1)
        if rng.random() < 0.5:
            raw = raw + [((-c) % p, f) for c, f in raw] + [(target, [])]
        s = normalize(raw, n, p)
        truth = all(raw_value(raw, pt, p) == target for pt in cube(n))
        res = pit_run(s, target, audit=True)
        assert res.accepted == truth
        seen[truth] += 1
        prev = 0
        for size in res.layer_sizes:
            assert size <= min(len(s.terms), 2 * (prev + 1))
            prev = size
    assert seen[True] > 20 and seen[False] > 20


def test_unsat_hitting_sums_to_one():
    for n in range(1, 9):
        assert pit_check(cnf_sum(complete_hitting(n), 2), 1)
    for seed in range(20):
        _, h = random_tree_hitting(12, 100, seed)
        assert pit_check(cnf_sum(h, 3), 1)
        if len(h) > 1:
            assert not pit_check(cnf_sum(Cnf(h.num_vars, h.clauses[1:]), 2), 1)


def test_snsr_examples():
    f = Cnf(1, [[1], [-1]])
    proof = SnsrProof(1, {0: [(1, [])], 1: [(1, [])]})
    assert verify_succinct_nsr(f, proof)
    for n in range(1, 9):
        h = complete_hitting(n)
        pr = SnsrProof(n, {i: [(1, [])] for i in range(len(h))})
        v = verify_succinct_nsr(h, pr)
        assert v and v.stats["terms"] == len(h)


def test_snsr_sign_mutation_rejected():
    h = complete_hitting(3)
    entries = {i: [(1, [])] for i in range(len(h))}
    entries[0] = [(1, [2]), (1, [-2])]
    assert verify_succinct_nsr(h, SnsrProof(3, entries))
    entries[0] = [(1, [2]), (1, [2])]
    assert not verify_succinct_nsr(h, SnsrProof(3, entries))


def test_snsr_errors():
    f = Cnf(1, [[1], [-1]])
    with pytest.raises(FormatError):
        verify_succinct_nsr(f, SnsrProof(1, {}))
    with pytest.raises(FormatError):
        verify_succinct_nsr(f, SnsrProof(1, {0: [(1, [3])]}))
    with pytest.raises(FormatError):
        verify_succinct_nsr(f, SnsrProof(1, {5: [(1, [])]}))


def test_snsr_codec():
    text = "p snsr 3 2\n1 : 2\n1 -2 0\n* 2 3 0\n2 : 1\n0\n"
    pr = parse_snsr(text)
    assert pr.entries == {0: [(1, [1, -2]), (2, [3])], 1: [(1, [])]}
    assert parse_snsr(serialize_snsr(pr)).entries == pr.entries
    for bad in ["p snsr 1 1\n1 : 1\n", "p snsr 1 1\n1 : 1\n2 0\n", "p snsr 1 2\n1 : 0\n", "q\n"]:
        with pytest.raises(FormatError):
            parse_snsr(bad)
