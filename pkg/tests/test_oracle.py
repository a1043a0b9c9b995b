import random

import numpy as np
import pytest

from hitkit.formula import AffineEquation, Clause, Cnf, FormatError, Xcnf, XorClause
from hitkit.generators import complete_hitting, random_parity_tree, random_tree_hitting, spread
from hitkit.oracle import (
    OracleLimit,
    check_tree_search,
    counts,
    coverage_profile,
    eval_sum_on_cube,
    is_satisfiable,
    region_subset,
)
from hitkit.pit import Pseudomonomial, PseudomonomialSum
from hitkit.simulations import Leaf, Node, ParityNode

from conftest import eq_holds, falsifies


def point(a, n):
    return tuple(a >> (v - 1) & 1 for v in range(1, n + 1))


def naive_counts(f):
    n = f.num_vars
    out = []
    for a in range(1 << n):
        p = point(a, n)
        if isinstance(f, Xcnf):
            out.append(sum(not any(eq_holds(e.variables, e.rhs, p) for e in c.equations) for c in f))
        else:
            out.append(sum(falsifies(p, c.lits) for c in f))
    return out


def random_cnf(rng, n, m):
    cls = []
    for _ in range(m):
        vs = rng.sample(range(1, n + 1), rng.randint(0, n))
        cls.append([v if rng.random() < 0.5 else -v for v in vs])
    return Cnf(n, cls)


def random_xcnf(rng, n, m):
    cls = []
    for _ in range(m):
        eqs = []
        for _ in range(rng.randint(0, 3)):
            vs = rng.sample(range(1, n + 1), rng.randint(1, n))
            eqs.append(AffineEquation.of(vs, rng.randint(0, 1)))
        try:
            cls.append(XorClause(eqs))
        except FormatError:  # tautological draw
            continue
    return Xcnf(n, cls)


def test_complete_profile():
    prof = coverage_profile(complete_hitting(3))
    assert prof.histogram == {1: 8}
    assert prof.exactly_once and prof.all_odd and prof.unsatisfiable and prof.covered == 8


def test_counts_match_naive_evaluation():
    rng = random.Random(11)
    for _ in range(80):
        n = rng.randint(0, 7)
        f = random_cnf(rng, n, rng.randint(0, 6)) if n else Cnf(0, [[]] * rng.randint(0, 2))
        assert counts(f).tolist() == naive_counts(f)
        x = random_xcnf(rng, max(n, 1), rng.randint(0, 6))
        assert counts(x).tolist() == naive_counts(x)


def test_profile_fields():
    f = Cnf(2, [[1], [1, 2], [-2]])
    prof = coverage_profile(f)
    c = naive_counts(f)
    assert prof.histogram == {k: c.count(k) for k in set(c)}
    assert prof.min_count == min(c) and c[prof.min_witness] == min(c)
    assert prof.max_count == max(c) and c[prof.max_witness] == max(c)
    assert not prof.unsatisfiable and is_satisfiable(f)
    assert prof.at_most(2) and not prof.at_most(1)
    assert not prof.all_odd
    assert coverage_profile(spread(3)).exactly_once


def test_limit_guard():
    with pytest.raises(OracleLimit):
        counts(Cnf(25, [[1]]))
    with pytest.raises(OracleLimit):
        coverage_profile(Cnf(5, [[1]]), limit_n=4)
    with pytest.raises(OracleLimit):
        check_tree_search(Leaf(0), Cnf(30, [[]]))


def test_eval_sum_on_cube():
    one = PseudomonomialSum(1, (Pseudomonomial(1, 2, 0), Pseudomonomial(1, 0, 2)))
    assert eval_sum_on_cube(one, 1) and not eval_sum_on_cube(one, 0)
    rng = random.Random(12)
    for _ in range(40):
        n = rng.randint(1, 5)
        p = rng.choice([2, 3, 5])
        terms = []
        for _ in range(rng.randint(0, 5)):
            s = rng.getrandbits(n) << 1
            t = rng.getrandbits(n) << 1 & ~s
            terms.append(Pseudomonomial(rng.randrange(1, p), s, t))
        ps = PseudomonomialSum(n, tuple(terms), p)
        vals = set()
        for a in range(1 << n):
            v = 0
            for c, s, t in terms:
                if all(a >> (u - 1) & 1 for u in range(1, n + 1) if s >> u & 1) and not any(
                    a >> (u - 1) & 1 for u in range(1, n + 1) if t >> u & 1
                ):
                    v += c
            vals.add(v % p)
        for target in range(p):
            assert eval_sum_on_cube(ps, target) == (vals == {target})


def test_check_tree_search():
    assert check_tree_search(Leaf(0), Cnf(3, [[]]))
    assert not check_tree_search(Leaf(0), Cnf(1, [[1]]))
    assert not check_tree_search(Leaf(3), Cnf(1, [[]]))
    f = Cnf(1, [[1], [-1]])
    assert check_tree_search(Node(1, Leaf(0), Leaf(1)), f)
    assert not check_tree_search(Node(1, Leaf(1), Leaf(0)), f)
    for seed in range(20):
        t, h = random_tree_hitting(6, 30, seed)
        assert check_tree_search(t, h)
        t, x = random_parity_tree(6, 30, seed)
        assert check_tree_search(t, x)
    x = Xcnf(2, [XorClause([AffineEquation.of([1, 2], 1)]), XorClause([AffineEquation.of([1, 2], 0)])])
    m = AffineEquation.of([1, 2], 0).mask
    assert check_tree_search(ParityNode(m, 0, Leaf(0), Leaf(1)), x)
    assert not check_tree_search(ParityNode(m, 1, Leaf(0), Leaf(1)), x)


def test_region_subset():
    n = 3
    assert region_subset(Clause([1, 2, 3]), Clause([1, 2]), n)
    assert not region_subset(Clause([1, 2]), Clause([1, 2, 3]), n)
    e = XorClause([AffineEquation.of([1], 1), AffineEquation.of([2], 1)])
    assert region_subset(Clause([1, 2]), e, n) and region_subset(e, Clause([1, 2]), n)
    assert not region_subset(Clause([1]), e, n)
    assert np.all(counts(Xcnf(2, [XorClause([])])) == 1)
