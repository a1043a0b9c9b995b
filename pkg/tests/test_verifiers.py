import random

import pytest

from hitkit.formula import AffineEquation, Clause, Cnf, FormatError, Xcnf, XorClause
from hitkit.generators import (
    Graph,
    complete_hitting,
    random_tree_hitting,
    spread,
    tseitin,
    union_hitting,
)
from hitkit.verifiers import (
    Failure,
    HittingCertificate,
    MappingError,
    PreconditionError,
    XcnfCertificate,
    is_hitting,
    is_hitting_xor,
    is_odd_hitting,
    parse_certificate,
    serialize_certificate,
    unsat_hitting_check,
    verify_hitting,
    verify_hitting_k,
    verify_hitting_xor,
    verify_odd_hitting,
)

from conftest import cube, eq_holds, falsifies


def counts(f):
    """Falsified-clause count per assignment, by direct evaluation."""
    n = f.num_vars
    out = []
    for p in cube(n):
        if isinstance(f, Xcnf):
            out.append(sum(not any(eq_holds(e.variables, e.rhs, p) for e in c.equations) for c in f))
        else:
            out.append(sum(falsifies(p, c.lits) for c in f))
    return out


def random_cnf(rng, n, m, width):
    cls = []
    for _ in range(m):
        vs = rng.sample(range(1, n + 1), rng.randint(0, min(width, n)))
        cls.append(Clause([v if rng.random() < 0.5 else -v for v in vs]))
    return Cnf(n, cls)


def test_is_hitting_examples():
    assert is_hitting(Cnf(2, [[1, 2], [-1, 2], [-2]]))
    v = is_hitting(Cnf(2, [[1], [2]]))
    assert not v and v.reason is Failure.NOT_HITTING and v.witness == (1, 2)


def test_unsat_count_examples():
    assert unsat_hitting_check(Cnf(1, [[1], [-1]]))
    assert unsat_hitting_check(complete_hitting(2))
    f = Cnf(2, [[1, 2], [-1, 2], [-2]])
    v = unsat_hitting_check(f)
    assert v and v.stats["falsified"] == 4
    for i in range(3):
        g = Cnf(2, f.clauses[:i] + f.clauses[i + 1 :])
        assert not unsat_hitting_check(g)
    with pytest.raises(PreconditionError):
        unsat_hitting_check(Cnf(2, [[1], [2]]))


def test_count_verdicts_match_enumeration():
    rng = random.Random(1)
    for seed in range(200):
        _, h = random_tree_hitting(rng.randint(1, 8), 40, seed)
        if seed % 2 and len(h) > 1:
            h = Cnf(h.num_vars, h.clauses[1:])
        c = counts(h)
        assert max(c) <= 1
        assert bool(unsat_hitting_check(h)) == (min(c) >= 1)


def test_hitting_verdicts_on_random_cnfs():
    rng = random.Random(2)
    for _ in range(300):
        f = random_cnf(rng, rng.randint(1, 6), rng.randint(1, 6), 3)
        c = counts(f)
        hit = is_hitting(f)
        # pairwise clash implies every assignment falsifies at most one clause
        if hit:
            assert max(c) <= 1
            assert bool(unsat_hitting_check(f)) == (min(c) >= 1)


def test_verify_hitting_self_certificate():
    for seed in range(30):
        _, h = random_tree_hitting(6, 30, seed)
        assert verify_hitting(h, HittingCertificate(h, list(range(len(h)))))


def test_verify_hitting_auto_mapping_and_soundness():
    f = Cnf(1, [[1], [-1]])
    v = verify_hitting(f, HittingCertificate(complete_hitting(2)))
    assert v and v.stats["mapping"] == "auto"
    rng = random.Random(3)
    accepted = 0
    for seed in range(200):
        f = random_cnf(rng, 4, rng.randint(2, 10), 2)
        cert = HittingCertificate(complete_hitting(4))
        v = verify_hitting(f, cert)
        unsat = min(counts(f)) >= 1
        assert bool(v) == unsat  # the complete formula weakens any unsat formula's clauses
        accepted += bool(v)
    assert accepted > 10


def test_verify_hitting_unmatched_clause():
    f = Cnf(2, [[1], [-1, 2], [-1, -2]])
    h = Cnf(2, [[1, 2], [1, -2], [-1, 2], [-1, -2]])
    assert verify_hitting(f, HittingCertificate(h))
    g = Cnf(2, [[1], [-1, 2]])
    v = verify_hitting(g, HittingCertificate(h))
    assert not v and v.reason is Failure.NO_STRENGTHENING and v.witness == 4


def test_mapping_errors_and_permutation():
    h = complete_hitting(2)
    with pytest.raises(MappingError):
        verify_hitting(h, HittingCertificate(h, [0, 1]))
    with pytest.raises(MappingError):
        verify_hitting(h, HittingCertificate(h, [0, 1, 2, 9]))
    perm = [2, 0, 3, 1]
    f = Cnf(2, [h[i] for i in perm])
    mapping = [perm.index(i) for i in range(4)]
    assert verify_hitting(f, HittingCertificate(h, mapping))
    assert not verify_hitting(f, HittingCertificate(h, list(range(4))))


def test_is_hitting_xor_examples():
    f = Xcnf(1, [XorClause([AffineEquation.of([1], 1)]), XorClause([AffineEquation.of([1], 0)])])
    assert is_hitting_xor(f)
    s = spread(3)
    assert is_hitting_xor(s)
    bad = Xcnf(s.num_vars, list(s.clauses[:-1]) + [XorClause(list(s[0].equations)[:-1])])
    v = is_hitting_xor(bad)
    assert not v and v.witness == (1, 8)


def test_verify_hitting_xor_examples():
    s = spread(3)
    assert verify_hitting_xor(s, XcnfCertificate(s, list(range(8))))
    dup = Xcnf(s.num_vars, list(s.clauses) + [s[0]])
    v = verify_hitting_xor(s, XcnfCertificate(dup))
    assert not v and v.reason is Failure.NOT_HITTING
    short = Xcnf(s.num_vars, s.clauses[1:])
    v = verify_hitting_xor(s, XcnfCertificate(short))
    assert not v and v.reason is Failure.COUNT_MISMATCH


def test_syntactic_vs_semantic_strengthening():
    axioms = Xcnf(2, [XorClause([AffineEquation.of([1, 2], 1), AffineEquation.of([2], 1)])])
    # same falsifying point written with different equations
    cert_clause = XorClause([AffineEquation.of([1], 1), AffineEquation.of([2], 1)])
    rest = [
        XorClause([AffineEquation.of([1], 0), AffineEquation.of([2], 1)]),
        XorClause([AffineEquation.of([2], 0)]),
    ]
    h = Xcnf(2, [cert_clause] + rest)
    f = Xcnf(2, list(axioms.clauses) + rest)
    assert not verify_hitting_xor(f, XcnfCertificate(h))
    assert verify_hitting_xor(f, XcnfCertificate(h, semantic=True))


def test_xor_verifier_agrees_with_plain_on_literals():
    rng = random.Random(4)
    for seed in range(60):
        _, h = random_tree_hitting(5, 20, seed)
        f = random_cnf(rng, 5, 4, 2) if seed % 3 == 0 else h
        if seed % 2 and len(h) > 1:
            h = Cnf(h.num_vars, h.clauses[1:])
        plain = verify_hitting(f, HittingCertificate(h))
        xor = verify_hitting_xor(Xcnf.from_cnf(f), XcnfCertificate(Xcnf.from_cnf(h)))
        assert bool(plain) == bool(xor)
        assert plain.reason == xor.reason


def test_hitting_k_examples():
    one = Cnf(1, [[1], [-1]])
    u = Cnf(1, one.clauses + one.clauses)
    v = verify_hitting_k(u, HittingCertificate(u), 2)
    assert v and v.stats["falsified"] == 2
    for seed in range(10):
        _, h = random_tree_hitting(5, 20, seed)
        assert bool(verify_hitting_k(h, HittingCertificate(h), 1)) == bool(unsat_hitting_check(h))
    parts = [random_tree_hitting(4, 10, s)[1] for s in range(3)]
    w = verify_hitting_k(union_hitting(parts), HittingCertificate(union_hitting(parts)), 2)
    assert not w and w.reason is Failure.JOINTLY_FALSIFIABLE and len(w.witness) == 3
    with pytest.raises(ValueError):
        verify_hitting_k(u, HittingCertificate(u), 5)


def test_hitting_k_inclusion_exclusion_matches_enumeration():
    rng = random.Random(5)
    for _ in range(150):
        f = random_cnf(rng, rng.randint(1, 6), rng.randint(1, 8), 3)
        c = counts(f)
        for k in (1, 2, 3):
            v = verify_hitting_k(f, HittingCertificate(f), k)
            if max(c) > k:
                assert v.reason is Failure.JOINTLY_FALSIFIABLE
            else:
                assert v.stats["falsified"] == sum(1 for x in c if x)
                assert bool(v) == (min(c) >= 1)


def test_odd_hitting_examples():
    for seed in range(10):
        _, h = random_tree_hitting(5, 20, seed)
        assert is_odd_hitting(h)
    tri = tseitin(Graph.named("triangle"), [1, 0, 0])
    assert is_odd_hitting(tri)
    assert all(x % 2 == 1 for x in counts(tri))
    assert verify_odd_hitting(tri, HittingCertificate(tri, list(range(6))))
    u = union_hitting([complete_hitting(3), random_tree_hitting(3, 6, 1)[1]])
    assert not is_odd_hitting(u)
    assert not verify_odd_hitting(u, HittingCertificate(u))
    cut = Cnf(tri.num_vars, tri.clauses[1:])
    v = verify_odd_hitting(tri, HittingCertificate(cut))
    assert not v and v.reason is Failure.IDENTITY_FAILS


def test_odd_hitting_matches_enumeration_and_jobs():
    rng = random.Random(6)
    for _ in range(120):
        f = random_cnf(rng, rng.randint(1, 5), rng.randint(1, 7), 3)
        c = counts(f)
        assert bool(is_odd_hitting(f)) == all(x % 2 == 1 for x in c if x)
        assert bool(verify_odd_hitting(f, HittingCertificate(f))) == all(x % 2 == 1 for x in c)
    k4 = tseitin(Graph.complete(4), [1, 0, 0, 0])
    assert is_odd_hitting(k4, jobs=2)


def test_certificate_codec():
    h = complete_hitting(2)
    text = serialize_certificate(h, [0, 1, 2, 3])
    assert text.startswith("p hitcert 2 4\n") and text.endswith("map 1 2 3 4\n")
    g, mp = parse_certificate(text)
    assert g == h and mp == [0, 1, 2, 3]
    g, mp = parse_certificate("p cnf 1 2\n1 0\n-1 0\n")
    assert mp is None and len(g) == 2
    s = spread(2)
    g, mp = parse_certificate(serialize_certificate(s))
    assert g == s and mp is None
    with pytest.raises(FormatError):
        parse_certificate("p hitcert 1\n")
    with pytest.raises(FormatError):
        parse_certificate("p hitcert 1 1\n1 0\nmap x\n")


def test_reordering_axioms_with_permuted_mapping():
    rng = random.Random(7)
    for seed in range(40):
        _, h = random_tree_hitting(6, 24, seed)
        f = Cnf(h.num_vars, list(h.clauses) + ([Clause([1])] if seed % 2 else []))
        base = verify_hitting(f, HittingCertificate(h, list(range(len(h)))))
        order = list(range(len(f)))
        rng.shuffle(order)
        g = Cnf(f.num_vars, [f[i] for i in order])
        where = {old: new for new, old in enumerate(order)}
        moved = verify_hitting(g, HittingCertificate(h, [where[i] for i in range(len(h))]))
        assert bool(base) == bool(moved) is True
