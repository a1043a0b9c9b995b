import random
from collections import Counter

import pytest
from hypothesis import given, strategies as st

from hitkit.formula import Cnf, FormatError, Xcnf, restrict
from hitkit.generators import (
    GeneratorError,
    Graph,
    SplitMix64,
    complete_hitting,
    compose_unambiguous,
    identity_gadget,
    parse_graph,
    perfect_matching,
    pm_clause_count,
    random_parity_tree,
    random_tree_hitting,
    serialize_graph,
    spread,
    spread_point,
    tseitin,
    tseitin_clause_count,
    union_hitting,
    width_size_ok,
    xor_gadget,
    xorify,
)
from hitkit.gf2 import IRREDUCIBLE
from hitkit.simulations import Leaf, Node
from hitkit.verifiers import is_hitting, unsat_hitting_check

from conftest import cube, eq_holds, falsifies


def counts(f):
    out = []
    for p in cube(f.num_vars):
        if isinstance(f, Xcnf):
            out.append(sum(not any(eq_holds(e.variables, e.rhs, p) for e in c.equations) for c in f))
        else:
            out.append(sum(falsifies(p, c.lits) for c in f))
    return out


def field_mul(a, b, t):
    """Schoolbook product in GF(2)[x] reduced by the table modulus."""
    prod = 0
    for i in range(t):
        if b >> i & 1:
            prod ^= a << i
    mod = IRREDUCIBLE[t]
    for i in range(2 * t - 2, t - 1, -1):
        if prod >> i & 1:
            prod ^= mod << (i - t)
    return prod


def test_splitmix_reference_values():
    # published outputs for seed 1234567
    r = SplitMix64(1234567)
    assert [r.next() for _ in range(3)] == [
        6457827717110365317,
        3203168211198807973,
        9817491932198370423,
    ]
    r = SplitMix64(0)
    assert r.next() == 0xE220A8397B1DCDAF
    assert all(0 <= SplitMix64(s).below(7) < 7 for s in range(50))


def test_complete_hitting_order_and_counts():
    h = complete_hitting(3)
    assert len(h) == 8 and h.width() == 3
    for a in range(8):
        point = tuple(a >> (3 - v) & 1 for v in range(1, 4))
        assert falsifies(point, h[a].lits)
    assert counts(h) == [1] * 8
    for n in (0, 21):
        with pytest.raises(GeneratorError):
            complete_hitting(n)


def test_graphs():
    assert Graph.named("triangle").edges == ((1, 2), (1, 3), (2, 3))
    p = Graph.named("petersen")
    assert p.num_vertices == 10 and len(p.edges) == 15
    assert all(p.degree(v) == 3 for v in range(1, 11))
    assert len(Graph.named("K5").edges) == 10
    assert len(Graph.named("c7").edges) == 7
    assert Graph(3, [(2, 1), (3, 2)]).incident(2) == [1, 2]
    for bad in ([(1, 1)], [(1, 2), (2, 1)], [(1, 4)]):
        with pytest.raises(GeneratorError):
            Graph(3, bad)
    with pytest.raises(GeneratorError):
        Graph.named("cube")
    g = Graph.complete(4)
    assert parse_graph(serialize_graph(g)) == g
    with pytest.raises(FormatError):
        parse_graph("p graph 3 2\n1 2\n")
    with pytest.raises(FormatError):
        parse_graph("1 2\n")


def test_tseitin_examples():
    tri = tseitin(Graph.named("triangle"), [1, 0, 0])
    assert tri.num_vars == 3 and len(tri) == 6
    # clauses at different vertices need not clash
    assert not is_hitting(tri)
    assert all(c % 2 == 1 for c in counts(tri))
    even = tseitin(Graph.named("triangle"), [1, 1, 0])
    assert 0 in counts(even)
    edge = tseitin(Graph(2, [(1, 2)]), [1, 0])
    assert sorted(c.lits for c in edge) == [(-1,), (1,)]
    isolated = tseitin(Graph(2, []), [1, 0])
    assert len(isolated) == 1 and isolated[0].width == 0


@pytest.mark.parametrize("name", ["triangle", "c5", "k4", "petersen"])
def test_tseitin_parity_semantics(name):
    g = Graph.named(name)
    rng = random.Random(name)
    for _ in range(4):
        ch = [rng.randint(0, 1) for _ in range(g.num_vertices)]
        f = tseitin(g, ch)
        assert len(f) == tseitin_clause_count(g, ch)
        if g.num_vertices > 5:
            continue
        cs = counts(f)
        # clauses falsified at x = vertices whose parity constraint x violates
        for p, c in zip(cube(f.num_vars), cs):
            bad = sum(1 for v in range(1, g.num_vertices + 1)
                      if sum(p[e - 1] for e in g.incident(v)) % 2 != ch[v - 1])
            assert c == bad
        assert (min(cs) >= 1) == (sum(ch) % 2 == 1)


def test_perfect_matching():
    assert len(perfect_matching(2, 3)) == pm_clause_count(2, 3) == 2 * 4 + 3 * 2
    for a, b in [(1, 1), (2, 2), (2, 3), (3, 2), (1, 3)]:
        f = perfect_matching(a, b)
        cs = counts(f)
        assert (min(cs) >= 1) == (a != b)
        for p, c in zip(cube(a * b), cs):
            if c == 0:
                edges = [v for v in range(1, a * b + 1) if p[v - 1]]
                assert len(edges) == a == b
    lifted = perfect_matching(2, 2, xor_lift=True)
    assert isinstance(lifted, Xcnf) and lifted.num_vars == 8
    base = counts(perfect_matching(2, 2))
    for p, c in zip(cube(8), counts(lifted)):
        y = tuple(p[2 * i] ^ p[2 * i + 1] for i in range(4))
        idx = int("".join(map(str, y)), 2)
        assert c == base[idx]
    with pytest.raises(GeneratorError):
        perfect_matching(0, 2)


def test_xorify_example():
    f = xorify(Cnf(1, [[1]]))
    assert f.num_vars == 2
    assert sorted(c.lits for c in f) == sorted([(1, 2), (-1, -2)])
    assert len(xorify(Cnf(2, [[1, -2]]))) == 4


@given(st.integers(1, 3).flatmap(lambda n: st.tuples(
    st.just(n),
    st.lists(st.lists(st.integers(1, n).flatmap(lambda v: st.sampled_from([v, -v])),
                      max_size=n, unique_by=abs), max_size=4))))
def test_xorify_preserves_counts(data):
    n, cls = data
    f = Cnf(n, cls)
    g = xorify(f)
    base = counts(f)
    for p, c in zip(cube(2 * n), counts(g)):
        y = tuple(p[2 * i] ^ p[2 * i + 1] for i in range(n))
        assert c == base[int("".join(map(str, y)) or "0", 2)]


def test_xorify_commutes_with_restriction():
    for seed in range(20):
        _, h = random_tree_hitting(4, 10, seed)
        g = xorify(h)
        for v in range(1, 5):
            for b in (0, 1):
                # equal copies force y_v = 0, unequal copies force y_v = 1
                for c, y in ((b, 0), (1 - b, 1)):
                    r = restrict(g, {2 * v - 1: b, 2 * v: c})
                    s = xorify(restrict(h, {v: y}))
                    assert sorted(x.lits for x in r) == sorted(x.lits for x in s)


def test_compose_identity_and_xor_gadget():
    for seed in range(15):
        _, h = random_tree_hitting(4, 12, seed)
        assert compose_unambiguous(h, identity_gadget()) == h
        x = compose_unambiguous(h, xor_gadget())
        assert sorted(c.lits for c in x) == sorted(c.lits for c in xorify(h))
        assert is_hitting(x) and unsat_hitting_check(x)


def test_compose_halves_and_errors():
    h = complete_hitting(2)
    halves = [Cnf(2, h.clauses[:2]), Cnf(2, h.clauses[2:])]
    g = Node(1, Node(2, Leaf(0), Leaf(1)), Leaf(1))  # OR gadget
    out = compose_unambiguous(halves, g)
    assert out.num_vars == 4 and is_hitting(out) and unsat_hitting_check(out)
    assert counts(out) == [1] * 16
    with pytest.raises(GeneratorError):
        compose_unambiguous(Cnf(2, [[1], [2]]), xor_gadget())
    with pytest.raises(GeneratorError):
        compose_unambiguous(h, Node(1, Leaf(0), Leaf(0)))
    with pytest.raises(GeneratorError):
        compose_unambiguous(h, Node(1, Leaf(0), Leaf(2)))


@pytest.mark.parametrize("t", [2, 3, 4, 5])
def test_spread_partition(t):
    s = spread(t)
    assert s.num_vars == 2 * t - 1 and len(s) == 1 << t
    assert all(len(c.equations) == t for c in s)
    cs = counts(s)
    assert cs == [1] * (1 << (2 * t - 1))
    for alpha in range(1 << t):
        for c in range(1 << t):
            if not c & 1:
                continue
            a = spread_point(t, c, field_mul(alpha, c, t))
            point = tuple(a >> (v - 1) & 1 for v in range(1, 2 * t))
            assert not any(eq_holds(e.variables, e.rhs, point) for e in s[alpha].equations)
    with pytest.raises(GeneratorError):
        spread(1)


def test_random_generators_are_deterministic():
    assert random_tree_hitting(6, 20, 9) == random_tree_hitting(6, 20, 9)
    assert random_parity_tree(6, 20, 9) == random_parity_tree(6, 20, 9)
    sizes = {len(random_tree_hitting(6, 20, s)[1]) for s in range(40)}
    assert len(sizes) > 5 and max(sizes) <= 20
    for seed in range(30):
        _, h = random_tree_hitting(5, 32, seed)
        assert is_hitting(h) and counts(h) == [1] * 32
        assert width_size_ok(h)
        t, x = random_parity_tree(4, 16, seed)
        assert counts(x) == [1] * 16
    with pytest.raises(GeneratorError):
        random_tree_hitting(0, 4)


def test_union_and_width_size():
    parts = [random_tree_hitting(4, 10, s)[1] for s in range(3)]
    u = union_hitting(parts)
    assert len(u) == sum(map(len, parts))
    assert counts(u) == [3] * 16
    with pytest.raises(GeneratorError):
        union_hitting([Cnf(2, [[1]])])
    with pytest.raises(GeneratorError):
        union_hitting([])
    assert width_size_ok(complete_hitting(3))
    assert not width_size_ok(Cnf(1, [[1], [-1], [1]]))
