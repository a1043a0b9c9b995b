"""Formula families: complete hitting, Tseitin, perfect matching, xorification,
unambiguous-DNF composition, the Desarguesian spread, random tree formulas.

Numbering conventions
---------------------
* Graph edges are normalised to ``(u, v)`` with ``u < v``, sorted
  lexicographically, and edge ``i`` (0-based) is variable ``i + 1``.
* ``perfect_matching(a, b)``: left vertices ``L1..La`` come first, then
  ``R1..Rb``; edge ``(Li, Rj)`` is variable ``(i - 1) * b + j``.
* Lifted and xorified formulas interleave: variable ``i`` becomes the pair
  ``2i - 1, 2i``.
* ``spread(t)``: variables ``1..t-1`` are ``c_1..c_{t-1}`` and ``t..2t-1``
  are ``d_0..d_{t-1}`` (the constant coefficient ``c_0 = 1`` is dropped).
* ``compose_unambiguous``: outer variable ``i`` owns the block
  ``(i - 1) * g + 1 .. i * g`` for a gadget on ``g`` variables.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from math import comb
from typing import Iterable, Sequence

from .formula import AffineEquation, Clause, Cnf, FormatError, Xcnf, XorClause
from .gf2 import IRREDUCIBLE, Gf2tElement
from .simulations import Leaf, Node, Tree, leaves
from .verifiers import is_hitting, unsat_hitting_check

MAX_DEGREE = 30
MAX_EXPANSION = 10**6
DEFAULT_SEED = 0x5EED


class GeneratorError(ValueError):
    pass


# -- PRNG ------------------------------------------------------------------------


class SplitMix64:
    """splitmix64: state += 0x9E3779B97F4A7C15, then the usual two
    xor-shift-multiply rounds (0xBF58476D1CE4E5B9, 0x94D049BB133111EB).
    ``below(k)`` reduces the 64-bit output modulo ``k``."""

    MASK = (1 << 64) - 1

    def __init__(self, seed: int):
        self.state = seed & self.MASK

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & self.MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & self.MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & self.MASK
        return z ^ (z >> 31)

    def below(self, k: int) -> int:
        return self.next() % k


def default_seed() -> int:
    env = os.environ.get("HITKIT_SEED")
    return int(env, 0) if env else DEFAULT_SEED


# -- graphs -------------------------------------------------------------------------


@dataclass(frozen=True)
class Graph:
    num_vertices: int
    edges: tuple[tuple[int, int], ...]  # 1-based vertices, sorted, u < v

    def __init__(self, num_vertices: int, edges: Iterable[tuple[int, int]]):
        norm = set()
        for u, v in edges:
            if u == v:
                raise GeneratorError(f"self-loop at vertex {u}")
            if not (1 <= u <= num_vertices and 1 <= v <= num_vertices):
                raise GeneratorError(f"edge ({u}, {v}) out of range")
            e = (min(u, v), max(u, v))
            if e in norm:
                raise GeneratorError(f"multi-edge {e}")
            norm.add(e)
        object.__setattr__(self, "num_vertices", num_vertices)
        object.__setattr__(self, "edges", tuple(sorted(norm)))

    def incident(self, v: int) -> list[int]:
        """1-based variable indices of the edges at ``v``, ascending."""
        return [i + 1 for i, e in enumerate(self.edges) if v in e]

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        return cls(n, [(i, i % n + 1) for i in range(1, n + 1)])

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls(n, itertools.combinations(range(1, n + 1), 2))

    @classmethod
    def petersen(cls) -> "Graph":
        outer = [(i, i % 5 + 1) for i in range(1, 6)]
        spokes = [(i, i + 5) for i in range(1, 6)]
        inner = [(6 + i, 6 + (i + 2) % 5) for i in range(5)]
        return cls(10, outer + spokes + inner)

    @classmethod
    def named(cls, name: str) -> "Graph":
        name = name.lower()
        if name == "triangle":
            return cls.cycle(3)
        if name == "petersen":
            return cls.petersen()
        if name.startswith("c") and name[1:].isdigit():
            return cls.cycle(int(name[1:]))
        if name.startswith("k") and name[1:].isdigit():
            return cls.complete(int(name[1:]))
        raise GeneratorError(f"unknown graph name {name!r}")


def parse_graph(text: str) -> Graph:
    lines = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.startswith("c")]
    if not lines or lines[0][:2] != ["p", "graph"] or len(lines[0]) != 4:
        raise FormatError("expected 'p graph V E' header")
    nv, ne = int(lines[0][2]), int(lines[0][3])
    edges = []
    for ln in lines[1:]:
        if len(ln) != 2:
            raise FormatError(f"bad edge line {' '.join(ln)!r}")
        edges.append((int(ln[0]), int(ln[1])))
    if len(edges) != ne:
        raise FormatError(f"header declares {ne} edges, found {len(edges)}")
    return Graph(nv, edges)


def serialize_graph(g: Graph) -> str:
    return "\n".join([f"p graph {g.num_vertices} {len(g.edges)}"] + [f"{u} {v}" for u, v in g.edges]) + "\n"


# -- families ------------------------------------------------------------------------


def complete_hitting(n: int) -> Cnf:
    """All 2^n full-width clauses; clause ``a`` is the one falsified by assignment ``a``
    (bit ``n - v`` of ``a`` is ``x_v``, so the order is lexicographic)."""
    if not 1 <= n <= 20:
        raise GeneratorError("complete_hitting needs 1 <= n <= 20")
    out = []
    for bits in itertools.product((0, 1), repeat=n):
        out.append(Clause([v if b == 0 else -v for v, b in enumerate(bits, 1)]))
    return Cnf(n, out)


def tseitin(g: Graph, charges: Sequence[int]) -> Cnf:
    if len(charges) != g.num_vertices:
        raise GeneratorError(f"{len(charges)} charges for {g.num_vertices} vertices")
    out = []
    for v in range(1, g.num_vertices + 1):
        inc = g.incident(v)
        if len(inc) > MAX_DEGREE:
            raise GeneratorError(f"vertex {v} has degree {len(inc)} > {MAX_DEGREE}")
        cv = charges[v - 1] & 1
        for bits in itertools.product((0, 1), repeat=len(inc)):
            if sum(bits) % 2 == cv:
                continue
            out.append(Clause([e if b == 0 else -e for e, b in zip(inc, bits)]))
    return Cnf(len(g.edges), out)


def tseitin_clause_count(g: Graph, charges: Sequence[int]) -> int:
    total = 0
    for v in range(1, g.num_vertices + 1):
        d = g.degree(v)
        total += 2 ** (d - 1) if d else charges[v - 1] & 1
    return total


def perfect_matching(a: int, b: int, xor_lift: bool = False) -> Cnf | Xcnf:
    """PM formula of K_{a,b}: per vertex, pairwise exclusion then one covering clause."""
    if a < 1 or b < 1 or a * b > 2000:
        raise GeneratorError("perfect_matching needs a, b >= 1 and a*b <= 2000")

    def var(i: int, j: int) -> int:
        return (i - 1) * b + j

    incident = [[var(i, j) for j in range(1, b + 1)] for i in range(1, a + 1)]
    incident += [[var(i, j) for i in range(1, a + 1)] for j in range(1, b + 1)]
    clauses: list[list[int]] = []
    for inc in incident:
        for e, f in itertools.combinations(inc, 2):
            clauses.append([-e, -f])
        clauses.append(list(inc))
    if not xor_lift:
        return Cnf(a * b, clauses)
    lifted = []
    for c in clauses:
        lifted.append(
            XorClause(AffineEquation.of([2 * abs(z) - 1, 2 * abs(z)], 1 if z > 0 else 0) for z in c)
        )
    return Xcnf(2 * a * b, lifted)


def pm_clause_count(a: int, b: int) -> int:
    return a * (comb(b, 2) + 1) + b * (comb(a, 2) + 1)


def xorify(f: Cnf) -> Cnf:
    """Substitute ``y_i = x_{2i-1} XOR x_{2i}`` and expand to CNF.

    Each literal is falsified by two patterns of its pair; a clause of width w
    expands into the 2^w clauses negating each combination of patterns.
    """
    out = []
    for c in f.clauses:
        if c.width > 20:
            raise GeneratorError(f"clause width {c.width} > 20")
        # literal y (positive) is false when the pair XORs to 0: patterns 00, 11
        options = []
        for lit in c.lits:
            a, b = 2 * abs(lit) - 1, 2 * abs(lit)
            want = 0 if lit > 0 else 1
            pats = [(p, q) for p in (0, 1) for q in (0, 1) if p ^ q == want]
            options.append([[a if p == 0 else -a, b if q == 0 else -b] for p, q in pats])
        for combo in itertools.product(*options):
            out.append(Clause(itertools.chain.from_iterable(combo)))
    return Cnf(2 * f.num_vars, out)


def xor_gadget() -> Tree:
    """Depth-2 tree for x1 XOR x2; leaf labels are output values."""
    return Node(1, Node(2, Leaf(0), Leaf(1)), Node(2, Leaf(1), Leaf(0)))


def identity_gadget() -> Tree:
    return Node(1, Leaf(0), Leaf(1))


def _gadget_vars(t: Tree) -> int:
    hi = 0
    for path, _ in leaves(t):
        for v, _b in path:
            hi = max(hi, v)
    return hi


def compose_unambiguous(dnf_pair: Cnf | Sequence[Cnf], gadget: Tree) -> Cnf:
    """Compose an unsat hitting formula with a decision-tree gadget.

    ``dnf_pair`` is either one unsat hitting formula or the two halves
    (assignments where the underlying function is 0, resp. 1) whose union is
    one.  Gadget leaf labels are output bits.  In each clause, the condition
    ``y_i = a`` that falsifies a literal is replaced by the gadget paths
    reaching output ``a``, renamed into block ``i``, and multiplied out.
    """
    if isinstance(dnf_pair, Cnf):
        parts = [dnf_pair]
    else:
        parts = list(dnf_pair)
    n = max(p.num_vars for p in parts)
    whole = Cnf(n, [c for p in parts for c in p.clauses])
    if not is_hitting(whole) or not unsat_hitting_check(whole, check=False):
        raise GeneratorError("compose_unambiguous needs the halves of an unsat hitting formula")
    g = _gadget_vars(gadget)
    paths = {0: [], 1: []}
    for path, leaf in leaves(gadget):
        if leaf.clause not in (0, 1):
            raise GeneratorError("gadget leaves must be labelled 0 or 1")
        if len({v for v, _ in path}) != len(path):
            raise GeneratorError("gadget repeats a variable on a path")
        paths[leaf.clause].append(path)
    if not paths[0] or not paths[1]:
        raise GeneratorError("gadget must be able to output both 0 and 1")
    total = 0
    for c in whole.clauses:
        size = 1
        for lit in c.lits:
            size *= len(paths[0 if lit > 0 else 1])
        total += size
    if total > MAX_EXPANSION:
        raise GeneratorError(f"composition would produce {total} clauses")
    out = []
    for c in whole.clauses:
        options = []
        for lit in c.lits:
            i = abs(lit)
            # positive literal y_i is false when y_i = 0
            val = 0 if lit > 0 else 1
            off = (i - 1) * g
            options.append(
                [[(off + v) if b == 0 else -(off + v) for v, b in path] for path in paths[val]]
            )
        for combo in itertools.product(*options):
            out.append(Clause(itertools.chain.from_iterable(combo)))
    return Cnf(n * g, out)


def spread(t: int) -> Xcnf:
    """Desarguesian-spread partition of {0,1}^(2t-1) into 2^t affine subspaces.

    Clause alpha is falsified exactly on V_alpha = {(c, alpha*c) : c_0 = 1}.
    """
    if not 2 <= t <= 16:
        raise GeneratorError("spread needs 2 <= t <= 16")
    mod = IRREDUCIBLE[t]
    # images of the basis monomials x^i under multiplication by alpha, per alpha
    clauses = []
    for a in range(1 << t):
        alpha = Gf2tElement(t, a, mod)
        cols = [(alpha * Gf2tElement(t, 1 << i, mod)).coeffs for i in range(t)]
        eqs = []
        for j in range(t):
            # d_j + sum_{i>=1} c_i (alpha x^i)_j = (alpha * 1)_j
            vs = [t + j] + [i for i in range(1, t) if cols[i] >> j & 1]
            rhs = cols[0] >> j & 1
            eqs.append(AffineEquation.of(vs, rhs).negate())
        clauses.append(XorClause(eqs))
    return Xcnf(2 * t - 1, clauses)


def spread_point(t: int, c: int, d: int) -> int:
    """Assignment index of (c, d) with c_0 = 1 under the spread variable layout."""
    a = 0
    for i in range(1, t):
        if c >> i & 1:
            a |= 1 << (i - 1)
    for j in range(t):
        if d >> j & 1:
            a |= 1 << (t - 1 + j)
    return a


def random_tree_hitting(n: int, max_leaves: int, seed: int | None = None) -> tuple[Tree, Cnf]:
    """Random total decision tree and its leaf-negation hitting formula.

    Starts from a single leaf and repeatedly splits a uniformly chosen leaf
    on a uniformly chosen unused variable until the drawn leaf target
    (uniform in 1..max_leaves, capped at 2^n) is reached.  Leaf ``i`` in
    left-to-right order is labelled with clause ``i``.
    """
    if not 1 <= n <= 24 or not 1 <= max_leaves <= 4096:
        raise GeneratorError("random_tree_hitting needs n <= 24, max_leaves <= 4096")
    rng = SplitMix64(default_seed() if seed is None else seed)
    target = 1 + rng.below(min(max_leaves, 1 << n))
    # a leaf is its path: tuple of (var, bit)
    open_leaves: list[tuple[tuple[int, int], ...]] = [()]
    while len(open_leaves) < target:
        splittable = [i for i, p in enumerate(open_leaves) if len(p) < n]
        idx = splittable[rng.below(len(splittable))]
        path = open_leaves[idx]
        used = {v for v, _ in path}
        free = [v for v in range(1, n + 1) if v not in used]
        v = free[rng.below(len(free))]
        open_leaves[idx : idx + 1] = [path + ((v, 0),), path + ((v, 1),)]
    clauses = [Clause([v if b == 0 else -v for v, b in p]) for p in open_leaves]
    tree = _tree_from_paths(open_leaves, list(range(len(open_leaves))))
    return tree, Cnf(n, clauses)


def _tree_from_paths(paths, labels, depth: int = 0) -> Tree:
    if len(paths) == 1 and len(paths[0]) == depth:
        return Leaf(labels[0])
    v = paths[0][depth][0]
    lo = [(p, l) for p, l in zip(paths, labels) if p[depth][1] == 0]
    hi = [(p, l) for p, l in zip(paths, labels) if p[depth][1] == 1]
    return Node(
        v,
        _tree_from_paths([p for p, _ in lo], [l for _, l in lo], depth + 1),
        _tree_from_paths([p for p, _ in hi], [l for _, l in hi], depth + 1),
    )


def union_hitting(parts: Sequence[Cnf]) -> Cnf:
    """Concatenate unsat hitting formulas; every assignment falsifies len(parts) clauses."""
    if not parts:
        raise GeneratorError("union_hitting needs at least one part")
    n = max(p.num_vars for p in parts)
    for i, p in enumerate(parts):
        if not is_hitting(p) or not unsat_hitting_check(p, n, check=False):
            raise GeneratorError(f"part {i + 1} is not an unsatisfiable hitting formula")
    return Cnf(n, [c for p in parts for c in p.clauses])


def width_size_ok(h: Cnf) -> bool:
    """A hitting formula of width w has at most 2^w clauses."""
    return len(h) <= 1 << h.width()


def random_parity_tree(n: int, max_leaves: int, seed: int | None = None):
    """Random total parity decision tree and its leaf xor-clauses.

    Like ``random_tree_hitting`` but each split queries a random affine form
    independent of the forms already on the path.  Returns ``(tree, xcnf)``
    where clause ``i`` negates the answers on the path to leaf ``i``.
    """
    from .gf2 import rank
    from .simulations import ParityNode

    if not 1 <= n <= 24 or not 1 <= max_leaves <= 4096:
        raise GeneratorError("random_parity_tree needs n <= 24, max_leaves <= 4096")
    rng = SplitMix64(default_seed() if seed is None else seed)
    target = 1 + rng.below(min(max_leaves, 1 << n))
    # a leaf is its path: tuple of (mask, const, answer)
    open_leaves: list[tuple[tuple[int, int, int], ...]] = [()]
    while len(open_leaves) < target:
        splittable = [i for i, p in enumerate(open_leaves) if len(p) < n]
        idx = splittable[rng.below(len(splittable))]
        path = open_leaves[idx]
        masks = [m for m, _, _ in path]
        while True:
            mask = (rng.next() & ((1 << n) - 1)) << 1
            if mask and rank(masks + [mask]) == len(masks) + 1:
                break
        const = rng.below(2)
        open_leaves[idx : idx + 1] = [path + ((mask, const, 0),), path + ((mask, const, 1),)]

    def build(paths, labels, depth):
        if len(paths) == 1 and len(paths[0]) == depth:
            return Leaf(labels[0])
        mask, const, _ = paths[0][depth]
        lo = [(p, l) for p, l in zip(paths, labels) if p[depth][2] == 0]
        hi = [(p, l) for p, l in zip(paths, labels) if p[depth][2] == 1]
        return ParityNode(
            mask,
            const,
            build([p for p, _ in lo], [l for _, l in lo], depth + 1),
            build([p for p, _ in hi], [l for _, l in hi], depth + 1),
        )

    tree = build(open_leaves, list(range(len(open_leaves))), 0)
    clauses = [
        XorClause(AffineEquation(m, b ^ c ^ 1) for m, c, b in p) for p in open_leaves
    ]
    return tree, Xcnf(n, clauses)
