"""Brute-force ground truth over the whole cube (n <= 24).

Every clause is expanded into the explicit list of assignment indices it
falsifies (index bit ``v - 1`` = ``x_v``), so counts are accumulated per
region rather than per assignment.  Xor-clauses are evaluated directly on the
whole cube; nothing here goes through the GF(2) elimination code.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .formula import Clause, Cnf, Xcnf, XorClause
from .pit import PseudomonomialSum

LIMIT_N = 24


class OracleLimit(ValueError):
    pass


def _guard(n: int, limit: int) -> None:
    if n > limit:
        raise OracleLimit(f"oracle refuses n={n} > {limit}")


def _span(base: int, gens: list[int]) -> np.ndarray:
    pts = np.array([base], dtype=np.int64)
    for g in gens:
        pts = np.concatenate([pts, pts ^ g])
    return pts


def clause_points(c: Clause, n: int) -> np.ndarray:
    """Assignments falsifying ``c``: the subcube fixing its literals false."""
    base = 0
    for v in range(1, n + 1):
        if c.neg >> v & 1:
            base |= 1 << (v - 1)
    fixed = c.pos | c.neg
    return _span(base, [1 << (v - 1) for v in range(1, n + 1) if not fixed >> v & 1])


def xor_clause_points(c: XorClause, n: int) -> np.ndarray:
    # direct evaluation, deliberately not via gf2 elimination
    return np.flatnonzero(_falsified_mask(c, _assignments(n))).astype(np.int64)


def region_points(c, n: int) -> np.ndarray:
    if isinstance(c, XorClause):
        return xor_clause_points(c, n)
    return clause_points(c, n)


@dataclass
class CoverageProfile:
    n: int
    histogram: dict[int, int]
    min_count: int
    max_count: int
    min_witness: int
    max_witness: int

    @property
    def exactly_once(self) -> bool:
        return self.histogram == {1: 1 << self.n}

    @property
    def all_odd(self) -> bool:
        """Every falsifying assignment falsifies an odd number of clauses."""
        return all(k % 2 == 1 for k in self.histogram if k > 0)

    @property
    def unsatisfiable(self) -> bool:
        return self.min_count >= 1

    def at_most(self, k: int) -> bool:
        return self.max_count <= k

    @property
    def covered(self) -> int:
        """Assignments falsifying at least one clause."""
        return (1 << self.n) - self.histogram.get(0, 0)


def counts(f: Cnf | Xcnf, limit_n: int = LIMIT_N) -> np.ndarray:
    n = f.num_vars
    _guard(n, limit_n)
    cnt = np.zeros(1 << n, dtype=np.int32)
    for c in f.clauses:
        cnt[region_points(c, n)] += 1
    return cnt


def coverage_profile(f: Cnf | Xcnf, limit_n: int = LIMIT_N) -> CoverageProfile:
    cnt = counts(f, limit_n)
    vals, freq = np.unique(cnt, return_counts=True)
    return CoverageProfile(
        f.num_vars,
        {int(k): int(v) for k, v in zip(vals, freq)},
        int(cnt.min()),
        int(cnt.max()),
        int(cnt.argmin()),
        int(cnt.argmax()),
    )


def eval_sum_on_cube(s: PseudomonomialSum, target: int, limit_n: int = LIMIT_N) -> bool:
    """Does the sum take value ``target`` (mod p) at every point of the cube?"""
    n = s.num_vars
    _guard(n, limit_n)
    val = np.zeros(1 << n, dtype=np.int64)
    for t in s.terms:
        # support of x_S * (1 - x_T) is the subcube S = 1, T = 0
        c = Clause._from_masks(t.duals, t.xs)
        val[clause_points(c, n)] += t.coef
    return bool(np.all(val % s.p == target % s.p))


def _assignments(n: int) -> np.ndarray:
    return np.arange(1 << n, dtype=np.int64)


def _falsified_mask(c, a: np.ndarray) -> np.ndarray:
    if isinstance(c, XorClause):
        ok = np.ones(a.shape, dtype=bool)
        for e in c.equations:
            par = np.bitwise_count(a & (e.mask >> 1)) & 1
            ok &= par != e.rhs
        return ok
    pos = c.pos >> 1
    neg = c.neg >> 1
    return ((a & pos) == 0) & ((a & neg) == neg)


def check_tree_search(t, f: Cnf | Xcnf, limit_n: int = LIMIT_N) -> bool:
    """Walk every assignment down the tree; its leaf clause must be falsified."""
    from .simulations import Leaf, Node

    n = f.num_vars
    _guard(n, limit_n)
    stack = [(t, _assignments(n))]
    while stack:
        node, a = stack.pop()
        if a.size == 0:
            continue
        if isinstance(node, Leaf):
            if not 0 <= node.clause < len(f):
                return False
            if not np.all(_falsified_mask(f[node.clause], a)):
                return False
            continue
        if isinstance(node, Node):
            bit = (a >> (node.var - 1)) & 1
        else:
            bit = (np.bitwise_count(a & (node.mask >> 1)) & 1) ^ node.const
        stack.append((node.lo, a[bit == 0]))
        stack.append((node.hi, a[bit == 1]))
    return True


def is_satisfiable(f: Cnf | Xcnf, limit_n: int = LIMIT_N) -> bool:
    return coverage_profile(f, limit_n).min_count == 0


def region_subset(small, big, n: int) -> bool:
    """Is every assignment falsifying ``small`` also falsifying ``big``?"""
    pts = region_points(small, n)
    return bool(np.all(_falsified_mask(big, pts)))
