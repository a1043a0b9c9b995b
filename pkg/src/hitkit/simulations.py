"""Conversions between hitting certificates and (parity) decision trees.

Trees are immutable: ``Node(var, lo, hi)`` queries ``x_var`` and follows ``lo``
on 0; ``ParityNode(mask, const, lo, hi)`` queries ``const XOR (XOR of x_v,
v in mask)`` and follows ``lo`` when that value is 0; ``Leaf(clause)`` names
a 0-based clause index of the axiom formula.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Iterator, Union

from .formula import AffineEquation, Clause, Cnf, FormatError, Xcnf, XorClause
from .gf2 import AffineSystem, echelonize, implies, rank
from .verifiers import (
    Failure,
    HittingCertificate,
    PreconditionError,
    Verdict,
    XcnfCertificate,
    is_hitting,
    unsat_hitting_check,
)


@dataclass(frozen=True)
class Leaf:
    clause: int


@dataclass(frozen=True)
class Node:
    var: int
    lo: "Tree"
    hi: "Tree"


@dataclass(frozen=True)
class ParityNode:
    mask: int  # bit v set when x_v is in the queried form
    const: int
    lo: "PTree"
    hi: "PTree"

    @property
    def variables(self) -> list[int]:
        return AffineEquation(self.mask, 0).variables


Tree = Union[Leaf, Node]
PTree = Union[Leaf, ParityNode]


def leaves(t) -> Iterator[tuple[list[tuple[int, int]], Leaf]]:
    """Yield ``(path, leaf)``; a path step is ``(var_or_mask, answer)``."""
    stack = [(t, [])]
    while stack:
        node, path = stack.pop()
        if isinstance(node, Leaf):
            yield path, node
        elif isinstance(node, Node):
            stack.append((node.hi, path + [(node.var, 1)]))
            stack.append((node.lo, path + [(node.var, 0)]))
        else:
            stack.append((node.hi, path + [(node, 1)]))
            stack.append((node.lo, path + [(node, 0)]))


def leaf_count(t) -> int:
    n = 0
    stack = [t]
    while stack:
        x = stack.pop()
        if isinstance(x, Leaf):
            n += 1
        else:
            stack += [x.lo, x.hi]
    return n


def depth(t) -> int:
    if isinstance(t, Leaf):
        return 0
    return 1 + max(depth(t.lo), depth(t.hi))


# -- Hitting -> decision tree ---------------------------------------------------


@dataclass
class SplitRecord:
    """Per internal node: clause count before the split and clauses removed on
    the branch that falsifies the chosen literal."""

    clauses: int
    removed: int
    width: int

    def decay_ok(self) -> bool:
        m = self.clauses
        if m < 2:
            return True
        # removed >= (m - 1) / ceil(log2 m), compared exactly in integers
        return self.removed * math.ceil(math.log2(m)) >= m - 1


@dataclass
class TreeBuild:
    tree: Tree
    splits: list[SplitRecord] = field(default_factory=list)

    @property
    def leaves(self) -> int:
        return leaf_count(self.tree)


def leaf_bound(n: int, m: int) -> float:
    """n ** (2 * log2(m) ** 2); returned as a float (may be inf)."""
    if m <= 1:
        return 1.0
    e = 2 * math.log2(m) ** 2
    try:
        return float(n) ** e
    except OverflowError:
        return math.inf


def hitting_to_tree(h: Cnf, check: bool = True) -> TreeBuild:
    """Decision tree for the falsified-clause search problem of an unsat hitting formula.

    Branches on a literal of a narrowest clause that occurs negated in the
    most other clauses.  Ties: narrowest clause by least index; literal by
    least variable, then negative sign first.
    """
    if check:
        if not is_hitting(h):
            raise PreconditionError("hitting_to_tree needs a hitting formula")
        if not unsat_hitting_check(h, check=False):
            raise PreconditionError("hitting_to_tree needs an unsatisfiable formula")
    splits: list[SplitRecord] = []
    live = [(i, c.pos, c.neg) for i, c in enumerate(h.clauses)]

    def build(cls: list[tuple[int, int, int]]) -> Tree:
        if not cls:
            raise PreconditionError("restriction became satisfiable; input was not unsat hitting")
        best = None
        for i, pos, neg in cls:
            w = (pos | neg).bit_count()
            if w == 0:
                return Leaf(i)
            if best is None or w < best[0]:
                best = (w, pos, neg)
        w, pos, neg = best
        # literal l in C, counting clauses containing its negation
        choice = None
        for v in _iter_bits(pos | neg):
            positive = bool(pos >> v & 1)
            bit = 1 << v
            cnt = sum(1 for _, p2, n2 in cls if (n2 if positive else p2) & bit)
            key = (-cnt, v, positive)
            if choice is None or key < choice[0]:
                choice = (key, v, positive, cnt)
        _, v, positive, cnt = choice
        splits.append(SplitRecord(len(cls), cnt, w))
        bit = 1 << v
        zero = [(i, p2 & ~bit, n2) for i, p2, n2 in cls if not (n2 & bit)]
        one = [(i, p2, n2 & ~bit) for i, p2, n2 in cls if not (p2 & bit)]
        return Node(v, build(zero), build(one))

    return TreeBuild(build(live), splits)


def _iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


# -- decision tree -> Hitting ---------------------------------------------------


def validate_tree(t, f) -> Verdict:
    """Path invariants and leaf labels of a plain or parity decision tree."""
    if isinstance(f, Xcnf) or _is_parity(t):
        return _validate_parity(t, f if isinstance(f, Xcnf) else Xcnf.from_cnf(f))
    count = 0
    for path, leaf in leaves(t):
        count += 1
        seen = {}
        for v, b in path:
            if v in seen:
                return Verdict(False, Failure.INVALID_TREE, ("repeated", v, _path_str(path)))
            if not 1 <= v <= f.num_vars:
                return Verdict(False, Failure.INVALID_TREE, ("variable", v, _path_str(path)))
            seen[v] = b
        if not 0 <= leaf.clause < len(f):
            return Verdict(False, Failure.INVALID_TREE, ("label", leaf.clause + 1, _path_str(path)))
        c = f[leaf.clause]
        for lit in c.lits:
            if seen.get(abs(lit)) != (0 if lit > 0 else 1):
                return Verdict(
                    False, Failure.INVALID_TREE, ("unfalsified", leaf.clause + 1, _path_str(path))
                )
    return Verdict(True, stats={"leaves": count})


def _is_parity(t) -> bool:
    stack = [t]
    while stack:
        x = stack.pop()
        if isinstance(x, ParityNode):
            return True
        if isinstance(x, Node):
            stack += [x.lo, x.hi]
    return False


def _path_str(path) -> str:
    parts = []
    for q, b in path:
        if isinstance(q, ParityNode):
            parts.append("+".join(f"x{v}" for v in q.variables) + f"^{q.const}={b}")
        else:
            parts.append(f"x{q}={b}")
    return ",".join(parts) or "root"


def _path_equations(path) -> list[AffineEquation]:
    eqs = []
    for q, b in path:
        if isinstance(q, ParityNode):
            eqs.append(AffineEquation(q.mask, b ^ q.const))
        else:
            eqs.append(AffineEquation(1 << q, b))
    return eqs


def _validate_parity(t, f: Xcnf) -> Verdict:
    count = 0
    for path, leaf in leaves(t):
        count += 1
        eqs = _path_equations(path)
        for e in eqs:
            if e.max_var() > f.num_vars:
                return Verdict(False, Failure.INVALID_TREE, ("variable", e.max_var(), _path_str(path)))
        if rank(e.mask for e in eqs) != len(eqs):
            return Verdict(False, Failure.INVALID_TREE, ("dependent", len(eqs), _path_str(path)))
        if not 0 <= leaf.clause < len(f):
            return Verdict(False, Failure.INVALID_TREE, ("label", leaf.clause + 1, _path_str(path)))
        s = AffineSystem.from_equations(eqs, f.num_vars)
        c = f[leaf.clause]
        if not all(implies(s, e.negate()) for e in c.equations):
            return Verdict(
                False, Failure.INVALID_TREE, ("unfalsified", leaf.clause + 1, _path_str(path))
            )
    return Verdict(True, stats={"leaves": count})


def tree_to_hitting(t: Tree, f: Cnf) -> HittingCertificate:
    """Negate each root-to-leaf path; the leaf labels become the mapping."""
    v = validate_tree(t, f)
    if not v:
        raise PreconditionError(f"invalid tree: {v.witness}")
    clauses, mapping = [], []
    for path, leaf in leaves(t):
        clauses.append(Clause([var if b == 0 else -var for var, b in path]))
        mapping.append(leaf.clause)
    return HittingCertificate(Cnf(f.num_vars, clauses), mapping)


def parity_tree_to_hitting_xor(t: PTree, f: Xcnf) -> XcnfCertificate:
    """Each leaf gives the xor-clause negating the affine answers along its path."""
    v = _validate_parity(t, f)
    if not v:
        raise PreconditionError(f"invalid parity tree: {v.witness}")
    clauses, mapping = [], []
    for path, leaf in leaves(t):
        clauses.append(XorClause(e.negate() for e in _path_equations(path)))
        mapping.append(leaf.clause)
    return XcnfCertificate(Xcnf(f.num_vars, clauses), mapping, semantic=True)


def as_parity_tree(t: Tree) -> PTree:
    if isinstance(t, Leaf):
        return t
    return ParityNode(1 << t.var, 0, as_parity_tree(t.lo), as_parity_tree(t.hi))


# -- text format ------------------------------------------------------------------------


def serialize_tree(t) -> str:
    out: list[str] = []

    def go(x):
        if isinstance(x, Leaf):
            out.append(f"[{x.clause + 1}]")
        elif isinstance(x, Node):
            out.append(f"({x.var} ")
            go(x.lo)
            out.append(" ")
            go(x.hi)
            out.append(")")
        else:
            out.append("(^ " + " ".join(str(v) for v in [x.const] + x.variables) + " ")
            go(x.lo)
            out.append(" ")
            go(x.hi)
            out.append(")")

    go(t)
    return "".join(out) + "\n"


_TOKEN = re.compile(r"\(|\)|\[\s*-?\d+\s*\]|\^|-?\d+|\S")


def parse_tree(text: str):
    toks = [tok for tok in _TOKEN.findall(text)]
    pos = 0

    def take():
        nonlocal pos
        if pos >= len(toks):
            raise FormatError("unexpected end of tree text")
        tok = toks[pos]
        pos += 1
        return tok

    def node():
        tok = take()
        if tok.startswith("["):
            idx = int(tok.strip("[] "))
            if idx < 1:
                raise FormatError(f"leaf label {idx} must be >= 1")
            return Leaf(idx - 1)
        if tok != "(":
            raise FormatError(f"unexpected token {tok!r}")
        head = take()
        if head == "^":
            nums = []
            while toks[pos] not in ("(", ")") and not toks[pos].startswith("["):
                nums.append(int(take()))
            if len(nums) < 2 or nums[0] not in (0, 1):
                raise FormatError("parity node needs '(^ b v1 .. vk T0 T1)'")
            mask = AffineEquation.of(nums[1:], 0).mask
            if mask == 0:
                raise FormatError("parity node queries the zero form")
            lo, hi = node(), node()
            t = ParityNode(mask, nums[0], lo, hi)
        else:
            try:
                var = int(head)
            except ValueError:
                raise FormatError(f"bad variable {head!r}") from None
            if var < 1:
                raise FormatError(f"bad variable {var}")
            lo, hi = node(), node()
            t = Node(var, lo, hi)
        if take() != ")":
            raise FormatError("expected ')'")
        return t

    t = node()
    if pos != len(toks):
        raise FormatError("trailing text after tree")
    return t
