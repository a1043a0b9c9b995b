"""CNF and xor-CNF data model, restrictions, and text codecs.

Literals are DIMACS integers throughout (``v`` positive, ``-v`` negative).
Clauses additionally carry two bitmasks (bit ``v`` set when the variable
occurs positively / negatively), which keeps clash and falsification tests
to a couple of integer operations.

Assignments are integers too: bit ``v - 1`` holds the value of ``x_v``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, NamedTuple


class FormatError(ValueError):
    """Malformed input text or a value that violates a type invariant."""


class Literal(NamedTuple):
    variable: int
    positive: bool

    @classmethod
    def from_int(cls, lit: int) -> "Literal":
        if lit == 0:
            raise FormatError("literal 0 is not a literal")
        return cls(abs(lit), lit > 0)

    def __int__(self) -> int:
        return self.variable if self.positive else -self.variable

    def negate(self) -> "Literal":
        return Literal(self.variable, not self.positive)


def _lit_key(lit: int) -> tuple[int, int]:
    # sort by variable, negative occurrence first
    return (abs(lit), lit > 0)


class Clause:
    """An immutable, duplicate-free, non-tautological set of literals."""

    __slots__ = ("lits", "pos", "neg")

    def __init__(self, lits: Iterable[int] = ()):
        uniq = set()
        for lit in lits:
            lit = int(lit)
            if lit == 0:
                raise FormatError("literal 0 inside a clause")
            uniq.add(lit)
        pos = neg = 0
        for lit in uniq:
            if lit > 0:
                pos |= 1 << lit
            else:
                neg |= 1 << -lit
        if pos & neg:
            v = (pos & neg).bit_length() - 1
            raise FormatError(f"tautological clause (x{v} and -x{v})")
        self.lits = tuple(sorted(uniq, key=_lit_key))
        self.pos = pos
        self.neg = neg

    @classmethod
    def _from_masks(cls, pos: int, neg: int) -> "Clause":
        c = cls.__new__(cls)
        lits = [v for v in _bits(pos)] + [-v for v in _bits(neg)]
        c.lits = tuple(sorted(lits, key=_lit_key))
        c.pos = pos
        c.neg = neg
        return c

    @property
    def width(self) -> int:
        return len(self.lits)

    @property
    def variables(self) -> int:
        """Bitmask of the variables mentioned."""
        return self.pos | self.neg

    def max_var(self) -> int:
        return max(self.pos.bit_length(), self.neg.bit_length(), 1) - 1

    def literals(self) -> list[Literal]:
        return [Literal.from_int(x) for x in self.lits]

    def falsified_by(self, assignment: int) -> bool:
        a = assignment << 1
        return (a & self.pos) == 0 and (a & self.neg) == self.neg

    def falsifying_assignment(self) -> dict[int, int]:
        return {abs(x): 0 if x > 0 else 1 for x in self.lits}

    def __iter__(self) -> Iterator[int]:
        return iter(self.lits)

    def __len__(self) -> int:
        return len(self.lits)

    def __eq__(self, other) -> bool:
        return isinstance(other, Clause) and self.pos == other.pos and self.neg == other.neg

    def __hash__(self) -> int:
        return hash((self.pos, self.neg))

    def __repr__(self) -> str:
        return f"Clause({list(self.lits)})"


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class Cnf:
    num_vars: int
    clauses: tuple[Clause, ...]

    def __init__(self, num_vars: int, clauses: Iterable[Clause | Iterable[int]] = ()):
        cls = tuple(c if isinstance(c, Clause) else Clause(c) for c in clauses)
        for i, c in enumerate(cls):
            if c.max_var() > num_vars:
                raise FormatError(
                    f"clause {i + 1} mentions x{c.max_var()} beyond num_vars={num_vars}"
                )
        object.__setattr__(self, "num_vars", int(num_vars))
        object.__setattr__(self, "clauses", cls)

    def __len__(self) -> int:
        return len(self.clauses)

    def __iter__(self) -> Iterator[Clause]:
        return iter(self.clauses)

    def __getitem__(self, i: int) -> Clause:
        return self.clauses[i]

    def width(self) -> int:
        return max((c.width for c in self.clauses), default=0)

    def as_lists(self) -> list[list[int]]:
        return [list(c.lits) for c in self.clauses]


def clash(a: Clause, b: Clause) -> int | None:
    """Least variable occurring with opposite signs in ``a`` and ``b``."""
    m = (a.pos & b.neg) | (a.neg & b.pos)
    if not m:
        return None
    return (m & -m).bit_length() - 1


def is_weakening(weak: Clause, strong: Clause) -> bool:
    """True iff ``strong`` is a sub-clause of ``weak``."""
    return (strong.pos & ~weak.pos) == 0 and (strong.neg & ~weak.neg) == 0


def restrict(f: Cnf, rho: Mapping[int, int]) -> Cnf:
    """Apply a partial assignment; satisfied clauses vanish, the empty clause stays."""
    one = zero = 0
    for v, b in rho.items():
        if b:
            one |= 1 << v
        else:
            zero |= 1 << v
    out = []
    for c in f.clauses:
        if (c.pos & one) or (c.neg & zero):
            continue
        out.append(Clause._from_masks(c.pos & ~zero, c.neg & ~one))
    return Cnf(f.num_vars, out)


# -- xor clauses -----------------------------------------------------------


class AffineEquation(NamedTuple):
    """``XOR of x_v for v in variables == rhs``; ``mask`` packs the variable set."""

    mask: int
    rhs: int

    @classmethod
    def of(cls, variables: Iterable[int], rhs: int) -> "AffineEquation":
        m = 0
        for v in variables:
            if v < 1:
                raise FormatError(f"bad variable index {v}")
            m ^= 1 << v
        return cls(m, int(rhs) & 1)

    @classmethod
    def from_literal(cls, lit: int) -> "AffineEquation":
        return cls(1 << abs(lit), 1 if lit > 0 else 0)

    @property
    def variables(self) -> list[int]:
        return list(_bits(self.mask))

    def negate(self) -> "AffineEquation":
        return AffineEquation(self.mask, self.rhs ^ 1)

    def row(self) -> int:
        """Augmented row: rhs in bit 0, coefficient of x_v in bit v."""
        return self.mask | self.rhs

    def holds(self, assignment: int) -> bool:
        return ((assignment << 1) & self.mask).bit_count() & 1 == self.rhs

    def max_var(self) -> int:
        return max(self.mask.bit_length() - 1, 0)


class XorClause:
    """Disjunction of affine equations; falsified on an affine subspace."""

    __slots__ = ("equations",)

    def __init__(self, equations: Iterable[AffineEquation]):
        from .gf2 import AffineSystem  # local: gf2 imports this module

        eqs = []
        seen = set()
        for e in equations:
            e = AffineEquation(*e)
            if e.mask == 0:
                raise FormatError("constant equation inside an xor-clause")
            if e not in seen:
                seen.add(e)
                eqs.append(e)
        # an empty xor-clause is the empty clause (falsified everywhere)
        if eqs and not AffineSystem.from_equations(e.negate() for e in eqs).echelonize().consistent:
            raise FormatError("tautological xor-clause (negated system inconsistent)")
        self.equations = tuple(eqs)

    @classmethod
    def from_clause(cls, c: Clause) -> "XorClause":
        return cls(AffineEquation.from_literal(x) for x in c.lits)

    def negated_rows(self) -> list[int]:
        return [e.negate().row() for e in self.equations]

    def falsified_by(self, assignment: int) -> bool:
        return not any(e.holds(assignment) for e in self.equations)

    def max_var(self) -> int:
        return max((e.max_var() for e in self.equations), default=0)

    def __iter__(self):
        return iter(self.equations)

    def __len__(self) -> int:
        return len(self.equations)

    def __eq__(self, other) -> bool:
        return isinstance(other, XorClause) and set(self.equations) == set(other.equations)

    def __hash__(self) -> int:
        return hash(frozenset(self.equations))

    def __repr__(self) -> str:
        return "XorClause(" + " | ".join(_fmt_eq(e) for e in self.equations) + ")"


@dataclass(frozen=True)
class Xcnf:
    num_vars: int
    clauses: tuple[XorClause, ...]

    def __init__(self, num_vars: int, clauses: Iterable[XorClause] = ()):
        cls = tuple(clauses)
        for i, c in enumerate(cls):
            if c.max_var() > num_vars:
                raise FormatError(f"xor-clause {i + 1} mentions a variable beyond {num_vars}")
        object.__setattr__(self, "num_vars", int(num_vars))
        object.__setattr__(self, "clauses", cls)

    @classmethod
    def from_cnf(cls, f: Cnf) -> "Xcnf":
        return cls(f.num_vars, [XorClause.from_clause(c) for c in f.clauses])

    def __len__(self) -> int:
        return len(self.clauses)

    def __iter__(self):
        return iter(self.clauses)

    def __getitem__(self, i: int) -> XorClause:
        return self.clauses[i]


# -- codecs ------------------------------------------------------------------


def _content_lines(text: str) -> Iterator[tuple[int, str]]:
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        yield no, line


def _header(line: str, kind: str) -> list[int]:
    parts = line.split()
    if len(parts) < 3 or parts[0] != "p" or parts[1] != kind:
        raise FormatError(f"expected 'p {kind} ...' header, got {line!r}")
    try:
        return [int(x) for x in parts[2:]]
    except ValueError:
        raise FormatError(f"non-integer field in header {line!r}") from None


def parse_cnf(text: str) -> Cnf:
    lines = _content_lines(text)
    try:
        _, head = next(lines)
    except StopIteration:
        raise FormatError("missing 'p cnf' header") from None
    nums = _header(head, "cnf")
    if len(nums) != 2 or nums[0] < 0 or nums[1] < 0:
        raise FormatError(f"malformed header {head!r}")
    n, m = nums
    return Cnf(n, _read_clause_ints(lines, n, m))


def _read_clause_ints(lines, n: int, m: int | None) -> list[Clause]:
    clauses: list[Clause] = []
    cur: list[int] = []
    for no, line in lines:
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise FormatError(f"line {no}: bad token {tok!r}") from None
            if lit == 0:
                try:
                    clauses.append(Clause(cur))
                except FormatError as e:
                    raise FormatError(f"line {no}: {e}") from None
                cur = []
            elif abs(lit) > n:
                raise FormatError(f"line {no}: literal {lit} out of range 1..{n}")
            else:
                cur.append(lit)
    if cur:
        raise FormatError("last clause is not terminated by 0")
    if m is not None and len(clauses) != m:
        raise FormatError(f"header declares {m} clauses, found {len(clauses)}")
    return clauses


def serialize_cnf(f: Cnf) -> str:
    out = [f"p cnf {f.num_vars} {len(f.clauses)}"]
    for c in f.clauses:
        out.append(" ".join(str(x) for x in c.lits + (0,)))
    return "\n".join(out) + "\n"


def _fmt_eq(e: AffineEquation) -> str:
    return " ".join([str(e.rhs)] + [str(v) for v in e.variables])


def _parse_xor_line(no: int, line: str, n: int) -> XorClause:
    toks = line.split()
    if not toks or toks[-1] != "0":
        raise FormatError(f"line {no}: xor-clause must end with 0")
    body = " ".join(toks[:-1])
    eqs = []
    if not body:
        return XorClause(())
    for group in body.split("|"):
        g = group.split()
        if not g:
            raise FormatError(f"line {no}: empty equation group")
        try:
            vals = [int(x) for x in g]
        except ValueError:
            raise FormatError(f"line {no}: bad token in group {group.strip()!r}") from None
        if len(g) == 1:
            lit = vals[0]
            if lit == 0 or abs(lit) > n:
                raise FormatError(f"line {no}: literal {lit} out of range")
            eqs.append(AffineEquation.from_literal(lit))
            continue
        rhs, vs = vals[0], vals[1:]
        if rhs not in (0, 1) or not vs:
            raise FormatError(f"line {no}: malformed group {group.strip()!r}")
        for v in vs:
            if not 1 <= v <= n:
                raise FormatError(f"line {no}: variable {v} out of range 1..{n}")
        eqs.append(AffineEquation.of(vs, rhs))
    try:
        return XorClause(eqs)
    except FormatError as e:
        raise FormatError(f"line {no}: {e}") from None


def parse_xcnf(text: str) -> Xcnf:
    """Parse ``p xcnf n m``; groups ``b v1 .. vk`` separated by ``|``, line ends in 0.

    A group holding a single token is DIMACS literal shorthand (an equation
    group always has at least one variable after the constant).
    """
    lines = _content_lines(text)
    try:
        _, head = next(lines)
    except StopIteration:
        raise FormatError("missing 'p xcnf' header") from None
    nums = _header(head, "xcnf")
    if len(nums) != 2 or min(nums) < 0:
        raise FormatError(f"malformed header {head!r}")
    n, m = nums
    clauses = [_parse_xor_line(no, line, n) for no, line in lines]
    if len(clauses) != m:
        raise FormatError(f"header declares {m} clauses, found {len(clauses)}")
    return Xcnf(n, clauses)


def serialize_xcnf(f: Xcnf) -> str:
    out = [f"p xcnf {f.num_vars} {len(f.clauses)}"]
    for c in f.clauses:
        body = " | ".join(_fmt_eq(e) for e in c.equations)
        out.append(f"{body} 0" if body else "0")
    return "\n".join(out) + "\n"


def serialize_xcnf_shorthand(f: Cnf) -> str:
    """Write a plain CNF in xcnf syntax using signed literal shorthand."""
    out = [f"p xcnf {f.num_vars} {len(f.clauses)}"]
    for c in f.clauses:
        out.append(" | ".join(str(x) for x in c.lits) + " 0")
    return "\n".join(out) + "\n"
