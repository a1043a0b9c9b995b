"""Linear algebra over GF(2) on bit-packed rows, plus GF(2^t) arithmetic.

A row is a Python int in augmented form: bit 0 holds the right-hand side and
bit ``v`` the coefficient of ``x_v``.  Python ints are arbitrary-width packed
words, so elimination needs nothing beyond XOR.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .formula import AffineEquation

# Lexicographically least irreducible polynomial of each degree (bit i = x^i).
IRREDUCIBLE = {
    2: 0x7,
    3: 0xB,
    4: 0x13,
    5: 0x25,
    6: 0x43,
    7: 0x83,
    8: 0x11B,
    9: 0x203,
    10: 0x409,
    11: 0x805,
    12: 0x1009,
    13: 0x201B,
    14: 0x4021,
    15: 0x8003,
    16: 0x1002B,
}


class InconsistentSystem(ValueError):
    pass


@dataclass(frozen=True)
class Echelon:
    rank: int
    consistent: bool
    basis: "AffineSystem"

    def solution_count(self, num_vars: int | None = None) -> int:
        n = self.basis.num_vars if num_vars is None else num_vars
        return 1 << (n - self.rank) if self.consistent else 0


@dataclass(frozen=True)
class AffineSystem:
    rows: tuple[int, ...]
    num_vars: int = 0

    @classmethod
    def from_equations(cls, eqs: Iterable[AffineEquation], num_vars: int = 0) -> "AffineSystem":
        rows = tuple(AffineEquation(*e).row() for e in eqs)
        n = max([num_vars] + [r.bit_length() - 1 for r in rows])
        return cls(rows, n)

    def equations(self) -> list[AffineEquation]:
        return [AffineEquation(r & ~1, r & 1) for r in self.rows]

    def __add__(self, other: "AffineSystem") -> "AffineSystem":
        return AffineSystem(self.rows + other.rows, max(self.num_vars, other.num_vars))

    def echelonize(self) -> Echelon:
        return echelonize(self)

    def satisfied_by(self, assignment: int) -> bool:
        a = assignment << 1
        return all(((r & ~1 & a).bit_count() & 1) == (r & 1) for r in self.rows)


def _reduce(rows: list[int], pivots: list[int], r: int) -> int:
    for p, b in zip(pivots, rows):
        if r >> p & 1:
            r ^= b
    return r


def echelonize(s: AffineSystem) -> Echelon:
    """Reduced row echelon form; pivots are the lowest coefficient bits, increasing."""
    basis: dict[int, int] = {}
    consistent = True
    for r in s.rows:
        for p, b in basis.items():
            if r >> p & 1:
                r ^= b
        coeff = r & ~1
        if not coeff:
            if r:
                consistent = False
            continue
        p = (coeff & -coeff).bit_length() - 1
        for q in basis:
            if basis[q] >> p & 1:
                basis[q] ^= r
        basis[p] = r
    rows = tuple(basis[p] for p in sorted(basis))
    if not consistent:
        rows = rows + (1,)
    return Echelon(len(basis), consistent, AffineSystem(rows, s.num_vars))


def implies(s: AffineSystem, e: AffineEquation) -> bool:
    """Does every solution of ``s`` satisfy ``e``?"""
    ech = echelonize(s)
    if not ech.consistent:
        raise InconsistentSystem("implies() needs a consistent system")
    rows = list(ech.basis.rows)
    pivots = [((r & ~1) & -(r & ~1)).bit_length() - 1 for r in rows]
    return _reduce(rows, pivots, AffineEquation(*e).row()) == 0


def disjoint(a: AffineSystem, b: AffineSystem) -> bool:
    return not echelonize(a + b).consistent


def rank(rows: Iterable[int]) -> int:
    """Rank of plain coefficient rows (no augmentation bit convention)."""
    basis: dict[int, int] = {}
    for r in rows:
        for p, b in basis.items():
            if r >> p & 1:
                r ^= b
        if r:
            p = (r & -r).bit_length() - 1
            basis[p] = r
    return len(basis)


def solutions(s: AffineSystem, num_vars: int | None = None) -> list[int]:
    """All solutions as assignment ints (bit v-1 = x_v).  Exponential; for small n."""
    n = s.num_vars if num_vars is None else num_vars
    ech = echelonize(s)
    if not ech.consistent:
        return []
    rows = ech.basis.rows
    pivots = {((r & ~1) & -(r & ~1)).bit_length() - 1: r for r in rows}
    free = [v for v in range(1, n + 1) if v not in pivots]
    base = 0
    for p, r in pivots.items():
        if r & 1:
            base |= 1 << (p - 1)
    gens = []
    for v in free:
        g = 1 << (v - 1)
        for p, r in pivots.items():
            if r >> v & 1:
                g |= 1 << (p - 1)
        gens.append(g)
    pts = [base]
    for g in gens:
        pts += [x ^ g for x in pts]
    return pts


# -- GF(2^t) -------------------------------------------------------------------


def clmul(a: int, b: int) -> int:
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def polymod(a: int, m: int) -> int:
    d = m.bit_length()
    while a.bit_length() >= d:
        a ^= m << (a.bit_length() - d)
    return a


@dataclass(frozen=True)
class Gf2tElement:
    t: int
    coeffs: int
    modulus: int = 0

    def __post_init__(self):
        if self.modulus == 0:
            if self.t not in IRREDUCIBLE:
                raise ValueError(f"no modulus tabulated for t={self.t}")
            object.__setattr__(self, "modulus", IRREDUCIBLE[self.t])
        if self.modulus.bit_length() != self.t + 1:
            raise ValueError("modulus degree does not match t")
        object.__setattr__(self, "coeffs", polymod(self.coeffs, self.modulus))

    def _check(self, other: "Gf2tElement") -> None:
        if self.t != other.t or self.modulus != other.modulus:
            raise ValueError("elements of different fields")

    def __add__(self, other: "Gf2tElement") -> "Gf2tElement":
        self._check(other)
        return Gf2tElement(self.t, self.coeffs ^ other.coeffs, self.modulus)

    __sub__ = __add__

    def __mul__(self, other: "Gf2tElement") -> "Gf2tElement":
        return gf2t_mul(self, other)

    def inverse(self) -> "Gf2tElement":
        return gf2t_inv(self)

    def bit(self, i: int) -> int:
        return self.coeffs >> i & 1

    def __bool__(self) -> bool:
        return self.coeffs != 0


def gf2t_mul(a: Gf2tElement, b: Gf2tElement) -> Gf2tElement:
    a._check(b)
    return Gf2tElement(a.t, polymod(clmul(a.coeffs, b.coeffs), a.modulus), a.modulus)


def gf2t_inv(a: Gf2tElement) -> Gf2tElement:
    if a.coeffs == 0:
        raise ZeroDivisionError("inverse of zero in GF(2^t)")
    # extended Euclid over GF(2)[x]
    r0, r1 = a.modulus, a.coeffs
    s0, s1 = 0, 1
    while r1:
        q = 0
        r = r0
        while r.bit_length() >= r1.bit_length():
            sh = r.bit_length() - r1.bit_length()
            q ^= 1 << sh
            r ^= r1 << sh
        r0, r1 = r1, r
        s0, s1 = s1, s0 ^ clmul(q, s1)
    return Gf2tElement(a.t, s0, a.modulus)


def is_irreducible(p: int) -> bool:
    d = p.bit_length() - 1
    if d < 1:
        return False
    for q in range(2, 1 << (d // 2 + 1)):
        if polymod(p, q) == 0:
            return False
    return True
