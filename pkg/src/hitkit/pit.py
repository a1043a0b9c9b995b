"""Identity testing for sums of pseudomonomials modulo x^2 = x and x + x' = 1.

A pseudomonomial is ``c * prod x_v * prod (1 - x_w)`` over distinct
variables.  The tester folds the variables in one at a time.  After
variables ``1..i`` have been merged, every term is a linear form over a
layer of extension variables ``y_1..y_k`` (plus the constant 1) that stand
for linearly independent polynomials in ``x_1..x_i``.  Merging the next
variable multiplies each term by its factor (1, x or 1-x), re-expresses
the result over the family ``{u, u*x : u in layer + {1}}`` and extracts a
fresh basis by Gaussian elimination.  Because the layer polynomials together
with 1 stay linearly independent, the final sum of linear forms is the
target constant iff the original sum is.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from ._kernels import rref
from .formula import Clause, Cnf, FormatError

ONE, X, DUAL = 0, 1, 2  # per-term factor codes for the variable being merged


class Pseudomonomial(NamedTuple):
    """``coef * prod_{v in xs} x_v * prod_{v in duals} (1 - x_v)`` (masks, bit v)."""

    coef: int
    xs: int
    duals: int

    def factor(self, v: int) -> int:
        if self.xs >> v & 1:
            return X
        if self.duals >> v & 1:
            return DUAL
        return ONE

    def evaluate(self, assignment: int) -> int:
        a = assignment << 1
        if (a & self.xs) != self.xs or (a & self.duals):
            return 0
        return self.coef

    def factors(self) -> list[int]:
        out = []
        for v in range(1, max(self.xs.bit_length(), self.duals.bit_length())):
            f = self.factor(v)
            if f == X:
                out.append(v)
            elif f == DUAL:
                out.append(-v)
        return out


@dataclass(frozen=True)
class PseudomonomialSum:
    num_vars: int
    terms: tuple[Pseudomonomial, ...]
    p: int = 2

    def evaluate(self, assignment: int) -> int:
        return sum(t.evaluate(assignment) for t in self.terms) % self.p


def normalize(
    raw_terms: Iterable[tuple[int, Iterable[int]]], n: int, p: int = 2
) -> PseudomonomialSum:
    """Multilinearise raw products.

    ``raw_terms`` holds ``(coefficient, factors)`` where factor ``v`` means
    ``x_v`` and ``-v`` means ``1 - x_v``.  Repeated factors collapse, a term
    with both ``x_v`` and ``1 - x_v`` is dropped, zero coefficients are
    dropped, like terms are kept apart.
    """
    if p < 2:
        raise ValueError("field characteristic must be a prime >= 2")
    terms = []
    for coef, factors in raw_terms:
        coef %= p
        if not coef:
            continue
        xs = duals = 0
        for f in factors:
            f = int(f)
            if f == 0 or abs(f) > n:
                raise FormatError(f"factor {f} out of range 1..{n}")
            if f > 0:
                xs |= 1 << f
            else:
                duals |= 1 << -f
        if xs & duals:
            continue
        terms.append(Pseudomonomial(coef, xs, duals))
    return PseudomonomialSum(n, tuple(terms), p)


def clause_pseudomonomial(c: Clause, coef: int = 1) -> Pseudomonomial:
    """Indicator of ``c`` being falsified: negative literal -> x, positive -> 1 - x."""
    return Pseudomonomial(coef, c.neg, c.pos)


def cnf_sum(f: Cnf, p: int = 2, coef: int = 1) -> PseudomonomialSum:
    return PseudomonomialSum(f.num_vars, tuple(clause_pseudomonomial(c, coef % p) for c in f), p)


@dataclass
class LayerBasis:
    """Definitions of one layer: row ``b`` of ``definitions`` gives y_b over the
    family ``[1, u_1..u_k, x, u_1 x .. u_k x]`` of the previous layer ``u``."""

    size: int
    definitions: np.ndarray
    pivots: np.ndarray


def merge_layer(rows: np.ndarray, factors: np.ndarray, p: int) -> tuple[np.ndarray, LayerBasis]:
    """Multiply each term by its factor for the next variable and rebase.

    ``rows`` is ``(terms, k + 1)`` with column 0 the constant coordinate.
    Returns the new ``(terms, k' + 1)`` coordinates and the layer basis.
    """
    m, k1 = rows.shape
    fam = np.zeros((m, 2 * k1), dtype=np.int64)
    one = factors == ONE
    x = factors == X
    dual = factors == DUAL
    fam[one, :k1] = rows[one]
    fam[x, k1:] = rows[x]
    fam[dual, :k1] = rows[dual]
    fam[dual, k1:] = (-rows[dual]) % p
    rest = fam[:, 1:]
    live = np.any(rest != 0, axis=1)
    piv, basis = rref(rest[live], p)
    new_rows = np.empty((m, len(piv) + 1), dtype=np.int64)
    new_rows[:, 0] = fam[:, 0]
    new_rows[:, 1:] = rest[:, piv]
    defs = np.zeros((len(piv), 2 * k1), dtype=np.int64)
    defs[:, 1:] = basis
    return new_rows, LayerBasis(len(piv), defs, piv + 1)


@dataclass
class PitResult:
    accepted: bool
    terms: int
    layer_sizes: list[int] = field(default_factory=list)
    constant: int = 0
    residual_nonzero: int = 0

    @property
    def max_layer(self) -> int:
        return max(self.layer_sizes, default=0)


def _factor_matrix(s: PseudomonomialSum) -> np.ndarray:
    n, m = s.num_vars, len(s.terms)
    F = np.zeros((m, n + 1), dtype=np.int8)
    for j, t in enumerate(s.terms):
        xs, duals = t.xs, t.duals
        while xs:
            low = xs & -xs
            F[j, low.bit_length() - 1] = X
            xs ^= low
        while duals:
            low = duals & -duals
            F[j, low.bit_length() - 1] = DUAL
            duals ^= low
    return F


def pit_run(
    s: PseudomonomialSum, target: int = 0, audit: bool = False, seed: int = 0
) -> PitResult:
    """Decide ``sum(s.terms) == target`` as multilinear polynomials over GF(p)."""
    p = s.p
    target %= p
    m = len(s.terms)
    rows = np.array([[t.coef % p] for t in s.terms], dtype=np.int64).reshape(m, 1)
    F = _factor_matrix(s)
    sizes = []
    if audit:
        rng = np.random.default_rng(seed)
        points = rng.integers(0, 2, size=(16, s.num_vars + 1))
        layer_vals = np.ones((16, 1), dtype=np.int64)  # values of [1, y_1..y_k]
        prefix = np.array([[t.coef % p] * 16 for t in s.terms], dtype=np.int64).reshape(m, 16)
    for v in range(1, s.num_vars + 1):
        col = F[:, v]
        if not col.any():
            # every factor is 1: the layer would only be re-expressed over itself
            continue
        rows, basis = merge_layer(rows, col, p)
        sizes.append(basis.size)
        if audit:
            xv = points[:, v]
            fam_vals = np.concatenate([layer_vals, layer_vals * xv[:, None]], axis=1) % p
            layer_vals = np.concatenate(
                [np.ones((16, 1), dtype=np.int64), (fam_vals @ basis.definitions[:, :].T) % p],
                axis=1,
            )
            mult = np.where(col[:, None] == X, xv[None, :], np.where(col[:, None] == DUAL, 1 - xv[None, :], 1))
            prefix = (prefix * mult) % p
            got = (rows @ layer_vals.T) % p
            if not np.array_equal(got, prefix):
                raise AssertionError(f"layer audit failed after merging x{v}")
    total = rows.sum(axis=0) % p if m else np.zeros(1, dtype=np.int64)
    const = int(total[0])
    resid = int(np.count_nonzero(total[1:]))
    return PitResult(const == target and resid == 0, m, sizes, const, resid)


def pit_check(s: PseudomonomialSum, target: int = 0, audit: bool = False) -> bool:
    return pit_run(s, target, audit=audit).accepted


# -- succinct Nullstellensatz with dual variables --------------------------------


@dataclass
class SnsrProof:
    """Per-clause multipliers: ``entries[i]`` lists ``(coef, factors)`` monomials
    multiplying the translation of clause ``i`` (0-based)."""

    num_vars: int
    entries: dict[int, list[tuple[int, list[int]]]]


def parse_snsr(text: str) -> SnsrProof:
    lines = [
        (no, ln.strip())
        for no, ln in enumerate(text.splitlines(), 1)
        if ln.strip() and not ln.strip().startswith("c")
    ]
    if not lines:
        raise FormatError("missing 'p snsr' header")
    head = lines[0][1].split()
    if len(head) != 4 or head[:2] != ["p", "snsr"]:
        raise FormatError(f"expected 'p snsr n m' header, got {lines[0][1]!r}")
    try:
        n, m = int(head[2]), int(head[3])
    except ValueError:
        raise FormatError("non-integer field in snsr header") from None
    entries: dict[int, list[tuple[int, list[int]]]] = {}
    it = iter(lines[1:])
    for no, line in it:
        parts = line.replace(":", " : ").split()
        if len(parts) != 3 or parts[1] != ":":
            raise FormatError(f"line {no}: expected 'i : k'")
        try:
            i, k = int(parts[0]), int(parts[2])
        except ValueError:
            raise FormatError(f"line {no}: expected 'i : k'") from None
        if i < 1 or k < 0:
            raise FormatError(f"line {no}: bad clause block header")
        monos = entries.setdefault(i - 1, [])
        for _ in range(k):
            try:
                no2, mline = next(it)
            except StopIteration:
                raise FormatError(f"clause {i}: expected {k} monomial lines") from None
            toks = mline.split()
            coef = 1
            if toks and toks[0] == "*":
                if len(toks) < 2:
                    raise FormatError(f"line {no2}: missing coefficient")
                coef = int(toks[1])
                toks = toks[2:]
            if not toks or toks[-1] != "0":
                raise FormatError(f"line {no2}: monomial must end with 0")
            facs = [int(t) for t in toks[:-1]]
            for fct in facs:
                if fct == 0 or abs(fct) > n:
                    raise FormatError(f"line {no2}: factor {fct} out of range 1..{n}")
            monos.append((coef, facs))
    if len(entries) != m:
        raise FormatError(f"header declares {m} clause blocks, found {len(entries)}")
    return SnsrProof(n, entries)


def serialize_snsr(proof: SnsrProof) -> str:
    out = [f"p snsr {proof.num_vars} {len(proof.entries)}"]
    for i in sorted(proof.entries):
        monos = proof.entries[i]
        out.append(f"{i + 1} : {len(monos)}")
        for coef, facs in monos:
            pre = "" if coef == 1 else f"* {coef} "
            out.append(pre + " ".join(str(x) for x in list(facs) + [0]))
    return "\n".join(out) + "\n"


def snsr_sum(f: Cnf, proof: SnsrProof, p: int = 2) -> PseudomonomialSum:
    n = max(f.num_vars, proof.num_vars)
    raw = []
    for i, monos in sorted(proof.entries.items()):
        if not 0 <= i < len(f):
            raise FormatError(f"proof refers to clause {i + 1}, formula has {len(f)}")
        c = f[i]
        base = [-x for x in c.lits]  # -lit: negative literal -> x, positive -> 1 - x
        for coef, facs in monos:
            for fct in facs:
                if fct == 0 or abs(fct) > n:
                    raise FormatError(f"factor {fct} out of range 1..{n}")
            raw.append((coef, base + list(facs)))
    return normalize(raw, n, p)


def verify_succinct_nsr(f: Cnf, proof: SnsrProof, p: int = 2):
    from .verifiers import Failure, Verdict

    if not proof.entries or not any(proof.entries.values()):
        raise FormatError("empty succinct NSR proof")
    s = snsr_sum(f, proof, p)
    res = pit_run(s, 1)
    stats = {
        "field": p,
        "terms": res.terms,
        "layers": len(res.layer_sizes),
        "max_layer": res.max_layer,
        "constant": res.constant,
        "residual_nonzero": res.residual_nonzero,
    }
    if res.accepted:
        return Verdict(True, stats=stats)
    return Verdict(False, Failure.IDENTITY_FAILS, None, stats)


def sum_from_terms(terms: Sequence[Pseudomonomial], n: int, p: int = 2) -> PseudomonomialSum:
    return PseudomonomialSum(n, tuple(t for t in terms if t.coef % p), p)
