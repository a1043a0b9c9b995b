"""Checkers for Hitting, Hitting(xor), Odd Hitting and Hitting[k] certificates."""

from __future__ import annotations

import enum
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Sequence

from .formula import Clause, Cnf, Xcnf, XorClause, clash, is_weakening, restrict
from .gf2 import AffineSystem, echelonize, implies
from .pit import cnf_sum, pit_run

MAX_K = 4


class PreconditionError(ValueError):
    pass


class MappingError(ValueError):
    pass


class Failure(enum.Enum):
    NOT_HITTING = "not-hitting"
    COUNT_MISMATCH = "count-mismatch"
    NO_STRENGTHENING = "no-strengthening"
    NOT_ODD = "not-odd-hitting"
    IDENTITY_FAILS = "identity-fails"
    JOINTLY_FALSIFIABLE = "jointly-falsifiable"
    INVALID_TREE = "invalid-tree"


@dataclass
class Verdict:
    accepted: bool
    reason: Failure | None = None
    witness: Any = None
    stats: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.accepted and self.reason is not None:
            raise ValueError("an accepted verdict carries no failure reason")

    def __bool__(self) -> bool:
        return self.accepted

    def report(self) -> list[str]:
        """``key: value`` lines, stable order."""
        out = [f"accepted: {'yes' if self.accepted else 'no'}"]
        if self.reason is not None:
            out.append(f"reason: {self.reason.value}")
            out.append(f"witness: {_fmt_witness(self.witness)}")
        for k, v in self.stats.items():
            out.append(f"{k}: {v}")
        return out


def _fmt_witness(w) -> str:
    if isinstance(w, (tuple, list)):
        return " ".join(str(x) for x in w)
    return str(w)


@dataclass
class HittingCertificate:
    hitting: Cnf
    mapping: list[int] | None = None  # 0-based axiom index per clause; None = auto


@dataclass
class XcnfCertificate:
    hitting: Xcnf
    mapping: list[int] | None = None
    semantic: bool = False


# -- plain hitting ------------------------------------------------------------


def is_hitting(h: Cnf) -> Verdict:
    cls = h.clauses
    for i in range(len(cls)):
        a = cls[i]
        for j in range(i + 1, len(cls)):
            b = cls[j]
            if not ((a.pos & b.neg) | (a.neg & b.pos)):
                return Verdict(False, Failure.NOT_HITTING, (i + 1, j + 1), {"clauses": len(cls)})
    return Verdict(True, stats={"clauses": len(cls), "width": h.width()})


def _count_stats(n: int, widths: Sequence[int]) -> tuple[int, int]:
    total = sum(1 << (n - w) for w in widths)
    return total, 1 << n


def unsat_hitting_check(h: Cnf, n: int | None = None, check: bool = True) -> Verdict:
    """Exact count: a hitting formula is unsatisfiable iff sum 2^(n-|C|) == 2^n."""
    if check:
        v = is_hitting(h)
        if not v:
            raise PreconditionError(f"not a hitting formula (clauses {v.witness} do not clash)")
    n = h.num_vars if n is None else n
    covered, cube = _count_stats(n, [c.width for c in h])
    stats = {"clauses": len(h), "vars": n, "falsified": covered, "cube": cube}
    if covered == cube:
        return Verdict(True, stats=stats)
    return Verdict(False, Failure.COUNT_MISMATCH, (covered, cube), stats)


def _check_mapping(mapping, size: int, m_axioms: int) -> None:
    if len(mapping) != size:
        raise MappingError(f"mapping has {len(mapping)} entries for {size} clauses")
    for i, a in enumerate(mapping):
        if not 0 <= a < m_axioms:
            raise MappingError(f"mapping entry {i + 1} -> {a + 1} out of range 1..{m_axioms}")


def strengthenings(f: Cnf, h: Cnf, mapping: list[int] | None) -> tuple[list[int] | None, int | None]:
    """Resolve the strengthening map; return (mapping, first unmatched clause index)."""
    if mapping is not None:
        _check_mapping(mapping, len(h), len(f))
        for i, (c, a) in enumerate(zip(h, mapping)):
            if not is_weakening(c, f[a]):
                return None, i
        return list(mapping), None
    out = []
    for i, c in enumerate(h):
        for a, ax in enumerate(f):
            if is_weakening(c, ax):
                out.append(a)
                break
        else:
            return None, i
    return out, None


def verify_hitting(f: Cnf, cert: HittingCertificate) -> Verdict:
    h = cert.hitting
    n = max(f.num_vars, h.num_vars)
    v = is_hitting(h)
    if not v:
        return v
    v = unsat_hitting_check(h, n, check=False)
    if not v:
        return v
    stats = dict(v.stats)
    resolved, bad = strengthenings(f, h, cert.mapping)
    if bad is not None:
        return Verdict(False, Failure.NO_STRENGTHENING, bad + 1, stats)
    stats["mapping"] = "explicit" if cert.mapping is not None else "auto"
    stats["width"] = h.width()
    return Verdict(True, stats=stats)


# -- hitting(xor) ---------------------------------------------------------------


def _negated(c: XorClause, n: int) -> AffineSystem:
    return AffineSystem(tuple(c.negated_rows()), n)


def is_hitting_xor(h: Xcnf) -> Verdict:
    n = h.num_vars
    systems = []
    for i, c in enumerate(h):
        s = _negated(c, n)
        if not echelonize(s).consistent:
            raise PreconditionError(f"xor-clause {i + 1} is a tautology")
        systems.append(s)
    for i in range(len(systems)):
        for j in range(i + 1, len(systems)):
            if echelonize(systems[i] + systems[j]).consistent:
                return Verdict(False, Failure.NOT_HITTING, (i + 1, j + 1), {"clauses": len(h)})
    return Verdict(True, stats={"clauses": len(h)})


def xor_strengthening(weak: XorClause, strong: XorClause, semantic: bool, n: int) -> bool:
    if not semantic:
        return set(strong.equations) <= set(weak.equations)
    s = _negated(weak, n)
    return all(implies(s, e.negate()) for e in strong.equations)


def verify_hitting_xor(f: Xcnf | Cnf, cert: XcnfCertificate) -> Verdict:
    if isinstance(f, Cnf):
        f = Xcnf.from_cnf(f)
    h = cert.hitting
    n = max(f.num_vars, h.num_vars)
    v = is_hitting_xor(h)
    if not v:
        return v
    ranks = [echelonize(_negated(c, n)).rank for c in h]
    covered = sum(1 << (n - r) for r in ranks)
    stats = {"clauses": len(h), "vars": n, "falsified": covered, "cube": 1 << n}
    if covered != 1 << n:
        return Verdict(False, Failure.COUNT_MISMATCH, (covered, 1 << n), stats)
    stats["mode"] = "semantic" if cert.semantic else "syntactic"
    if cert.mapping is not None:
        _check_mapping(cert.mapping, len(h), len(f))
        for i, (c, a) in enumerate(zip(h, cert.mapping)):
            if not xor_strengthening(c, f[a], cert.semantic, n):
                return Verdict(False, Failure.NO_STRENGTHENING, i + 1, stats)
    else:
        for i, c in enumerate(h):
            if not any(xor_strengthening(c, ax, cert.semantic, n) for ax in f):
                return Verdict(False, Failure.NO_STRENGTHENING, i + 1, stats)
    return Verdict(True, stats=stats)


# -- hitting[k] -------------------------------------------------------------------


def verify_hitting_k(f: Cnf, cert: HittingCertificate, k: int) -> Verdict:
    """No k+1 clauses are jointly falsifiable, and inclusion-exclusion totals 2^n.

    Enumerates contradiction-free index sets in increasing order by depth-first
    search, so only compatible sets are ever visited.
    """
    if not 1 <= k <= MAX_K:
        raise ValueError(f"k must be in 1..{MAX_K}")
    h = cert.hitting
    n = max(f.num_vars, h.num_vars)
    cls = h.clauses
    m = len(cls)
    total = 0
    visited = 0
    # stack entries: (chosen indices, pos mask, neg mask); popped in lexicographic order
    stack = [((i,), c.pos, c.neg) for i, c in reversed(list(enumerate(cls)))]
    witness = None
    while stack:
        chosen, pos, neg = stack.pop()
        visited += 1
        size = len(chosen)
        if size == k + 1:
            witness = tuple(x + 1 for x in chosen)
            break
        width = (pos | neg).bit_count()
        term = 1 << (n - width)
        total += term if size % 2 else -term
        for j in range(m - 1, chosen[-1], -1):
            c = cls[j]
            if (pos & c.neg) | (neg & c.pos):
                continue
            stack.append((chosen + (j,), pos | c.pos, neg | c.neg))
    stats = {"clauses": m, "vars": n, "k": k, "compatible_sets": visited}
    if witness is not None:
        return Verdict(False, Failure.JOINTLY_FALSIFIABLE, witness, stats)
    stats["falsified"] = total
    stats["cube"] = 1 << n
    if total != 1 << n:
        return Verdict(False, Failure.COUNT_MISMATCH, (total, 1 << n), stats)
    resolved, bad = strengthenings(f, h, cert.mapping)
    if bad is not None:
        return Verdict(False, Failure.NO_STRENGTHENING, bad + 1, stats)
    return Verdict(True, stats=stats)


def jointly_falsifiable_set(h: Cnf, size: int) -> tuple[int, ...] | None:
    """Lexicographically least pairwise-compatible index set of the given size."""
    cls = h.clauses

    def go(start, pos, neg, chosen):
        if len(chosen) == size:
            return tuple(chosen)
        for j in range(start, len(cls)):
            c = cls[j]
            if (pos & c.neg) | (neg & c.pos):
                continue
            r = go(j + 1, pos | c.pos, neg | c.neg, chosen + [j + 1])
            if r:
                return r
        return None

    return go(0, 0, 0, [])


# -- odd hitting ----------------------------------------------------------------------


def _odd_subcheck(h: Cnf, i: int) -> bool:
    c = h[i]
    rho = {abs(x): 0 if x > 0 else 1 for x in c.lits}
    others = Cnf(h.num_vars, [d for j, d in enumerate(h.clauses) if j != i])
    rest = restrict(others, rho)
    return pit_run(cnf_sum(rest, 2), 0).accepted


def is_odd_hitting(h: Cnf, jobs: int = 1) -> Verdict:
    """Every assignment falsifying some clause falsifies an odd number of clauses.

    For each clause C, fix the assignment falsifying C; the remaining clauses
    must then be falsified an even number of times everywhere, i.e. their
    pseudomonomials sum to 0 over GF(2).
    """
    idx = range(len(h))
    if jobs > 1 and len(h) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_odd_subcheck, [h] * len(h), idx))
    else:
        results = [_odd_subcheck(h, i) for i in idx]
    stats = {"clauses": len(h)}
    for i, ok in enumerate(results):
        if not ok:
            return Verdict(False, Failure.NOT_ODD, i + 1, stats)
    return Verdict(True, stats=stats)


def verify_odd_hitting(f: Cnf, cert: HittingCertificate) -> Verdict:
    h = cert.hitting
    n = max(f.num_vars, h.num_vars)
    s = cnf_sum(Cnf(n, h.clauses), 2)
    res = pit_run(s, 1)
    stats = {"clauses": len(h), "vars": n, "max_layer": res.max_layer}
    if not res.accepted:
        return Verdict(False, Failure.IDENTITY_FAILS, None, stats)
    resolved, bad = strengthenings(f, h, cert.mapping)
    if bad is not None:
        return Verdict(False, Failure.NO_STRENGTHENING, bad + 1, stats)
    return Verdict(True, stats=stats)


# -- certificate files --------------------------------------------------------------


def parse_certificate(text: str, xor: bool | None = None) -> tuple[Cnf | Xcnf, list[int] | None]:
    """Read ``p hitcert n m`` (or a bare cnf/xcnf file, meaning auto mapping).

    ``xor`` selects the clause syntax of a hitcert body; left as None, xcnf
    syntax is assumed as soon as one line contains a ``|`` separator.  An
    optional final ``map i1 .. im`` line gives 1-based axiom indices.
    """
    from .formula import FormatError, parse_cnf, parse_xcnf

    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("c")]
    if not lines:
        raise FormatError("empty certificate")
    head = lines[0].split()
    if head[:2] == ["p", "cnf"]:
        f = parse_cnf(text)
        return (Xcnf.from_cnf(f) if xor else f), None
    if head[:2] == ["p", "xcnf"]:
        return parse_xcnf(text), None
    if head[:2] != ["p", "hitcert"] or len(head) != 4:
        raise FormatError(f"expected 'p hitcert n m' header, got {lines[0]!r}")
    body = lines[1:]
    mapping = None
    if body and body[-1].split()[0] == "map":
        try:
            mapping = [int(x) - 1 for x in body[-1].split()[1:]]
        except ValueError:
            raise FormatError("non-integer entry in map line") from None
        body = body[:-1]
    n, m = head[2], head[3]
    if xor is None:
        xor = any("|" in ln for ln in body)
    if xor:
        return parse_xcnf("\n".join([f"p xcnf {n} {m}"] + body)), mapping
    return parse_cnf("\n".join([f"p cnf {n} {m}"] + body)), mapping


def serialize_certificate(h: Cnf | Xcnf, mapping: list[int] | None = None) -> str:
    from .formula import serialize_cnf, serialize_xcnf

    text = serialize_cnf(h) if isinstance(h, Cnf) else serialize_xcnf(h)
    lines = text.splitlines()
    kind = "cnf" if isinstance(h, Cnf) else "xcnf"
    lines[0] = lines[0].replace(f"p {kind}", "p hitcert", 1)
    if mapping is not None:
        lines.append("map " + " ".join(str(a + 1) for a in mapping))
    return "\n".join(lines) + "\n"
