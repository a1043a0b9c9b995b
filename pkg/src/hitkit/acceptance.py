"""Desk-scale acceptance suite: nine checks, each against a brute-force oracle.

Every check returns a ``CriterionResult`` and never raises on a failed
comparison; the counts of agreements and disagreements go into ``details``.
``run_all`` is what ``hitkit selftest`` executes.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from math import comb
from pathlib import Path
from typing import Callable

from . import generators as gen
from . import oracle, pit, simulations as sim
from .formula import AffineEquation, Clause, Cnf, FormatError, Xcnf, XorClause
from .gf2 import AffineSystem, echelonize, implies
from .verifiers import (
    Failure,
    HittingCertificate,
    MappingError,
    PreconditionError,
    XcnfCertificate,
    is_hitting,
    is_hitting_xor,
    is_odd_hitting,
    unsat_hitting_check,
    verify_hitting,
    verify_hitting_k,
    verify_hitting_xor,
    verify_odd_hitting,
)


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    seconds: float
    budget: float
    details: dict = field(default_factory=dict)
    series: dict = field(default_factory=dict)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = " ".join(f"{k}={v}" for k, v in self.details.items())
        limit = f" / {self.budget:g}s" if math.isfinite(self.budget) else ""
        return (
            f"criterion {self.number}: {status}  {self.title}  "
            f"[{self.seconds:.2f}s{limit}]  {extra}"
        ).rstrip()


class _Timer:
    def __init__(self):
        self.t0 = time.perf_counter()

    @property
    def elapsed(self) -> float:
        return time.perf_counter() - self.t0


def _seeds(seed: int):
    rng = gen.SplitMix64(seed)
    while True:
        yield rng.next()


def hitting_corpus(count: int, min_n: int, max_n: int, max_leaves: int, seed: int) -> list[Cnf]:
    """Leaf-negation formulas of random total decision trees."""
    rng = gen.SplitMix64(seed)
    out = []
    for _ in range(count):
        n = min_n + rng.below(max_n - min_n + 1)
        out.append(gen.random_tree_hitting(n, max_leaves, rng.next())[1])
    return out


def _drop(f: Cnf, i: int) -> Cnf:
    return Cnf(f.num_vars, f.clauses[:i] + f.clauses[i + 1 :])


# -- 1 --------------------------------------------------------------------------------


def criterion_1(seed: int) -> CriterionResult:
    """Exact counting verdict against the total-cover predicate."""
    clock = _Timer()
    rng = gen.SplitMix64(seed)
    corpus = hitting_corpus(500, 1, 14, 256, seed)
    disagree = unsat = sat = 0
    for i, h in enumerate(corpus):
        if i % 2 and len(h) > 1:
            h = _drop(h, rng.below(len(h)))
        v = unsat_hitting_check(h)
        prof = oracle.coverage_profile(h)
        if bool(v) != prof.unsatisfiable or v.stats["falsified"] != prof.covered:
            disagree += 1
        unsat += prof.unsatisfiable
        sat += not prof.unsatisfiable
    sec = clock.elapsed
    return CriterionResult(
        1,
        "counting verdict vs oracle cover",
        disagree == 0 and unsat > 0 and sat > 0 and sec < 30,
        sec,
        30,
        {"instances": len(corpus), "unsat": unsat, "sat": sat, "disagreements": disagree},
    )


# -- 2 and 3 -----------------------------------------------------------------------------


def tree_corpus(seed: int) -> list[Cnf]:
    """200 unsat hitting formulas with 2 <= n <= 12 and at most 64 clauses."""
    return [gen.complete_hitting(n) for n in range(2, 7)] + hitting_corpus(195, 2, 12, 64, seed)


def criterion_2(seed: int) -> CriterionResult:
    """Tree size bound, search correctness and per-split clause removal."""
    clock = _Timer()
    over_bound = wrong = decay_bad = splits = 0
    points = []
    for h in tree_corpus(seed):
        b = sim.hitting_to_tree(h)
        leaves = b.leaves
        points.append((h.num_vars, len(h), leaves))
        if leaves > sim.leaf_bound(h.num_vars, len(h)):
            over_bound += 1
        if not oracle.check_tree_search(b.tree, h) or not sim.validate_tree(b.tree, h):
            wrong += 1
        splits += len(b.splits)
        decay_bad += sum(1 for r in b.splits if not r.decay_ok())
    sec = clock.elapsed
    ok = over_bound == 0 and wrong == 0 and decay_bad == 0 and sec < 60
    return CriterionResult(
        2,
        "tree size bound and search correctness",
        ok,
        sec,
        60,
        {
            "instances": len(points),
            "over_bound": over_bound,
            "search_failures": wrong,
            "splits": splits,
            "decay_violations": decay_bad,
            "max_leaves": max(p[2] for p in points),
        },
        {"leaf_points": points},
    )


def criterion_3(seed: int) -> CriterionResult:
    """Hitting -> tree -> hitting round trip."""
    clock = _Timer()
    rejected = mismatched = 0
    corpus = tree_corpus(seed)
    for h in corpus:
        t = sim.hitting_to_tree(h).tree
        cert = sim.tree_to_hitting(t, h)
        if not verify_hitting(h, cert):
            rejected += 1
        if len(cert.hitting) != sim.leaf_count(t):
            mismatched += 1
    sec = clock.elapsed
    return CriterionResult(
        3,
        "round trip through decision trees",
        rejected == 0 and mismatched == 0 and sec < 30,
        sec,
        30,
        {"instances": len(corpus), "rejected": rejected, "count_mismatch": mismatched},
    )


# -- 4 --------------------------------------------------------------------------------------


def random_raw_sum(rng: gen.SplitMix64, n: int, max_terms: int, p: int):
    """A raw term list and a target; about half are identities by construction.

    Identities start from the constant ``target`` and are grown by
    ``c*F = c*F*x_v + c*F*(1 - x_v)`` splits and inserted cancelling pairs.
    About a quarter of those then get one coefficient or factor perturbed.
    """
    target = rng.below(p)
    if rng.below(2):
        terms = []
        for _ in range(1 + rng.below(max_terms)):
            k = rng.below(n + 1)
            vs = sorted({1 + rng.below(n) for _ in range(k)})
            terms.append((1 + rng.below(p - 1), [v if rng.below(2) else -v for v in vs]))
        return terms, target
    terms = [(target, [])] if target else []
    goal = 1 + rng.below(max_terms - 1)
    while len(terms) < goal:
        if not terms or rng.below(4) == 0:
            c = 1 + rng.below(p - 1)
            vs = sorted({1 + rng.below(n) for _ in range(rng.below(n + 1))})
            facs = [v if rng.below(2) else -v for v in vs]
            terms += [(c, facs), ((p - c) % p, list(facs))]
            continue
        i = rng.below(len(terms))
        c, facs = terms[i]
        used = {abs(f) for f in facs}
        free = [v for v in range(1, n + 1) if v not in used]
        if not free:
            continue
        v = free[rng.below(len(free))]
        terms[i : i + 1] = [(c, facs + [v]), (c, facs + [-v])]
    # shuffle
    for i in range(len(terms) - 1, 0, -1):
        j = rng.below(i + 1)
        terms[i], terms[j] = terms[j], terms[i]
    if terms and rng.below(4) == 0:
        i = rng.below(len(terms))
        c, facs = terms[i]
        if facs and rng.below(2):
            j = rng.below(len(facs))
            facs = facs[:j] + [-facs[j]] + facs[j + 1 :]
            terms[i] = (c, facs)
        else:
            terms[i] = ((c + 1) % p, facs)
    return terms, target


def criterion_4(seed: int, per_field: int = 1000) -> CriterionResult:
    """Layer-merging identity test against cube evaluation, plus the 64-variable timing."""
    clock = _Timer()
    rng = gen.SplitMix64(seed)
    disagree = identities = audits = layer_bad = 0
    for p in (2, 3):
        for i in range(per_field):
            n = 1 + rng.below(12)
            raw, target = random_raw_sum(rng, n, 200, p)
            s = pit.normalize(raw, n, p)
            audit = i < 50
            res = pit.pit_run(s, target, audit=audit, seed=i)
            audits += audit
            truth = oracle.eval_sum_on_cube(s, target)
            identities += truth
            disagree += res.accepted != truth
            prev = 0
            for size in res.layer_sizes:
                if size > min(len(s.terms), 2 * (prev + 1)):
                    layer_bad += 1
                prev = size
    clause_sums = clause_fail = 0
    for h in tree_corpus(seed)[:100]:
        for p in (2, 3):
            clause_sums += 1
            clause_fail += not pit.pit_check(pit.cnf_sum(h, p), 1)
    # timing: 64 variables, 1000 terms over GF(2)
    raw = []
    for _ in range(1000):
        vs = sorted({1 + rng.below(64) for _ in range(1 + rng.below(24))})
        raw.append((1, [v if rng.below(2) else -v for v in vs]))
    big = pit.normalize(raw, 64, 2)
    t0 = time.perf_counter()
    big_res = pit.pit_run(big, 1)
    big_sec = time.perf_counter() - t0
    sec = clock.elapsed
    ok = (
        disagree == 0
        and clause_fail == 0
        and layer_bad == 0
        and big_sec < 5
        and 0 < identities < 2 * per_field
    )
    return CriterionResult(
        4,
        "identity test vs cube evaluation",
        ok,
        sec,
        math.inf,
        {
            "sums": 2 * per_field,
            "identities": identities,
            "disagreements": disagree,
            "audited": audits,
            "layer_bound_violations": layer_bad,
            "clause_sums_rejected": f"{clause_fail}/{clause_sums}",
            "n64_seconds": f"{big_sec:.2f}",
            "n64_max_layer": big_res.max_layer,
        },
        {"layer_sizes": big_res.layer_sizes, "terms": len(big.terms)},
    )


# -- 5 -----------------------------------------------------------------------------------------


def criterion_5(seed: int) -> CriterionResult:
    """Tseitin formulas are odd hitting; unions of two hitting formulas are not."""
    clock = _Timer()
    graphs = {
        "triangle": gen.Graph.named("triangle"),
        "c5": gen.Graph.cycle(5),
        "k4": gen.Graph.complete(4),
        "petersen": gen.Graph.petersen(),
    }
    bad = []
    profiles = {}
    for name, g in graphs.items():
        charges = [1] + [0] * (g.num_vertices - 1)
        f = gen.tseitin(g, charges)
        prof = oracle.coverage_profile(f)
        profiles[name] = prof
        if not (prof.all_odd and prof.unsatisfiable):
            bad.append(f"{name}:oracle")
        if not is_odd_hitting(f):
            bad.append(f"{name}:odd")
        if not verify_odd_hitting(f, HittingCertificate(f, list(range(len(f))))):
            bad.append(f"{name}:cert")
        even = gen.tseitin(g, [0] * g.num_vertices)
        if is_odd_hitting(even) or verify_odd_hitting(even, HittingCertificate(even)):
            bad.append(f"{name}:even-accepted")
    rng = gen.SplitMix64(seed)
    unions = 0
    for _ in range(10):
        n = 2 + rng.below(6)
        a = gen.random_tree_hitting(n, 32, rng.next())[1]
        b = gen.random_tree_hitting(n, 32, rng.next())[1]
        u = gen.union_hitting([a, b])
        unions += 1
        prof = oracle.coverage_profile(u)
        if prof.all_odd:
            bad.append("union:oracle")
        if is_odd_hitting(u) or verify_odd_hitting(u, HittingCertificate(u)):
            bad.append("union:accepted")
    sec = clock.elapsed
    return CriterionResult(
        5,
        "odd hitting on Tseitin formulas",
        not bad and sec < 60,
        sec,
        60,
        {
            "graphs": len(graphs),
            "petersen_assignments": 1 << len(graphs["petersen"].edges),
            "unions_rejected": unions,
            "failures": ",".join(bad) or "none",
        },
        {"profile": profiles["petersen"]},
    )


# -- 6 ---------------------------------------------------------------------------------------------


def reexpress(c: XorClause) -> XorClause:
    """Same falsifying subspace, written with the echelon basis of its negated system."""
    ech = echelonize(AffineSystem(tuple(c.negated_rows())))
    return XorClause(AffineEquation(r & ~1, r & 1).negate() for r in ech.basis.rows)


def codim1_violations(t: int, brute: bool = False) -> tuple[int, int]:
    """Count nonzero affine forms whose level set contains two spread subspaces."""
    sp = gen.spread(t)
    n = sp.num_vars
    systems = [AffineSystem(tuple(c.negated_rows()), n) for c in sp]
    forms = bad = 0
    for mask in range(1, 1 << n):
        for b in (0, 1):
            e = AffineEquation(mask << 1, b)
            inside = [i for i, s in enumerate(systems) if implies(s, e)]
            if brute:
                level = XorClause([e.negate()])
                check = [i for i, c in enumerate(sp) if oracle.region_subset(c, level, n)]
                if check != inside:
                    bad += 1
            forms += 1
            bad += len(inside) > 1
    return forms, bad


def criterion_6(seed: int) -> CriterionResult:
    clock = _Timer()
    failures = []
    for t in range(2, 7):
        sp = gen.spread(t)
        if len(sp) != 1 << t or not is_hitting_xor(sp):
            failures.append(f"spread{t}:hitting")
        for c in sp:
            if echelonize(AffineSystem(tuple(c.negated_rows()), sp.num_vars)).rank != t:
                failures.append(f"spread{t}:dimension")
                break
        if t <= 5 and not oracle.coverage_profile(sp).exactly_once:
            failures.append(f"spread{t}:partition")
        cert = XcnfCertificate(sp, list(range(len(sp))))
        if not verify_hitting_xor(sp, cert):
            failures.append(f"spread{t}:self-cert")
    forms = 0
    for t in range(2, 5):
        k, bad = codim1_violations(t, brute=True)
        forms += k
        if bad:
            failures.append(f"codim1-t{t}:{bad}")
    rng = gen.SplitMix64(seed)
    trees = syntactic_only = 0
    for _ in range(100):
        n = 2 + rng.below(9)
        t, leaf_clauses = gen.random_parity_tree(n, 64, rng.next())
        axioms = Xcnf(n, [reexpress(c) for c in leaf_clauses])
        cert = sim.parity_tree_to_hitting_xor(t, axioms)
        trees += 1
        if not verify_hitting_xor(axioms, cert):
            failures.append("ptree:rejected")
        if not oracle.check_tree_search(t, axioms) or not oracle.coverage_profile(cert.hitting).exactly_once:
            failures.append("ptree:oracle")
        plain = XcnfCertificate(cert.hitting, cert.mapping, semantic=False)
        syntactic_only += not verify_hitting_xor(axioms, plain)
    sec = clock.elapsed
    return CriterionResult(
        6,
        "spread partitions and parity trees",
        not failures and sec < 60,
        sec,
        60,
        {
            "spreads": 5,
            "forms_checked": forms,
            "parity_trees": trees,
            "needing_semantic_mode": syntactic_only,
            "failures": ",".join(sorted(set(failures))) or "none",
        },
    )


# -- 7 ------------------------------------------------------------------------------------------------


def criterion_7(seed: int) -> CriterionResult:
    clock = _Timer()
    rng = gen.SplitMix64(seed)
    failures = []
    instances = damaged = 0
    for k in (2, 3):
        for _ in range(15):
            n = 2 + rng.below(11)
            parts = [gen.random_tree_hitting(n, 48, rng.next())[1] for _ in range(k)]
            u = gen.union_hitting(parts)
            prof = oracle.coverage_profile(u)
            instances += 1
            v = verify_hitting_k(u, HittingCertificate(u), k)
            if not v or v.stats["falsified"] != 1 << n or prof.covered != 1 << n or not prof.at_most(k):
                failures.append(f"k{k}:accept")
            w = verify_hitting_k(u, HittingCertificate(u), k - 1)
            if w or w.reason is not Failure.JOINTLY_FALSIFIABLE:
                failures.append(f"k{k}:reject")
            # a damaged union still satisfies the k bound; verdict and count follow the oracle
            if rng.below(2):
                d = _drop(u, rng.below(len(u)))
            else:
                a = rng.below(1 << n)
                d = Cnf(n, [c for c in u if not c.falsified_by(a)])
            dv = verify_hitting_k(d, HittingCertificate(d), k)
            dprof = oracle.coverage_profile(d)
            damaged += not dprof.unsatisfiable
            if bool(dv) != dprof.unsatisfiable or dv.stats.get("falsified") != dprof.covered:
                failures.append(f"k{k}:damaged")
    sec = clock.elapsed
    return CriterionResult(
        7,
        "inclusion-exclusion for bounded multiplicity",
        not failures and sec < 30,
        sec,
        30,
        {
            "instances": instances,
            "damaged_satisfiable": damaged,
            "failures": ",".join(sorted(set(failures))) or "none",
        },
    )


# -- 8 ---------------------------------------------------------------------------------------------------


def _valid_strengthening(cert_clauses, mapping, axioms, n) -> bool:
    for i, c in enumerate(cert_clauses):
        if mapping is not None and not 0 <= mapping[i] < len(axioms):
            return False
        targets = [axioms[mapping[i]]] if mapping is not None else list(axioms)
        if not any(oracle.region_subset(c, a, n) for a in targets):
            return False
    return True


def _flip_literal(rng, cls: list[Clause]) -> list[Clause] | None:
    i = rng.below(len(cls))
    c = cls[i]
    if not c.lits:
        return None
    j = rng.below(len(c.lits))
    lits = list(c.lits)
    lits[j] = -lits[j]
    out = list(cls)
    out[i] = Clause(lits)
    return out


def _flip_equation(rng, cls: list[XorClause]) -> list[XorClause] | None:
    i = rng.below(len(cls))
    eqs = list(cls[i].equations)
    if not eqs:
        return None
    j = rng.below(len(eqs))
    eqs[j] = eqs[j].negate()
    try:
        new = XorClause(eqs)
    except FormatError:
        return None
    out = list(cls)
    out[i] = new
    return out


def _mutate_certificate(rng, clauses, mapping, m_axioms, flip):
    """One edit: flip, drop, or corrupt a mapping entry.  Returns None if not applicable."""
    kind = rng.below(3)
    if kind == 0:
        new = flip(rng, clauses)
        return (new, mapping) if new is not None else None
    if kind == 1:
        if len(clauses) < 2:
            return None
        i = rng.below(len(clauses))
        mp = None if mapping is None else mapping[:i] + mapping[i + 1 :]
        return clauses[:i] + clauses[i + 1 :], mp
    if mapping is None or m_axioms < 2:
        return None
    i = rng.below(len(mapping))
    mp = list(mapping)
    mp[i] = (mp[i] + 1 + rng.below(m_axioms - 1)) % m_axioms
    return clauses, mp


def _judge(verdict_fn, oracle_fn):
    try:
        accepted = bool(verdict_fn())
    except (MappingError, PreconditionError, FormatError, ValueError):
        accepted = False
    return accepted, oracle_fn()


def _mutation_round(rng, make_base, flip, verify, valid, target: int = 100):
    """Run ``target`` mutations; returns (rejected, still_valid_accepted, bad_accepts, valid_rejected)."""
    stats = [0, 0, 0, 0]
    done = 0
    while done < target:
        axioms, clauses, mapping = make_base(rng)
        mut = _mutate_certificate(rng, list(clauses), mapping, len(axioms), flip)
        if mut is None:
            continue
        cls, mp = mut
        try:
            accepted, ok = _judge(lambda: verify(axioms, cls, mp), lambda: valid(axioms, cls, mp))
        except FormatError:
            continue
        done += 1
        if accepted and ok:
            stats[1] += 1
        elif accepted:
            stats[2] += 1
        else:
            stats[0] += 1
            stats[3] += ok
    return stats


def criterion_8(seed: int) -> CriterionResult:
    clock = _Timer()
    rng = gen.SplitMix64(seed)

    def hitting_base(r):
        n = 3 + r.below(6)
        h = gen.random_tree_hitting(n, 48, r.next())[1]
        tree = sim.hitting_to_tree(h).tree
        cert = sim.tree_to_hitting(tree, h)
        return h, cert.hitting.clauses, cert.mapping if r.below(2) else None

    def hitting_verify(f, cls, mp):
        return verify_hitting(f, HittingCertificate(Cnf(f.num_vars, cls), mp))

    def hitting_valid(f, cls, mp):
        h = Cnf(f.num_vars, cls)
        return oracle.coverage_profile(h).exactly_once and _valid_strengthening(cls, mp, f, f.num_vars)

    def xor_base(r):
        n = 2 + r.below(7)
        t, leaf = gen.random_parity_tree(n, 32, r.next())
        axioms = Xcnf(n, [reexpress(c) for c in leaf])
        cert = sim.parity_tree_to_hitting_xor(t, axioms)
        return axioms, cert.hitting.clauses, cert.mapping if r.below(2) else None

    def xor_verify(f, cls, mp):
        return verify_hitting_xor(f, XcnfCertificate(Xcnf(f.num_vars, cls), mp, semantic=True))

    def xor_valid(f, cls, mp):
        h = Xcnf(f.num_vars, cls)
        return oracle.coverage_profile(h).exactly_once and _valid_strengthening(cls, mp, f, f.num_vars)

    graphs = [gen.Graph.named("triangle"), gen.Graph.cycle(5), gen.Graph.complete(4)]

    def odd_base(r):
        if r.below(2):
            g = graphs[r.below(len(graphs))]
            f = gen.tseitin(g, [1] + [0] * (g.num_vertices - 1))
        else:
            f = gen.random_tree_hitting(3 + r.below(5), 32, r.next())[1]
        return f, f.clauses, list(range(len(f))) if r.below(2) else None

    def odd_verify(f, cls, mp):
        return verify_odd_hitting(f, HittingCertificate(Cnf(f.num_vars, cls), mp))

    def odd_valid(f, cls, mp):
        prof = oracle.coverage_profile(Cnf(f.num_vars, cls))
        return prof.all_odd and prof.unsatisfiable and _valid_strengthening(cls, mp, f, f.num_vars)

    def hk_base(r):
        n = 2 + r.below(6)
        u = gen.union_hitting([gen.random_tree_hitting(n, 24, r.next())[1] for _ in range(2)])
        return u, u.clauses, list(range(len(u))) if r.below(2) else None

    def hk_verify(f, cls, mp):
        return verify_hitting_k(f, HittingCertificate(Cnf(f.num_vars, cls), mp), 2)

    def hk_valid(f, cls, mp):
        prof = oracle.coverage_profile(Cnf(f.num_vars, cls))
        return prof.at_most(2) and prof.unsatisfiable and _valid_strengthening(cls, mp, f, f.num_vars)

    results = {
        "hitting": _mutation_round(rng, hitting_base, _flip_literal, hitting_verify, hitting_valid),
        "hitting-xor": _mutation_round(rng, xor_base, _flip_equation, xor_verify, xor_valid),
        "odd": _mutation_round(rng, odd_base, _flip_literal, odd_verify, odd_valid),
        "hit-k": _mutation_round(rng, hk_base, _flip_literal, hk_verify, hk_valid),
        "snsr": _snsr_mutations(rng),
    }
    bad = sum(r[2] for r in results.values())
    sec = clock.elapsed
    details = {k: f"{r[0]}rej/{r[1]}valid/{r[2]}bad" for k, r in results.items()}
    return CriterionResult(8, "mutated certificates", bad == 0 and sec < 60, sec, 60, details)


def _snsr_mutations(rng, target: int = 100):
    stats = [0, 0, 0, 0]
    done = 0
    while done < target:
        n = 2 + rng.below(6)
        f = gen.random_tree_hitting(n, 24, rng.next())[1]
        entries = {}
        for i, c in enumerate(f):
            free = [v for v in range(1, n + 1) if not (c.variables >> v & 1)]
            if free and rng.below(2):
                v = free[rng.below(len(free))]
                entries[i] = [(1, [v]), (1, [-v])]
            else:
                entries[i] = [(1, [])]
        kind = rng.below(3)
        i = rng.below(len(f))
        monos = entries[i]
        j = rng.below(len(monos))
        coef, facs = monos[j]
        if kind == 0:
            if facs:
                k = rng.below(len(facs))
                facs = facs[:k] + [-facs[k]] + facs[k + 1 :]
            else:
                facs = [1 + rng.below(n)]
            monos[j] = (coef, facs)
        elif kind == 1:
            del monos[j]
        else:
            if len(f) < 2:
                continue
            other = (i + 1 + rng.below(len(f) - 1)) % len(f)
            entries[other].append(monos.pop(j))
        proof = pit.SnsrProof(n, entries)

        def verdict():
            return pit.verify_succinct_nsr(f, proof)

        accepted, ok = _judge(verdict, lambda: oracle.eval_sum_on_cube(pit.snsr_sum(f, proof), 1))
        done += 1
        if accepted and ok:
            stats[1] += 1
        elif accepted:
            stats[2] += 1
        else:
            stats[0] += 1
            stats[3] += ok
    return stats


# -- 9 --------------------------------------------------------------------------------------------------------


def criterion_9(seed: int) -> CriterionResult:
    clock = _Timer()
    rng = gen.SplitMix64(seed)
    failures = []
    graphs = [
        gen.Graph.named("triangle"),
        gen.Graph.cycle(5),
        gen.Graph.complete(4),
        gen.Graph.complete(5),
        gen.Graph.petersen(),
        gen.Graph(2, [(1, 2)]),
    ]
    for _ in range(6):
        nv = 4 + rng.below(5)
        pairs = [(u, v) for u in range(1, nv + 1) for v in range(u + 1, nv + 1)]
        chosen = [e for e in pairs if rng.below(2)]
        graphs.append(gen.Graph(nv, chosen or pairs[:1]))
    for g in graphs:
        charges = [rng.below(2) for _ in range(g.num_vertices)]
        degrees = [sum(1 for e in g.edges if v in e) for v in range(1, g.num_vertices + 1)]
        if any(d == 0 and c for d, c in zip(degrees, charges)):
            charges = [0 if d == 0 else c for d, c in zip(degrees, charges)]
        f = gen.tseitin(g, charges)
        closed = sum(2 ** (d - 1) for d in degrees if d > 0)
        if len(f) != closed:
            failures.append(f"tseitin{g.num_vertices}")
        if len(g.edges) <= 16:
            odd = sum(charges) % 2
            if oracle.coverage_profile(f).unsatisfiable != bool(odd):
                failures.append(f"tseitin{g.num_vertices}:sat")
    for a in range(1, 6):
        for b in range(1, 6):
            degrees = [b] * a + [a] * b
            closed = sum(comb(d, 2) + 1 for d in degrees)
            if len(gen.perfect_matching(a, b)) != closed:
                failures.append(f"pm{a}x{b}")
            if len(gen.perfect_matching(a, b, xor_lift=True)) != closed:
                failures.append(f"pmx{a}x{b}")
    for a in range(1, 4):
        if not oracle.coverage_profile(gen.perfect_matching(a, a + 2)).unsatisfiable:
            failures.append(f"pm{a}x{a + 2}:sat")
        if oracle.coverage_profile(gen.perfect_matching(a, a)).unsatisfiable:
            failures.append(f"pm{a}x{a}:unsat")
    sec = clock.elapsed
    return CriterionResult(
        9,
        "generator clause counts",
        not failures and sec < 10,
        sec,
        10,
        {"graphs": len(graphs), "pm_shapes": 25, "failures": ",".join(failures) or "none"},
    )


CRITERIA: dict[int, Callable[[int], CriterionResult]] = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
    8: criterion_8,
    9: criterion_9,
}


def run_all(seed: int | None = None, only=None, echo=None) -> list[CriterionResult]:
    seed = gen.default_seed() if seed is None else seed
    out = []
    for k, fn in CRITERIA.items():
        if only and k not in only:
            continue
        res = fn(seed + k)
        if echo is not None:
            echo(res.line())
        out.append(res)
    return out


def write_report(results: list[CriterionResult], directory) -> list[Path]:
    """``report.txt`` with ``key: value`` lines plus one figure per data series."""
    from . import plotting

    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    lines = [f"criteria: {len(results)}", f"passed: {sum(r.passed for r in results)}"]
    written = []
    for r in results:
        lines.append(f"c{r.number}.status: {'pass' if r.passed else 'fail'}")
        lines.append(f"c{r.number}.seconds: {r.seconds:.3f}")
        for k, v in r.details.items():
            lines.append(f"c{r.number}.{k}: {v}")
        if "leaf_points" in r.series:
            written.append(plotting.leaf_counts(r.series["leaf_points"], d / "tree_leaves.png"))
        if "layer_sizes" in r.series:
            written.append(
                plotting.layer_sizes(r.series["layer_sizes"], d / "pit_layers.png", r.series["terms"])
            )
        if "profile" in r.series:
            written.append(
                plotting.coverage_histogram(
                    r.series["profile"], d / "tseitin_coverage.png", "Tseitin on Petersen"
                )
            )
    rows = [(f"c{r.number}", r.seconds, r.budget if math.isfinite(r.budget) else 5.0) for r in results]
    if rows:
        written.append(plotting.timings(rows, d / "timings.png"))
    for p in written:
        lines.append(f"figure: {p.name}")
    report = d / "report.txt"
    report.write_text("\n".join(lines) + "\n")
    return [report] + written
