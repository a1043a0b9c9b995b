"""hitkit command line: verify, convert, generate, oracle, selftest.

Exit codes: 0 accept / success, 1 reject, 2 usage, input or precondition error.
``-`` names stdin or stdout in every file slot.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import generators as gen
from . import oracle as orc
from . import pit, simulations as sim
from .formula import Cnf, FormatError, Xcnf, parse_cnf, parse_xcnf, serialize_cnf, serialize_xcnf
from .verifiers import (
    MAX_K,
    HittingCertificate,
    XcnfCertificate,
    parse_certificate,
    serialize_certificate,
    verify_hitting,
    verify_hitting_k,
    verify_hitting_xor,
    verify_odd_hitting,
)


class UsageError(Exception):
    pass


class _Inputs:
    """Reads each path once; stdin is consumed at most once and shared."""

    def __init__(self):
        self._stdin: str | None = None

    def read(self, path: str) -> str:
        if path == "-":
            if self._stdin is None:
                self._stdin = sys.stdin.read()
            return self._stdin
        try:
            return Path(path).read_text()
        except OSError as e:
            raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text)
    except OSError as e:
        raise UsageError(f"cannot write {path}: {e.strerror}") from None


def _formula(text: str) -> Cnf | Xcnf:
    for line in text.splitlines():
        s = line.split()
        if s and s[0] == "p":
            return parse_xcnf(text) if s[1:2] == ["xcnf"] else parse_cnf(text)
    raise FormatError("no 'p' header line")


def _cnf(text: str) -> Cnf:
    f = _formula(text)
    if not isinstance(f, Cnf):
        raise UsageError("this system needs a plain cnf axiom file")
    return f


def _emit(lines: list[str]) -> None:
    sys.stdout.write("".join(f"{ln}\n" for ln in lines))


# -- verify --------------------------------------------------------------------------


def cmd_verify(args, io: _Inputs) -> int:
    axioms_text = io.read(args.axioms)
    cert_text = io.read(args.cert)
    system = args.system
    if system == "snsr":
        f = _cnf(axioms_text)
        v = pit.verify_succinct_nsr(f, pit.parse_snsr(cert_text), args.field)
    elif system == "hitting-xor":
        f = _formula(axioms_text)
        h, mapping = parse_certificate(cert_text)
        if isinstance(h, Cnf):
            h = Xcnf.from_cnf(h)
        v = verify_hitting_xor(f, XcnfCertificate(h, mapping, semantic=args.semantic))
    else:
        f = _cnf(axioms_text)
        h, mapping = parse_certificate(cert_text, xor=False)
        cert = HittingCertificate(h, mapping)
        if system == "hitting":
            v = verify_hitting(f, cert)
        elif system == "odd":
            v = verify_odd_hitting(f, cert)
        else:
            if args.k is None:
                raise UsageError("--system hit-k needs --k")
            v = verify_hitting_k(f, cert, args.k)
    _emit([f"system: {system}"] + v.report())
    if not v:
        where = "" if v.witness is None else f" at {v.report()[2].split(': ', 1)[1]}"
        print(f"rejected: {v.reason.value}{where}", file=sys.stderr)
        return 1
    return 0


# -- convert --------------------------------------------------------------------------


def cmd_convert(args, io: _Inputs) -> int:
    src, dst = args.source, args.target
    text = io.read(args.input)
    if src == "hitting" and dst == "tree":
        h = _cnf(text)
        build = sim.hitting_to_tree(h)
        _write(args.output, sim.serialize_tree(build.tree))
        print(f"leaves: {build.leaves}", file=sys.stderr)
        return 0
    if src in ("tree", "ptree") and dst in ("hitting", "hitting-xor"):
        if args.axioms is None:
            raise UsageError(f"--from {src} needs --axioms")
        f = _formula(io.read(args.axioms))
        t = sim.parse_tree(text)
        if dst == "hitting":
            if src == "ptree" or isinstance(f, Xcnf):
                raise UsageError("a plain hitting certificate needs a plain tree and cnf axioms")
            cert = sim.tree_to_hitting(t, f)
        else:
            if isinstance(f, Cnf):
                f = Xcnf.from_cnf(f)
            if isinstance(t, (sim.Node, sim.Leaf)) and not sim._is_parity(t):
                t = sim.as_parity_tree(t)
            cert = sim.parity_tree_to_hitting_xor(t, f)
        _write(args.output, serialize_certificate(cert.hitting, cert.mapping))
        return 0
    raise UsageError(f"no conversion from {src} to {dst}")


# -- generate ---------------------------------------------------------------------------


def cmd_generate(args, io: _Inputs) -> int:
    fam = args.family
    if fam == "complete":
        out = serialize_cnf(gen.complete_hitting(args.n))
    elif fam == "tseitin":
        if Path(args.graph).exists() or args.graph == "-":
            g = gen.parse_graph(io.read(args.graph))
        else:
            g = gen.Graph.named(args.graph)
        if args.charges is None:
            charges = [1] + [0] * (g.num_vertices - 1)
        else:
            try:
                charges = [int(x) for x in args.charges.split(",")]
            except ValueError:
                raise UsageError("--charges takes comma-separated bits") from None
        out = serialize_cnf(gen.tseitin(g, charges))
    elif fam == "pm":
        f = gen.perfect_matching(args.a, args.b, xor_lift=args.xor)
        out = serialize_xcnf(f) if isinstance(f, Xcnf) else serialize_cnf(f)
    elif fam == "xorify":
        out = serialize_cnf(gen.xorify(_cnf(io.read(args.file))))
    elif fam == "spread":
        out = serialize_xcnf(gen.spread(args.t))
    elif fam == "random-tree":
        tree, f = gen.random_tree_hitting(args.n, args.max_leaves, args.seed)
        if args.tree_out:
            _write(args.tree_out, sim.serialize_tree(tree))
        out = serialize_cnf(f)
    elif fam == "union":
        out = serialize_cnf(gen.union_hitting([_cnf(io.read(p)) for p in args.files]))
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown family {fam}")
    sys.stdout.write(out)
    return 0


# -- oracle -------------------------------------------------------------------------------


def cmd_oracle(args, io: _Inputs) -> int:
    if args.profile:
        f = _formula(io.read(args.profile))
        prof = orc.coverage_profile(f)
        lines = [f"vars: {prof.n}", f"clauses: {len(f)}"]
        lines += [f"count_{k}: {v}" for k, v in sorted(prof.histogram.items())]
        lines += [
            f"min: {prof.min_count}",
            f"max: {prof.max_count}",
            f"exactly_once: {'yes' if prof.exactly_once else 'no'}",
            f"all_odd: {'yes' if prof.all_odd else 'no'}",
            f"unsatisfiable: {'yes' if prof.unsatisfiable else 'no'}",
        ]
        if args.plot:
            from . import plotting

            plotting.coverage_histogram(prof, args.plot)
            lines.append(f"figure: {args.plot}")
        _emit(lines)
        return 0
    tree_path, formula_path = args.check_tree
    t = sim.parse_tree(io.read(tree_path))
    f = _formula(io.read(formula_path))
    ok = orc.check_tree_search(t, f)
    leaves = sim.leaf_count(t)
    _emit(
        [
            f"search_ok: {'yes' if ok else 'no'}",
            f"leaves: {leaves}",
            f"depth: {sim.depth(t)}",
            f"size_bound: {sim.leaf_bound(f.num_vars, len(f)):.6g}",
        ]
    )
    if not ok:
        print("rejected: some assignment reaches a leaf whose clause it satisfies", file=sys.stderr)
        return 1
    return 0


# -- selftest --------------------------------------------------------------------------------


def cmd_selftest(args, io: _Inputs) -> int:
    from . import acceptance

    only = None
    if args.only:
        try:
            only = {int(x) for x in args.only.split(",")}
        except ValueError:
            raise UsageError("--only takes comma-separated criterion numbers") from None
    results = acceptance.run_all(args.seed, only, echo=lambda line: print(line, flush=True))
    if args.report:
        for p in acceptance.write_report(results, args.report):
            print(f"wrote {p}", file=sys.stderr)
    failed = [r.number for r in results if not r.passed]
    print(f"selftest: {len(results) - len(failed)}/{len(results)} passed")
    return 1 if failed else 0


# -- parser ---------------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hitkit", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="check a certificate against an axiom file")
    v.add_argument("--system", required=True, choices=["hitting", "hitting-xor", "odd", "hit-k", "snsr"])
    v.add_argument("--axioms", required=True, metavar="FILE")
    v.add_argument("--cert", required=True, metavar="FILE")
    v.add_argument("--k", type=int, help=f"multiplicity bound for hit-k (1..{MAX_K}; cost grows as m^k)")
    v.add_argument("--semantic", action="store_true", help="xor strengthening modulo linear span")
    v.add_argument("--field", type=int, default=2, help="prime field for snsr (default 2)")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("convert", help="hitting <-> decision trees")
    c.add_argument("--from", dest="source", required=True, choices=["hitting", "tree", "ptree"])
    c.add_argument("--to", dest="target", required=True, choices=["tree", "hitting", "hitting-xor"])
    c.add_argument("--axioms", metavar="FILE", help="axiom formula the tree leaves refer to")
    c.add_argument("input")
    c.add_argument("output")
    c.set_defaults(func=cmd_convert)

    g = sub.add_parser("generate", help="write a formula family to stdout")
    gs = g.add_subparsers(dest="family", required=True)
    p = gs.add_parser("complete")
    p.add_argument("n", type=int)
    p = gs.add_parser("tseitin")
    p.add_argument("--graph", required=True, help="graph file (p graph V E) or a name: triangle, cN, kN, petersen")
    p.add_argument("--charges", help="comma-separated bits, default 1,0,..,0")
    p = gs.add_parser("pm")
    p.add_argument("a", type=int)
    p.add_argument("b", type=int)
    p.add_argument("--xor", action="store_true", help="lift each edge variable to a xor pair")
    p = gs.add_parser("xorify")
    p.add_argument("file")
    p = gs.add_parser("spread")
    p.add_argument("t", type=int)
    p = gs.add_parser("random-tree")
    p.add_argument("n", type=int)
    p.add_argument("max_leaves", type=int)
    p.add_argument("--seed", type=lambda s: int(s, 0), help="default: HITKIT_SEED or 0x5EED")
    p.add_argument("--tree-out", metavar="FILE")
    p = gs.add_parser("union")
    p.add_argument("files", nargs="+")
    g.set_defaults(func=cmd_generate)

    o = sub.add_parser("oracle", help="brute-force coverage and tree checks (n <= 24)")
    grp = o.add_mutually_exclusive_group(required=True)
    grp.add_argument("--profile", metavar="FILE")
    grp.add_argument("--check-tree", nargs=2, metavar=("TREE", "FILE"))
    o.add_argument("--plot", metavar="PNG", help="with --profile: save a histogram")
    o.set_defaults(func=cmd_oracle)

    s = sub.add_parser("selftest", help="run the embedded acceptance suite")
    s.add_argument("--report", metavar="DIR", help="write report.txt and figures here")
    s.add_argument("--only", help="comma-separated criterion numbers")
    s.add_argument("--seed", type=lambda x: int(x, 0))
    s.set_defaults(func=cmd_selftest)
    return ap


def _where(e: BaseException) -> str:
    return type(e).__module__.rsplit(".", 1)[-1]


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args, _Inputs())
    except UsageError as e:
        print(f"hitkit: {e}", file=sys.stderr)
    except (ValueError, ZeroDivisionError) as e:
        print(f"hitkit: {_where(e)}: {e}", file=sys.stderr)
    return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
