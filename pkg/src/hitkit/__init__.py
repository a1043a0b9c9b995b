"""Checkers, converters and generators for hitting-formula certificates."""

from .formula import (
    AffineEquation,
    Clause,
    Cnf,
    FormatError,
    Literal,
    Xcnf,
    XorClause,
    clash,
    is_weakening,
    parse_cnf,
    parse_xcnf,
    restrict,
    serialize_cnf,
    serialize_xcnf,
)
from .verifiers import (
    Failure,
    HittingCertificate,
    Verdict,
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

__version__ = "0.1.0"
