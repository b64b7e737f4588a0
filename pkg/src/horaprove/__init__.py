"""Exact prover for identities among generalized Fibonacci sequences.

Identities over the Horadam family W(a,b; p,q), a second started copy V,
the fundamental solution u, and geometric q-powers are decided by a
recurrence argument: both sides of an identity satisfy a common linear
recurrence computed by closure operations on annihilators, so the identity
holds for all integers iff finitely many instances reduce to the zero
polynomial.  Proofs are emitted as machine-checkable JSON certificates and
cross-checked by an exact numeric oracle.
"""

from importlib import resources
from pathlib import Path

from .cfinite import (
    Annihilator,
    OrderMismatchError,
    ShortListError,
    annihilates,
    poly_divmod,
    product,
    sum_annihilators,
    symmetric_square,
)
from .lang import (
    Identity,
    NonIntegerExponentError,
    NormalForm,
    ParseError,
    SlopeCapExceededError,
    SourceFile,
    UndeclaredIndexError,
    UnknownNameError,
    identity_goal,
    normalize,
    parse_file,
    parse_identity,
    render_identity,
)
from .prover import (
    ABORTED,
    PROVED,
    REFUTED,
    Certificate,
    Counterexample,
    EliminationOrderError,
    FuzzResult,
    OrderCapExceededError,
    ProverConfig,
    annihilator_for,
    fuzz,
    prove,
)
from .ring import LaurentPoly, NotAUnitError, ZeroQError, SYMBOLS, from_int, one, q_power, symbol, zero
from .sequences import SequenceKind, numeric_term, slope_annihilator, symbolic_term

__version__ = "0.1.0"


def corpus_path(name: str = "paper.fib") -> Path:
    """Filesystem path of a shipped corpus file."""
    return Path(str(resources.files(__package__).joinpath("corpus", name)))


__all__ = [
    "ABORTED",
    "Annihilator",
    "Certificate",
    "Counterexample",
    "EliminationOrderError",
    "FuzzResult",
    "Identity",
    "LaurentPoly",
    "NonIntegerExponentError",
    "NormalForm",
    "NotAUnitError",
    "OrderCapExceededError",
    "OrderMismatchError",
    "PROVED",
    "ParseError",
    "ProverConfig",
    "REFUTED",
    "SYMBOLS",
    "SequenceKind",
    "ShortListError",
    "SlopeCapExceededError",
    "SourceFile",
    "UndeclaredIndexError",
    "UnknownNameError",
    "ZeroQError",
    "annihilates",
    "annihilator_for",
    "corpus_path",
    "from_int",
    "fuzz",
    "identity_goal",
    "normalize",
    "numeric_term",
    "one",
    "parse_file",
    "parse_identity",
    "poly_divmod",
    "product",
    "prove",
    "q_power",
    "render_identity",
    "slope_annihilator",
    "sum_annihilators",
    "symbol",
    "symbolic_term",
    "symmetric_square",
    "zero",
    "__version__",
]
