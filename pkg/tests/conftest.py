from fractions import Fraction

import pytest

from horaprove import corpus_path, parse_file
from horaprove.lang import QPowTerm
from horaprove.sequences import SequenceKind, numeric_term


@pytest.fixture(scope="session")
def corpus_identities():
    return parse_file(corpus_path("paper.fib").read_text(encoding="utf-8")).identities


@pytest.fixture(scope="session")
def mutant_identities():
    return parse_file(corpus_path("mutations.fib").read_text(encoding="utf-8")).identities


def by_fragment(identities, fragment: str):
    """The unique identity whose source text contains the fragment."""
    hits = [it for it in identities if fragment in it.source]
    assert len(hits) == 1, f"{fragment!r} matched {len(hits)} identities"
    return hits[0]


def eval_normal_form(nf, scalars, indices) -> Fraction:
    """Numeric value of a normal form, atom by atom.

    An independent route from both the prover's leaf expansion and the
    oracle's syntax-tree walk; used to check that normalization preserves
    meaning.
    """
    total = Fraction(0)
    for atoms, scalar in nf.monomials():
        term = scalar.evaluate(scalars)
        for atom in atoms:
            if isinstance(atom, QPowTerm):
                term *= numeric_term(SequenceKind.GEOQ, atom.exponent.value(indices), scalars)
            else:
                term *= numeric_term(atom.kind, atom.index.value(indices), scalars)
        total += term
    return total
