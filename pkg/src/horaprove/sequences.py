"""The recurrence families the prover reasons about, and their terms.

Four families of atoms appear in identities:

    W   order 2, seeds a, b          X(n+2) = p*X(n+1) - q*X(n)
    V   order 2, seeds c, d          (same recurrence)
    U   order 2, seeds 0, 1          (same recurrence; the fundamental one)
    GEOQ order 1, n -> q^n           X(n+1) = q*X(n)

Terms extend to every integer index: the backward step divides by the
trailing recurrence coefficient, a power of q, which is invertible in the
coefficient ring.  symbolic_term produces the exact ring element for a
fixed index; numeric_term the exact rational under an assignment; and
slope_annihilator the recurrence satisfied along an arithmetic progression
of indices n -> m*n + c, namely the characteristic polynomial of the m-th
power of the family's companion matrix (inverted first when m < 0).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Mapping, Union

from . import linalg
from .cfinite import X_MINUS_ONE, Annihilator
from .ring import LaurentPoly, ZeroQError, from_int, one, q_power, symbol

Rational = Union[int, Fraction]


class SequenceKind(Enum):
    W = "W"
    V = "V"
    U = "u"
    GEOQ = "q^n"


@dataclass(frozen=True)
class SequenceDef:
    kind: SequenceKind
    order: int
    initial: tuple
    charpoly: tuple  # ascending, monic; constant term a power of q


_CHAR_ORDER2 = (symbol("q"), -symbol("p"), one())

SEQUENCE_DEFS = {
    SequenceKind.W: SequenceDef(
        SequenceKind.W, 2, (symbol("a"), symbol("b")), _CHAR_ORDER2
    ),
    SequenceKind.V: SequenceDef(
        SequenceKind.V, 2, (symbol("c"), symbol("d")), _CHAR_ORDER2
    ),
    SequenceKind.U: SequenceDef(
        SequenceKind.U, 2, (from_int(0), from_int(1)), _CHAR_ORDER2
    ),
    SequenceKind.GEOQ: SequenceDef(
        SequenceKind.GEOQ, 1, (one(),), (-symbol("q"), one())
    ),
}

# Term caches grow outward from the seeds and are only ever extended, never
# mutated in place, so sharing across calls is safe.
_term_cache: dict = {
    kind: dict(enumerate(d.initial)) for kind, d in SEQUENCE_DEFS.items()
}


def symbolic_term(kind: SequenceKind, k: int) -> LaurentPoly:
    """The exact ring element for the k-th term, any integer k."""
    if kind is SequenceKind.GEOQ:
        return q_power(k)
    cache = _term_cache[kind]
    got = cache.get(k)
    if got is not None:
        return got
    c0, c1, _ = SEQUENCE_DEFS[kind].charpoly
    c0_inv = c0.unit_inverse()
    hi = max(cache)
    while hi < k:  # X(n+2) = -c1 X(n+1) - c0 X(n)
        hi += 1
        cache[hi] = -c1 * cache[hi - 1] - c0 * cache[hi - 2]
    lo = min(cache)
    while lo > k:  # X(n) = -c0^-1 (X(n+2) + c1 X(n+1))
        lo -= 1
        cache[lo] = -c0_inv * (cache[lo + 2] + c1 * cache[lo + 1])
    return cache[k]


def numeric_term(
    kind: SequenceKind, k: int, assignment: Mapping[str, Rational]
) -> Fraction:
    """Exact rational value of the k-th term under an assignment (q != 0)."""
    q = Fraction(assignment["q"])
    if q == 0:
        raise ZeroQError("q must be nonzero")
    if kind is SequenceKind.GEOQ:
        return q ** k
    p = Fraction(assignment["p"])
    seq_def = SEQUENCE_DEFS[kind]
    cur = seq_def.initial[0].evaluate(assignment)
    nxt = seq_def.initial[1].evaluate(assignment)
    if k >= 0:
        for _ in range(k):
            cur, nxt = nxt, p * nxt - q * cur
        return cur
    for _ in range(-k):
        cur, nxt = (p * cur - nxt) / q, cur
    return cur


def slope_annihilator(kind: SequenceKind, m: int) -> Annihilator:
    """Annihilator of n -> term(m*n + c), any integer slope m, any offset c.

    The state vector of the family advances by its companion matrix C, so
    sampling along slope m advances by C^m; the characteristic polynomial
    of C^m (inverse via adjugate over the Laurent ring when m < 0)
    annihilates every such sampled sequence.  Slope 0 gives x - 1.
    """
    key = (kind, m)
    got = _slope_cache.get(key)
    if got is not None:
        return got
    if m == 0:
        ann = X_MINUS_ONE
    else:
        seq_def = SEQUENCE_DEFS[kind]
        mat = linalg.companion(seq_def.charpoly)
        if m < 0:
            mat = linalg.mat_inverse(mat, seq_def.charpoly)
        ann = Annihilator(linalg.charpoly(linalg.mat_pow(mat, abs(m))))
    _slope_cache[key] = ann
    return ann


_slope_cache: dict = {}
