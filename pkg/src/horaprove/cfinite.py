"""Closure algebra for linear recurrences with constant coefficients.

An Annihilator is the monic characteristic polynomial of a linear
recurrence over the coefficient ring: coeffs (c0, ..., c_{d-1}, 1),
ascending, encodes

    X(n+d) + c_{d-1} X(n+d-1) + ... + c0 X(n) = 0.

A sequence "satisfies" the annihilator when that window identity holds for
every n.  The constant term c0 is required to be a ring unit (+-q^k): that
makes the recurrence runnable backward as well as forward, so a sequence
satisfying it is pinned down on all of Z by d consecutive values.  This is
what lets the prover check finitely many initial cases and conclude for
every integer index, negative ones included.

Closure operations:
  * product(f, g)        products of solutions; Kronecker of companions
  * sum_annihilators     sums of solutions; polynomial product (with dedupe)
  * symmetric_square     products of two solutions of one order-2 recurrence;
                         order 3 instead of the Kronecker 4
All are division-free and purely symbolic, so results are exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from . import linalg
from .ring import LaurentPoly, one, symbol, zero


class OrderMismatchError(ValueError):
    """The operation requires an annihilator of a specific order."""


class ShortListError(ValueError):
    """annihilates() needs at least order+1 consecutive terms."""


@dataclass(frozen=True)
class Annihilator:
    """Monic characteristic polynomial of a constant-coefficient recurrence.

    coeffs are ascending: (c0, ..., c_{d-1}, 1).  Instances are validated on
    construction: monic, order >= 1, and unit constant term.
    """

    coeffs: tuple

    def __post_init__(self):
        cs = tuple(
            c if isinstance(c, LaurentPoly) else LaurentPoly.from_int(c)
            for c in self.coeffs
        )
        object.__setattr__(self, "coeffs", cs)
        if len(cs) < 2:
            raise OrderMismatchError("annihilator order must be at least 1")
        if cs[-1] != 1:
            raise ValueError("annihilator must be monic")
        if not cs[0].is_unit():
            raise ValueError(
                f"constant term must be a unit (+-q^k), got {cs[0]}: "
                "the recurrence could not run backward"
            )

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def companion(self):
        return linalg.companion(self.coeffs)

    def sort_key(self):
        return (self.order, tuple(c.sort_key() for c in self.coeffs))

    def render(self) -> str:
        """Deterministic text form, e.g. 'x^2 - p*x + q'."""
        parts = []
        for k in range(self.order, -1, -1):
            c = self.coeffs[k]
            if c.is_zero:
                continue
            xpart = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            sign, body = _signed_coefficient(c, with_x=bool(xpart))
            if xpart:
                body = f"{body}*{xpart}" if body else xpart
            if not parts:
                parts.append("-" + body if sign < 0 else body)
            else:
                parts.append((" - " if sign < 0 else " + ") + body)
        return "".join(parts) or "0"

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"Annihilator({self.render()})"


def _signed_coefficient(c: LaurentPoly, with_x: bool):
    """Split a coefficient into (sign, rendered magnitude) for charpoly text."""
    terms = list(c.monomials())
    if len(terms) == 1:
        exps, coeff = terms[0]
        sign = -1 if coeff < 0 else 1
        mono = LaurentPoly({exps: abs(coeff)})
        if mono == 1 and with_x:
            return sign, ""
        return sign, mono.render()
    return 1, f"({c.render()})"


def product(f: Annihilator, g: Annihilator) -> Annihilator:
    """Annihilator of all term-wise products of solutions of f and of g.

    The state of a product sequence is the Kronecker product of the factor
    states, advanced by the Kronecker product of the companion matrices,
    so its characteristic polynomial annihilates every product sequence.
    Order multiplies; no minimality is attempted.
    """
    m = linalg.kron(f.companion(), g.companion())
    return Annihilator(linalg.charpoly(m))


def sum_annihilators(f: Annihilator, g: Annihilator) -> Annihilator:
    """Annihilator of all term-wise sums; dedupes on exact equality only."""
    if f == g:
        return f
    return Annihilator(_poly_mul(f.coeffs, g.coeffs))


def symmetric_square(f: Annihilator) -> Annihilator:
    """Order-3 annihilator of products of two solutions of an order-2 one.

    For x^2 - P x + Q the result is
        x^3 - (P^2 - Q) x^2 + (P^2 Q - Q^2) x - Q^3,
    which divides the order-4 Kronecker product and drops its extra x - Q
    factor.
    """
    if f.order != 2:
        raise OrderMismatchError(f"symmetric_square needs order 2, got {f.order}")
    big_p = -f.coeffs[1]
    big_q = f.coeffs[0]
    return Annihilator(
        (
            -(big_q ** 3),
            big_p ** 2 * big_q - big_q ** 2,
            -(big_p ** 2 - big_q),
            one(),
        )
    )


Term = Union[LaurentPoly, int, Fraction]


def annihilates(
    f: Annihilator,
    terms: Sequence[Term],
    assignment: Mapping[str, Union[int, Fraction]] | None = None,
) -> bool:
    """Check the recurrence window on a list of consecutive terms.

    With no assignment the terms must be ring elements (ints coerce) and the
    check is symbolic.  With an assignment the coefficients are evaluated and
    the terms must be rationals; the check is exact in either mode.
    """
    need = f.order + 1
    if len(terms) < need:
        raise ShortListError(f"need at least {need} consecutive terms, got {len(terms)}")
    if assignment is None:
        coeffs = f.coeffs
        values = [
            t if isinstance(t, LaurentPoly) else LaurentPoly.from_int(t) for t in terms
        ]
        zero_value = zero()
    else:
        coeffs = [c.evaluate(assignment) for c in f.coeffs]
        values = [Fraction(t) for t in terms]
        zero_value = Fraction(0)
    for start in range(len(values) - f.order):
        acc = zero_value
        for i, c in enumerate(coeffs):
            acc = acc + c * values[start + i]
        if acc != zero_value:
            return False
    return True


def _poly_mul(f: Iterable[LaurentPoly], g: Iterable[LaurentPoly]):
    f = list(f)
    g = list(g)
    out = [zero()] * (len(f) + len(g) - 1)
    for i, fi in enumerate(f):
        if fi.is_zero:
            continue
        for j, gj in enumerate(g):
            out[i + j] = out[i + j] + fi * gj
    return tuple(out)


def poly_divmod(num: Sequence, den: Sequence):
    """Exact division of univariate polynomials with ring coefficients.

    Both arguments are ascending coefficient sequences; the divisor must be
    monic so the division never leaves the ring.  Returns (quotient,
    remainder) as ascending tuples; the remainder is padded with zeros to
    length len(den) - 1 (or (zero(),) when the divisor is linear).
    """
    num = [c if isinstance(c, LaurentPoly) else LaurentPoly.from_int(c) for c in num]
    den = [c if isinstance(c, LaurentPoly) else LaurentPoly.from_int(c) for c in den]
    if den[-1] != 1:
        raise ValueError("divisor must be monic")
    d = len(den) - 1
    rem = list(num)
    quot = [zero()] * max(1, len(num) - d)
    for k in range(len(num) - 1, d - 1, -1):
        c = rem[k]
        if c.is_zero:
            continue
        quot[k - d] = c
        for j in range(d + 1):
            rem[k - d + j] = rem[k - d + j] - c * den[j]
    rem = rem[:d] or [zero()]
    return tuple(quot), tuple(rem)


X_MINUS_ONE = Annihilator((LaurentPoly.from_int(-1), one()))
ORDER_TWO_BASE = Annihilator((symbol("q"), -symbol("p"), one()))
