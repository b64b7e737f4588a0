"""The decision procedure and its certificates, plus the numeric oracle.

An identity `forall n1..nk: lhs == rhs` is decided by eliminating one index
at a time from the normal form of lhs - rhs:

  1. Compute an annihilator of the goal along the chosen index: for each
     monomial, every atom is a sequence sampled along an arithmetic
     progression in that index, so it has a slope annihilator; their product
     annihilates the monomial (a pair of atoms sharing one order-2
     annihilator tightens to the symmetric square), and the sum across the
     distinct monomial annihilators annihilates the whole goal.
  2. A sequence annihilated by an order-d recurrence whose constant term is
     a unit is determined on all of Z by d consecutive values, so the goal
     is zero everywhere iff it is zero at the index values 0..d-1.  Each of
     those instantiations is a smaller goal; recurse.
  3. With no indices left, every atom has a constant index: expand it to an
     exact ring element and check that the leaf polynomial is zero (after
     substituting any pinned scalars).

The certificate records the annihilator used at every elimination, every
instantiated subgoal, and every leaf polynomial; checking it needs nothing
beyond recurrence windows and polynomial arithmetic.

The fuzz oracle evaluates lhs and rhs of the original syntax tree (not the
normal form: an independent route) at seeded random rational assignments,
exactly.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence, Union

from .cfinite import Annihilator, product, sum_annihilators, symmetric_square
from .lang import (
    Add,
    Expr,
    Identity,
    IntLit,
    Mul,
    Neg,
    NameRef,
    NormalForm,
    Pow,
    QPowTerm,
    ScalarRef,
    SeqTerm,
    Sub,
    identity_goal,
)
from .ring import SYMBOLS, LaurentPoly, one, zero
from .sequences import SequenceKind, numeric_term, slope_annihilator, symbolic_term

DEFAULT_MAX_ORDER = 64


class OrderCapExceededError(RuntimeError):
    """An elimination needed an annihilator order above the configured cap."""


class EliminationOrderError(ValueError):
    """The requested elimination order does not cover the identity's indices."""


@dataclass(frozen=True)
class ProverConfig:
    max_order: int = DEFAULT_MAX_ORDER


# ---------------------------------------------------------------------------
# annihilator synthesis


def annihilator_for(nf: NormalForm, index: str, max_order: int = DEFAULT_MAX_ORDER) -> Annihilator:
    """An annihilator of the goal viewed as a sequence in one index.

    Every monomial contributes the product of its atoms' slope annihilators
    (slope 0 and pure-scalar monomials contribute x - 1; two atoms sharing
    one order-2 annihilator contribute its symmetric square).  Distinct
    monomial annihilators are then folded with the sum rule, deduplicating
    on exact equality.
    """
    monomial_anns: dict = {}
    for atoms, _scalar in nf.monomials():
        ann = _monomial_annihilator(atoms, index, max_order)
        monomial_anns.setdefault(ann.sort_key(), ann)
    if not monomial_anns:
        raise ValueError("the zero goal needs no annihilator")
    result = None
    for _key, ann in sorted(monomial_anns.items()):
        result = ann if result is None else sum_annihilators(result, ann)
        _check_order(result.order, max_order, index)
    return result


def _monomial_annihilator(atoms: tuple, index: str, max_order: int) -> Annihilator:
    groups: dict = {}
    for atom in atoms:
        if isinstance(atom, SeqTerm):
            slope = atom.index.coefficient(index)
            ann = slope_annihilator(atom.kind, slope)
        else:
            slope = atom.exponent.coefficient(index)
            ann = slope_annihilator(SequenceKind.GEOQ, slope)
        key = ann.sort_key()
        groups.setdefault(key, [ann, 0])
        groups[key][1] += 1
    result = None
    for _key, (ann, count) in sorted(groups.items()):
        if count == 2 and ann.order == 2:
            part = symmetric_square(ann)
        else:
            part = ann
            for _ in range(count - 1):
                part = product(part, ann)
                _check_order(part.order, max_order, index)
        result = part if result is None else product(result, part)
        _check_order(result.order, max_order, index)
    if result is None:  # all-scalar monomial: constant in the index
        result = slope_annihilator(SequenceKind.GEOQ, 0)
    return result


def _check_order(order: int, max_order: int, index: str):
    if order > max_order:
        raise OrderCapExceededError(
            f"annihilator order {order} for index {index!r} exceeds the cap {max_order}"
        )


# ---------------------------------------------------------------------------
# certificates


@dataclass
class LeafRecord:
    at: tuple  # ((index, value), ...) along the elimination path
    poly: LaurentPoly
    zero: bool

    def rendered(self) -> str:
        return self.poly.render()


@dataclass
class LeafNode:
    goal: NormalForm
    record: LeafRecord


@dataclass
class EliminationNode:
    index: str
    annihilator: Annihilator
    goal: NormalForm
    subgoals: list  # [(value, ProofNode), ...] for value in 0..order-1

    @property
    def order(self) -> int:
        return self.annihilator.order


ProofNode = Union[LeafNode, EliminationNode]

PROVED = "PROVED"
REFUTED = "REFUTED"
ABORTED = "ABORTED"


@dataclass
class Certificate:
    identity: Identity
    elimination: tuple
    root: ProofNode | None
    leaves: list
    verdict: str
    ms: int
    reason: str = ""

    @property
    def witness(self) -> LeafRecord | None:
        """First nonzero leaf when REFUTED, else None."""
        for leaf in self.leaves:
            if not leaf.zero:
                return leaf
        return None

    def to_json_dict(self) -> dict:
        out = {
            "identity": self.identity.source,
            "elimination": list(self.elimination),
            "proof": _node_json(self.root) if self.root is not None else None,
            "leaves": [
                {
                    "at": {index: value for index, value in leaf.at},
                    "poly": leaf.rendered(),
                    "zero": leaf.zero,
                }
                for leaf in self.leaves
            ],
            "verdict": self.verdict,
        }
        if self.verdict == ABORTED:
            out["reason"] = self.reason
        out["ms"] = self.ms
        return out


def _node_json(node: ProofNode) -> dict:
    if isinstance(node, LeafNode):
        return {"leaf": {"poly": node.record.rendered(), "zero": node.record.zero}}
    return {
        "index": node.index,
        "order": node.order,
        "charpoly": node.annihilator.render(),
        "subgoals": [
            {"value": value, "goal": child.goal.render(), "proof": _node_json(child)}
            for value, child in node.subgoals
        ],
    }


# ---------------------------------------------------------------------------
# proving


def prove(
    identity: Identity,
    elimination_order: Sequence[str] | None = None,
    config: ProverConfig | None = None,
) -> Certificate:
    """Decide an identity; always returns a Certificate.

    Verdicts: PROVED when every leaf polynomial is zero (then the identity
    holds for all integer index values, negative included, because every
    annihilator's constant term is a unit); REFUTED when some leaf is a
    nonzero polynomial; ABORTED when an annihilator order exceeded the cap.
    """
    config = config or ProverConfig()
    elim = _validated_order(identity, elimination_order)
    pins = identity.pin_map()
    start = time.perf_counter()
    goal = identity_goal(identity)
    leaves: list = []

    def recurse(nf: NormalForm, remaining: tuple, path: tuple) -> ProofNode:
        if not remaining or nf.is_zero:
            poly = _leaf_poly(nf, pins)
            record = LeafRecord(at=path, poly=poly, zero=poly.is_zero)
            leaves.append(record)
            return LeafNode(goal=nf, record=record)
        index, rest = remaining[0], remaining[1:]
        ann = annihilator_for(nf, index, config.max_order)
        subgoals = []
        for value in range(ann.order):
            child_nf = nf.substitute_index(index, value)
            child = recurse(child_nf, rest, path + ((index, value),))
            subgoals.append((value, child))
        return EliminationNode(index=index, annihilator=ann, goal=nf, subgoals=subgoals)

    try:
        root: ProofNode | None = recurse(goal, elim, ())
        verdict = PROVED if all(leaf.zero for leaf in leaves) else REFUTED
        reason = ""
    except OrderCapExceededError as exc:
        root = None
        leaves = []
        verdict = ABORTED
        reason = str(exc)
    ms = int((time.perf_counter() - start) * 1000)
    return Certificate(
        identity=identity,
        elimination=elim,
        root=root,
        leaves=leaves,
        verdict=verdict,
        ms=ms,
        reason=reason,
    )


def _validated_order(identity: Identity, elimination_order: Sequence[str] | None) -> tuple:
    declared = identity.index_vars
    if elimination_order is None:
        return tuple(declared)
    filtered = tuple(v for v in elimination_order if v in declared)
    missing = [v for v in declared if v not in filtered]
    if missing:
        raise EliminationOrderError(
            f"elimination order {','.join(elimination_order)} does not cover "
            f"index variable(s) {', '.join(missing)}"
        )
    return filtered


def _leaf_poly(nf: NormalForm, pins: Mapping[str, Fraction]) -> LaurentPoly:
    """Expand an index-free goal to a single exact ring element."""
    total = zero()
    for atoms, scalar in nf.monomials():
        term = scalar
        for atom in atoms:
            if isinstance(atom, QPowTerm):
                raise AssertionError(
                    "q-power atom survived to a leaf; indices were not eliminated"
                )
            if not atom.index.is_constant:
                raise AssertionError(
                    "sequence atom with live index reached a leaf"
                )
            term = term * symbolic_term(atom.kind, atom.index.const)
        total = total + term
    if pins:
        total = total.pin_substitute(pins)
    return total


# ---------------------------------------------------------------------------
# the numeric oracle


@dataclass(frozen=True)
class Counterexample:
    trial: int
    scalars: tuple  # ((symbol, Fraction), ...)
    indices: tuple  # ((index, int), ...)
    lhs: Fraction
    rhs: Fraction

    def describe(self) -> str:
        scalars = ", ".join(f"{s}={v}" for s, v in self.scalars)
        indices = ", ".join(f"{n}={v}" for n, v in self.indices)
        return f"trial {self.trial}: {scalars}; {indices}; lhs={self.lhs} rhs={self.rhs}"


@dataclass(frozen=True)
class FuzzResult:
    identity: Identity
    trials: int
    counterexample: Counterexample | None

    @property
    def ok(self) -> bool:
        return self.counterexample is None


def fuzz(identity: Identity, trials: int, seed: int, value_range: int) -> FuzzResult:
    """Compare lhs and rhs exactly at seeded uniform integer assignments.

    Scalars are drawn from [-value_range, value_range] (q redrawn until
    nonzero, then overridden by pins), index variables from the same range;
    negative indices exercise the backward extensions.  Deterministic for a
    fixed (identity, trials, seed, value_range).
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if value_range < 1:
        raise ValueError("range must be at least 1")
    rng = random.Random(seed)
    pins = identity.pin_map()
    bindings = identity.bindings()
    for trial in range(1, trials + 1):
        scalars = {}
        for name in SYMBOLS:
            value = rng.randint(-value_range, value_range)
            if name == "q":
                while value == 0:
                    value = rng.randint(-value_range, value_range)
            scalars[name] = Fraction(value)
        scalars.update(pins)
        indices = {v: rng.randint(-value_range, value_range) for v in identity.index_vars}
        lhs = evaluate_expr(identity.lhs, scalars, indices, bindings)
        rhs = evaluate_expr(identity.rhs, scalars, indices, bindings)
        if lhs != rhs:
            return FuzzResult(
                identity,
                trial,
                Counterexample(
                    trial=trial,
                    scalars=tuple(sorted((s, v) for s, v in scalars.items())),
                    indices=tuple((v, indices[v]) for v in identity.index_vars),
                    lhs=lhs,
                    rhs=rhs,
                ),
            )
    return FuzzResult(identity, trials, None)


def evaluate_expr(
    expr: Expr,
    scalars: Mapping[str, Fraction],
    indices: Mapping[str, int],
    bindings: Mapping[str, Expr],
) -> Fraction:
    """Exact value of a syntax tree; the oracle route, bypassing normal forms."""
    if isinstance(expr, IntLit):
        return Fraction(expr.value)
    if isinstance(expr, ScalarRef):
        return Fraction(scalars[expr.name])
    if isinstance(expr, NameRef):
        return evaluate_expr(bindings[expr.name], scalars, indices, bindings)
    if isinstance(expr, SeqTerm):
        return numeric_term(expr.kind, expr.index.value(indices), scalars)
    if isinstance(expr, QPowTerm):
        return numeric_term(SequenceKind.GEOQ, expr.exponent.value(indices), scalars)
    if isinstance(expr, Neg):
        return -evaluate_expr(expr.operand, scalars, indices, bindings)
    if isinstance(expr, Add):
        return evaluate_expr(expr.left, scalars, indices, bindings) + evaluate_expr(
            expr.right, scalars, indices, bindings
        )
    if isinstance(expr, Sub):
        return evaluate_expr(expr.left, scalars, indices, bindings) - evaluate_expr(
            expr.right, scalars, indices, bindings
        )
    if isinstance(expr, Mul):
        return evaluate_expr(expr.left, scalars, indices, bindings) * evaluate_expr(
            expr.right, scalars, indices, bindings
        )
    if isinstance(expr, Pow):
        return evaluate_expr(expr.base, scalars, indices, bindings) ** expr.exponent
    raise TypeError(f"unexpected node {expr!r}")
