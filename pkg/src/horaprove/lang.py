"""The identity language: parsing, normal forms, index substitution.

Grammar (whitespace-insensitive; '#' starts a comment to end of line):

    file       := item*
    item       := letdecl | identity
    letdecl    := 'let' NAME '=' scalarexpr
    identity   := 'forall' ivar (',' ivar)* ':' expr '==' expr pins?
    pins       := 'with' SCALAR ':=' rational (',' SCALAR ':=' rational)*
    expr       := term (('+' | '-') term)*
    term       := ('-')? factor ('*' factor)*
    factor     := base ('^' INT)?
    base       := SEQ '(' linform ')' | 'q' '^' '(' linform ')'
                | SCALAR | NAME | INT | '(' expr ')'
    linform    := INT-linear combination of declared ivars plus a constant,
                  e.g. 2*n - j + 3
    SEQ        := 'W' | 'V' | 'u'        (case-sensitive)
    SCALAR     := 'p' | 'q' | 'a' | 'b' | 'c' | 'd'
    rational   := ('-')? INT ('/' INT)?

Let-bindings are file-scoped, scalar-only (no sequence terms), and must
precede use.  Power exponents are non-negative integer literals; negative
q powers are written q^(-1).  The 'with' clause pins scalars for one
identity; a pinned q must be nonzero.

A NormalForm is the sum-of-monomials view of an expression: a map from a
multiset of atoms (sequence terms and at most one q^(linear form) with no
constant part) to an exact scalar coefficient in the ring.  Identity index
variables never appear in scalars, only inside atom index forms, which
makes eliminating one index at a time well-defined.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Mapping, Union

from .ring import SYMBOLS, LaurentPoly, from_int, one, q_power, symbol
from .sequences import SequenceKind

SCALARS = ("p", "q", "a", "b", "c", "d")
SEQ_NAMES = {"W": SequenceKind.W, "V": SequenceKind.V, "u": SequenceKind.U}
KEYWORDS = {"forall", "let", "with"}
DEFAULT_SLOPE_CAP = 8


# ---------------------------------------------------------------------------
# errors


class ParseError(Exception):
    """Syntax or validation error with a source position."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


class UndeclaredIndexError(ParseError):
    pass


class NonIntegerExponentError(ParseError):
    pass


class SlopeCapExceededError(ParseError):
    pass


class UnknownNameError(ParseError):
    pass


# ---------------------------------------------------------------------------
# syntax tree


@dataclass(frozen=True)
class LinForm:
    """Integer-linear form in index variables plus an integer constant.

    coeffs holds (variable, nonzero coefficient) pairs sorted by variable
    name, so equal forms compare equal.
    """

    coeffs: tuple
    const: int

    @classmethod
    def make(cls, coeffs: Mapping[str, int], const: int) -> "LinForm":
        items = tuple(sorted((v, c) for v, c in coeffs.items() if c != 0))
        return cls(items, const)

    @property
    def is_constant(self) -> bool:
        return not self.coeffs

    def variables(self) -> tuple:
        return tuple(v for v, _ in self.coeffs)

    def coefficient(self, var: str) -> int:
        for v, c in self.coeffs:
            if v == var:
                return c
        return 0

    def substitute(self, var: str, value: int) -> "LinForm":
        coeffs = dict(self.coeffs)
        c = coeffs.pop(var, 0)
        return LinForm.make(coeffs, self.const + c * value)

    def plus(self, other: "LinForm") -> "LinForm":
        coeffs = dict(self.coeffs)
        for v, c in other.coeffs:
            coeffs[v] = coeffs.get(v, 0) + c
        return LinForm.make(coeffs, self.const + other.const)

    def drop_const(self) -> "LinForm":
        return LinForm(self.coeffs, 0)

    def value(self, index_values: Mapping[str, int]) -> int:
        return self.const + sum(c * index_values[v] for v, c in self.coeffs)

    def sort_key(self):
        return (self.coeffs, self.const)

    def render(self) -> str:
        parts = []
        for v, c in self.coeffs:
            if not parts:
                if c == 1:
                    parts.append(v)
                elif c == -1:
                    parts.append(f"-{v}")
                else:
                    parts.append(f"{c}*{v}")
            else:
                sign = " - " if c < 0 else " + "
                mag = abs(c)
                parts.append(sign + (v if mag == 1 else f"{mag}*{v}"))
        if self.const or not parts:
            if not parts:
                parts.append(str(self.const))
            else:
                parts.append((" - " if self.const < 0 else " + ") + str(abs(self.const)))
        return "".join(parts)


@dataclass(frozen=True)
class IntLit:
    value: int


@dataclass(frozen=True)
class ScalarRef:
    name: str


@dataclass(frozen=True)
class NameRef:
    name: str


@dataclass(frozen=True)
class SeqTerm:
    kind: SequenceKind
    index: LinForm


@dataclass(frozen=True)
class QPowTerm:
    exponent: LinForm


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class Add:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Sub:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Mul:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: int


Expr = Union[IntLit, ScalarRef, NameRef, SeqTerm, QPowTerm, Neg, Add, Sub, Mul, Pow]
Atom = Union[SeqTerm, QPowTerm]


@dataclass(frozen=True)
class LetDecl:
    name: str
    value: Expr
    line: int = field(compare=False, default=0)
    col: int = field(compare=False, default=0)


@dataclass(frozen=True)
class Identity:
    index_vars: tuple
    lhs: Expr
    rhs: Expr
    pins: tuple = ()  # ((symbol, Fraction), ...)
    lets: tuple = field(compare=False, default=())  # bindings in scope
    source: str = field(compare=False, default="")
    line: int = field(compare=False, default=0)
    col: int = field(compare=False, default=0)

    def bindings(self) -> dict:
        return dict(self.lets)

    def pin_map(self) -> dict:
        return dict(self.pins)


@dataclass(frozen=True)
class SourceFile:
    items: tuple  # LetDecl | Identity, in source order

    @property
    def identities(self) -> tuple:
        return tuple(i for i in self.items if isinstance(i, Identity))

    @property
    def lets(self) -> tuple:
        return tuple(i for i in self.items if isinstance(i, LetDecl))


# ---------------------------------------------------------------------------
# tokenizer


@dataclass(frozen=True)
class _Token:
    kind: str  # NAME INT OP EOF
    text: str
    line: int
    col: int
    offset: int


def _tokenize(text: str) -> list:
    tokens = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(_Token("INT", text[i:j], line, col, i))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(_Token("NAME", text[i:j], line, col, i))
            col += j - i
            i = j
            continue
        two = text[i : i + 2]
        if two in ("==", ":="):
            tokens.append(_Token("OP", two, line, col, i))
            i += 2
            col += 2
            continue
        if ch in "()^*+-,:=/":
            tokens.append(_Token("OP", ch, line, col, i))
            i += 1
            col += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    tokens.append(_Token("EOF", "", line, col, n))
    return tokens


# ---------------------------------------------------------------------------
# parser


class _Parser:
    def __init__(self, text: str, slope_cap: int):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0
        self.slope_cap = slope_cap
        self.lets: dict = {}
        self.items: list = []

    # token helpers

    def peek(self, ahead: int = 0) -> _Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def expect(self, text: str, what: str | None = None) -> _Token:
        tok = self.peek()
        if tok.text != text or tok.kind == "EOF":
            want = what or f"'{text}'"
            raise ParseError(f"expected {want}, found {_describe(tok)}", tok.line, tok.col)
        return self.next()

    def expect_name(self, what: str) -> _Token:
        tok = self.peek()
        if tok.kind != "NAME":
            raise ParseError(f"expected {what}, found {_describe(tok)}", tok.line, tok.col)
        return self.next()

    def expect_int(self) -> int:
        tok = self.peek()
        if tok.kind != "INT":
            raise ParseError(f"expected an integer, found {_describe(tok)}", tok.line, tok.col)
        self.next()
        return int(tok.text)

    # file structure

    def parse_file(self) -> SourceFile:
        while self.peek().kind != "EOF":
            tok = self.peek()
            if tok.kind == "NAME" and tok.text == "let":
                self.items.append(self.parse_let())
            elif tok.kind == "NAME" and tok.text == "forall":
                self.items.append(self.parse_identity())
            else:
                raise ParseError(
                    f"expected 'let' or 'forall', found {_describe(tok)}",
                    tok.line,
                    tok.col,
                )
        return SourceFile(tuple(self.items))

    def parse_let(self) -> LetDecl:
        kw = self.expect("let")
        name_tok = self.expect_name("a name to bind")
        name = name_tok.text
        if name in SCALARS or name in SEQ_NAMES or name in KEYWORDS:
            raise ParseError(
                f"cannot bind reserved name {name!r}", name_tok.line, name_tok.col
            )
        self.expect("=")
        value = self.parse_expr(index_vars=(), scalar_only=True)
        decl = LetDecl(name, value, kw.line, kw.col)
        self.lets[name] = value
        return decl

    def parse_identity(self) -> Identity:
        kw = self.expect("forall")
        start = self.pos - 1
        index_vars = [self.parse_index_var(())]
        while self.peek().text == ",":
            self.next()
            index_vars.append(self.parse_index_var(tuple(index_vars)))
        self.expect(":")
        ivars = tuple(index_vars)
        lhs = self.parse_expr(ivars)
        self.expect("==")
        rhs = self.parse_expr(ivars)
        pins = self.parse_pins() if self.peek().text == "with" else ()
        first = self.tokens[start]
        last = self.tokens[self.pos - 1]
        raw = self.text[first.offset : last.offset + len(last.text)]
        # comments cannot occur inside tokens, so a line-wise cut is exact
        source = " ".join(line.split("#", 1)[0] for line in raw.splitlines())
        source = " ".join(source.split())
        return Identity(
            index_vars=ivars,
            lhs=lhs,
            rhs=rhs,
            pins=pins,
            lets=tuple(self.lets.items()),
            source=source,
            line=kw.line,
            col=kw.col,
        )

    def parse_index_var(self, taken: tuple) -> str:
        tok = self.expect_name("an index variable")
        name = tok.text
        if name in SCALARS or name in SEQ_NAMES or name in KEYWORDS:
            raise ParseError(
                f"index variable cannot shadow reserved name {name!r}", tok.line, tok.col
            )
        if name in self.lets:
            raise ParseError(
                f"index variable {name!r} collides with a let-binding", tok.line, tok.col
            )
        if name in taken:
            raise ParseError(f"duplicate index variable {name!r}", tok.line, tok.col)
        return name

    def parse_pins(self) -> tuple:
        self.expect("with")
        pins = []
        seen = set()
        while True:
            tok = self.expect_name("a scalar symbol to pin")
            if tok.text not in SCALARS:
                raise ParseError(
                    f"only scalar symbols can be pinned, not {tok.text!r}",
                    tok.line,
                    tok.col,
                )
            if tok.text in seen:
                raise ParseError(f"duplicate pin for {tok.text!r}", tok.line, tok.col)
            seen.add(tok.text)
            self.expect(":=")
            value = self.parse_rational()
            if tok.text == "q" and value == 0:
                raise ParseError("q must be pinned to a nonzero value", tok.line, tok.col)
            pins.append((tok.text, value))
            if self.peek().text != ",":
                break
            self.next()
        return tuple(pins)

    def parse_rational(self) -> Fraction:
        sign = 1
        if self.peek().text == "-":
            self.next()
            sign = -1
        num = self.expect_int()
        if self.peek().text == "/":
            self.next()
            den_tok = self.peek()
            den = self.expect_int()
            if den == 0:
                raise ParseError("zero denominator", den_tok.line, den_tok.col)
            return Fraction(sign * num, den)
        return Fraction(sign * num)

    # expressions

    def parse_expr(self, index_vars: tuple, scalar_only: bool = False) -> Expr:
        node = self.parse_term(index_vars, scalar_only)
        while self.peek().text in ("+", "-"):
            op = self.next().text
            rhs = self.parse_term(index_vars, scalar_only)
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def parse_term(self, index_vars: tuple, scalar_only: bool) -> Expr:
        negated = False
        if self.peek().text == "-":
            self.next()
            negated = True
        node = self.parse_factor(index_vars, scalar_only)
        while self.peek().text == "*":
            self.next()
            node = Mul(node, self.parse_factor(index_vars, scalar_only))
        return Neg(node) if negated else node

    def parse_factor(self, index_vars: tuple, scalar_only: bool) -> Expr:
        node = self.parse_base(index_vars, scalar_only)
        if self.peek().text == "^":
            caret = self.next()
            tok = self.peek()
            if tok.kind != "INT":
                raise NonIntegerExponentError(
                    "power exponents must be non-negative integer literals"
                    + (" (negative q powers are written q^(-1))" if tok.text == "-" else ""),
                    tok.line,
                    tok.col,
                )
            self.next()
            node = Pow(node, int(tok.text))
        return node

    def parse_base(self, index_vars: tuple, scalar_only: bool) -> Expr:
        tok = self.peek()
        if tok.kind == "INT":
            self.next()
            return IntLit(int(tok.text))
        if tok.text == "(":
            self.next()
            node = self.parse_expr(index_vars, scalar_only)
            self.expect(")")
            return node
        if tok.kind == "NAME":
            name = tok.text
            if name in SEQ_NAMES:
                if self.peek(1).text != "(":
                    raise ParseError(
                        f"{name} is a sequence name; expected {name}(<index form>)",
                        tok.line,
                        tok.col,
                    )
                if scalar_only:
                    raise ParseError(
                        "sequence terms are not allowed in let-bindings",
                        tok.line,
                        tok.col,
                    )
                self.next()
                self.expect("(")
                lin = self.parse_linform(index_vars)
                self.expect(")")
                return SeqTerm(SEQ_NAMES[name], lin)
            if name == "q" and self.peek(1).text == "^" and self.peek(2).text == "(":
                if scalar_only:
                    raise ParseError(
                        "q^(<index form>) is not allowed in let-bindings",
                        tok.line,
                        tok.col,
                    )
                self.next()
                self.next()
                self.next()
                lin = self.parse_linform(index_vars)
                self.expect(")")
                return QPowTerm(lin)
            if name in SCALARS:
                self.next()
                return ScalarRef(name)
            if name in self.lets:
                self.next()
                return NameRef(name)
            if name in index_vars:
                raise ParseError(
                    f"index variable {name!r} cannot be used as a scalar",
                    tok.line,
                    tok.col,
                )
            raise UnknownNameError(f"unknown name {name!r}", tok.line, tok.col)
        raise ParseError(f"expected an expression, found {_describe(tok)}", tok.line, tok.col)

    def parse_linform(self, index_vars: tuple) -> LinForm:
        coeffs: dict = {}
        const = 0
        first = True
        while True:
            sign = 1
            tok = self.peek()
            if tok.text in ("+", "-"):
                if first and tok.text == "+":
                    raise ParseError("index form cannot start with '+'", tok.line, tok.col)
                self.next()
                sign = -1 if tok.text == "-" else 1
            elif not first:
                break
            tok = self.peek()
            if tok.kind == "INT":
                self.next()
                value = int(tok.text)
                if self.peek().text == "*":
                    self.next()
                    var_tok = self.expect_name("an index variable")
                    self._check_index_var(var_tok, index_vars)
                    coeffs[var_tok.text] = coeffs.get(var_tok.text, 0) + sign * value
                    self._check_slope(coeffs[var_tok.text], var_tok)
                else:
                    const += sign * value
            elif tok.kind == "NAME":
                self.next()
                self._check_index_var(tok, index_vars)
                coeffs[tok.text] = coeffs.get(tok.text, 0) + sign
                self._check_slope(coeffs[tok.text], tok)
            else:
                raise ParseError(
                    f"expected an index variable or integer, found {_describe(tok)}",
                    tok.line,
                    tok.col,
                )
            first = False
            if self.peek().text not in ("+", "-"):
                break
        return LinForm.make(coeffs, const)

    def _check_index_var(self, tok: _Token, index_vars: tuple):
        if tok.text not in index_vars:
            raise UndeclaredIndexError(
                f"undeclared index variable {tok.text!r}"
                + (f" (declared: {', '.join(index_vars)})" if index_vars else ""),
                tok.line,
                tok.col,
            )

    def _check_slope(self, coeff: int, tok: _Token):
        if abs(coeff) > self.slope_cap:
            raise SlopeCapExceededError(
                f"index coefficient {coeff} exceeds the slope cap {self.slope_cap}",
                tok.line,
                tok.col,
            )


def _describe(tok: _Token) -> str:
    return "end of input" if tok.kind == "EOF" else f"{tok.text!r}"


def parse_file(text: str, slope_cap: int = DEFAULT_SLOPE_CAP) -> SourceFile:
    return _Parser(text, slope_cap).parse_file()


def parse_identity(text: str, slope_cap: int = DEFAULT_SLOPE_CAP) -> Identity:
    """Parse text holding (lets and) exactly one identity; return it."""
    src = parse_file(text, slope_cap)
    ids = src.identities
    if len(ids) != 1:
        raise ValueError(f"expected exactly one identity, found {len(ids)}")
    return ids[0]


# ---------------------------------------------------------------------------
# normal forms


def _atom_order(atom: Atom):
    if isinstance(atom, SeqTerm):
        return (0, atom.kind.name, atom.index.sort_key())
    return (1, "", atom.exponent.sort_key())


class NormalForm:
    """Sum of monomials: multiset of atoms -> exact scalar coefficient.

    Canonical: atom tuples are sorted, at most one q-power atom per monomial
    (with zero constant part), and no zero scalars.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[tuple, LaurentPoly] | None = None):
        canon: dict = {}
        for atoms, scalar in (terms or {}).items():
            if scalar.is_zero:
                continue
            key = tuple(sorted(atoms, key=_atom_order))
            got = canon.get(key)
            s = scalar if got is None else got + scalar
            if s.is_zero:
                canon.pop(key, None)
            else:
                canon[key] = s
        self._terms = canon

    @classmethod
    def _raw(cls, terms: dict) -> "NormalForm":
        self = cls.__new__(cls)
        self._terms = terms
        return self

    @classmethod
    def zero(cls) -> "NormalForm":
        return cls._raw({})

    @classmethod
    def from_scalar(cls, scalar: LaurentPoly) -> "NormalForm":
        if scalar.is_zero:
            return cls.zero()
        return cls._raw({(): scalar})

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def monomials(self) -> Iterator[tuple]:
        """(atoms, scalar) pairs in the canonical deterministic order."""
        return iter(
            sorted(self._terms.items(), key=lambda kv: tuple(map(_atom_order, kv[0])))
        )

    def free_index_vars(self) -> tuple:
        seen = []
        for atoms in self._terms:
            for atom in atoms:
                lin = atom.index if isinstance(atom, SeqTerm) else atom.exponent
                for v in lin.variables():
                    if v not in seen:
                        seen.append(v)
        return tuple(sorted(seen))

    def __eq__(self, other) -> bool:
        if not isinstance(other, NormalForm):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset((k, v) for k, v in self._terms.items()))

    def __add__(self, other: "NormalForm") -> "NormalForm":
        out = dict(self._terms)
        for atoms, scalar in other._terms.items():
            got = out.get(atoms)
            s = scalar if got is None else got + scalar
            if s.is_zero:
                out.pop(atoms, None)
            else:
                out[atoms] = s
        return NormalForm._raw(out)

    def __neg__(self) -> "NormalForm":
        return NormalForm._raw({k: -v for k, v in self._terms.items()})

    def __sub__(self, other: "NormalForm") -> "NormalForm":
        return self + (-other)

    def scale(self, scalar: LaurentPoly) -> "NormalForm":
        if scalar.is_zero:
            return NormalForm.zero()
        return NormalForm._raw({k: v * scalar for k, v in self._terms.items()})

    def __mul__(self, other: "NormalForm") -> "NormalForm":
        out: dict = {}
        for atoms1, s1 in self._terms.items():
            for atoms2, s2 in other._terms.items():
                atoms, extra = _merge_atoms(atoms1 + atoms2)
                scalar = s1 * s2 * extra
                got = out.get(atoms)
                s = scalar if got is None else got + scalar
                if s.is_zero:
                    out.pop(atoms, None)
                else:
                    out[atoms] = s
        return NormalForm._raw(out)

    def substitute_index(self, var: str, value: int) -> "NormalForm":
        """Instantiate one index variable at an integer value.

        Sequence-term constants stay inside the atom; a q-power atom folds
        its new constant part into the scalar (as q^const) and disappears
        entirely if its exponent loses all variables.
        """
        out: dict = {}
        for atoms, scalar in self._terms.items():
            new_atoms = []
            extra = one()
            for atom in atoms:
                if isinstance(atom, SeqTerm):
                    new_atoms.append(SeqTerm(atom.kind, atom.index.substitute(var, value)))
                else:
                    lin = atom.exponent.substitute(var, value)
                    if lin.const:
                        extra = extra * q_power(lin.const)
                        lin = lin.drop_const()
                    if not lin.is_constant:
                        new_atoms.append(QPowTerm(lin))
            key = tuple(sorted(new_atoms, key=_atom_order))
            s = scalar * extra
            got = out.get(key)
            s = s if got is None else got + s
            if s.is_zero:
                out.pop(key, None)
            else:
                out[key] = s
        return NormalForm._raw(out)

    def render(self) -> str:
        """Deterministic DSL-parseable text (e.g. for certificates)."""
        if not self._terms:
            return "0"
        parts = []
        for atoms, scalar in self.monomials():
            sign, body = _render_monomial(atoms, scalar)
            if not parts:
                parts.append("-" + body if sign < 0 else body)
            else:
                parts.append((" - " if sign < 0 else " + ") + body)
        return "".join(parts)

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"NormalForm({self.render()})"


def _merge_atoms(atoms: tuple):
    """Sort atoms, combining q-power atoms; return (atoms, scalar factor)."""
    seq_atoms = []
    qlin = None
    for atom in atoms:
        if isinstance(atom, SeqTerm):
            seq_atoms.append(atom)
        else:
            qlin = atom.exponent if qlin is None else qlin.plus(atom.exponent)
    extra = one()
    if qlin is not None:
        if qlin.const:
            extra = q_power(qlin.const)
            qlin = qlin.drop_const()
        if not qlin.is_constant:
            seq_atoms.append(QPowTerm(qlin))
    return tuple(sorted(seq_atoms, key=_atom_order)), extra


def _render_atom(atom: Atom) -> str:
    if isinstance(atom, SeqTerm):
        return f"{atom.kind.value}({atom.index.render()})"
    return f"q^({atom.exponent.render()})"


def _render_scalar_factors(scalar: LaurentPoly):
    """Render a scalar as (sign, factor text) in DSL-safe syntax.

    Single-monomial scalars render inline (q^-2 becomes q^(-2) so the text
    reparses); anything else is parenthesized with sign +1.
    """
    terms = list(scalar.monomials())
    if len(terms) != 1:
        return 1, f"({_render_poly_dsl(scalar)})"
    exps, coeff = terms[0]
    sign = -1 if coeff < 0 else 1
    factors = []
    if abs(coeff) != 1 or all(e == 0 for e in exps):
        factors.append(str(abs(coeff)))
    for i, e in enumerate(exps):
        if e == 0:
            continue
        name = SYMBOLS[i]
        if e == 1:
            factors.append(name)
        elif e > 1:
            factors.append(f"{name}^{e}")
        else:
            factors.append(f"{name}^({e})")
    return sign, "*".join(factors)


def _render_poly_dsl(poly: LaurentPoly) -> str:
    parts = []
    for exps, coeff in poly.monomials():
        mono = LaurentPoly({exps: abs(coeff)})
        _sign, body = _render_scalar_factors(mono)
        if not parts:
            parts.append("-" + body if coeff < 0 else body)
        else:
            parts.append((" - " if coeff < 0 else " + ") + body)
    return "".join(parts) or "0"


def _render_monomial(atoms: tuple, scalar: LaurentPoly):
    sign, scalar_text = _render_scalar_factors(scalar)
    factors = []
    if scalar_text and scalar_text != "1":
        factors.append(scalar_text)
    i = 0
    while i < len(atoms):
        j = i
        while j < len(atoms) and atoms[j] == atoms[i]:
            j += 1
        text = _render_atom(atoms[i])
        factors.append(text if j - i == 1 else f"{text}^{j - i}")
        i = j
    if not factors:
        factors.append("1")
    return sign, "*".join(factors)


# ---------------------------------------------------------------------------
# normalization


def normalize(expr: Expr, bindings: Mapping[str, Expr] | None = None) -> NormalForm:
    """Expand an expression into its canonical sum-of-monomials form."""
    bindings = bindings or {}
    return _normalize(expr, bindings)


def _normalize(expr: Expr, bindings: Mapping[str, Expr]) -> NormalForm:
    if isinstance(expr, IntLit):
        return NormalForm.from_scalar(from_int(expr.value))
    if isinstance(expr, ScalarRef):
        return NormalForm.from_scalar(symbol(expr.name))
    if isinstance(expr, NameRef):
        return _normalize(bindings[expr.name], bindings)
    if isinstance(expr, SeqTerm):
        return NormalForm({(expr,): one()})
    if isinstance(expr, QPowTerm):
        lin = expr.exponent
        extra = one()
        if lin.const:
            extra = q_power(lin.const)
            lin = lin.drop_const()
        if lin.is_constant:
            return NormalForm.from_scalar(extra)
        return NormalForm({(QPowTerm(lin),): extra})
    if isinstance(expr, Neg):
        return -_normalize(expr.operand, bindings)
    if isinstance(expr, Add):
        return _normalize(expr.left, bindings) + _normalize(expr.right, bindings)
    if isinstance(expr, Sub):
        return _normalize(expr.left, bindings) - _normalize(expr.right, bindings)
    if isinstance(expr, Mul):
        return _normalize(expr.left, bindings) * _normalize(expr.right, bindings)
    if isinstance(expr, Pow):
        result = NormalForm.from_scalar(one())
        base = _normalize(expr.base, bindings)
        for _ in range(expr.exponent):
            result = result * base
        return result
    raise TypeError(f"unexpected node {expr!r}")


def identity_goal(identity: Identity) -> NormalForm:
    """Normal form of lhs - rhs: the thing that must vanish."""
    bindings = identity.bindings()
    return normalize(identity.lhs, bindings) - normalize(identity.rhs, bindings)


# ---------------------------------------------------------------------------
# rendering parsed items back to source text


_PREC_ADD, _PREC_NEG, _PREC_MUL, _PREC_POW, _PREC_ATOM = 1, 2, 3, 4, 5


def render_expr(expr: Expr) -> str:
    return _render_expr(expr, _PREC_ADD)


def _render_expr(expr: Expr, min_prec: int) -> str:
    if isinstance(expr, IntLit):
        return str(expr.value)
    if isinstance(expr, (ScalarRef, NameRef)):
        return expr.name
    if isinstance(expr, (SeqTerm, QPowTerm)):
        return _render_atom(expr)
    if isinstance(expr, Neg):
        text = "-" + _render_expr(expr.operand, _PREC_MUL)
        return text if min_prec <= _PREC_NEG else f"({text})"
    if isinstance(expr, (Add, Sub)):
        op = " + " if isinstance(expr, Add) else " - "
        # right side one level tighter so a - (b - c) keeps its parens
        text = _render_expr(expr.left, _PREC_ADD) + op + _render_expr(expr.right, _PREC_NEG)
        return text if min_prec <= _PREC_ADD else f"({text})"
    if isinstance(expr, Mul):
        text = _render_expr(expr.left, _PREC_MUL) + "*" + _render_expr(expr.right, _PREC_POW)
        return text if min_prec <= _PREC_MUL else f"({text})"
    if isinstance(expr, Pow):
        text = _render_expr(expr.base, _PREC_ATOM) + f"^{expr.exponent}"
        return text if min_prec <= _PREC_POW else f"({text})"
    raise TypeError(f"unexpected node {expr!r}")


def render_identity(identity: Identity) -> str:
    head = "forall " + ", ".join(identity.index_vars)
    body = f"{head}: {render_expr(identity.lhs)} == {render_expr(identity.rhs)}"
    if identity.pins:
        pins = ", ".join(f"{name} := {_render_fraction(v)}" for name, v in identity.pins)
        body += f" with {pins}"
    return body


def _render_fraction(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def render_file(src: SourceFile) -> str:
    lines = []
    for item in src.items:
        if isinstance(item, LetDecl):
            lines.append(f"let {item.name} = {render_expr(item.value)}")
        else:
            lines.append(render_identity(item))
    return "\n".join(lines) + "\n"
