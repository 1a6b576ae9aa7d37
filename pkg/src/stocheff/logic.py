"""Threshold modal formulas over effectivity functions, and classical game
terms over neighborhood models.

Concrete syntax (see ``docs/grammar.md``)::

    formula := conj
    conj    := unary ('&' unary)*
    unary   := 'dia' '[' rational ']' unary | atom
    atom    := 'top' | IDENT | '(' formula ')'

    game    := seq ('|' seq)*
    seq     := prefix (';' prefix)*
    prefix  := 'dual' prefix | postfix
    postfix := primary '*'*
    primary := IDENT | '(' game ')'
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Union

from .effectivity import EffFn, member
from .errors import InvariantError, SpaceMismatchError, StochEffError
from .finspace import FinSpace, Subset, ThresholdQuery, same_space


class ParseError(StochEffError, ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} at line {line}, column {column}")
        self.line = line
        self.column = column


class UnboundNameError(StochEffError, KeyError):
    pass


# formulas

@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Dia:
    q: Fraction
    body: "Formula"


Formula = Union[Top, Atom, And, Dia]


# game terms

@dataclass(frozen=True)
class Prim:
    name: str


@dataclass(frozen=True)
class Union_:
    left: "GameTerm"
    right: "GameTerm"


@dataclass(frozen=True)
class Seq:
    first: "GameTerm"
    second: "GameTerm"


@dataclass(frozen=True)
class Star:
    body: "GameTerm"


@dataclass(frozen=True)
class Dual:
    body: "GameTerm"


GameTerm = Union[Prim, Union_, Seq, Star, Dual]

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>\d+(?:\.\d*)?(?:/\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[&|;*()\[\]])
""", re.VERBOSE)
_KEYWORDS = {"top", "dia", "dual"}


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        chunk = m.group()
        if kind == "ws":
            for i, ch in enumerate(chunk):
                if ch == "\n":
                    line += 1
                    line_start = pos + i + 1
        elif kind == "ident" and chunk in _KEYWORDS:
            toks.append(_Tok(chunk, chunk, line, col))
        else:
            toks.append(_Tok(kind if kind != "op" else chunk, chunk, line, col))
        pos = m.end()
    toks.append(_Tok("eof", "", line, len(text) - line_start + 1))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def cur(self) -> _Tok:
        return self.toks[self.i]

    def fail(self, message: str, tok: _Tok | None = None):
        tok = tok or self.cur
        raise ParseError(message, tok.line, tok.col)

    def eat(self, kind: str) -> _Tok:
        tok = self.cur
        if tok.kind != kind:
            found = tok.text or "end of input"
            self.fail(f"expected {kind!r}, found {found!r}")
        self.i += 1
        return tok

    def done(self):
        if self.cur.kind != "eof":
            self.fail(f"unexpected {self.cur.text!r}")

    # formulas
    def formula(self) -> Formula:
        node = self.unary()
        while self.cur.kind == "&":
            self.i += 1
            node = And(node, self.unary())
        return node

    def unary(self) -> Formula:
        tok = self.cur
        if tok.kind == "dia":
            self.i += 1
            self.eat("[")
            q = self.rational()
            self.eat("]")
            return Dia(q, self.unary())
        if tok.kind == "top":
            self.i += 1
            return Top()
        if tok.kind == "ident":
            self.i += 1
            return Atom(tok.text)
        if tok.kind == "(":
            self.i += 1
            node = self.formula()
            self.eat(")")
            return node
        self.fail(f"expected a formula, found {tok.text or 'end of input'!r}")

    def rational(self) -> Fraction:
        tok = self.eat("num")
        if "." in tok.text:
            self.fail(f"decimal threshold {tok.text!r}; write it as p/q", tok)
        try:
            q = Fraction(tok.text)
        except ZeroDivisionError:
            self.fail(f"zero denominator in {tok.text!r}", tok)
        if not 0 <= q <= 1:
            self.fail(f"threshold {q} outside [0, 1]", tok)
        return q

    # games
    def game(self) -> GameTerm:
        node = self.seq()
        while self.cur.kind == "|":
            self.i += 1
            node = Union_(node, self.seq())
        return node

    def seq(self) -> GameTerm:
        node = self.prefix()
        while self.cur.kind == ";":
            self.i += 1
            node = Seq(node, self.prefix())
        return node

    def prefix(self) -> GameTerm:
        if self.cur.kind == "dual":
            self.i += 1
            return Dual(self.prefix())
        node = self.primary()
        while self.cur.kind == "*":
            self.i += 1
            node = Star(node)
        return node

    def primary(self) -> GameTerm:
        tok = self.cur
        if tok.kind == "ident":
            self.i += 1
            return Prim(tok.text)
        if tok.kind == "(":
            self.i += 1
            node = self.game()
            self.eat(")")
            return node
        self.fail(f"expected a game, found {tok.text or 'end of input'!r}")


def parse_formula(text: str) -> Formula:
    p = _Parser(text)
    node = p.formula()
    p.done()
    return node


def parse_game(text: str) -> GameTerm:
    p = _Parser(text)
    node = p.game()
    p.done()
    return node


def format_formula(phi: Formula) -> str:
    if isinstance(phi, Top):
        return "top"
    if isinstance(phi, Atom):
        return phi.name
    if isinstance(phi, Dia):
        body = format_formula(phi.body)
        if isinstance(phi.body, And):
            body = f"({body})"
        return f"dia[{phi.q}] {body}"
    left = format_formula(phi.left)
    right = format_formula(phi.right)
    if isinstance(phi.right, And):
        right = f"({right})"
    return f"{left} & {right}"


_GAME_PREC = {Union_: 0, Seq: 1, Dual: 2, Star: 3, Prim: 4}


def format_game(g: GameTerm) -> str:
    def wrap(sub, min_prec):
        text = format_game(sub)
        return f"({text})" if _GAME_PREC[type(sub)] < min_prec else text

    if isinstance(g, Prim):
        return g.name
    if isinstance(g, Star):
        return wrap(g.body, 4) + "*"
    if isinstance(g, Dual):
        return "dual " + wrap(g.body, 2)
    if isinstance(g, Seq):
        return f"{wrap(g.first, 1)} ; {wrap(g.second, 2)}"
    return f"{wrap(g.left, 0)} | {wrap(g.right, 1)}"


# models and evaluation

@dataclass(frozen=True)
class StochModel:
    p: EffFn
    valuation: Mapping[str, Subset]

    def __post_init__(self):
        if self.p.dom != self.p.cod:
            raise SpaceMismatchError("a model needs an effectivity function from a space to itself")
        for name, ev in self.valuation.items():
            same_space(self.p.dom, ev.space, f"valuation of {name!r}")

    @property
    def space(self) -> FinSpace:
        return self.p.dom


def eval_formula(model: StochModel, phi: Formula) -> Subset:
    space = model.space
    if isinstance(phi, Top):
        return space.full()
    if isinstance(phi, Atom):
        try:
            return model.valuation[phi.name]
        except KeyError:
            raise UnboundNameError(f"atom {phi.name!r} has no valuation") from None
    if isinstance(phi, And):
        return eval_formula(model, phi.left) & eval_formula(model, phi.right)
    if isinstance(phi, Dia):
        inner = eval_formula(model, phi.body)
        q = ThresholdQuery(inner, ">", phi.q)
        return space.subset(s for s in space if member(model.p, s, q))
    raise TypeError(f"not a formula: {phi!r}")


@dataclass(frozen=True)
class NeighborhoodModel:
    """Per primitive game and state, the minimal sets the first player can force."""

    space: FinSpace
    primitives: Mapping[str, Mapping[str, tuple[Subset, ...]]]

    def __post_init__(self):
        for game, table in self.primitives.items():
            for s in self.space:
                if s not in table:
                    raise InvariantError(f"game {game!r} has no neighborhoods for state {s!r}")
            for s, gens in table.items():
                self.space.index(s)
                for g in gens:
                    same_space(self.space, g.space, f"neighborhood of {game!r} at {s!r}")

    def effective(self, game: str, a: Subset) -> Subset:
        """States from which the first player can force ``a`` in a primitive game."""
        try:
            table = self.primitives[game]
        except KeyError:
            raise UnboundNameError(f"primitive game {game!r} is not in the model") from None
        return self.space.subset(
            s for s in self.space if any(g.members <= a.members for g in table[s]))


def eval_game(model: NeighborhoodModel, g: GameTerm, a: Subset) -> Subset:
    same_space(model.space, a.space, "model and target")
    if isinstance(g, Prim):
        return model.effective(g.name, a)
    if isinstance(g, Union_):
        return eval_game(model, g.left, a) | eval_game(model, g.right, a)
    if isinstance(g, Seq):
        return eval_game(model, g.first, eval_game(model, g.second, a))
    if isinstance(g, Dual):
        return eval_game(model, g.body, a.complement()).complement()
    if isinstance(g, Star):
        # the n = 0 iterate is the target itself; stop once the orbit repeats
        seen = []
        x = a
        while x not in seen:
            seen.append(x)
            x = eval_game(model, g.body, x)
        out = a.space.empty()
        for y in seen:
            out = out | y
        return out
    raise TypeError(f"not a game term: {g!r}")
