"""Surface syntax for the equality language.

ASCII only. Connectives: ~, &, |, -> (right associative, loosest); exists
and forall bind one variable and extend to the next unary formula; atoms
are var=var, parenthesized formulas, and the family macros D(x), D_m(x),
AP(x,y), psi[m], rho[m], psi[p,q], rho[p,q], psi_card[n], dec_eq,
stable_eq. The full grammar lives in docs/grammar.md.
"""

from __future__ import annotations

import re

from ..errors import ParseError, ScopeError
from .formulas import (
    And,
    Eq,
    Exists,
    Forall,
    Formula,
    Implies,
    Not,
    Or,
    free_vars,
    make_tag,
    recognize,
)

__all__ = ["parse_formula", "RESERVED"]

RESERVED = {"exists", "forall", "D", "AP", "psi", "rho", "psi_card", "dec_eq", "stable_eq"}

_TOKEN = re.compile(
    r"\s*(?:(?P<arrow>->)|(?P<sym>[=&|~(),\[\]])|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<num>\d+))"
)
_D_SUB = re.compile(r"D_(\d+)$")


class _Tokens:
    def __init__(self, text: str):
        self.text = text
        self.items: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None or m.end() == pos:
                stripped = text[pos:].lstrip()
                if not stripped:
                    break
                at = len(text) - len(stripped)
                raise ParseError(f"unexpected character {stripped[0]!r}", at)
            start = m.start(m.lastgroup)
            self.items.append((m.lastgroup, m.group(m.lastgroup), start))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.items[self.i] if self.i < len(self.items) else None

    def next(self):
        t = self.peek()
        if t is not None:
            self.i += 1
        return t

    @property
    def pos(self) -> int:
        t = self.peek()
        return t[2] if t is not None else len(self.text)

    def expect(self, value: str):
        t = self.next()
        if t is None:
            raise ParseError(f"expected {value!r}, found end of input", len(self.text))
        if t[1] != value:
            raise ParseError(f"expected {value!r}, found {t[1]!r}", t[2])
        return t


def parse_formula(text: str, require_sentence: bool = False) -> Formula:
    """Parse; hand-written family instances come back tagged.

    With require_sentence, free variables raise ScopeError.
    """
    toks = _Tokens(text)
    f = _implies(toks)
    t = toks.peek()
    if t is not None:
        raise ParseError(f"unexpected {t[1]!r} after formula", t[2])
    rec = recognize(f)
    if rec is not None:
        f = make_tag(*rec)
    if require_sentence:
        fv = free_vars(f)
        if fv:
            raise ScopeError(f"free variables {sorted(fv)} in a sentence position")
    return f


def _implies(toks: _Tokens) -> Formula:
    left = _or(toks)
    t = toks.peek()
    if t is not None and t[1] == "->":
        toks.next()
        return Implies(left, _implies(toks))
    return left


def _or(toks: _Tokens) -> Formula:
    out = _and(toks)
    while (t := toks.peek()) is not None and t[1] == "|":
        toks.next()
        out = Or(out, _and(toks))
    return out


def _and(toks: _Tokens) -> Formula:
    out = _unary(toks)
    while (t := toks.peek()) is not None and t[1] == "&":
        toks.next()
        out = And(out, _unary(toks))
    return out


def _unary(toks: _Tokens) -> Formula:
    t = toks.peek()
    if t is None:
        raise ParseError("expected a formula, found end of input", toks.pos)
    if t[1] == "~":
        toks.next()
        return Not(_unary(toks))
    if t[0] == "name" and t[1] in ("exists", "forall"):
        toks.next()
        var = _variable(toks)
        body = _unary(toks)
        return (Exists if t[1] == "exists" else Forall)(var, body)
    return _primary(toks)


def _variable(toks: _Tokens) -> str:
    t = toks.next()
    if t is None:
        raise ParseError("expected a variable, found end of input", toks.pos)
    kind, value, pos = t
    if kind != "name" or value in RESERVED or _D_SUB.match(value):
        raise ParseError(f"expected a variable, found {value!r}", pos)
    return value


def _nat(toks: _Tokens) -> int:
    t = toks.next()
    if t is None or t[0] != "num":
        raise ParseError("expected a number", t[2] if t else toks.pos)
    return int(t[1])


def _params(toks: _Tokens) -> tuple[int, ...]:
    toks.expect("[")
    params = [_nat(toks)]
    while (t := toks.peek()) is not None and t[1] == ",":
        toks.next()
        params.append(_nat(toks))
    toks.expect("]")
    return tuple(params)


def _macro(toks: _Tokens, name: str, pos: int) -> Formula:
    try:
        if name in ("dec_eq", "stable_eq"):
            return make_tag(name)
        if name == "D":
            toks.expect("(")
            x = _variable(toks)
            toks.expect(")")
            return make_tag("D", (), (x,))
        if (m := _D_SUB.match(name)) is not None:
            toks.expect("(")
            x = _variable(toks)
            toks.expect(")")
            return make_tag("D_m", (int(m.group(1)),), (x,))
        if name == "AP":
            toks.expect("(")
            x = _variable(toks)
            toks.expect(",")
            y = _variable(toks)
            toks.expect(")")
            return make_tag("AP", (), (x, y))
        if name in ("psi", "rho"):
            params = _params(toks)
            if len(params) not in (1, 2):
                raise ParseError(f"{name} takes one or two parameters", pos)
            return make_tag(name, params)
        if name == "psi_card":
            params = _params(toks)
            if len(params) != 1:
                raise ParseError("psi_card takes one parameter", pos)
            return make_tag("psi_card", params)
    except ValueError as e:
        raise ParseError(str(e), pos) from None
    raise ParseError(f"unknown macro {name!r}", pos)


def _primary(toks: _Tokens) -> Formula:
    t = toks.peek()
    if t is None:
        raise ParseError("expected a formula, found end of input", toks.pos)
    kind, value, pos = t
    if value == "(":
        toks.next()
        f = _implies(toks)
        toks.expect(")")
        return f
    if kind == "name":
        if value in RESERVED - {"exists", "forall"} or _D_SUB.match(value):
            toks.next()
            return _macro(toks, value, pos)
        left = _variable(toks)
        toks.expect("=")
        right = _variable(toks)
        return Eq(left, right)
    raise ParseError(f"expected a formula, found {value!r}", pos)
