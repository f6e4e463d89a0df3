"""Concrete syntax.

    term ::= '\\' var '.' term | 'shift' var '.' term | app
    app  ::= atom { atom }
    atom ::= var | '(' term ')' | '<' term '>'

``<t>`` is reset, ``--`` starts a comment.  Variables may carry a
``%n`` suffix so that names produced by the fresh supply round-trip.  ``@``
denotes the hole when parsing contexts.
"""

from __future__ import annotations

import re
from typing import Mapping

from .terms import SHIFT_KEYWORD, App, Hole, Lam, Reset, Shift, Term, Var, VarName


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column


_TOKEN = re.compile(
    r"""
    (?P<space>[ \t\r\n]+|--[^\n]*)
  | (?P<ident>[a-zA-Z_][a-zA-Z0-9_']*(?:%[0-9]+)?)
  | (?P<sym>[\\λ.()<>@])
    """,
    re.VERBOSE,
)


def _tokenize(src: str) -> list[tuple[str, str, int, int]]:
    tokens = []
    pos, line, col = 0, 1, 1
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if m is None:
            raise ParseError(f"unexpected character {src[pos]!r}", line, col)
        text = m.group()
        kind = m.lastgroup
        if kind != "space":
            if kind == "sym" and text == "λ":
                text = "\\"
            tokens.append((kind, text, line, col))
        newlines = text.count("\n")
        if newlines:
            line += newlines
            col = len(text) - text.rfind("\n")
        else:
            col += len(text)
        pos = m.end()
    tokens.append(("eof", "", line, col))
    return tokens


def _name(text: str, line: int, col: int) -> VarName:
    try:
        return VarName.parse(text)
    except ValueError as e:
        raise ParseError(str(e), line, col) from None


class _Parser:
    def __init__(self, src: str, defs: Mapping[str, Term] | None, allow_hole: bool):
        self.tokens = _tokenize(src)
        self.pos = 0
        self.defs = defs or {}
        self.allow_hole = allow_hole
        self.holes = 0

    def peek(self) -> tuple[str, str, int, int]:
        return self.tokens[self.pos]

    def advance(self) -> tuple[str, str, int, int]:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, text: str) -> None:
        kind, got, line, col = self.advance()
        if got != text or kind == "eof":
            raise ParseError(f"expected {text!r}, found {got or 'end of input'!r}", line, col)

    def error(self, message: str) -> ParseError:
        _, _, line, col = self.peek()
        return ParseError(message, line, col)

    def var(self) -> VarName:
        kind, text, line, col = self.advance()
        if kind != "ident":
            raise ParseError(f"expected a variable, found {text or 'end of input'!r}", line, col)
        if text == SHIFT_KEYWORD:
            raise ParseError("'shift' is reserved and cannot be used as a variable", line, col)
        return _name(text, line, col)

    def term(self, bound: frozenset[str]) -> Term:
        kind, text, _, _ = self.peek()
        if kind == "sym" and text == "\\":
            self.advance()
            x = self.var()
            self.expect(".")
            return Lam(x, self.term(bound | {str(x)}))
        if kind == "ident" and text == SHIFT_KEYWORD:
            self.advance()
            k = self.var()
            self.expect(".")
            return Shift(k, self.term(bound | {str(k)}))
        return self.app(bound)

    def app(self, bound: frozenset[str]) -> Term:
        t = self.atom(bound)
        while self.starts_atom():
            t = App(t, self.atom(bound))
        return t

    def starts_atom(self) -> bool:
        kind, text, _, _ = self.peek()
        if kind == "ident":
            return text != SHIFT_KEYWORD
        return kind == "sym" and text in "(<@"

    def atom(self, bound: frozenset[str]) -> Term:
        kind, text, line, col = self.peek()
        if kind == "ident" and text != SHIFT_KEYWORD:
            self.advance()
            if text in self.defs and text not in bound:
                return self.defs[text]
            return Var(_name(text, line, col))
        if kind == "sym" and text == "(":
            self.advance()
            t = self.term(bound)
            self.expect(")")
            return t
        if kind == "sym" and text == "<":
            self.advance()
            t = self.term(bound)
            self.expect(">")
            return Reset(t)
        if kind == "sym" and text == "@":
            if not self.allow_hole:
                raise ParseError("unexpected hole '@' outside a context", line, col)
            self.advance()
            self.holes += 1
            return Hole()
        if kind == "ident":
            raise ParseError("'shift' is reserved and cannot be used as a variable", line, col)
        raise ParseError(f"unexpected {text or 'end of input'!r}", line, col)


def parse(src: str, defs: Mapping[str, Term] | None = None) -> Term:
    """Parse a term.  Names in ``defs`` that are not locally bound are
    replaced by their definitions (a textual macro: free variables of a
    definition may be captured by enclosing binders)."""
    p = _Parser(src, defs, allow_hole=False)
    t = p.term(frozenset())
    if p.peek()[0] != "eof":
        raise p.error(f"unexpected {p.peek()[1]!r} after term")
    return t


def parse_with_hole(src: str, defs: Mapping[str, Term] | None = None) -> Term:
    p = _Parser(src, defs, allow_hole=True)
    t = p.term(frozenset())
    if p.peek()[0] != "eof":
        raise p.error(f"unexpected {p.peek()[1]!r} after term")
    if p.holes != 1:
        raise ParseError(f"a context needs exactly one hole, found {p.holes}", 1, 1)
    return t


# -- printing ------------------------------------------------------------------

_TOP, _FUN, _ARG = 0, 1, 2


def show(t: Term) -> str:
    out: list[str] = []
    _show(t, _TOP, out)
    return "".join(out)


def _show(t: Term, pos: int, out: list[str]) -> None:
    if isinstance(t, Var):
        out.append(str(t.name))
    elif isinstance(t, Hole):
        out.append("@")
    elif isinstance(t, Reset):
        out.append("<")
        _show(t.body, _TOP, out)
        out.append(">")
    elif isinstance(t, App):
        paren = pos == _ARG
        if paren:
            out.append("(")
        _show(t.fun, _FUN, out)
        out.append(" ")
        _show(t.arg, _ARG, out)
        if paren:
            out.append(")")
    else:
        paren = pos != _TOP
        if paren:
            out.append("(")
        out.append("\\" if isinstance(t, Lam) else "shift ")
        out.append(str(t.binder))
        out.append(". ")
        _show(t.body, _TOP, out)
        if paren:
            out.append(")")

