"""The shipped fixture file: named term pairs with their expected verdicts.

A stanza is a block of ``key: value`` lines; blank lines separate stanzas
and ``--`` starts a comment.  The stanza named ``defs`` holds ``let NAME =
term`` lines, expanded as macros in every later term.  Repeatable keys are
``let``, ``trace``, ``hint`` and ``candidate``; pairs are written ``L ~ R``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional

from .bisim import Bisimilar, Inconclusive, Mode, NotBisimilar, Style, TermPair, Verdict
from .syntax import ParseError, Term, parse

CORPUS_RESOURCE = "corpus.txt"


class CorpusError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"corpus line {line}: {message}")
        self.line = line


class Expected(enum.Enum):
    BISIMILAR = "bisimilar"
    NOT_BISIMILAR = "not-bisimilar"
    INCONCLUSIVE = "inconclusive"

    def matches(self, v: Verdict) -> bool:
        kind = {Bisimilar: Expected.BISIMILAR, NotBisimilar: Expected.NOT_BISIMILAR, Inconclusive: Expected.INCONCLUSIVE}
        return kind[type(v)] is self


class ExpectedDistinguisher(enum.Enum):
    FOUND = "found"
    NOT_FOUND = "not-found"


@dataclass
class Fixture:
    name: str
    left: Term
    right: Term
    expected_plain: Expected
    expected_refined: Expected
    expected_distinguisher: ExpectedDistinguisher
    source: str = ""
    trace: list[Term] = field(default_factory=list)
    hints: list[TermPair] = field(default_factory=list)
    candidate: list[TermPair] = field(default_factory=list)
    style: Optional[Style] = None
    candidate_mode: Mode = Mode.PLAIN
    candidate_up_to: bool = True
    line: int = 0

    @property
    def pair(self) -> TermPair:
        return TermPair(self.left, self.right)


_SINGLE = {"name", "left", "right", "plain", "refined", "distinguisher", "source", "style", "candidate-mode", "candidate-up-to"}
_MULTI = {"let", "trace", "hint", "candidate"}
_REQUIRED = ("left", "right", "plain", "refined", "distinguisher")


def _stanzas(text: str) -> list[list[tuple[int, str, str]]]:
    out: list[list[tuple[int, str, str]]] = []
    cur: list[tuple[int, str, str]] = []
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("--", 1)[0].rstrip() if not raw.lstrip().startswith("--") else ""
        if not line.strip():
            if cur:
                out.append(cur)
                cur = []
            continue
        if line.startswith("let "):
            cur.append((n, "let", line[4:].strip()))
            continue
        key, sep, value = line.partition(":")
        key = key.strip()
        if not sep or (key not in _SINGLE and key not in _MULTI):
            raise CorpusError(f"expected 'key: value', got {raw.strip()!r}", n)
        cur.append((n, key, value.strip()))
    if cur:
        out.append(cur)
    return out


class _Reader:
    def __init__(self) -> None:
        self.defs: dict[str, Term] = {}

    def term(self, src: str, line: int) -> Term:
        try:
            return parse(src, self.defs)
        except ParseError as e:
            raise CorpusError(f"{e.message} in {src!r}", line) from None

    def pair(self, src: str, line: int) -> TermPair:
        left, sep, right = src.partition("~")
        if not sep:
            raise CorpusError(f"expected 'left ~ right', got {src!r}", line)
        return TermPair(self.term(left, line), self.term(right, line))

    def enum(self, cls, value: str, line: int):
        try:
            return cls(value)
        except ValueError:
            allowed = ", ".join(m.value for m in cls)
            raise CorpusError(f"{value!r} is not one of {allowed}", line) from None

    def let(self, src: str, line: int) -> None:
        name, sep, body = src.partition("=")
        name = name.strip()
        if not sep or not name.isidentifier():
            raise CorpusError(f"expected 'let NAME = term', got {src!r}", line)
        self.defs[name] = self.term(body, line)

    def fixture(self, stanza: list[tuple[int, str, str]]) -> Optional[Fixture]:
        first = stanza[0][0]
        single: dict[str, tuple[int, str]] = {}
        for n, key, value in stanza:
            if key in _SINGLE:
                if key in single:
                    raise CorpusError(f"duplicate key {key!r}", n)
                single[key] = (n, value)
        if "name" not in single:
            raise CorpusError("stanza has no name", first)
        name = single["name"][1]
        if name == "defs":
            for n, key, value in stanza:
                if key == "let":
                    self.let(value, n)
                elif key != "name":
                    raise CorpusError(f"only 'let' lines belong in defs, got {key!r}", n)
            return None
        for key in _REQUIRED:
            if key not in single:
                raise CorpusError(f"fixture {name!r} lacks {key!r}", first)

        def get(key: str) -> str:
            return single[key][1]

        def at(key: str) -> int:
            return single[key][0]

        fx = Fixture(
            name=name,
            left=self.term(get("left"), at("left")),
            right=self.term(get("right"), at("right")),
            expected_plain=self.enum(Expected, get("plain"), at("plain")),
            expected_refined=self.enum(Expected, get("refined"), at("refined")),
            expected_distinguisher=self.enum(ExpectedDistinguisher, get("distinguisher"), at("distinguisher")),
            source=single.get("source", (0, ""))[1],
            line=first,
        )
        if "style" in single:
            fx.style = self.enum(Style, get("style"), at("style"))
        if "candidate-mode" in single:
            fx.candidate_mode = self.enum(Mode, get("candidate-mode"), at("candidate-mode"))
        if "candidate-up-to" in single:
            v = get("candidate-up-to")
            if v not in ("context", "none"):
                raise CorpusError("candidate-up-to is 'context' or 'none'", at("candidate-up-to"))
            fx.candidate_up_to = v == "context"
        for n, key, value in stanza:
            if key == "let":
                raise CorpusError("'let' lines belong in the defs stanza", n)
            if key == "trace":
                fx.trace.append(self.term(value, n))
            elif key == "hint":
                fx.hints.append(self.pair(value, n))
            elif key == "candidate":
                fx.candidate.append(self.pair(value, n))
        if fx.candidate and fx.style is None:
            raise CorpusError(f"fixture {name!r} has candidate pairs but no style", first)
        if fx.expected_plain is Expected.BISIMILAR and fx.expected_refined is Expected.NOT_BISIMILAR:
            raise CorpusError(f"fixture {name!r}: plain bisimilarity implies refined bisimilarity", first)
        return fx


def parse_corpus(text: str) -> tuple[list[Fixture], dict[str, Term]]:
    reader = _Reader()
    fixtures: list[Fixture] = []
    names: set[str] = set()
    for stanza in _stanzas(text):
        fx = reader.fixture(stanza)
        if fx is None:
            continue
        if fx.name in names:
            raise CorpusError(f"duplicate fixture {fx.name!r}", fx.line)
        names.add(fx.name)
        fixtures.append(fx)
    return fixtures, reader.defs


def corpus_text(path: Optional[Path] = None) -> str:
    if path is not None:
        return Path(path).read_text(encoding="utf-8")
    return resources.files("shiftbisim").joinpath("data", CORPUS_RESOURCE).read_text(encoding="utf-8")


def load_corpus(path: Optional[Path] = None) -> list[Fixture]:
    return parse_corpus(corpus_text(path))[0]


def load_defs(path: Optional[Path] = None) -> dict[str, Term]:
    return parse_corpus(corpus_text(path))[1]


def find(name: str, fixtures: Optional[list[Fixture]] = None) -> Fixture:
    for fx in fixtures if fixtures is not None else load_corpus():
        if fx.name == name:
            return fx
    raise KeyError(name)
