"""Verify a user-supplied candidate relation.

``BIG_STEP`` checks that the relation is a bisimulation up to context:
both sides of every pair are evaluated and every obligation of the match
must fall into the closure of the relation (or into the relation itself
when up-to-context is off).

``SMALL_STEP`` checks the small-step variant in both directions: a
reduction step on one side must be answered by some number of steps on
the other side landing in the closure, and a normal form on one side must
be matched by the evaluated other side.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Optional

from ..reduction import FuelExhausted, evaluate, step
from ..syntax import FreshSupply, Term, alpha_equal
from ..syntax.terms import max_index
from .checker import CheckConfig, successors
from .closure import Closure, Relation
from .matching import Mismatch, TermPair, expand


class Style(enum.Enum):
    BIG_STEP = "bigstep"
    SMALL_STEP = "smallstep"


@dataclass
class PairResult:
    pair: TermPair
    ok: bool
    reason: str = ""

    def to_json(self) -> dict:
        return {**self.pair.to_json(), "ok": self.ok, "reason": self.reason}


@dataclass
class CandidateReport:
    style: Style
    results: list[PairResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    @property
    def failures(self) -> list[PairResult]:
        return [r for r in self.results if not r.ok]

    def to_json(self) -> dict:
        return {"style": self.style.value, "ok": self.ok, "pairs": [r.to_json() for r in self.results]}


class _Oriented:
    """Closure membership for R or its inverse."""

    def __init__(self, rel: Relation, cfg: CheckConfig):
        self.cfg = cfg
        self.rel = rel
        self.closure = Closure(rel, cfg.up_to_depth)

    def holds(self, a: Term, b: Term, flipped: bool) -> bool:
        if flipped:
            a, b = b, a
        if alpha_equal(a, b) or TermPair(a, b) in self.rel:
            return True
        return self.cfg.up_to_context and self.closure.contains(a, b)


def verify_candidate(
    r: Iterable[TermPair], cfg: Optional[CheckConfig] = None, style: Style = Style.BIG_STEP
) -> CandidateReport:
    cfg = cfg or CheckConfig()
    pairs = list(r)
    oracle = _Oriented(Relation(pairs), cfg)
    report = CandidateReport(style)
    for p in pairs:
        if style is Style.BIG_STEP:
            reason = _big_step(p, cfg, oracle)
        else:
            reason = _small_step(p, False, cfg, oracle) or _small_step(p.swap(), True, cfg, oracle)
        report.results.append(PairResult(p, reason is None, reason or ""))
    return report


def _big_step(p: TermPair, cfg: CheckConfig, oracle: _Oriented) -> Optional[str]:
    got = successors(p, cfg)
    if got == "discharged":
        return None
    if got == "frontier":
        return f"no normal form within {cfg.fuel} steps"
    if isinstance(got, Mismatch):
        return str(got)
    for q in got:
        if not oracle.holds(q.left, q.right, False):
            return f"obligation {q} is outside the closure at depth {cfg.up_to_depth}"
    return None


def _small_step(p: TermPair, flipped: bool, cfg: CheckConfig, oracle: _Oriented) -> Optional[str]:
    """One direction of the small-step clause; ``p.left`` is the side that moves."""
    side = "right" if flipped else "left"
    t0, t1 = p.left, p.right
    nxt = step(t0)
    if nxt is not None:
        cur = t1
        for _ in range(cfg.fuel + 1):
            if oracle.holds(nxt, cur, flipped):
                return None
            cur_next = step(cur)
            if cur_next is None:
                break
            cur = cur_next
        return f"{side} step to {nxt} is not answered within {cfg.fuel} steps"
    o0 = evaluate(t0, 0)
    o1 = evaluate(t1, cfg.fuel, detect_cycles=True)
    if isinstance(o1, FuelExhausted):
        return f"{side} side is a normal form but the other side has none within {cfg.fuel} steps"
    got = expand(o0, o1, cfg.mode, FreshSupply(max_index([t0, t1]) + 1))
    if isinstance(got, Mismatch):
        return str(got)
    for q in got:
        if not oracle.holds(q.left, q.right, flipped):
            return f"obligation {q} is outside the closure at depth {cfg.up_to_depth}"
    return None

