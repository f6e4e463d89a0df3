"""On-the-fly normal-form bisimulation checking.

The checker grows a candidate relation from the root pair: each pair is
evaluated on both sides, the normal forms are matched, and the resulting
obligations are added unless they are already covered.  An empty worklist
means the visited set is a bisimulation (up to context when enabled); a
mismatch is a definitive failure.  Fuel and pair budgets turn everything
else into ``Inconclusive``.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

from ..reduction import DEFAULT_FUEL, FuelExhausted, Outcome, evaluate
from ..syntax import FreshSupply, Term, VarName, alpha_equal
from ..syntax.terms import max_index
from .closure import Closure, Relation
from .matching import Mismatch, MismatchKind, Mode, TermPair, canonical_pair, expand


@dataclass(frozen=True)
class CheckConfig:
    fuel: int = DEFAULT_FUEL
    max_pairs: int = 5000
    mode: Mode = Mode.PLAIN
    up_to_context: bool = True
    up_to_depth: int = 6
    assume_divergence: bool = False

    def __post_init__(self) -> None:
        for f in ("fuel", "max_pairs", "up_to_depth"):
            if getattr(self, f) <= 0:
                raise ValueError(f"{f} must be positive")


class InconclusiveReason(enum.Enum):
    FUEL_EXHAUSTED = "fuel-exhausted"
    PAIR_BUDGET_EXCEEDED = "pair-budget-exceeded"


def _pairs_json(ps: Iterable[TermPair]) -> list[dict[str, str]]:
    return [p.to_json() for p in ps]


@dataclass
class Bisimilar:
    witness: list[TermPair]
    keep: frozenset[VarName] = frozenset()
    verdict = "bisimilar"

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "pairs": _pairs_json(self.witness), "trace": [], "mismatch": None}


@dataclass
class NotBisimilar:
    trace: list[TermPair]
    mismatch: Mismatch
    verdict = "not-bisimilar"

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "pairs": [],
            "trace": _pairs_json(self.trace),
            "mismatch": str(self.mismatch),
        }


@dataclass
class Inconclusive:
    reason: InconclusiveReason
    frontier: list[TermPair] = field(default_factory=list)
    verdict = "inconclusive"

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "pairs": _pairs_json(self.frontier),
            "trace": [],
            "mismatch": None,
            "reason": self.reason.value,
        }


Verdict = Union[Bisimilar, NotBisimilar, Inconclusive]


# -- one step of the algorithm on a pair ----------------------------------------

_DISCHARGED = "discharged"
_FRONTIER = "frontier"


def evaluate_pair(p: TermPair, cfg: CheckConfig) -> tuple[Outcome, Outcome]:
    return (
        evaluate(p.left, cfg.fuel, detect_cycles=True),
        evaluate(p.right, cfg.fuel, detect_cycles=True),
    )


def successors(p: TermPair, cfg: CheckConfig) -> Union[Mismatch, str, list[TermPair]]:
    """The raw obligations of ``p``, or a mismatch, or one of the markers
    ``"discharged"`` (both sides diverge) and ``"frontier"`` (fuel ran out
    without proof either way)."""
    o0, o1 = evaluate_pair(p, cfg)
    ex0, ex1 = isinstance(o0, FuelExhausted), isinstance(o1, FuelExhausted)
    if ex0 and ex1:
        if (o0.looping and o1.looping) or cfg.assume_divergence:
            return _DISCHARGED
        return _FRONTIER
    if ex0 or ex1:
        stuck = o0 if ex0 else o1
        assert isinstance(stuck, FuelExhausted)
        if stuck.looping or cfg.assume_divergence:
            side = "left" if ex0 else "right"
            how = "loops" if stuck.looping else f"exceeds {cfg.fuel} steps"
            return Mismatch(MismatchKind.DIVERGENCE, f"{side} side {how}, other side has a normal form")
        return _FRONTIER
    return expand(o0, o1, cfg.mode, FreshSupply(max_index([p.left, p.right]) + 1))


class _HintFailed(Exception):
    def __init__(self, hint: TermPair):
        self.hint = hint


def _trace_to(p: TermPair, parent: dict) -> list[TermPair]:
    out = [p]
    while parent[out[-1]] is not None:
        out.append(parent[out[-1]])
    out.reverse()
    return out


def check(
    t0: Term,
    t1: Term,
    cfg: Optional[CheckConfig] = None,
    hints: Iterable[TermPair] = (),
) -> Verdict:
    """Decide ``t0`` against ``t1`` as far as the budgets allow.

    ``hints`` are extra pairs added to the candidate relation up front, which
    lets a small relation be closed up to context.  A hint that leads to a
    mismatch is dropped and the search restarts without it, so hints never
    change a verdict from bisimilar to not-bisimilar.
    """
    cfg = cfg or CheckConfig()
    keep = t0.free | t1.free
    pending = [canonical_pair(h.left, h.right, keep) for h in hints]
    while True:
        try:
            return _run(t0, t1, cfg, keep, pending)
        except _HintFailed as e:
            pending = [h for h in pending if h != e.hint]


def _run(t0: Term, t1: Term, cfg: CheckConfig, keep: frozenset, hints: list[TermPair]) -> Verdict:
    root = canonical_pair(t0, t1, keep)
    parent: dict[TermPair, Optional[TermPair]] = {root: None}
    rel = Relation([root])
    queue = deque([root])
    for h in hints:
        if h not in parent:
            parent[h] = None
            rel.add(h)
            queue.append(h)
    frontier: list[TermPair] = []
    while queue:
        p = queue.popleft()
        got = successors(p, cfg)
        if got == _DISCHARGED:
            continue
        if got == _FRONTIER:
            frontier.append(p)
            continue
        if isinstance(got, Mismatch):
            trace = _trace_to(p, parent)
            if trace[0] != root:
                raise _HintFailed(trace[0])
            return NotBisimilar(trace, got)
        closure = Closure(rel, cfg.up_to_depth) if cfg.up_to_context else None
        for q in got:
            c = canonical_pair(q.left, q.right, keep)
            if c in parent or alpha_equal(c.left, c.right):
                continue
            if closure is not None and closure.contains(c.left, c.right):
                continue
            if len(parent) >= cfg.max_pairs:
                return Inconclusive(InconclusiveReason.PAIR_BUDGET_EXCEEDED, frontier + [p] + list(queue))
            parent[c] = p
            rel.add(c)
            queue.append(c)
    if frontier:
        return Inconclusive(InconclusiveReason.FUEL_EXHAUSTED, frontier)
    return Bisimilar(list(parent), keep)


# -- certificates -----------------------------------------------------------------


def closure_failures(
    witness: Iterable[TermPair], cfg: Optional[CheckConfig] = None
) -> list[tuple[TermPair, str]]:
    """Replay every pair of a witness; return the pairs whose obligations
    escape it.  An empty list means the witness is a bisimulation (up to
    context when ``cfg.up_to_context``)."""
    cfg = cfg or CheckConfig()
    pairs = list(witness)
    rel = Relation(pairs)
    closure = Closure(rel, cfg.up_to_depth)
    out = []
    for p in pairs:
        got = successors(p, cfg)
        if got == _DISCHARGED:
            continue
        if got == _FRONTIER:
            out.append((p, "evaluation ran out of fuel"))
            continue
        if isinstance(got, Mismatch):
            out.append((p, str(got)))
            continue
        for q in got:
            if alpha_equal(q.left, q.right) or q in rel:
                continue
            if cfg.up_to_context and closure.contains(q.left, q.right):
                continue
            out.append((p, f"obligation {q} is not covered"))
            break
    return out


def replay_trace(trace: list[TermPair], mismatch: Mismatch, cfg: Optional[CheckConfig] = None) -> bool:
    """Check that each pair of a failure trace is an obligation of the one
    before it and that the last pair yields the same kind of mismatch."""
    cfg = cfg or CheckConfig()
    if not trace:
        return False
    for p, q in zip(trace, trace[1:]):
        got = successors(p, cfg)
        if not isinstance(got, list):
            return False
        target = canonical_pair(q.left, q.right)
        if not any(canonical_pair(o.left, o.right) == target for o in got):
            return False
    last = successors(trace[-1], cfg)
    return isinstance(last, Mismatch) and last.kind is mismatch.kind
