"""Bounded search for contexts that tell two terms apart.

Only closing value substitutions and closed evaluation contexts are tried,
which is enough for contextual equivalence.  The search is sound (every
reported distinguisher replays) and incomplete: a fuel-exhausted evaluation
is never taken as an observation.
"""

from __future__ import annotations

import enum
import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

from .reduction import DEFAULT_FUEL, ControlStuck, FuelExhausted, Normal, Value, decompose, evaluate
from .syntax import (
    DELIMITER,
    AppArgOfValue,
    AppFunBefore,
    EvalCtx,
    Hole,
    Term,
    VarName,
    parse,
    show,
    substitute,
)


class Observable(enum.Enum):
    VALUE = "converges-to-value"
    CONTROL_STUCK = "converges-to-control-stuck"
    NO_OBSERVATION = "no-observation-at-fuel"


def _classify(o) -> Observable:
    if isinstance(o, Value):
        return Observable.VALUE
    if isinstance(o, ControlStuck):
        return Observable.CONTROL_STUCK
    if isinstance(o, FuelExhausted):
        return Observable.NO_OBSERVATION
    raise AssertionError(f"closed term evaluated to an open-stuck term: {o}")


def observe(t: Term, fuel: int = DEFAULT_FUEL) -> Observable:
    if t.free:
        raise ValueError(f"observe needs a closed term; free: {sorted(map(str, t.free))}")
    return _classify(evaluate(t, fuel))


_POOL_SRC = [
    r"\x. x",
    r"\x. x x",
    r"\y. shift k. (\x. x x) (\x. x x)",
    r"\y. shift k. \x. x",
    r"\y. <y (\x. x)>",
    r"\y. shift k. k (k y)",
    r"\y. \z. y",
    r"\y. \z. z",
]
DEFAULT_POOL: tuple[Term, ...] = tuple(parse(s) for s in _POOL_SRC)
_IDENTITY = DEFAULT_POOL[0]


@dataclass(frozen=True)
class SearchBounds:
    context_size: int = 6
    value_pool_size: int = 5
    fuel: int = 1000
    extra_values: tuple[Term, ...] = ()
    # longest run of pure frames stacked on a pair of control stuck terms
    stuck_context_size: int = 2

    def __post_init__(self) -> None:
        for f in ("context_size", "value_pool_size", "fuel", "stuck_context_size"):
            if getattr(self, f) <= 0:
                raise ValueError(f"{f} must be positive")
        for v in self.extra_values:
            if not v.is_value or v.free:
                raise ValueError(f"pool extensions must be closed values: {v}")

    @property
    def pool(self) -> tuple[Term, ...]:
        return DEFAULT_POOL[: self.value_pool_size] + tuple(self.extra_values)


@dataclass
class Distinguisher:
    context: EvalCtx
    substitution: dict[VarName, Term]
    observables: tuple[Observable, Observable]
    fuel: int = DEFAULT_FUEL

    def closed_terms(self, t0: Term, t1: Term) -> tuple[Term, Term]:
        return self.context.plug(close(t0, self.substitution)), self.context.plug(
            close(t1, self.substitution)
        )

    def replay(self, t0: Term, t1: Term) -> tuple[Observable, Observable]:
        c0, c1 = self.closed_terms(t0, t1)
        return observe(c0, self.fuel), observe(c1, self.fuel)

    def to_json(self) -> dict:
        return {
            "context": show(self.context.plug(Hole())),
            "substitution": {str(k): show(v) for k, v in sorted(self.substitution.items())},
            "observables": [o.value for o in self.observables],
        }


def close(t: Term, sigma: dict[VarName, Term]) -> Term:
    for x, v in sorted(sigma.items()):
        t = substitute(t, x, v)
    return t


def _frames(pool: Sequence[Term]) -> list:
    out: list = [DELIMITER]
    out += [AppFunBefore(v) for v in pool]
    out += [AppArgOfValue(v) for v in pool]
    return out


def enumerate_contexts(bounds: SearchBounds) -> Iterator[EvalCtx]:
    """All contexts of at most ``context_size`` frames, by size and then by
    frame order (innermost frame varying slowest)."""
    frames = _frames(bounds.pool)
    for n in range(bounds.context_size + 1):
        for combo in itertools.product(frames, repeat=n):
            yield EvalCtx(tuple(combo))


def substitutions(t0: Term, t1: Term, bounds: SearchBounds) -> Iterator[dict[VarName, Term]]:
    xs = sorted(t0.free | t1.free)
    for vs in itertools.product(bounds.pool, repeat=len(xs)):
        yield dict(zip(xs, vs))


def _useless(frame, pool_identity: Term) -> bool:
    # i [] behaves like [] on every term
    return isinstance(frame, AppArgOfValue) and frame.fun == pool_identity


@dataclass
class _State:
    terms: tuple[Term, Term]
    frames: tuple = ()  # innermost first
    stuck_run: int = 0


@dataclass
class SearchStats:
    states: int = 0
    substitutions: int = 0
    pruned: int = 0
    by_size: list[int] = field(default_factory=list)


def _search(t0: Term, t1: Term, bounds: SearchBounds, stats: SearchStats) -> Optional[tuple[tuple, tuple]]:
    """BFS over contexts, extended one outer frame at a time.

    Contexts are applied to already evaluated states, which is exact by
    determinism: ``E[t]`` reduces to ``E[n]`` when ``t`` reduces to ``n``.
    """
    frames = [f for f in _frames(bounds.pool) if not _useless(f, _IDENTITY)]
    o0, o1 = _eval(t0, bounds), _eval(t1, bounds)
    start = _State((o0.term, o1.term), ())
    found = _compare(o0, o1)
    if found is not None:
        return (), found
    seen = {start.terms}
    level = [start] if _live(o0, o1) else []
    for _ in range(bounds.context_size):
        nxt: list[_State] = []
        for st in level:
            stuck, inert = _capture_shape(st.terms)
            for fr in frames:
                if stuck and fr is not DELIMITER and (inert or st.stuck_run >= bounds.stuck_context_size):
                    # an inert capture discards every pure frame added here
                    stats.pruned += 1
                    continue
                a = _eval(fr.wrap(st.terms[0]), bounds)
                b = _eval(fr.wrap(st.terms[1]), bounds)
                stats.states += 1
                got = _compare(a, b)
                frs = st.frames + (fr,)
                if got is not None:
                    return frs, got
                key = (a.term, b.term)
                if key in seen or not _live(a, b) or a.term == b.term:
                    stats.pruned += 1
                    continue
                seen.add(key)
                run = st.stuck_run + 1 if stuck and fr is not DELIMITER else 0
                nxt.append(_State(key, frs, run))
        stats.by_size.append(len(nxt))
        level = nxt
        if not level:
            break
    return None


def _eval(t: Term, bounds: SearchBounds):
    return evaluate(t, bounds.fuel, detect_cycles=True)


def _capture_shape(terms: tuple[Term, Term]) -> tuple[bool, bool]:
    """Whether both sides are control stuck, and whether both shift bodies
    then ignore their continuation."""
    inert = True
    for t in terms:
        d = decompose(t)
        if not isinstance(d, Normal) or not isinstance(d.outcome, ControlStuck):
            return False, False
        inert = inert and d.outcome.binder not in d.outcome.body.free
    return True, inert


def _live(a, b) -> bool:
    return not isinstance(a, FuelExhausted) and not isinstance(b, FuelExhausted)


def _compare(a, b) -> Optional[tuple[Observable, Observable]]:
    ca, cb = _classify(a), _classify(b)
    if Observable.NO_OBSERVATION in (ca, cb) or ca is cb:
        return None
    return ca, cb


def distinguish(
    t0: Term,
    t1: Term,
    bounds: Optional[SearchBounds] = None,
    jobs: int = 1,
    stats: Optional[SearchStats] = None,
) -> Optional[Distinguisher]:
    """The first (substitution, context) pair with differing observables."""
    bounds = bounds or SearchBounds()
    stats = stats if stats is not None else SearchStats()
    sigmas = list(substitutions(t0, t1, bounds))
    if jobs > 1 and len(sigmas) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_search_one, [(t0, t1, s, bounds) for s in sigmas]))
        for sigma, got in zip(sigmas, results):
            if got is not None:
                return _make(sigma, got, bounds.fuel)
        return None
    for sigma in sigmas:
        stats.substitutions += 1
        got = _search(close(t0, sigma), close(t1, sigma), bounds, stats)
        if got is not None:
            return _make(sigma, got, bounds.fuel)
    return None


def _search_one(args):
    t0, t1, sigma, bounds = args
    return _search(close(t0, sigma), close(t1, sigma), bounds, SearchStats())


def _make(sigma, got, fuel: int) -> Distinguisher:
    frames, obs = got
    # every stage had at most bounds.fuel steps, so this replays the whole run
    return Distinguisher(EvalCtx(frames), sigma, obs, fuel=fuel * (len(frames) + 1))


__all__ = [
    "DEFAULT_POOL",
    "Distinguisher",
    "Observable",
    "SearchBounds",
    "SearchStats",
    "close",
    "distinguish",
    "enumerate_contexts",
    "observe",
    "substitutions",
]
