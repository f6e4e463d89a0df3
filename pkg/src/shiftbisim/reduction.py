"""Deterministic call-by-value reduction with shift and reset.

``decompose`` finds the unique evaluation context and redex of a term, or
classifies it as a normal form: a value, a control-stuck term ``F[shift k. t]``
or an open-stuck term ``E[x v]``.  ``step`` contracts the redex; ``evaluate``
iterates under a step budget.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .syntax import (
    DELIMITER,
    AppArgOfValue,
    AppFunBefore,
    EvalCtx,
    PureCtx,
    Term,
    VarName,
    alpha_equal,
    substitute,
)
from .syntax.terms import App, Lam, Reset, Shift, Var

DEFAULT_FUEL = 10_000


# -- redexes -----------------------------------------------------------------


@dataclass(frozen=True)
class Beta:
    binder: VarName
    body: Term
    arg: Term

    @property
    def term(self) -> Term:
        return App(Lam(self.binder, self.body), self.arg)


@dataclass(frozen=True)
class Capture:
    """``<F[shift k. t]>``: the shift captures the pure context ``F``."""

    f: PureCtx
    binder: VarName
    body: Term

    @property
    def term(self) -> Term:
        return Reset(self.f.plug(Shift(self.binder, self.body)))


@dataclass(frozen=True)
class ResetValue:
    v: Term

    @property
    def term(self) -> Term:
        return Reset(self.v)


Redex = Union[Beta, Capture, ResetValue]


# -- outcomes ----------------------------------------------------------------


@dataclass(frozen=True)
class Value:
    v: Term

    @property
    def term(self) -> Term:
        return self.v


@dataclass(frozen=True)
class ControlStuck:
    f: PureCtx
    binder: VarName
    body: Term

    @property
    def term(self) -> Term:
        return self.f.plug(Shift(self.binder, self.body))


@dataclass(frozen=True)
class OpenStuck:
    e: EvalCtx
    head: VarName
    arg: Term

    @property
    def term(self) -> Term:
        return self.e.plug(App(Var(self.head), self.arg))


@dataclass(frozen=True)
class FuelExhausted:
    """No normal form within the budget.  ``looping`` is set when the reduction
    sequence was seen to revisit a term, which proves divergence."""

    last: Term
    steps: int
    looping: bool = False

    @property
    def term(self) -> Term:
        return self.last


NormalForm = Union[Value, ControlStuck, OpenStuck]
Outcome = Union[Value, ControlStuck, OpenStuck, FuelExhausted]


@dataclass(frozen=True)
class Normal:
    outcome: NormalForm


@dataclass(frozen=True)
class Split:
    e: EvalCtx
    r: Redex


Decomposition = Union[Normal, Split]


def _inside_out(frames: list) -> tuple:
    return tuple(reversed(frames))


def decompose(t: Term) -> Decomposition:
    frames: list = []  # outermost first while descending
    root = t
    while True:
        if isinstance(t, App):
            f, a = t.fun, t.arg
            if not f.is_value:
                frames.append(AppFunBefore(a))
                t = f
            elif not a.is_value:
                frames.append(AppArgOfValue(f))
                t = a
            elif isinstance(f, Lam):
                return Split(EvalCtx(_inside_out(frames)), Beta(f.binder, f.body, a))
            else:
                return Normal(OpenStuck(EvalCtx(_inside_out(frames)), f.name, a))
        elif isinstance(t, Reset):
            frames.append(DELIMITER)
            t = t.body
        elif isinstance(t, Shift):
            for j in range(len(frames) - 1, -1, -1):
                if frames[j] is DELIMITER:
                    f = PureCtx(_inside_out(frames[j + 1 :]))
                    e = EvalCtx(_inside_out(frames[:j]))
                    return Split(e, Capture(f, t.binder, t.body))
            return Normal(ControlStuck(PureCtx(_inside_out(frames)), t.binder, t.body))
        else:
            # values are only descended into at the root or right under a delimiter
            if not frames:
                return Normal(Value(root))
            assert frames[-1] is DELIMITER
            return Split(EvalCtx(_inside_out(frames[:-1])), ResetValue(t))


def continuation_var(f: PureCtx) -> VarName:
    """The parameter of the captured continuation: ``x`` unless ``F`` mentions it."""
    used = f.free
    i = 0
    while VarName("x", i) in used:
        i += 1
    return VarName("x", i)


def contract(e: EvalCtx, r: Redex) -> Term:
    if isinstance(r, Beta):
        return e.plug(substitute(r.body, r.binder, r.arg))
    if isinstance(r, Capture):
        x = continuation_var(r.f)
        k = Lam(x, Reset(r.f.plug(Var(x))))
        return e.plug(Reset(substitute(r.body, r.binder, k)))
    return e.plug(r.v)


def step(t: Term) -> Optional[Term]:
    d = decompose(t)
    if isinstance(d, Normal):
        return None
    return contract(d.e, d.r)


def evaluate(t: Term, fuel: int = DEFAULT_FUEL, detect_cycles: bool = False) -> Outcome:
    """Reduce for at most ``fuel`` steps.

    With ``detect_cycles`` the sequence is watched with Brent's algorithm; a
    term seen again (up to alpha) stops evaluation early with a looping
    ``FuelExhausted``.
    """
    if fuel < 0:
        raise ValueError("fuel must be non-negative")
    saved, power, lam = t, 1, 0
    for n in range(fuel + 1):
        d = decompose(t)
        if isinstance(d, Normal):
            return d.outcome
        if n == fuel:
            break
        t = contract(d.e, d.r)
        if detect_cycles:
            lam += 1
            if t.size == saved.size and alpha_equal(t, saved):
                return FuelExhausted(t, n + 1, looping=True)
            if lam == power:
                saved, power, lam = t, power * 2, 0
    return FuelExhausted(t, fuel)


def normal_form(t: Term, fuel: int = DEFAULT_FUEL) -> Optional[Term]:
    o = evaluate(t, fuel)
    return None if isinstance(o, FuelExhausted) else o.term


def trace(t: Term, fuel: int = DEFAULT_FUEL) -> list[Term]:
    if fuel < 0:
        raise ValueError("fuel must be non-negative")
    out = [t]
    for _ in range(fuel):
        nxt = step(t)
        if nxt is None:
            break
        out.append(nxt)
        t = nxt
    return out


def is_normal(t: Term) -> bool:
    return isinstance(decompose(t), Normal)
