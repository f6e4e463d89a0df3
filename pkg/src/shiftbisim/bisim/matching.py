"""Normal-form matching: what must be related for two normal forms to match."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Union

from ..reduction import ControlStuck, FuelExhausted, OpenStuck, Outcome, Value
from ..syntax import (
    Around,
    Canonicalizer,
    EvalCtx,
    FreshSupply,
    Pure,
    Term,
    VarName,
    split_at_first_reset,
    substitute,
)
from ..syntax.terms import App, Lam, Reset, Var, max_index


class Mode(enum.Enum):
    PLAIN = "plain"
    REFINED = "refined"


@dataclass(frozen=True)
class TermPair:
    left: Term
    right: Term

    def swap(self) -> TermPair:
        return TermPair(self.right, self.left)

    def __str__(self) -> str:
        return f"{self.left}  ~  {self.right}"

    def to_json(self) -> dict[str, str]:
        return {"left": str(self.left), "right": str(self.right)}


@dataclass(frozen=True)
class Contexts:
    left: EvalCtx
    right: EvalCtx


Obligation = Union[TermPair, Contexts]


class MismatchKind(enum.Enum):
    OUTCOME_CLASS = "outcome-class"
    HEAD_VARIABLE = "head-variable"
    CONTEXT_SHAPE = "context-split-shape"
    DIVERGENCE = "divergence"


@dataclass(frozen=True)
class Mismatch:
    kind: MismatchKind
    detail: str

    def __str__(self) -> str:
        return f"{self.kind.value}: {self.detail}"


def app_val(v: Term, y: VarName) -> Term:
    """``x.y = x y`` and ``(\\x. t).y = t[x := y]``."""
    if isinstance(v, Var):
        return App(v, Var(y))
    if isinstance(v, Lam):
        return substitute(v.body, v.binder, Var(y))
    raise TypeError(f"app_val needs a value, got {v!r}")


def _supply_for(*outcomes: Outcome) -> FreshSupply:
    return FreshSupply(max_index(o.term for o in outcomes) + 1)


def _kind(o: Outcome) -> str:
    if isinstance(o, Value):
        return "a value"
    if isinstance(o, ControlStuck):
        return "control stuck"
    return "open stuck"


def nf_match(
    o0: Outcome,
    o1: Outcome,
    mode: Mode = Mode.PLAIN,
    fresh: FreshSupply | None = None,
) -> Mismatch | list[Obligation]:
    if isinstance(o0, FuelExhausted) or isinstance(o1, FuelExhausted):
        raise ValueError("nf_match compares normal forms only")
    fresh = fresh or _supply_for(o0, o1)
    if isinstance(o0, Value) and isinstance(o1, Value):
        x = fresh.fresh("x")
        return [TermPair(app_val(o0.v, x), app_val(o1.v, x))]
    if isinstance(o0, ControlStuck) and isinstance(o1, ControlStuck):
        if mode is Mode.PLAIN:
            k = fresh.fresh("k")
            b0 = substitute(o0.body, o0.binder, Var(k))
            b1 = substitute(o1.body, o1.binder, Var(k))
            return [Contexts(o0.f, o1.f), TermPair(Reset(b0), Reset(b1))]
        k2 = fresh.fresh("k")
        x = fresh.fresh("x")

        def simulate(o: ControlStuck) -> Term:
            cont = Lam(x, Reset(App(Var(k2), o.f.plug(Var(x)))))
            return Reset(substitute(o.body, o.binder, cont))

        return [TermPair(simulate(o0), simulate(o1))]
    if isinstance(o0, OpenStuck) and isinstance(o1, OpenStuck):
        if o0.head != o1.head:
            return Mismatch(
                MismatchKind.HEAD_VARIABLE,
                f"stuck on {o0.head} versus stuck on {o1.head}",
            )
        y = fresh.fresh("y")
        return [Contexts(o0.e, o1.e), TermPair(app_val(o0.arg, y), app_val(o1.arg, y))]
    return Mismatch(MismatchKind.OUTCOME_CLASS, f"{_kind(o0)} versus {_kind(o1)}")


def ctx_obligations(
    e0: EvalCtx, e1: EvalCtx, fresh: FreshSupply | None = None
) -> Mismatch | list[TermPair]:
    fresh = fresh or FreshSupply(max_index(_ctx_terms(e0, e1)) + 1)
    s0, s1 = split_at_first_reset(e0), split_at_first_reset(e1)
    if isinstance(s0, Pure) and isinstance(s1, Pure):
        x = fresh.fresh("x")
        return [TermPair(s0.f.plug(Var(x)), s1.f.plug(Var(x)))]
    if isinstance(s0, Around) and isinstance(s1, Around):
        x = fresh.fresh("x")
        z = fresh.fresh("x")
        return [
            TermPair(s0.outer.plug(Var(x)), s1.outer.plug(Var(x))),
            TermPair(Reset(s0.inner.plug(Var(z))), Reset(s1.inner.plug(Var(z)))),
        ]
    delimited = lambda s: "delimited" if isinstance(s, Around) else "pure"  # noqa: E731
    return Mismatch(
        MismatchKind.CONTEXT_SHAPE,
        f"{delimited(s0)} context {e0} versus {delimited(s1)} context {e1}",
    )


def _ctx_terms(*cs: EvalCtx) -> list[Term]:
    from ..syntax import Hole

    return [c.plug(Hole()) for c in cs]


def expand(
    o0: Outcome, o1: Outcome, mode: Mode, fresh: FreshSupply | None = None
) -> Mismatch | list[TermPair]:
    """``nf_match`` followed by ``ctx_obligations`` on every context pair."""
    fresh = fresh or _supply_for(o0, o1)
    got = nf_match(o0, o1, mode, fresh)
    if isinstance(got, Mismatch):
        return got
    out: list[TermPair] = []
    for ob in got:
        if isinstance(ob, Contexts):
            sub = ctx_obligations(ob.left, ob.right, fresh)
            if isinstance(sub, Mismatch):
                return sub
            out.extend(sub)
        else:
            out.append(ob)
    return out


def canonical_pair(t0: Term, t1: Term, keep: frozenset[VarName] = frozenset()) -> TermPair:
    """Jointly rename both sides: bound variables by nesting level, free
    variables (except ``keep``) by order of first occurrence."""
    c = Canonicalizer(keep)
    return TermPair(c(t0), c(t1))


__all__ = [
    "Contexts",
    "Mismatch",
    "MismatchKind",
    "Mode",
    "Obligation",
    "TermPair",
    "app_val",
    "canonical_pair",
    "ctx_obligations",
    "expand",
    "nf_match",
]
