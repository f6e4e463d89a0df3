"""Evaluation contexts and pure contexts, stored hole-first.

A context is a tuple of frames; ``frames[0]`` is the frame immediately around
the hole.  Plugging folds the frames over the filler, innermost first.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .terms import App, Hole, Reset, Term, VarName, is_value


@dataclass(frozen=True)
class AppArgOfValue:
    """The frame ``v []``: the function is an evaluated value."""

    fun: Term

    def __post_init__(self) -> None:
        if not is_value(self.fun):
            raise TypeError("AppArgOfValue needs a value in function position")

    def wrap(self, t: Term) -> Term:
        return App(self.fun, t)


@dataclass(frozen=True)
class AppFunBefore:
    """The frame ``[] t``: the argument is not evaluated yet."""

    arg: Term

    def wrap(self, t: Term) -> Term:
        return App(t, self.arg)


@dataclass(frozen=True)
class Delimiter:
    """The frame ``<[]>``."""

    def wrap(self, t: Term) -> Term:
        return Reset(t)


DELIMITER = Delimiter()
PureFrame = Union[AppArgOfValue, AppFunBefore]
Frame = Union[AppArgOfValue, AppFunBefore, Delimiter]


def _frame_terms(frames: tuple) -> list[Term]:
    out = []
    for f in frames:
        if isinstance(f, AppArgOfValue):
            out.append(f.fun)
        elif isinstance(f, AppFunBefore):
            out.append(f.arg)
    return out


@dataclass(frozen=True)
class EvalCtx:
    frames: tuple = ()

    def plug(self, t: Term) -> Term:
        for f in self.frames:
            t = f.wrap(t)
        return t

    @property
    def is_pure(self) -> bool:
        return not any(isinstance(f, Delimiter) for f in self.frames)

    @property
    def free(self) -> frozenset[VarName]:
        out: frozenset[VarName] = frozenset()
        for t in _frame_terms(self.frames):
            out |= t.free
        return out

    def as_pure(self) -> PureCtx:
        return PureCtx(self.frames)

    def as_eval(self) -> EvalCtx:
        return EvalCtx(self.frames)

    def __len__(self) -> int:
        return len(self.frames)

    def __str__(self) -> str:
        from .text import show

        return show(self.plug(Hole()))


@dataclass(frozen=True)
class PureCtx(EvalCtx):
    """An evaluation context with no delimiter around the hole."""

    def __post_init__(self) -> None:
        if not self.is_pure:
            raise ValueError("pure contexts contain no delimiter frame")


EMPTY = EvalCtx()
EMPTY_PURE = PureCtx()


def plug(c: EvalCtx, t: Term) -> Term:
    return c.plug(t)


def compose(outer: EvalCtx, inner: EvalCtx) -> EvalCtx:
    """The context ``outer[inner[]]``."""
    frames = inner.frames + outer.frames
    if isinstance(outer, PureCtx) and isinstance(inner, PureCtx):
        return PureCtx(frames)
    return EvalCtx(frames)


@dataclass(frozen=True)
class Pure:
    f: PureCtx


@dataclass(frozen=True)
class Around:
    """``outer[<inner>]`` with ``inner`` pure: the split at the first delimiter."""

    outer: EvalCtx
    inner: PureCtx


SplitResult = Union[Pure, Around]


def split_at_first_reset(e: EvalCtx) -> SplitResult:
    for i, f in enumerate(e.frames):
        if isinstance(f, Delimiter):
            return Around(EvalCtx(e.frames[i + 1 :]), PureCtx(e.frames[:i]))
    return Pure(PureCtx(e.frames))


def context_of(t: Term) -> EvalCtx:
    """Recover a context from a term containing exactly one hole on its
    evaluation spine (the inverse of printing a context)."""
    frames: list = []
    while not isinstance(t, Hole):
        if isinstance(t, Reset):
            frames.append(DELIMITER)
            t = t.body
        elif isinstance(t, App):
            if _has_hole(t.fun):
                frames.append(AppFunBefore(t.arg))
                t = t.fun
            elif _has_hole(t.arg):
                if not is_value(t.fun):
                    raise ValueError("hole is not in evaluation position")
                frames.append(AppArgOfValue(t.fun))
                t = t.arg
            else:
                raise ValueError("context has no hole")
        else:
            raise ValueError("hole is not in evaluation position")
    frames.reverse()
    return EvalCtx(tuple(frames))


def _has_hole(t: Term) -> bool:
    if isinstance(t, Hole):
        return True
    if isinstance(t, App):
        return _has_hole(t.fun) or _has_hole(t.arg)
    if isinstance(t, Reset):
        return _has_hole(t.body)
    return False
