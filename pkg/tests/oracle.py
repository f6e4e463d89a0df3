"""Independent reference implementations used as test oracles.

The reducer is a direct structural recursion over the rules (no explicit
contexts); substitution renames every binder it passes; alpha-equivalence
goes through de Bruijn indices.
"""

from __future__ import annotations

import itertools
from typing import Callable, Optional

from shiftbisim.syntax import App, Lam, Reset, Shift, Term, Var, VarName

_counter = itertools.count()


def _fresh(base: str, avoid: frozenset) -> VarName:
    while True:
        v = VarName(base + "_o", next(_counter) % 100000 + 1)
        if v not in avoid:
            return v


def subst(t: Term, x: VarName, v: Term) -> Term:
    if isinstance(t, Var):
        return v if t.name == x else t
    if isinstance(t, App):
        return App(subst(t.fun, x, v), subst(t.arg, x, v))
    if isinstance(t, Reset):
        return Reset(subst(t.body, x, v))
    if t.binder == x:
        return t
    y = _fresh(t.binder.base, v.free | t.body.free)
    body = subst(subst(t.body, t.binder, Var(y)), x, v)
    return type(t)(y, body)


def de_bruijn(t: Term, env: tuple = ()) -> tuple:
    if isinstance(t, Var):
        for i, b in enumerate(reversed(env)):
            if b == t.name:
                return ("b", i)
        return ("f", t.name.base, t.name.index)
    if isinstance(t, App):
        return ("app", de_bruijn(t.fun, env), de_bruijn(t.arg, env))
    if isinstance(t, Reset):
        return ("reset", de_bruijn(t.body, env))
    return ("lam" if isinstance(t, Lam) else "shift", de_bruijn(t.body, env + (t.binder,)))


def alpha_eq(a: Term, b: Term) -> bool:
    return de_bruijn(a) == de_bruijn(b)


def is_val(t: Term) -> bool:
    return isinstance(t, (Var, Lam))


# result kinds: ("step", t') | ("value",) | ("shift", F, k, body) | ("open",)
def _go(t: Term):
    if isinstance(t, (Var, Lam)):
        return ("value",)
    if isinstance(t, Shift):
        return ("shift", lambda h: h, t.binder, t.body)
    if isinstance(t, Reset):
        r = _go(t.body)
        if r[0] == "step":
            return ("step", Reset(r[1]))
        if r[0] == "value":
            return ("step", t.body)
        if r[0] == "open":
            return r
        _, f, k, body = r
        x = _fresh("x", frozenset())
        cont = Lam(x, Reset(f(Var(x))))
        return ("step", Reset(subst(body, k, cont)))
    rf = _go(t.fun)
    if rf[0] == "step":
        return ("step", App(rf[1], t.arg))
    if rf[0] == "open":
        return rf
    if rf[0] == "shift":
        f = rf[1]
        return ("shift", lambda h, f=f: App(f(h), t.arg), rf[2], rf[3])
    ra = _go(t.arg)
    if ra[0] == "step":
        return ("step", App(t.fun, ra[1]))
    if ra[0] == "open":
        return ra
    if ra[0] == "shift":
        f = ra[1]
        return ("shift", lambda h, f=f: App(t.fun, f(h)), ra[2], ra[3])
    if isinstance(t.fun, Lam):
        return ("step", subst(t.fun.body, t.fun.binder, t.arg))
    return ("open",)


def ostep(t: Term) -> Optional[Term]:
    r = _go(t)
    return r[1] if r[0] == "step" else None


def classify(t: Term) -> str:
    """'value', 'control', 'open' for normal forms, 'redex' otherwise."""
    r = _go(t)
    return {"step": "redex", "value": "value", "shift": "control", "open": "open"}[r[0]]


def oeval(t: Term, fuel: int) -> Optional[Term]:
    for _ in range(fuel):
        n = ostep(t)
        if n is None:
            return t
        t = n
    return None if ostep(t) is not None else t


Reducer = Callable[[Term], Optional[Term]]
