"""Abstract syntax of the call-by-value lambda calculus with shift and reset.

Terms are immutable.  Every node carries its size, its free variables and a
cached hash, so structural comparisons and freshness checks are cheap.
"""

from __future__ import annotations

import re
from typing import Iterable, Iterator

SHIFT_KEYWORD = "shift"
_IDENT = re.compile(r"[a-zA-Z_][a-zA-Z0-9_']*\Z")


class VarName:
    """A variable: an identifier plus an index used by the fresh-name supply.

    Printed as ``base`` when the index is zero and as ``base%index`` otherwise.
    """

    __slots__ = ("base", "index", "_hash")

    def __init__(self, base: str, index: int = 0):
        if not _IDENT.match(base) or base == SHIFT_KEYWORD:
            raise ValueError(f"invalid variable name {base!r}")
        if index < 0:
            raise ValueError("variable index must be non-negative")
        self.base = base
        self.index = index
        self._hash = hash((base, index))

    def _key(self) -> tuple[str, int]:
        return (self.base, self.index)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VarName):
            return NotImplemented
        return self.base == other.base and self.index == other.index

    def __lt__(self, other: VarName) -> bool:
        return self._key() < other._key()

    def __le__(self, other: VarName) -> bool:
        return self._key() <= other._key()

    def __gt__(self, other: VarName) -> bool:
        return self._key() > other._key()

    def __ge__(self, other: VarName) -> bool:
        return self._key() >= other._key()

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"VarName({self.base!r}, {self.index})"

    def __str__(self) -> str:
        return self.base if self.index == 0 else f"{self.base}%{self.index}"

    @classmethod
    def parse(cls, text: str) -> VarName:
        base, sep, idx = text.partition("%")
        return cls(base, int(idx) if sep else 0)


def name(v: str | VarName) -> VarName:
    return v if isinstance(v, VarName) else VarName.parse(v)


class Term:
    """Base class of terms.  Subclasses: Var, Lam, App, Shift, Reset."""

    __slots__ = ("size", "free", "_hash")

    size: int
    free: frozenset[VarName]

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        from .text import show

        return show(self)

    @property
    def is_value(self) -> bool:
        return False

    def variables(self) -> Iterator[VarName]:
        """Every variable occurrence, binders included."""
        raise NotImplementedError


class Var(Term):
    __slots__ = ("name",)

    def __init__(self, v: VarName | str):
        v = name(v)
        self.name = v
        self.size = 1
        self.free = frozenset((v,))
        self._hash = hash(("var", v))

    def __eq__(self, other: object) -> bool:
        return self is other or (isinstance(other, Var) and self.name == other.name)

    __hash__ = Term.__hash__

    def __repr__(self) -> str:
        return f"Var({str(self.name)!r})"

    @property
    def is_value(self) -> bool:
        return True

    def variables(self) -> Iterator[VarName]:
        yield self.name


class _Binder(Term):
    __slots__ = ("binder", "body")
    _tag = ""

    def __init__(self, binder: VarName | str, body: Term):
        binder = name(binder)
        self.binder = binder
        self.body = body
        self.size = body.size + 1
        self.free = body.free - {binder} if binder in body.free else body.free
        self._hash = hash((self._tag, binder, body._hash))

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        return (
            type(other) is type(self)
            and self._hash == other._hash
            and self.binder == other.binder
            and self.body == other.body
        )

    __hash__ = Term.__hash__

    def __repr__(self) -> str:
        return f"{type(self).__name__}({str(self.binder)!r}, {self.body!r})"

    def variables(self) -> Iterator[VarName]:
        yield self.binder
        yield from self.body.variables()


class Lam(_Binder):
    __slots__ = ()
    _tag = "lam"

    @property
    def is_value(self) -> bool:
        return True


class Shift(_Binder):
    __slots__ = ()
    _tag = "shift"


class App(Term):
    __slots__ = ("fun", "arg")

    def __init__(self, fun: Term, arg: Term):
        self.fun = fun
        self.arg = arg
        self.size = fun.size + arg.size + 1
        self.free = fun.free | arg.free
        self._hash = hash(("app", fun._hash, arg._hash))

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        return (
            isinstance(other, App)
            and self._hash == other._hash
            and self.fun == other.fun
            and self.arg == other.arg
        )

    __hash__ = Term.__hash__

    def __repr__(self) -> str:
        return f"App({self.fun!r}, {self.arg!r})"

    def variables(self) -> Iterator[VarName]:
        yield from self.fun.variables()
        yield from self.arg.variables()


class Reset(Term):
    __slots__ = ("body",)

    def __init__(self, body: Term):
        self.body = body
        self.size = body.size + 1
        self.free = body.free
        self._hash = hash(("reset", body._hash))

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        return isinstance(other, Reset) and self._hash == other._hash and self.body == other.body

    __hash__ = Term.__hash__

    def __repr__(self) -> str:
        return f"Reset({self.body!r})"

    def variables(self) -> Iterator[VarName]:
        yield from self.body.variables()


class Hole(Term):
    """Placeholder used only to print and parse contexts (written ``@``)."""

    __slots__ = ()

    def __init__(self) -> None:
        self.size = 0
        self.free = frozenset()
        self._hash = hash("hole")

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Hole)

    __hash__ = Term.__hash__

    def __repr__(self) -> str:
        return "Hole()"

    def variables(self) -> Iterator[VarName]:
        return iter(())


def apps(head: Term, *args: Term) -> Term:
    """Left-nested application ``head a1 ... an``."""
    for a in args:
        head = App(head, a)
    return head


def is_value(t: Term) -> bool:
    return isinstance(t, (Var, Lam))


def free_vars(t: Term) -> frozenset[VarName]:
    return t.free


def max_index(terms: Iterable[Term]) -> int:
    best = 0
    for t in terms:
        for v in t.variables():
            if v.index > best:
                best = v.index
    return best


def fresh_like(v: VarName, avoid: frozenset[VarName] | set[VarName]) -> VarName:
    """The first variant of ``v`` (same base, index >= 1) not in ``avoid``."""
    i = 1
    while VarName(v.base, i) in avoid:
        i += 1
    return VarName(v.base, i)


class FreshSupply:
    """Monotone fresh-name supply owned by one checker run.

    Names are ``base%n`` with ``n`` strictly increasing across calls, starting
    above every index occurring in the terms the supply was seeded with, so a
    supplied name never clashes with a variable of the problem instance.
    """

    def __init__(self, start: int = 1):
        self._next = max(start, 1)

    @classmethod
    def avoiding(cls, *terms: Term) -> FreshSupply:
        return cls(max_index(terms) + 1)

    def fresh(self, base: str = "x") -> VarName:
        v = VarName(base, self._next)
        self._next += 1
        return v

    @property
    def issued(self) -> int:
        return self._next


# -- substitution -----------------------------------------------------------


def substitute(t: Term, x: VarName | str, v: Term) -> Term:
    """Capture-avoiding substitution of the value ``v`` for ``x`` in ``t``.

    Bound variables of ``t`` that would capture a free variable of ``v`` are
    renamed to the first unused ``base%n``.
    """
    if not is_value(v):
        raise TypeError(f"only values may be substituted, got {v!r}")
    x = name(x)
    if x not in t.free:
        return t
    return _subst(t, x, v)


def _subst(t: Term, x: VarName, v: Term) -> Term:
    if x not in t.free:
        return t
    if isinstance(t, Var):
        return v
    if isinstance(t, App):
        return App(_subst(t.fun, x, v), _subst(t.arg, x, v))
    if isinstance(t, Reset):
        return Reset(_subst(t.body, x, v))
    assert isinstance(t, _Binder)
    binder, body = t.binder, t.body
    if binder in v.free:
        fresh = fresh_like(binder, v.free | body.free | {x})
        body = _subst(body, binder, Var(fresh))
        binder = fresh
    return type(t)(binder, _subst(body, x, v))


def rename(t: Term, x: VarName, y: VarName) -> Term:
    return substitute(t, x, Var(y))


# -- alpha equivalence --------------------------------------------------------


def alpha_equal(t0: Term, t1: Term) -> bool:
    """True iff the terms differ only in the names of bound variables."""
    if t0 is t1:
        return True
    if t0.size != t1.size or t0.free != t1.free:
        return False
    if t0 == t1:
        return True
    return _alpha(t0, t1, {}, {}, 0)


def _alpha(t0: Term, t1: Term, env0: dict, env1: dict, depth: int) -> bool:
    while True:
        if type(t0) is not type(t1) or t0.size != t1.size:
            return False
        if isinstance(t0, Var):
            l0 = env0.get(t0.name)
            l1 = env1.get(t1.name)
            if l0 is None and l1 is None:
                return t0.name == t1.name
            return l0 == l1
        if isinstance(t0, App):
            if not _alpha(t0.fun, t1.fun, env0, env1, depth):
                return False
            t0, t1 = t0.arg, t1.arg
            continue
        if isinstance(t0, Reset):
            t0, t1 = t0.body, t1.body
            continue
        if isinstance(t0, Hole):
            return True
        env0 = {**env0, t0.binder: depth}
        env1 = {**env1, t1.binder: depth}
        depth += 1
        t0, t1 = t0.body, t1.body


# -- canonical renaming -------------------------------------------------------


class _NameSeq:
    """Deterministic name sequence ``base, base%1, ...`` skipping reserved names."""

    def __init__(self, base: str, reserved: frozenset[VarName]):
        self.base = base
        self.reserved = reserved
        self._names: list[VarName] = []
        self._next = 0

    def __getitem__(self, i: int) -> VarName:
        while len(self._names) <= i:
            v = VarName(self.base, self._next)
            self._next += 1
            if v not in self.reserved:
                self._names.append(v)
        return self._names[i]


class Canonicalizer:
    """Renames bound variables by nesting level and free variables by first
    occurrence, leaving the variables in ``keep`` untouched.

    One instance renames several terms jointly, so a free variable shared by
    them receives the same canonical name in each.
    """

    def __init__(self, keep: frozenset[VarName] = frozenset(), bound_base: str = "a", free_base: str = "c"):
        self.keep = keep
        self._bound = _NameSeq(bound_base, keep)
        self._free_names = _NameSeq(free_base, keep)
        self.free_map: dict[VarName, VarName] = {}

    def _free(self, v: VarName) -> VarName:
        if v in self.keep:
            return v
        got = self.free_map.get(v)
        if got is None:
            got = self._free_names[len(self.free_map)]
            self.free_map[v] = got
        return got

    def __call__(self, t: Term) -> Term:
        return self._go(t, {}, 0)

    def _go(self, t: Term, env: dict[VarName, VarName], depth: int) -> Term:
        if isinstance(t, Var):
            bound = env.get(t.name)
            if bound is not None:
                return t if bound == t.name else Var(bound)
            new = self._free(t.name)
            return t if new == t.name else Var(new)
        if isinstance(t, App):
            f = self._go(t.fun, env, depth)
            a = self._go(t.arg, env, depth)
            return t if f is t.fun and a is t.arg else App(f, a)
        if isinstance(t, Reset):
            b = self._go(t.body, env, depth)
            return t if b is t.body else Reset(b)
        if isinstance(t, Hole):
            return t
        assert isinstance(t, _Binder)
        new = self._bound[depth]
        body = self._go(t.body, {**env, t.binder: new}, depth + 1)
        if new == t.binder and body is t.body:
            return t
        return type(t)(new, body)


def canonical(t: Term, keep: frozenset[VarName] = frozenset()) -> Term:
    return Canonicalizer(keep)(t)
