"""Bounded membership test for the substitutive, reflexive and context
closure of a finite relation.

``member_closc`` is sound: it answers True only when it has built a
derivation from these rules

* reflexivity up to alpha;
* membership in the relation, where every free variable of a related pair
  may be instantiated (separately on each side) by values whose
  applications to a fresh variable are again in the closure;
* congruence for abstraction, shift, reset and application (application
  congruence is derivable from the evaluation-context rule);
* the evaluation-context rule ``E0[t0] ~ E1[t1]``, trying splits of the two
  evaluation spines, with contexts related by plugging fresh variables.

Instantiation and the context rule each consume one unit of ``depth``.
It never composes with evaluation.

No derivation may conclude a pair of two distinct variables.  Such a pair
is never bisimilar, and admitting it is unsound: for ``R = {(x, y)}`` the
value clause asks for ``(x z, y z)``, which the context rule would build
from ``(x, y)`` itself.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Optional

from ..syntax import (
    Around,
    EvalCtx,
    Pure,
    Term,
    VarName,
    alpha_equal,
    split_at_first_reset,
    substitute,
)
from ..syntax.contexts import DELIMITER, AppArgOfValue, AppFunBefore
from ..syntax.terms import App, Lam, Reset, Shift, Var, _Binder, max_index
from .matching import TermPair, app_val, canonical_pair


def _tag(t: Term) -> str:
    return "val" if isinstance(t, Var) else type(t).__name__


class Relation:
    """A finite set of term pairs indexed for closure matching.

    Pairs are stored as given; an exact lookup works modulo renaming of free
    variables, which is always an instance of the substitution rule.
    """

    def __init__(self, pairs: Iterable[TermPair] = ()):
        self._pairs: list[TermPair] = []
        self._exact: set[TermPair] = set()
        self._buckets: dict[tuple[str, str], list[TermPair]] = {}
        for p in pairs:
            self.add(p)

    def add(self, p: TermPair) -> None:
        key = canonical_pair(p.left, p.right)
        if key in self._exact:
            return
        self._exact.add(key)
        self._pairs.append(p)
        self._buckets.setdefault((_tag(p.left), _tag(p.right)), []).append(p)

    def __contains__(self, p: object) -> bool:
        return isinstance(p, TermPair) and canonical_pair(p.left, p.right) in self._exact

    def __iter__(self) -> Iterator[TermPair]:
        return iter(self._pairs)

    def __len__(self) -> int:
        return len(self._pairs)

    def candidates(self, s0: Term, s1: Term) -> Iterator[TermPair]:
        tags0 = [_tag(s0)] + (["val"] if s0.is_value and _tag(s0) != "val" else [])
        tags1 = [_tag(s1)] + (["val"] if s1.is_value and _tag(s1) != "val" else [])
        for a in tags0:
            for b in tags1:
                yield from self._buckets.get((a, b), ())


def _match(p: Term, t: Term, sigma: dict, penv: dict, tenv: dict, level: int) -> bool:
    """Extend ``sigma`` so that ``p`` with its free variables replaced is
    alpha-equal to ``t``."""
    if isinstance(p, Var):
        lv = penv.get(p.name)
        if lv is not None:
            return isinstance(t, Var) and tenv.get(t.name) == lv
        if not t.is_value:
            return False
        if tenv and any(v in tenv for v in t.free):
            return False
        prev = sigma.get(p.name)
        if prev is None:
            sigma[p.name] = t
            return True
        return alpha_equal(prev, t)
    if type(p) is not type(t):
        return False
    if isinstance(p, App):
        return _match(p.fun, t.fun, sigma, penv, tenv, level) and _match(
            p.arg, t.arg, sigma, penv, tenv, level
        )
    if isinstance(p, Reset):
        return _match(p.body, t.body, sigma, penv, tenv, level)
    return _match(
        p.body,
        t.body,
        sigma,
        {**penv, p.binder: level},
        {**tenv, t.binder: level},
        level + 1,
    )


def match_instance(pattern: Term, t: Term) -> Optional[dict[VarName, Term]]:
    sigma: dict[VarName, Term] = {}
    return sigma if _match(pattern, t, sigma, {}, {}, 0) else None


def _spine(t: Term) -> list[tuple[tuple, Term]]:
    """Evaluation positions along the spine, as (frames hole-first, subterm)."""
    out = []
    frames: list = []
    while True:
        out.append((tuple(reversed(frames)), t))
        if isinstance(t, App):
            if not t.fun.is_value:
                frames.append(AppFunBefore(t.arg))
                t = t.fun
            else:
                frames.append(AppArgOfValue(t.fun))
                t = t.arg
        elif isinstance(t, Reset):
            frames.append(DELIMITER)
            t = t.body
        else:
            return out


class Closure:
    def __init__(self, rel: Relation, depth: int):
        self.rel = rel
        self.depth = depth
        self._memo: dict[tuple[Term, Term], bool | int] = {}

    def contains(self, s0: Term, s1: Term, d: Optional[int] = None) -> bool:
        return self._closc(s0, s1, self.depth if d is None else d)

    def _fresh(self, *ts: Term) -> VarName:
        return VarName("z", max_index(ts) + 1)

    def _closc(self, s0: Term, s1: Term, d: int) -> bool:
        if alpha_equal(s0, s1):
            return True
        if isinstance(s0, Var) and isinstance(s1, Var):
            return False
        # derivability only grows with depth: remember True, or the deepest
        # budget known to fail
        key = (s0, s1)
        got = self._memo.get(key)
        if got is True or (got is not None and got >= d):
            return got is True
        self._memo[key] = d  # derivations are finite: no self-support
        res = self._base(s0, s1, d) or self._congruence(s0, s1, d) or self._context(s0, s1, d)
        self._memo[key] = True if res else max(d, got if got is not None else -1)
        return res

    def _values(self, v0: Term, v1: Term, d: int) -> bool:
        if alpha_equal(v0, v1):
            return True
        if d <= 0:
            return False
        z = self._fresh(v0, v1)
        return self._closc(app_val(v0, z), app_val(v1, z), d - 1)

    def _base(self, s0: Term, s1: Term, d: int) -> bool:
        cands = list(self.rel.candidates(s0, s1))
        if not cands:
            return False  # an exact member would sit in one of these buckets
        if TermPair(s0, s1) in self.rel:
            return True
        for r in cands:
            sig0 = match_instance(r.left, s0)
            if sig0 is None:
                continue
            sig1 = match_instance(r.right, s1)
            if sig1 is None:
                continue
            if all(self._values(sig0[x], sig1[x], d) for x in sig0.keys() & sig1.keys()):
                return True
        return False

    def _instance_of_some_pair(self, u0: Term, u1: Term) -> bool:
        return any(
            match_instance(r.left, u0) is not None and match_instance(r.right, u1) is not None
            for r in self.rel.candidates(u0, u1)
        )

    def _congruence(self, s0: Term, s1: Term, d: int) -> bool:
        if type(s0) is not type(s1):
            return False
        if isinstance(s0, App):
            return self._closc(s0.fun, s1.fun, d) and self._closc(s0.arg, s1.arg, d)
        if isinstance(s0, Reset):
            return self._closc(s0.body, s1.body, d)
        if isinstance(s0, (Lam, Shift)):
            assert isinstance(s1, _Binder)
            z = self._fresh(s0, s1)
            return self._closc(
                substitute(s0.body, s0.binder, Var(z)), substitute(s1.body, s1.binder, Var(z)), d
            )
        return False

    def _context(self, s0: Term, s1: Term, d: int) -> bool:
        if d <= 0:
            return False
        sp0, sp1 = _spine(s0), _spine(s1)
        if len(sp0) == 1 and len(sp1) == 1:
            return False
        for i, (f0, u0) in enumerate(sp0):
            for j, (f1, u1) in enumerate(sp1):
                if i == j and (i == 0 or f0 == f1):
                    continue  # covered by congruence
                if not alpha_equal(u0, u1) and not self._instance_of_some_pair(u0, u1):
                    continue  # congruence fillers are reached through a deeper split
                if self._closc(u0, u1, d - 1) and self.contexts(EvalCtx(f0), EvalCtx(f1), d - 1):
                    return True
        return False

    def contexts(self, e0: EvalCtx, e1: EvalCtx, d: int) -> bool:
        s0, s1 = split_at_first_reset(e0), split_at_first_reset(e1)
        if isinstance(s0, Pure) and isinstance(s1, Pure):
            x = VarName("z", max_index(_ctx_terms(e0, e1)) + 1)
            return self._closc(s0.f.plug(Var(x)), s1.f.plug(Var(x)), d)
        if isinstance(s0, Around) and isinstance(s1, Around):
            x = VarName("z", max_index(_ctx_terms(e0, e1)) + 1)
            return self._closc(s0.outer.plug(Var(x)), s1.outer.plug(Var(x)), d) and self._closc(
                Reset(s0.inner.plug(Var(x))), Reset(s1.inner.plug(Var(x))), d
            )
        return False


def _ctx_terms(*cs: EvalCtx) -> list[Term]:
    from ..syntax import Hole

    return [c.plug(Hole()) for c in cs]


def member_closc(p: TermPair, r: Relation | Iterable[TermPair], depth: int = 6) -> bool:
    if depth < 0:
        raise ValueError("depth must be non-negative")
    rel = r if isinstance(r, Relation) else Relation(r)
    return Closure(rel, depth).contains(p.left, p.right)
