"""Terms, contexts, binding machinery and the concrete syntax of the calculus."""

from .contexts import (
    DELIMITER,
    EMPTY,
    EMPTY_PURE,
    AppArgOfValue,
    AppFunBefore,
    Around,
    Delimiter,
    EvalCtx,
    Pure,
    PureCtx,
    compose,
    context_of,
    plug,
    split_at_first_reset,
)
from .terms import (
    App,
    Canonicalizer,
    FreshSupply,
    Hole,
    Lam,
    Reset,
    Shift,
    Term,
    Var,
    VarName,
    alpha_equal,
    apps,
    canonical,
    free_vars,
    fresh_like,
    is_value,
    max_index,
    name,
    rename,
    substitute,
)
from .text import ParseError, parse, parse_with_hole, show

__all__ = [
    "DELIMITER",
    "EMPTY",
    "EMPTY_PURE",
    "App",
    "AppArgOfValue",
    "AppFunBefore",
    "Around",
    "Canonicalizer",
    "Delimiter",
    "EvalCtx",
    "FreshSupply",
    "Hole",
    "Lam",
    "ParseError",
    "Pure",
    "PureCtx",
    "Reset",
    "Shift",
    "Term",
    "Var",
    "VarName",
    "alpha_equal",
    "apps",
    "canonical",
    "compose",
    "context_of",
    "free_vars",
    "fresh_like",
    "is_value",
    "max_index",
    "name",
    "parse",
    "parse_with_hole",
    "plug",
    "rename",
    "show",
    "split_at_first_reset",
    "substitute",
]
