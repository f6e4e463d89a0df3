"""Normal-form bisimulation: matching, the worklist checker, the closure
matcher and candidate verification."""

from .candidate import CandidateReport, PairResult, Style, verify_candidate
from .checker import (
    Bisimilar,
    CheckConfig,
    Inconclusive,
    InconclusiveReason,
    NotBisimilar,
    Verdict,
    check,
    closure_failures,
    replay_trace,
    successors,
)
from .closure import Closure, Relation, match_instance, member_closc
from .matching import (
    Contexts,
    Mismatch,
    MismatchKind,
    Mode,
    Obligation,
    TermPair,
    app_val,
    canonical_pair,
    ctx_obligations,
    expand,
    nf_match,
)

__all__ = [
    "CandidateReport",
    "PairResult",
    "Style",
    "verify_candidate",
    "Bisimilar",
    "CheckConfig",
    "Closure",
    "Contexts",
    "Inconclusive",
    "InconclusiveReason",
    "Mismatch",
    "MismatchKind",
    "Mode",
    "NotBisimilar",
    "Obligation",
    "Relation",
    "TermPair",
    "Verdict",
    "app_val",
    "canonical_pair",
    "check",
    "closure_failures",
    "ctx_obligations",
    "expand",
    "match_instance",
    "member_closc",
    "nf_match",
    "replay_trace",
    "successors",
]
