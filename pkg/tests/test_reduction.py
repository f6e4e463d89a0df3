import pytest
from hypothesis import given
from hypothesis import strategies as st

from gen import closed_values, terms
from oracle import alpha_eq, classify, ostep
from shiftbisim.corpus import load_defs
from shiftbisim.reduction import (
    Beta,
    Capture,
    ControlStuck,
    FuelExhausted,
    Normal,
    OpenStuck,
    ResetValue,
    Split,
    Value,
    decompose,
    evaluate,
    is_normal,
    normal_form,
    step,
    trace,
)
from shiftbisim.syntax import EvalCtx, PureCtx, Reset, VarName, alpha_equal, context_of, parse, parse_with_hole

DEFS = load_defs()


def p(src):
    return parse(src, DEFS)


CAPTURE_TERM = r"<(shift k1. i (k1 i)) (shift k2. omega) (omega omega)>"


class TestDecompose:
    def test_beta_at_root(self):
        d = decompose(p(r"(\x. x) (\y. y)"))
        assert d == Split(EvalCtx(), Beta(VarName("x"), p("x"), p(r"\y. y")))

    def test_capture_names_the_pure_context(self):
        d = decompose(p(CAPTURE_TERM))
        assert isinstance(d, Split) and isinstance(d.r, Capture)
        assert d.e == EvalCtx()
        want = context_of(parse_with_hole(r"@ (shift k2. omega) (omega omega)", DEFS)).as_pure()
        assert d.r.f == want

    def test_open_stuck(self):
        d = decompose(p(r"x (\y. y)"))
        assert d == Normal(OpenStuck(EvalCtx(), VarName("x"), p(r"\y. y")))

    def test_control_stuck_under_pure_context(self):
        d = decompose(p(r"(\z. z) (shift k. k)"))
        assert isinstance(d, Normal) and isinstance(d.outcome, ControlStuck)
        assert d.outcome.f == context_of(parse_with_hole(r"(\z. z) @")).as_pure()

    def test_reset_value(self):
        d = decompose(p(r"(\z. z) <\y. y>"))
        assert isinstance(d, Split) and d.r == ResetValue(p(r"\y. y"))

    def test_nearest_delimiter(self):
        d = decompose(p(r"<(\z. z) <x (shift k. k)>>"))
        assert isinstance(d.r, Capture)
        assert d.e == context_of(parse_with_hole(r"<(\z. z) @>"))


class TestStep:
    def test_capture_step(self):
        got = step(p(CAPTURE_TERM))
        assert alpha_equal(got, p(r"<i ((\x. <x (shift k2. omega) (omega omega)>) i)>"))

    def test_reset_of_value(self):
        assert step(p(r"<\y. y>")) == p(r"\y. y")

    def test_values_are_normal(self):
        assert step(p(r"\x. x")) is None and is_normal(p("x"))

    def test_continuation_parameter_avoids_context(self):
        t = p(r"<x (shift k. k)>")
        got = step(t)
        lam = got.body
        assert lam.binder not in parse_with_hole("x @").free


class TestEvaluate:
    def test_capture_term_value(self):
        assert evaluate(p(CAPTURE_TERM), 100) == Value(p("omega"))

    def test_divergence(self):
        o = evaluate(p("Omega"), 1000)
        assert isinstance(o, FuelExhausted) and o.steps == 1000 and not o.looping

    def test_cycle_detection(self):
        o = evaluate(p("Omega"), 1000, detect_cycles=True)
        assert isinstance(o, FuelExhausted) and o.looping and o.steps < 10

    def test_growing_divergence_is_not_a_cycle(self):
        t = p(r"(\x. x x x) (\x. x x x)")
        o = evaluate(t, 300, detect_cycles=True)
        assert isinstance(o, FuelExhausted) and not o.looping

    def test_open_stuck_any_fuel(self):
        for fuel in (0, 5):
            assert evaluate(p(r"x (\y. y)"), fuel) == OpenStuck(EvalCtx(), VarName("x"), p(r"\y. y"))

    def test_zero_fuel(self):
        assert isinstance(evaluate(p(r"(\x. x) y"), 0), FuelExhausted)
        assert evaluate(p(r"(\x. x) y"), 1) == Value(p("y"))

    def test_negative_fuel(self):
        with pytest.raises(ValueError):
            evaluate(p("x"), -1)

    def test_normal_form_helper(self):
        assert normal_form(p("Omega"), 50) is None
        assert normal_form(p(r"<<\y. y>>")) == p(r"\y. y")


class TestTrace:
    def test_value_alone(self):
        assert trace(p(r"\x. x"), 10) == [p(r"\x. x")]

    def test_double_reset(self):
        assert trace(p(r"<<\y. y>>"), 10) == [p(r"<<\y. y>>"), p(r"<\y. y>"), p(r"\y. y")]

    def test_truncated(self):
        assert len(trace(p("Omega"), 7)) == 8


@given(terms())
def test_step_matches_structural_oracle(t):
    got, want = step(t), ostep(t)
    assert (got is None) == (want is None)
    if got is not None:
        assert alpha_eq(got, want)


@given(terms())
def test_classification_matches_oracle(t):
    d = decompose(t)
    kind = classify(t)
    if isinstance(d, Split):
        assert kind == "redex"
    else:
        o = d.outcome
        assert kind == {Value: "value", ControlStuck: "control", OpenStuck: "open"}[type(o)]


@given(terms())
def test_decomposition_replugs(t):
    d = decompose(t)
    if isinstance(d, Split):
        assert d.e.plug(d.r.term) == t
    else:
        assert d.outcome.term == t


@given(terms())
def test_outcomes_are_classified_soundly(t):
    o = evaluate(t, 50)
    if isinstance(o, Value):
        assert o.v.is_value
    elif isinstance(o, (ControlStuck, OpenStuck)):
        assert step(o.term) is None
        if isinstance(o, ControlStuck):
            assert isinstance(o.f, PureCtx)


@given(terms(), st.integers(0, 30), st.integers(0, 30))
def test_fuel_monotone(t, n, extra):
    o = evaluate(t, n)
    if not isinstance(o, FuelExhausted):
        assert alpha_equal(evaluate(t, n + extra).term, o.term)


@given(terms(), st.sampled_from(["x", "y", "z", "k"]), closed_values())
def test_step_commutes_with_closed_substitution(t, x, v):
    from shiftbisim.syntax import substitute

    nxt = step(t)
    if nxt is not None:
        assert alpha_equal(step(substitute(t, x, v)), substitute(nxt, x, v))


@given(terms())
def test_reset_reducts_keep_their_delimiter(t):
    for u in trace(Reset(t), 40):
        assert u.is_value or isinstance(u, Reset)
    assert not isinstance(evaluate(Reset(t), 40), ControlStuck)


@given(terms())
def test_trace_adjacent_pairs_are_steps(t):
    seq = trace(t, 20)
    for a, b in zip(seq, seq[1:]):
        assert step(a) == b
