import pytest

from shiftbisim.bisim import CheckConfig, Mode, Style, TermPair, verify_candidate
from shiftbisim.corpus import load_corpus, load_defs
from shiftbisim.syntax import parse

DEFS = load_defs()
WITH_CANDIDATES = [fx for fx in load_corpus() if fx.candidate]


def p(src):
    return parse(src, DEFS)


def pair(a, b):
    return TermPair(p(a), p(b))


def cfg_for(fx):
    return CheckConfig(mode=fx.candidate_mode, up_to_context=fx.candidate_up_to)


@pytest.mark.parametrize("fx", WITH_CANDIDATES, ids=lambda fx: fx.name)
def test_corpus_candidates_verify(fx):
    rep = verify_candidate(fx.candidate, cfg_for(fx), fx.style)
    assert rep.ok, [r.to_json() for r in rep.failures]
    assert len(rep.results) == len(fx.candidate)


def test_turing_relation_big_step():
    r = [
        pair("theta theta", "<theta (shift k. k k)>"),
        pair("theta theta", r"(\x. <theta x>) (\x. <theta x>)"),
    ]
    assert verify_candidate(r, CheckConfig(), Style.BIG_STEP).ok


def test_turing_first_pair_alone_fails():
    r = [pair("theta theta", "<theta (shift k. k k)>")]
    rep = verify_candidate(r, CheckConfig(), Style.BIG_STEP)
    assert not rep.ok and "outside the closure" in rep.failures[0].reason


def test_normal_form_against_divergence():
    rep = verify_candidate([pair("x", "x Omega")], CheckConfig(fuel=500), Style.BIG_STEP)
    assert not rep.ok
    rep = verify_candidate([pair("x", "x Omega")], CheckConfig(fuel=500), Style.SMALL_STEP)
    assert not rep.ok


def test_small_step_diverging_argument():
    r = [pair(r"<(\x. <(\z. z) x>) Omega>", r"<(\z. z) Omega>")]
    assert verify_candidate(r, CheckConfig(), Style.SMALL_STEP).ok


def test_small_step_needs_helper_pairs():
    fx = next(f for f in WITH_CANDIDATES if f.style is Style.SMALL_STEP and len(f.candidate) > 2)
    rep = verify_candidate(fx.candidate[:1], cfg_for(fx), Style.SMALL_STEP)
    assert not rep.ok


def test_small_step_checks_both_directions():
    # left to right every step of Omega is answered by the pair itself;
    # right to left the value has nothing to match
    rep = verify_candidate([pair("Omega", "i")], CheckConfig(fuel=50), Style.SMALL_STEP)
    assert not rep.ok and rep.failures[0].reason.startswith("right side")


def test_refined_candidates_fail_in_plain_mode():
    fx = next(f for f in WITH_CANDIDATES if f.candidate_mode is Mode.REFINED and f.expected_plain.value == "not-bisimilar")
    rep = verify_candidate(fx.candidate, CheckConfig(mode=Mode.PLAIN), fx.style)
    assert not rep.ok


def test_without_up_to_context_exact_membership_is_required():
    r = [pair("theta theta", "<theta (shift k. k k)>"), pair("theta theta", r"(\x. <theta x>) (\x. <theta x>)")]
    assert not verify_candidate(r, CheckConfig(up_to_context=False), Style.BIG_STEP).ok


def test_report_json():
    rep = verify_candidate([pair("i", r"\y. y")], CheckConfig(), Style.BIG_STEP)
    doc = rep.to_json()
    assert doc["style"] == "bigstep" and doc["ok"] is True
    assert doc["pairs"][0]["ok"] is True
