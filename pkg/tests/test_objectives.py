import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ltlrepair.ltl import FALSE, TRUE, Not, parse, render
from ltlrepair.objectives import (
    FitnessEvaluator,
    Specification,
    check_bc,
    consistency,
    is_valid_resolution,
    levenshtein,
    resolved_ratio,
    semantic_similarity,
    syntactic_similarity,
)
from ltlrepair.semantics import BoundedChecker
from oracles import levenshtein_rec, random_formula

A = ("h", "m", "p")
DOM = ["G((p && X p) -> X X !h)"]
G1, G2 = "G(m -> X !p)", "G(h -> X p)"
BC = parse("F(h && m)")

ORIG = Specification.from_text(A, DOM, [G1, G2], "minepump")
RES1 = Specification.from_text(A, DOM, [G1, "G(h && !m -> X p)"])
RES2 = Specification.from_text(A, DOM, ["G(m && !h -> X !p)", G2])

# exact enumeration over all 8^5 bases, frozen
RES1_SEMANTIC = 0.3146551724137931
RES2_SEMANTIC = 0.4088204410220511


def test_check_bc_minepump():
    report = check_bc(ORIG, BC, 5)
    assert report.inconsistency and all(report.minimality) and report.non_triviality
    assert report.holds


def test_check_bc_false_fails_minimality():
    report = check_bc(ORIG, FALSE, 5)
    assert report.inconsistency
    assert report.minimality == (False, False)
    assert not report.holds


def test_check_bc_negated_goals_is_trivial():
    report = check_bc(ORIG, Not(ORIG.goals_formula()), 5)
    assert not report.non_triviality
    assert not report.holds


def test_consistency_cases():
    assert consistency(ORIG, 5) == 1.0
    assert consistency(Specification.from_text(["p"], [], ["p", "!p"]), 3) == 0.0
    assert consistency(Specification.from_text(["p"], ["G !p"], ["G p"]), 3) == 0.5


def test_resolved_ratio_cases():
    assert resolved_ratio(RES1, [BC], 5) == 1.0
    assert resolved_ratio(ORIG, [BC], 5) == 0.0
    assert resolved_ratio(ORIG, [TRUE], 5) == 1.0
    assert resolved_ratio(ORIG, [BC, TRUE], 5) == 0.5
    with pytest.raises(ValueError):
        resolved_ratio(ORIG, [], 5)


def test_syntactic_examples():
    assert syntactic_similarity(ORIG, ORIG) == 1.0
    a = Specification.from_text(["p", "q"], [], ["G(p)"])
    b = Specification.from_text(["p", "q"], [], ["G(q)"])
    assert levenshtein(a.tokens(), b.tokens()) == levenshtein_rec(a.tokens(), b.tokens()) == 1
    assert syntactic_similarity(a, b) == 0.75
    short = Specification.from_text(["p", "q", "r"], [], ["p"])
    long_ = Specification.from_text(["p", "q", "r"], [], ["p && q && r"])
    assert syntactic_similarity(short, long_) < 0.5


def _spec(seed, n_goals=2):
    rng = random.Random(seed)
    goals = [random_formula(rng, ["a", "b"], 3) for _ in range(n_goals)]
    return Specification(("a", "b"), (), tuple(goals))


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(0, 2**32 - 1))
def test_levenshtein_matches_recursive_oracle(s1, s2):
    a, b = _spec(s1).tokens(), _spec(s2).tokens()
    assert levenshtein(a, b) == levenshtein_rec(a, b)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(0, 2**32 - 1))
def test_syntactic_symmetric_and_bounded(s1, s2):
    a, b = _spec(s1), _spec(s2)
    v = syntactic_similarity(a, b)
    assert v == syntactic_similarity(b, a)
    assert 0.0 <= v <= 1.0
    assert (v == 1.0) == (a.tokens() == b.tokens())


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(0, 2**32 - 1), st.sampled_from(["a", "b", "(", "G"]))
def test_levenshtein_single_edit(s, pos, token):
    a = _spec(s).tokens()
    i = pos % (len(a) + 1)
    inserted = a[:i] + [token] + a[i:]
    assert abs(levenshtein(a, _spec(s + 1).tokens()) - levenshtein(inserted, _spec(s + 1).tokens())) <= 1


def test_semantic_examples():
    assert semantic_similarity(ORIG, ORIG, 5) == 1.0
    s = Specification.from_text(["p"], [], ["p"])
    c = Specification.from_text(["p"], [], ["!p"])
    assert semantic_similarity(s, c, 4) == 0.0
    assert semantic_similarity(ORIG, RES1, 5) == RES1_SEMANTIC
    assert semantic_similarity(ORIG, RES2, 5) == RES2_SEMANTIC


def test_semantic_both_unsat_is_zero():
    a = Specification.from_text(["p"], [], ["p && !p"])
    assert semantic_similarity(a, a, 3) == 0.0


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(0, 2**32 - 1))
def test_semantic_symmetric(s1, s2):
    a, b = _spec(s1), _spec(s2)
    v = semantic_similarity(a, b, 3)
    assert v == semantic_similarity(b, a, 3)
    assert 0.0 <= v <= 1.0


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_inconsistent_candidate_has_zero_semantic(seed):
    rng = random.Random(seed)
    goal = random_formula(rng, list(A), 3)
    cand = Specification(A, ORIG.dom, (goal, parse("p && !p")))
    assert consistency(cand, 4) == 0.0
    assert semantic_similarity(ORIG, cand, 4) == 0.0


def test_ground_truth_resolutions_valid():
    assert is_valid_resolution(ORIG, RES1, [BC], 5)
    assert is_valid_resolution(ORIG, RES2, [BC], 5)
    assert not is_valid_resolution(ORIG, ORIG, [BC], 5)


def test_similarity_post_filter():
    assert is_valid_resolution(ORIG, RES1, [BC], 5, min_similarity=0.7)
    assert not is_valid_resolution(ORIG, RES1, [BC], 5, min_similarity=0.8)


def test_evaluator_memoizes():
    ev = FitnessEvaluator(ORIG, [BC], 5, BoundedChecker())
    first = ev(RES1)
    assert ev(Specification.from_text(A, DOM, [G1, "G(h && !m -> X p)"])) is first
    assert ev.computed == 1
    assert tuple(first) == (1.0, 1.0, 0.75, RES1_SEMANTIC)
    assert tuple(ev(ORIG)) == (1.0, 0.0, 1.0, 1.0)
    assert ev.is_valid(RES1) and not ev.is_valid(ORIG)


def test_specification_validation():
    with pytest.raises(ValueError):
        Specification(("p",), (), ())
    with pytest.raises(ValueError):
        Specification.from_text(["p"], [], [parse("q")])


def test_tokens_concatenate_goals():
    assert ORIG.tokens() == render(parse(G1)) + render(parse(G2))
