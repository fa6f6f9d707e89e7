import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ltlrepair.ltl import FALSE, Atom, Not, And, parse
from ltlrepair.semantics import (
    AlphabetMismatchError,
    BoundedChecker,
    LassoTrace,
    NoLassoWithinBound,
    ResourceLimitExceeded,
    SatWitness,
    count_bases,
    eval_lasso,
    sat_bounded,
)
from oracles import naive_eval, random_formula, random_trace

MINEPUMP_ALPHABET = ("h", "m", "p")


def lasso(base, loop=0):
    return LassoTrace(tuple(frozenset(s) for s in base), loop)


def test_eval_examples():
    assert eval_lasso(parse("G(p || q)"), lasso([{"p"}, {"p", "q"}], 1))
    assert not eval_lasso(parse("F p"), lasso([set()]))
    assert eval_lasso(parse("p U q"), lasso([{"p"}, {"p"}, {"q"}], 2))


def test_eval_weak_until_and_release():
    stuck = lasso([{"p"}])
    assert eval_lasso(parse("p W q"), stuck)
    assert not eval_lasso(parse("p U q"), stuck)
    assert eval_lasso(parse("q R p"), stuck)
    assert not eval_lasso(parse("q R p"), lasso([{"p"}, set()], 0))


def test_eval_alphabet_mismatch():
    t = LassoTrace((frozenset({"p"}),), 0, ("p",))
    with pytest.raises(AlphabetMismatchError):
        eval_lasso(parse("q"), t)
    with pytest.raises(AlphabetMismatchError):
        LassoTrace((frozenset({"z"}),), 0, ("p",))


def test_trace_validation_and_json():
    with pytest.raises(ValueError):
        lasso([{"p"}], 1)
    with pytest.raises(ValueError):
        lasso([])
    t = lasso([{"p", "q"}, set()], 1)
    assert LassoTrace.from_json(json.dumps(t.to_json())) == t


@settings(max_examples=600, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 3), st.integers(1, 5))
def test_eval_matches_unrolled_oracle(seed, n_atoms, k):
    rng = random.Random(seed)
    alphabet = ["a", "b", "c"][:n_atoms]
    f = random_formula(rng, alphabet, 5)
    base, loop = random_trace(rng, alphabet, k)
    assert eval_lasso(f, LassoTrace(tuple(base), loop)) == naive_eval(f, base, loop)


def test_sat_examples():
    assert isinstance(sat_bounded(parse("p && !p"), 3), NoLassoWithinBound)
    verdict = sat_bounded(parse("G(p || q)"), 2)
    assert isinstance(verdict, SatWitness)
    assert eval_lasso(parse("G(p || q)"), verdict.trace)


def test_sat_minepump_conflict():
    f = parse("G((p && X p) -> X X !h) && G(m -> X !p) && G(h -> X p) && F(h && m)")
    assert sat_bounded(f, 5, MINEPUMP_ALPHABET) == NoLassoWithinBound(5)


def test_count_examples():
    assert count_bases(parse("true"), 2, ["p"]) == 4
    assert count_bases(parse("p && !p"), 3, ["p"]) == 0
    assert count_bases(parse("G p"), 2, ["p", "q"]) == 4


def test_count_minepump_golden():
    f = parse("G((p && X p) -> X X !h) && G(m -> X !p) && G(h -> X p)")
    assert count_bases(f, 5, MINEPUMP_ALPHABET) == 1168


def test_count_batch_matches_single():
    checker = BoundedChecker()
    fs = [parse("F p"), parse("G q"), parse("p U q")]
    assert checker.count(fs, 3, ["p", "q"]) == [checker.count(f, 3, ["p", "q"]) for f in fs]


def test_bound_must_be_positive():
    with pytest.raises(ValueError):
        sat_bounded(parse("p"), 0)
    with pytest.raises(ValueError):
        count_bases(parse("p"), 0)


def test_resource_limit():
    checker = BoundedChecker(max_bases=1000)
    with pytest.raises(ResourceLimitExceeded):
        checker.count(parse("p"), 5, ["p", "q", "r"])
    with pytest.raises(ResourceLimitExceeded):
        BoundedChecker(timeout=0.0).count(parse("G p"), 4, ["p", "q"])


def _random_case(seed):
    rng = random.Random(seed)
    alphabet = ["a", "b", "c"][: rng.randint(1, 3)]
    return rng, alphabet, random_formula(rng, alphabet, 4)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_witness_satisfies(seed):
    _, alphabet, f = _random_case(seed)
    verdict = sat_bounded(f, 3, alphabet)
    if verdict.sat:
        assert eval_lasso(f, verdict.trace)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_sat_monotone_in_bound(seed):
    _, alphabet, f = _random_case(seed)
    verdicts = [sat_bounded(f, k, alphabet).sat for k in range(1, 5)]
    assert verdicts == sorted(verdicts)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 4))
def test_count_complement_covers_all(seed, k):
    _, alphabet, f = _random_case(seed)
    total = (2 ** len(alphabet)) ** k
    assert count_bases(f, k, alphabet) + count_bases(Not(f), k, alphabet) >= total


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 4))
def test_count_conjunction_bounded(seed, k):
    rng, alphabet, f = _random_case(seed)
    g = random_formula(rng, alphabet, 4)
    both = count_bases(And(f, g), k, alphabet)
    assert both <= min(count_bases(f, k, alphabet), count_bases(g, k, alphabet))


def test_count_range():
    assert count_bases(FALSE, 2, ["p"]) == 0
    assert count_bases(Atom("p"), 2, ["p"]) == 2
