import random

import pytest
from hypothesis import given, settings, strategies as st

from bilkit.formula import (
    And,
    Atom,
    Bottom,
    Coimpl,
    EnumerationBudgetError,
    Impl,
    Or,
    ParseError,
    Signature,
    big_and,
    big_or,
    enumerate_formulas,
    letters,
    parse,
    random_formula,
    rank,
    render,
    top,
)
from bilkit.kripke import PointedModel
from bilkit.semantics import satisfies


def test_parse_spec_examples():
    assert parse("p -> (q -< false)") == Impl(Atom("p"), Coimpl(Atom("q"), Bottom()))
    assert parse("~p") == Impl(Atom("p"), Bottom())
    assert parse("p & q | r") == Or(And(Atom("p"), Atom("q")), Atom("r"))
    assert parse("true") == Impl(Bottom(), Bottom())


def test_parse_precedence_and_associativity():
    # -> right associative, -< left associative, -< binds tighter than ->
    assert parse("a -> b -> c") == Impl(Atom("a"), Impl(Atom("b"), Atom("c")))
    assert parse("a -< b -< c") == Coimpl(Coimpl(Atom("a"), Atom("b")), Atom("c"))
    assert parse("p -< q -> r") == Impl(Coimpl(Atom("p"), Atom("q")), Atom("r"))
    assert parse("~p & q") == And(Impl(Atom("p"), Bottom()), Atom("q"))
    assert parse("a | b & c") == Or(Atom("a"), And(Atom("b"), Atom("c")))


def test_parse_comments_and_whitespace():
    text = """
    p ->   # the antecedent
    q      # the consequent
    """
    assert parse(text) == Impl(Atom("p"), Atom("q"))


def test_parse_dashed_letters():
    # letters may contain '-', operators still win before '<' and '>'
    assert parse("q-b -> q+b") == Impl(Atom("q-b"), Atom("q+b"))
    assert parse("q-b-<p") == Coimpl(Atom("q-b"), Atom("p"))


def test_parse_errors_carry_positions():
    with pytest.raises(ParseError) as err:
        parse("p -> (q")
    assert err.value.col > 0
    with pytest.raises(ParseError):
        parse("p ->")
    with pytest.raises(ParseError):
        parse("p @ q")
    with pytest.raises(ParseError):
        parse("(p | q))")


def test_render_spec_examples():
    assert render(Impl(Atom("p"), Bottom())) == "p -> false"
    assert render(Or(And(Atom("p"), Atom("q")), Atom("r"))) == "p & q | r"


def test_render_minimal_parens():
    assert render(Impl(Impl(Atom("a"), Atom("b")), Atom("c"))) == "(a -> b) -> c"
    assert render(Impl(Atom("a"), Impl(Atom("b"), Atom("c")))) == "a -> b -> c"
    assert render(Or(Atom("a"), Or(Atom("b"), Atom("c")))) == "a | (b | c)"
    assert render(Coimpl(Coimpl(Atom("a"), Atom("b")), Atom("c"))) == "a -< b -< c"
    assert render(And(Or(Atom("a"), Atom("b")), Atom("c"))) == "(a | b) & c"


def test_round_trip_seeded_thousand():
    rng = random.Random(42)
    sig = Signature(["p", "q", "r_1", "q+a", "s-x"])
    for _ in range(1000):
        f = random_formula(sig, 4, rng)
        assert parse(render(f)) == f


@st.composite
def formulas(draw, depth=4):
    if depth == 0 or draw(st.booleans()):
        name = draw(st.sampled_from(["p", "q", "zz9", "a_b"]))
        return draw(st.sampled_from([Bottom(), Atom(name)]))
    ctor = draw(st.sampled_from([And, Or, Impl, Coimpl]))
    return ctor(draw(formulas(depth=depth - 1)), draw(formulas(depth=depth - 1)))


@settings(max_examples=200, deadline=None)
@given(formulas())
def test_round_trip_hypothesis(f):
    assert parse(render(f)) == f


def test_letters():
    assert list(letters(parse("p -> q"))) == ["p", "q"]
    assert list(letters(Bottom())) == []
    assert list(letters(parse("q & p | q"))) == ["q", "p"]


def test_rank_spec_examples():
    assert rank(Atom("p")) == 0
    assert rank(parse("p -> q")) == 1
    assert rank(parse("(p -< q) -> r")) == 2
    assert rank(parse("p & q | r")) == 0
    assert rank(top()) == 1


def test_empty_connective_conventions():
    assert big_and([]) == top()
    assert big_or([]) == Bottom()
    assert big_and([Atom("p")]) == Atom("p")
    assert big_or([Atom("p"), Atom("q")]) == Or(Atom("p"), Atom("q"))


def test_enumerate_rank0_two_classes(all_small_models):
    context = [PointedModel(m, w) for m in all_small_models for w in m.worlds]
    reps = enumerate_formulas(["p"], 0, context)
    assert {render(f) for f in reps} == {"false", "p"}


def test_enumerate_empty_signature_has_top_and_bottom():
    from bilkit.kripke import make_model

    m = make_model(["a"], [], {}, signature=[])
    reps = enumerate_formulas([], 1, [PointedModel(m, "a")])
    values = {satisfies(m, "a", f) for f in reps}
    assert values == {True, False}


def test_enumerate_rank1_contains_negation(all_small_models):
    context = [PointedModel(m, w) for m in all_small_models for w in m.worlds]
    reps = enumerate_formulas(["p"], 1, context)
    want = parse("~p")
    key = tuple(satisfies(pm.model, pm.point, want) for pm in context)
    keys = {tuple(satisfies(pm.model, pm.point, f) for pm in context) for f in reps}
    assert key in keys


def test_enumerate_covers_random_formulas(all_small_models):
    # every bounded-rank formula agrees with some representative on the context
    context = [PointedModel(m, w) for m in all_small_models for w in m.worlds]
    reps = enumerate_formulas(["p"], 2, context)
    vectors = {tuple(satisfies(pm.model, pm.point, f) for pm in context) for f in reps}
    rng = random.Random(7)
    for _ in range(100):
        f = random_formula(["p"], 2, rng)
        vec = tuple(satisfies(pm.model, pm.point, f) for pm in context)
        assert vec in vectors
    for f in reps:
        assert rank(f) <= 2
        assert letters(f) <= Signature(["p"])


def test_enumerate_deterministic(all_small_models):
    context = [PointedModel(m, w) for m in all_small_models for w in m.worlds]
    a = enumerate_formulas(["p"], 2, context)
    b = enumerate_formulas(["p"], 2, context)
    assert a == b


def test_enumerate_budget_error(chain2):
    with pytest.raises(EnumerationBudgetError):
        enumerate_formulas(["p"], 3, [PointedModel(chain2, "a")], budget=2)


def test_enumerate_requires_context(chain2):
    with pytest.raises(ValueError):
        enumerate_formulas(["p"], 1, [])


def test_signature_validation():
    with pytest.raises(ValueError):
        Signature(["p", "p"])
    with pytest.raises(ValueError):
        Signature(["1bad"])
    sig = Signature(["b", "a"])
    assert list(sig) == ["b", "a"]
    assert sig == Signature(["a", "b"])  # set semantics
