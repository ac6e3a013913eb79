import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tarl.formulas import (
    And, Fusion, Imp, Neg, Or, ParseError, Var,
    desugar_fusion, is_core, parse_formula, print_formula,
    shared_variables, substitute, variables,
)
from tarl.gen import random_formula


def v(name):
    return Var(name)


def test_parse_smallest_implication():
    assert parse_formula("p -> p") == Imp(v("p"), v("p"))


def test_parse_fusion_conjunction():
    assert parse_formula("(p o q) & r") == And(Fusion(v("p"), v("q")), v("r"))


def test_parse_precedence_chain():
    # ~ binds tightest, -> associates right
    assert parse_formula("~p -> q -> r") == Imp(Neg(v("p")), Imp(v("q"), v("r")))


def test_parse_left_associative_connectives():
    assert parse_formula("p & q & r") == And(And(v("p"), v("q")), v("r"))
    assert parse_formula("p | q | r") == Or(Or(v("p"), v("q")), v("r"))
    assert parse_formula("p o q o r") == Fusion(Fusion(v("p"), v("q")), v("r"))


def test_fusion_binds_tighter_than_and():
    assert parse_formula("p o q & r") == And(Fusion(v("p"), v("q")), v("r"))


def test_unicode_aliases():
    assert parse_formula("p ∧ q → ¬r ∨ p∘q") == parse_formula("p & q -> ~r | p o q")


def test_parse_errors_carry_position():
    with pytest.raises(ParseError) as e:
        parse_formula("p -> ")
    assert e.value.position == 5
    with pytest.raises(ParseError):
        parse_formula("(p -> q")
    with pytest.raises(ParseError):
        parse_formula("p q")


def test_keyword_o_is_not_an_identifier():
    with pytest.raises(ParseError):
        parse_formula("o -> o")


def test_print_examples():
    assert print_formula(Imp(v("p"), v("p"))) == "p -> p"
    assert print_formula(And(Fusion(v("p"), v("q")), v("r"))) == "p o q & r"
    assert print_formula(Neg(Neg(v("p")))) == "~~p"


def test_print_no_redundant_parens_on_atoms():
    assert "(" not in print_formula(Neg(v("p")))
    assert print_formula(Or(v("p"), And(v("q"), v("r")))) == "p | q & r"


def test_desugar_single_fusion():
    assert desugar_fusion(parse_formula("p o q")) == parse_formula("~(p -> ~q)")


def test_desugar_is_identity_on_core():
    f = parse_formula("p -> q")
    assert desugar_fusion(f) == f


def test_desugar_nested_fusion():
    got = desugar_fusion(parse_formula("(p o q) o r"))
    assert got == parse_formula("~(~(p -> ~q) -> ~r)")
    assert is_core(got)


def test_variables():
    assert variables(parse_formula("p & q")) == {"p", "q"}
    assert variables(parse_formula("(p o q) & r")) == {"p", "q", "r"}
    assert variables(parse_formula("~~p")) == {"p"}


def test_shared_variables():
    assert shared_variables(parse_formula("p & q"), v("p")) == {"p"}
    assert shared_variables(v("p"), v("q")) == frozenset()


def test_substitute():
    f = parse_formula("a -> a & b")
    got = substitute(f, {"a": parse_formula("p | q")})
    assert got == parse_formula("(p | q) -> (p | q) & b")


def test_bad_variable_name():
    with pytest.raises(ValueError):
        Var("P")
    with pytest.raises(ValueError):
        Var("o")


def test_seeded_roundtrip_bulk():
    rng = random.Random(20250810)
    for size in range(1, 15):
        for _ in range(50):
            f = random_formula(rng, size, ["p", "q", "r", "s"])
            assert parse_formula(print_formula(f)) == f


def test_desugar_preserves_variables_bulk():
    rng = random.Random(99)
    for _ in range(200):
        f = random_formula(rng, 10, ["p", "q", "r"])
        core = desugar_fusion(f)
        assert variables(core) == variables(f)
        assert desugar_fusion(core) == core  # idempotent


@st.composite
def formulas(draw, max_size=10):
    size = draw(st.integers(min_value=1, max_value=max_size))
    seed = draw(st.integers(min_value=0, max_value=2 ** 32))
    return random_formula(random.Random(seed), size, ["p", "q", "r", "s"])


@settings(max_examples=300, deadline=None)
@given(formulas())
def test_roundtrip_property(f):
    assert parse_formula(print_formula(f)) == f
