import random

import pytest
from hypothesis import given, settings, strategies as st

from nilpeq.presentation import heisenberg
from nilpeq.words import (
    Commutator,
    Equation,
    EquationSystem,
    Generator,
    Grouped,
    UnknownGeneratorError,
    UnknownVariableError,
    Variable,
    Word,
    WordSyntaxError,
    comm,
    format_equation,
    format_system,
    format_word,
    gen,
    parse_equation,
    parse_system,
    parse_word,
    strip_trivial,
    var,
)

H = heisenberg()


def test_concatenation():
    assert parse_word("a1*b1") == Word((Generator("a", 1, 1), Generator("b", 1, 1)))


def test_commutator_power_and_inverse_central():
    w = parse_word("[a1,x]^2 * c^-1")
    assert w == Word((
        Commutator(Word((Generator("a", 1, 1),)), Word((Variable("x", 1),)), 2),
        Generator("c", 1, -1),
    ))


def test_intro_equation_factor_count():
    w = parse_word("a1*x^2*y^-1*z^3*a1*a2*y*a2^10*y*z", H)
    assert len(w.factors) == 10
    assert w.variables() == ["x", "y", "z"]


def test_whitespace_insensitive():
    assert parse_word(" a1 * [ x , a2 ] ^ -3 ") == parse_word("a1*[x,a2]^-3")


def test_left_normed_commutator():
    assert parse_word("[a1,a2,x]") == comm(gen("a", 1), gen("a", 2), var("x"))
    inner = parse_word("[a1,a2,x]").factors[0]
    assert isinstance(inner.left.factors[0], Commutator)


def test_identity_literal():
    assert parse_word("1") == Word()
    assert parse_word("a1*1*a2") == parse_word("a1*a2")
    assert format_word(Word()) == "1"


def test_bare_word_is_equation_to_one():
    eq = parse_equation("[x,y]*c^-1")
    assert eq.rhs == Word()
    assert parse_equation("[x,y]=c").normalized() != eq.lhs  # same value, different spelling
    assert format_equation(parse_equation("x = a1")) == "x = a1"


@pytest.mark.parametrize("text, pos", [("a1**a2", 3), ("[a1,x", 5), ("x^", 2), ("a1 $ a2", 3), ("(x", 2)])
def test_syntax_errors_carry_position(text, pos):
    with pytest.raises(WordSyntaxError) as info:
        parse_word(text)
    assert info.value.position == pos


def test_unknown_generator_and_variable():
    with pytest.raises(UnknownGeneratorError):
        parse_word("a3", H)
    with pytest.raises(UnknownGeneratorError):
        parse_word("b1", H)
    with pytest.raises(UnknownVariableError):
        parse_word("x*y", variables=["x"])


def test_system_parsing_and_declared_variables():
    text = "# two equations\nvars: x, y, z\n[x,y] = c\nx^2 = a1  # parity\n"
    system = parse_system(text, H)
    assert system.variables == ("x", "y", "z")
    assert len(system.equations) == 2
    assert parse_system(format_system(system), H) == system
    with pytest.raises(ValueError):
        EquationSystem((parse_equation("x=y"),), ("x",))


def test_strip_trivial_and_inverse():
    w = parse_word("a1^0*[x^0,a2]*(y)^0")
    assert strip_trivial(w) == Word((Commutator(Word(), gen("a", 2), 1),))
    assert parse_word("x*a1").inverse() == Word((Grouped(parse_word("x*a1"), -1),))


# -- properties -------------------------------------------------------------

names = st.sampled_from(["x", "y", "z", "y1", "yp2", "foo"])
exps = st.integers(-12, 12)
generators = st.builds(
    Generator, st.sampled_from("abd"), st.integers(1, 9), exps
) | st.builds(Generator, st.just("c"), st.just(1), exps)


def _words(children):
    return st.lists(children, max_size=4).map(lambda fs: Word(tuple(fs)))


factors = st.recursive(
    generators | st.builds(Variable, names, exps),
    lambda children: st.builds(Commutator, _words(children), _words(children), exps)
    | st.builds(Grouped, _words(children), exps),
    max_leaves=12,
)
words = st.lists(factors, max_size=6).map(lambda fs: Word(tuple(fs)))


@settings(max_examples=300, deadline=None)
@given(words)
def test_format_parse_round_trip(w):
    assert parse_word(format_word(w)) == w


@settings(max_examples=200, deadline=None)
@given(words, words)
def test_equation_round_trip(lhs, rhs):
    eq = Equation(lhs, rhs)
    assert parse_equation(format_equation(eq)) == eq


FUZZ_ALPHABET = "a1b2cdxyz^-*()[],=0123456789 \t#$"


def _fuzz_once(text):
    try:
        parse_equation(text)
    except WordSyntaxError as exc:
        assert 0 <= exc.position <= len(text)


@settings(max_examples=300, deadline=None)
@given(st.text(alphabet=FUZZ_ALPHABET, max_size=200))
def test_parser_is_total_on_short_fuzz(text):
    _fuzz_once(text)


def test_parser_is_total_on_long_fuzz():
    rng = random.Random(7)
    for size in (1000, 5000, 10_000):
        for _ in range(5):
            _fuzz_once("".join(rng.choice(FUZZ_ALPHABET) for _ in range(size)))
    _fuzz_once("(" * 10_000)
    _fuzz_once("[" * 5000 + "x" + ",y]" * 5000)
    long_word = "*".join(["a1^2", "[x,a2]"] * 2500)
    assert len(parse_word(long_word).factors) == 5000
