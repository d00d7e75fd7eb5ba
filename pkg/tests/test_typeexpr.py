import random

import pytest
from hypothesis import given, strategies as st

from conftest import seeds
from stepcbn._lexer import ParseError
from stepcbn.typeexpr import (
    BOT, NAT, TOP, Arrow, Floor, Mu, TVar, apply_functional, floor_wrap, is_guarded, mu_unroll,
    parse_type, print_type, types_equal, unfold,
)


def random_body(rng, depth, bound=1):
    """A type expression with TVar indices below ``bound``."""
    r = rng.random()
    if depth <= 0 or r < 0.3:
        return rng.choice([NAT, TOP, BOT, TVar(rng.randrange(bound))])
    if r < 0.45:
        return Mu(random_body(rng, depth - 1, bound + 1))
    if r < 0.55:
        return Floor(random_body(rng, depth - 1, bound), rng.randint(0, 6))
    return Arrow(random_body(rng, depth - 1, bound), random_body(rng, depth - 1, bound))


def random_mu(rng, depth=3):
    return Mu(random_body(rng, depth))


class TestParse:
    def test_arrow(self):
        assert parse_type("Nat -> Nat") == Arrow(NAT, NAT)

    def test_mu(self):
        assert parse_type("mu X. Nat -> X") == Mu(Arrow(NAT, TVar(0)))

    def test_right_associative(self):
        assert parse_type("Nat -> Nat -> Nat") == Arrow(NAT, Arrow(NAT, NAT))

    def test_floor_and_constants(self):
        assert parse_type("floor(Top -> Bot, 3)") == Floor(Arrow(TOP, BOT), 3)

    def test_nested_binders(self):
        assert parse_type("mu X. mu Y. X -> Y") == Mu(Mu(Arrow(TVar(1), TVar(0))))

    def test_hint_ignored_by_equality(self):
        assert parse_type("mu X. X -> Nat") == parse_type("mu Y. Y -> Nat")

    @pytest.mark.parametrize("bad", ["Nat ->", "mu X.", "floor(Nat)", "Foo", "(Nat", "floor(Nat, -1)"])
    def test_errors(self, bad):
        with pytest.raises((ParseError, ValueError)):
            parse_type(bad)


class TestFunctional:
    def test_to_bot(self):
        assert apply_functional(parse_type("mu X. Nat -> X"), BOT) == parse_type("Nat -> Bot")

    def test_constant(self):
        assert apply_functional(parse_type("mu X. Nat"), parse_type("Top -> Top")) == NAT

    def test_identity(self):
        assert apply_functional(parse_type("mu X. X"), TOP) == TOP

    def test_capture_avoiding(self):
        # the argument's free variable must not be captured by the inner binder
        m = Mu(Mu(Arrow(TVar(1), TVar(0))))
        assert apply_functional(m, TVar(0)) == Mu(Arrow(TVar(1), TVar(0)))
        outer = Mu(Arrow(NAT, TVar(0)))
        assert apply_functional(m, outer) == Mu(Arrow(outer, TVar(0)))

    def test_unroll_once(self):
        assert mu_unroll(parse_type("mu X. Nat -> X"), 1) == parse_type("Nat -> Bot")

    @pytest.mark.parametrize("n", range(6))
    def test_unroll_identity_functional(self, n):
        assert mu_unroll(parse_type("mu X. X"), n) == BOT

    def test_unroll_constant_functional(self):
        assert mu_unroll(parse_type("mu X. Nat"), 3) == NAT

    def test_unfold(self):
        m = parse_type("mu X. Nat -> X")
        assert unfold(m) == Arrow(NAT, m)


class TestGuarded:
    @pytest.mark.parametrize("text,expected", [
        ("mu X. Nat -> X", True),
        ("mu X. X", False),
        ("mu X. (X -> Nat) -> Nat", True),
        ("mu X. floor(X, 3)", False),
        ("mu X. mu Y. X -> Y", True),
        ("mu X. mu Y. X", False),
        ("mu X. Nat", True),
    ])
    def test_examples(self, text, expected):
        assert is_guarded(parse_type(text)) is expected


class TestEquality:
    def test_unfolding_equal(self):
        assert types_equal(parse_type("mu X. Nat -> X"), parse_type("mu X. Nat -> (mu Y. Nat -> Y)"))

    def test_two_step_period(self):
        assert types_equal(parse_type("mu X. Nat -> X"), parse_type("mu X. Nat -> Nat -> X"))

    def test_different(self):
        assert not types_equal(parse_type("mu X. Nat -> X"), parse_type("mu X. X -> Nat"))

    def test_unguarded_not_unfolded(self):
        assert not types_equal(parse_type("mu X. X"), BOT)


def test_floor_wrap():
    assert floor_wrap(NAT, 2) == Floor(NAT, 2)
    with pytest.raises(ValueError):
        floor_wrap(NAT, -1)


@given(seeds, st.integers(0, 8))
def test_unroll_is_iterated_application(seed, n):
    m = random_mu(random.Random(seed))
    assert mu_unroll(m, n + 1) == apply_functional(m, mu_unroll(m, n))
    assert mu_unroll(m, n).free_bound == 0


@given(seeds)
def test_print_parse_round_trip(seed):
    m = random_mu(random.Random(seed))
    assert parse_type(print_type(m)) == m
    assert parse_type(print_type(unfold(m))) == unfold(m)


@given(seeds)
def test_equality_is_reflexive_and_sees_unfolding(seed):
    m = random_mu(random.Random(seed))
    assert types_equal(m, m)
    if is_guarded(m):
        assert types_equal(m, unfold(m)) and types_equal(unfold(m), m)
