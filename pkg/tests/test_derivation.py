import json
import random

import pytest
from hypothesis import given

from conftest import seeds, typed_surface
from stepcbn.derivation import (
    ARROW, Derivation, DerivationError, Rule, TypeMatchError, check_derivation, derive, type_match,
    validate,
)
from stepcbn.evaluator import safe_for
from stepcbn.generators import gen_term_of, gen_type
from stepcbn.semantics import Checker, Outcome, ProbeConfig
from stepcbn.terms import SConst, SVar, is_value, parse_term, resolve
from stepcbn.typeexpr import NAT, Arrow, parse_type, types_equal, unfold


def d(text, env=None):
    out = derive(env or {}, parse_term(text))
    validate(out)
    return out


def rules(x: Derivation):
    yield x.rule
    for p in x.premises:
        yield from rules(p)


class TestDerive:
    def test_identity(self):
        r = d(r"\x:Nat. x")
        assert r.type == parse_type("Nat -> Nat")
        assert r.rule is Rule.ABS and r.premises[0].rule is Rule.VAR

    def test_application(self):
        r = d(r"(\x:Nat. x) 0")
        assert r.type == NAT and r.rule is Rule.APP
        assert [p.rule for p in r.premises] == [Rule.ABS, Rule.CONST]

    def test_fix(self):
        r = d(r"fix \x:Nat. x")
        assert r.type == NAT and r.rule is Rule.FIX

    def test_constant_applied(self):
        with pytest.raises(DerivationError, match="expected arrow, found Nat"):
            derive({}, parse_term("0 1"))

    def test_missing_annotation(self):
        with pytest.raises(DerivationError, match="annotation"):
            derive({}, parse_term(r"\x. x"))

    def test_unbound(self):
        with pytest.raises(DerivationError, match="unbound"):
            derive({}, parse_term("y"))

    def test_fix_needs_endofunction(self):
        with pytest.raises(DerivationError, match="T -> T"):
            derive({}, parse_term(r"fix \x:Nat. \y:Nat. x"))

    def test_argument_mismatch(self):
        with pytest.raises(DerivationError):
            derive({}, parse_term(r"(\x:Nat. x) (\y:Nat. y)"))

    def test_environment(self):
        assert d("f 0", {"f": parse_type("Nat -> Nat")}).type == NAT

    def test_recursive_unfold(self):
        r = d(r"(fix \f:(mu X. Nat -> X). \x:Nat. f) 0 1 2")
        assert Rule.MU_UNFOLD in set(rules(r))
        assert types_equal(r.type, parse_type("mu X. Nat -> X"))

    def test_self_application(self):
        r = d(r"\f:(mu X. X -> Nat). f f")
        assert r.type == parse_type("(mu X. X -> Nat) -> Nat")
        assert {Rule.MU_UNFOLD} <= set(rules(r))

    def test_fold(self):
        # the argument has the unfolded type; the rule folds it back
        r = d(r"(\g:(mu X. Nat -> X). 0) (\n:Nat. fix \h:(mu X. Nat -> X). h)")
        assert Rule.MU_FOLD in set(rules(r))

    def test_json(self):
        data = json.loads(d(r"\x:Nat. x").to_json())
        assert data["rule"] == "Abs" and data["premises"][0]["rule"] == "Var"

    def test_text(self):
        assert str(d(r"\x:Nat. x")).splitlines() == [
            r"[Abs] {} |= \x:Nat. x : Nat -> Nat",
            "  [Var] {x: Nat} |= x : Nat",
        ]


class TestTypeMatch:
    def test_unfolds_to_arrow(self):
        m = parse_type("mu X. Nat -> X")
        r = type_match(ARROW, m)
        assert r.type == Arrow(NAT, m) and r.steps == (Rule.MU_UNFOLD,)

    def test_identical(self):
        assert type_match(NAT, NAT).steps == ()

    def test_budget(self):
        with pytest.raises(TypeMatchError):
            type_match(ARROW, parse_type("mu X. X"))
        with pytest.raises(TypeMatchError):
            type_match(ARROW, parse_type("mu X. mu Y. X -> Y"), unroll_budget=1)

    def test_not_arrow(self):
        with pytest.raises(TypeMatchError):
            type_match(ARROW, NAT)


class TestValidate:
    def test_rejects_wrong_constant_type(self):
        bad = Derivation({}, SConst(0), parse_type("Nat -> Nat"), Rule.CONST)
        with pytest.raises(DerivationError):
            validate(bad)

    def test_rejects_environment_change(self):
        inner = Derivation({"x": NAT}, SVar("x"), NAT, Rule.VAR)
        app = d("f x", {"f": parse_type("Nat -> Nat"), "x": NAT})
        bad = Derivation(app.env, app.term, app.type, app.rule, (app.premises[0], Derivation(
            {"x": NAT, "y": NAT}, inner.term, NAT, Rule.VAR)))
        with pytest.raises(DerivationError):
            validate(bad)


class TestCheck:
    def test_closed(self):
        assert not check_derivation(d(r"(\x:Nat. x) 0"), 100).refuted

    def test_divergent(self):
        assert not check_derivation(d(r"fix \x:Nat. x"), 1000).refuted

    def test_index_zero(self):
        v = check_derivation(d("x", {"x": NAT}), 0)
        assert v.outcome is Outcome.HOLDS

    @pytest.mark.parametrize("text", [
        r"\x:Nat. x", r"\f:Nat -> Nat. \x:Nat. f (f x)", r"fix \f:Nat -> Nat. \x:Nat. f x",
        r"\f:(mu X. X -> Nat). f f", r"(fix \f:(mu X. Nat -> X). \x:Nat. f) 0 1 2",
    ])
    def test_not_refuted(self, text):
        assert not check_derivation(d(text), 8).refuted


@given(typed_surface(20))
def test_derivations_validate_and_are_safe(pair):
    s, built = pair
    r = derive({}, s)
    validate(r)
    assert types_equal(r.type, built)
    assert safe_for(resolve(s, closed=True).term, 1000)[0]


_checker = Checker(ProbeConfig())


def _nodes(x):
    yield x
    for p in x.premises:
        yield from _nodes(p)


@given(seeds)
def test_each_rule_preserves_validity(seed):
    # if every premise passes at k, so does the conclusion
    rng = random.Random(seed)
    env = (("y", gen_type(rng, 1, False)),)
    s = gen_term_of(rng, gen_type(rng, 2), rng.randint(2, 12), env)
    k = rng.randint(1, 10)
    for node in _nodes(derive(dict(env), s)):
        if all(not check_derivation(p, k, checker=_checker).refuted for p in node.premises):
            if node.rule is not Rule.ABS:
                assert not check_derivation(node, k, checker=_checker).refuted
        if node.rule is Rule.ABS:
            # the abstraction lemma needs its premise at every index up to k
            if all(not check_derivation(node.premises[0], j, checker=_checker).refuted for j in range(k + 1)):
                assert not check_derivation(node, k, checker=_checker).refuted


@pytest.mark.parametrize("text", ["mu X. Nat -> X", "mu X. (X -> Nat) -> Nat", "mu X. X -> X"])
def test_unfold_coherent(text):
    m = parse_type(text)
    checker = Checker(ProbeConfig())
    values = [v for v in checker.candidates(m) + checker.candidates(unfold(m)) if v.free_bound == 0]
    for v in filter(is_value, values):
        for k in range(9):
            assert checker.value_member(k, v, m).outcome is checker.value_member(k, v, unfold(m)).outcome
