import random

import pytest
from hypothesis import given, strategies as st

import oracles
from conftest import any_surface, seeds
from stepcbn.evaluator import step, trace
from stepcbn.generators import gen_term_of
from stepcbn.harness import _sample_type
from stepcbn.semantics import (
    OMEGA, Checker, DomainMismatchError, FreeVariableError, Outcome, ProbeConfig, format_verdict,
    holds, models, probes_for, replay, subst_holds, value_member,
)
from stepcbn.terms import is_value, parse_closed, parse_term, resolve
from stepcbn.typeexpr import BOT, NAT, TOP, Arrow, Floor, parse_type


def t(text):
    return parse_closed(text)


def ty(text):
    return parse_type(text)


WRONG = t(r"\x. 0 0")


class TestValueMember:
    def test_constant_in_nat(self):
        assert value_member(5, t("3"), NAT).outcome is Outcome.HOLDS

    def test_index_one_is_vacuous_for_arrows(self):
        assert value_member(1, WRONG, ty("Nat -> Nat")).outcome is Outcome.HOLDS

    def test_wrong_function_refuted_by_probe(self):
        v = value_member(2, WRONG, ty("Nat -> Nat"))
        assert v.refuted
        w = v.witness
        assert w.probe == t("0") and w.probe_index == 1
        assert w.cause.reason == "stuck" and w.cause.term == t("0 0")
        assert replay(w)

    @pytest.mark.parametrize("k", [0, 1, 7])
    def test_bot_is_empty(self, k):
        v = value_member(k, t("0"), BOT)
        assert v.refuted and v.witness.reason == "empty type"

    def test_constant_functional(self):
        assert value_member(3, t("2"), ty("mu X. Nat")).outcome is Outcome.HOLDS

    def test_top_holds_for_wrong_functions(self):
        assert value_member(9, WRONG, TOP).outcome is Outcome.HOLDS

    def test_abstraction_not_in_nat(self):
        v = value_member(4, t(r"\x. x"), NAT)
        assert v.refuted and replay(v.witness)

    def test_constant_not_in_arrow(self):
        assert value_member(1, t("0"), ty("Nat -> Nat")).refuted

    def test_requires_value(self):
        with pytest.raises(ValueError):
            value_member(2, t(r"(\x. x) 0"), NAT)

    def test_requires_closed_type(self):
        with pytest.raises(ValueError):
            value_member(2, t("0"), ty("mu X. X").body)


class TestHolds:
    @pytest.mark.parametrize("text", ["0 0", r"\x. x", r"(\x. x x) (\x. x x)"])
    def test_index_zero(self, text):
        assert holds(t(text), 0, BOT).outcome is Outcome.HOLDS

    def test_stuck(self):
        v = holds(t("0 0"), 1, NAT)
        assert v.refuted and v.witness.reason == "stuck" and replay(v.witness)

    def test_omega_in_bot(self):
        assert holds(OMEGA, 1000, BOT).outcome is Outcome.HOLDS

    def test_reduces_to_constant(self):
        assert holds(t(r"(\x. x) 4"), 10, NAT).outcome is Outcome.HOLDS

    def test_value_too_late_is_not_checked(self):
        # the stuck term is reached after 1 step, so index 1 cannot see it
        a = t(r"(\x. 0 0) 1")
        assert not holds(a, 1, NAT).refuted
        assert holds(a, 2, NAT).refuted

    def test_open_term_rejected(self):
        with pytest.raises(ValueError):
            holds(resolve(parse_term("x")).term, 3, NAT)


class TestProbes:
    def test_nat(self):
        assert {t("0"), t("1"), OMEGA} <= set(probes_for(NAT, 3))

    def test_bot(self):
        ps = probes_for(BOT, 3)
        assert OMEGA in ps
        for p in ps:
            assert not any(is_value(s) for s in trace(p, 2).steps)

    def test_arrow(self):
        assert {t(r"\x. 0"), OMEGA} <= set(probes_for(ty("Nat -> Nat"), 2))

    def test_omega_always_present(self):
        cfg = ProbeConfig(probes_per_type=1)
        for tt in (NAT, TOP, BOT, ty("Nat -> Nat"), ty("mu X. X -> Nat")):
            assert OMEGA in probes_for(tt, 3, cfg)

    def test_extra_probes_on_top_of_cap(self):
        extra = t(r"\x. 2")
        cfg = ProbeConfig(probes_per_type=1).with_probes((ty("Nat -> Nat"), extra))
        assert extra in Checker(cfg).candidates(ty("Nat -> Nat"))

    def test_deterministic_per_seed(self):
        a = Checker(ProbeConfig(seed=3)).candidates(ty("(Nat -> Nat) -> Nat"))
        b = Checker(ProbeConfig(seed=3)).candidates(ty("(Nat -> Nat) -> Nat"))
        assert a == b

    def test_config_validation(self):
        with pytest.raises(ValueError):
            ProbeConfig(probes_per_type=0)


class TestSubstitutions:
    def test_constant(self):
        assert subst_holds({"x": t("0")}, 7, {"x": NAT}).outcome is Outcome.HOLDS

    def test_stuck(self):
        v = subst_holds({"x": t("0 0")}, 1, {"x": NAT})
        assert v.refuted and v.witness.variable == "x" and replay(v.witness)

    def test_empty(self):
        assert subst_holds({}, 4, {}).outcome is Outcome.HOLDS

    def test_domain_mismatch(self):
        with pytest.raises(DomainMismatchError):
            subst_holds({"x": t("0")}, 4, {"y": NAT})


class TestModels:
    def test_variable(self):
        o = resolve(parse_term("x"))
        v = models({"x": NAT}, o, 10, NAT)
        assert v.outcome is Outcome.PASSED and v.probes > 0

    def test_closed(self):
        assert models({}, t(r"(\x. x) 0"), 100, NAT).outcome is Outcome.HOLDS

    def test_self_application_refuted(self):
        o = resolve(parse_term("x x"))
        v = models({"x": NAT}, o, 2, NAT)
        assert v.refuted
        assert dict(v.witness.gamma)["x"] == t("0")
        assert replay(v.witness)

    def test_index_zero(self):
        assert models({"x": NAT}, resolve(parse_term("x x")), 0, NAT).outcome is Outcome.HOLDS

    def test_unbound(self):
        with pytest.raises(FreeVariableError):
            models({}, resolve(parse_term("x")), 3, NAT)


def test_format_verdict():
    out = format_verdict(value_member(2, WRONG, ty("Nat -> Nat")))
    lines = out.splitlines()
    assert lines[0] == "verdict: refuted"
    assert lines[1].startswith("probes: ")
    assert "witness:" in lines and any("probe: 0 at index 1" in ln for ln in lines)
    assert format_verdict(holds(t("0"), 3, NAT)).splitlines() == ["verdict: holds", "probes: 0"]


# -- properties ----------------------------------------------------------------

@st.composite
def typed_query(draw):
    rng = random.Random(draw(seeds))
    tt = _sample_type(rng, 2)
    if rng.random() < 0.6:
        a = resolve(gen_term_of(rng, tt, rng.randint(1, 12)), closed=True).term
    else:
        a = resolve(draw(any_surface(10)), closed=True).term
    return a, tt, draw(st.integers(0, 12))


_shared = Checker(ProbeConfig())


@given(typed_query())
def test_downward_closed(q):
    a, tt, k = q
    if not _shared.holds(a, k, tt).refuted:
        assert all(not _shared.holds(a, j, tt).refuted for j in range(k))


@given(typed_query())
def test_values_agree_with_membership(q):
    a, tt, k = q
    if is_value(a) and k > 0:
        assert _shared.holds(a, k, tt).outcome is _shared.value_member(k, a, tt).outcome


@given(typed_query())
def test_refutations_replay(q):
    a, tt, k = q
    v = _shared.holds(a, k, tt)
    if v.refuted:
        assert replay(v.witness)


@given(typed_query())
def test_fresh_checker_gives_same_answer(q):
    # memoization must not change answers
    a, tt, k = q
    assert Checker(ProbeConfig()).holds(a, k, tt).outcome is _shared.holds(a, k, tt).outcome


def _mu_free(tt):
    match tt:
        case Arrow(a, b):
            return _mu_free(a) and _mu_free(b)
        case Floor(inner, _):
            return _mu_free(inner)
    return tt in (NAT, TOP, BOT)


@given(typed_query())
def test_agrees_with_naive_definition(q):
    a, tt, k = q
    if not _mu_free(tt):
        return
    k = min(k, 5)
    expected = oracles.naive_holds(a, k, tt, _shared.candidates, step, is_value)
    assert (not _shared.holds(a, k, tt).refuted) == expected


@pytest.mark.parametrize("text", ["Bot", "Top", "Nat", "Nat -> Nat", "mu X. Nat -> X", "(Nat -> Nat) -> Bot"])
def test_omega_inhabits(text):
    assert not holds(OMEGA, 1000, ty(text)).refuted
