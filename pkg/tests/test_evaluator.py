import pytest
from hypothesis import given, strategies as st

import oracles
from conftest import any_surface, typed_surface
from stepcbn.evaluator import Terminal, format_trace, safe_for, step, trace
from stepcbn.harness import successors
from stepcbn.terms import OpenTermError, SFix, Var, alpha_eq, is_value, parse_closed, resolve

OMEGA = parse_closed(r"(\x. x x) (\x. x x)")


def t(text):
    return parse_closed(text)


class TestStep:
    def test_beta(self):
        assert step(t(r"(\x. x) 0")) == t("0")

    def test_left_context(self):
        assert step(t(r"((\x. \y. x) 0) 1")) == t(r"(\y. 0) 1")

    def test_fix_unrolls(self):
        assert step(t(r"fix \f. 0")) == t(r"(\f. 0) (fix \f. 0)")

    def test_stuck(self):
        assert step(t("0 0")) is None

    def test_arguments_not_reduced(self):
        assert step(t(r"0 ((\x. x) 1)")) is None

    def test_open_term_rejected(self):
        with pytest.raises(OpenTermError):
            step(Var(0))


class TestTrace:
    def test_value(self):
        tr = trace(t(r"(\x. x) 0"), 10)
        assert tr.steps_taken == 1 and tr.terminal is Terminal.VALUE and tr.last == t("0")

    def test_omega_exhausts_budget(self):
        tr = trace(OMEGA, 1000)
        assert tr.steps_taken == 1000 and tr.terminal is Terminal.BUDGET
        assert all(s == OMEGA for s in tr.steps)

    def test_constant(self):
        tr = trace(t("0"), 5)
        assert tr.steps_taken == 0 and tr.terminal is Terminal.VALUE

    def test_stuck(self):
        tr = trace(t(r"(\x. 0 x) 1"), 10)
        assert tr.terminal is Terminal.STUCK and tr.last == t("0 1")

    def test_format(self):
        out = format_trace(trace(t(r"(\x. x) 0"), 10))
        assert out.splitlines() == [r"(\x. x) 0", "value: 0"]


class TestSafe:
    @pytest.mark.parametrize("text", ["0 0", r"\x. x", r"(\x. x x) (\x. x x)"])
    def test_zero_steps_always_safe(self, text):
        assert safe_for(t(text), 0)[0]

    def test_stuck_at_start(self):
        ok, tr = safe_for(t("0 0"), 1)
        assert not ok and tr.terminal is Terminal.STUCK

    def test_omega(self):
        assert safe_for(OMEGA, 1000)[0]

    def test_stuck_after_one_step(self):
        a = t(r"(\x. 0 0) 1")
        assert safe_for(a, 1)[0]
        assert not safe_for(a, 2)[0]


@given(any_surface())
def test_agrees_with_named_reducer(s):
    a = resolve(s, closed=True).term
    ours = trace(a, 30).steps
    ref = oracles.run(oracles.from_surface(s), 30)
    assert len(ours) == len(ref)
    for mine, theirs in zip(ours, ref):
        assert alpha_eq(mine, resolve(oracles.to_surface(theirs), closed=True).term)


@given(any_surface())
def test_at_most_one_rule_applies(s):
    a = resolve(s, closed=True).term
    for _ in range(20):
        succ = successors(a)
        assert len(succ) <= 1
        nxt = step(a)
        assert (nxt is None and not succ) or (succ and nxt == succ[0])
        if nxt is None:
            break
        a = nxt


@given(any_surface())
def test_values_are_irreducible(s):
    a = resolve(s, closed=True).term
    for b in trace(a, 20).steps:
        if is_value(b):
            assert step(b) is None


@given(any_surface(), st.integers(0, 30))
def test_trace_invariants(s, budget):
    a = resolve(s, closed=True).term
    tr = trace(a, budget)
    for x, y in zip(tr.steps, tr.steps[1:]):
        assert step(x) == y
    if tr.terminal is Terminal.VALUE:
        assert is_value(tr.last)
    elif tr.terminal is Terminal.STUCK:
        assert step(tr.last) is None and not is_value(tr.last)
    else:
        assert tr.steps_taken == budget
    assert trace(a, budget) == tr


@given(any_surface(), st.integers(0, 25), st.integers(0, 25))
def test_safety_prefix_closed(s, k, j):
    a = resolve(s, closed=True).term
    j, k = min(j, k), max(j, k)
    if safe_for(a, k)[0]:
        assert safe_for(a, j)[0]


@given(any_surface())
def test_fix_takes_its_rule(s):
    a = resolve(SFix(s), closed=True).term
    assert step(a) == successors(a)[0]
    assert trace(a, 1).steps[1].fun == a.body


@given(typed_surface())
def test_typed_terms_do_not_get_stuck(st_pair):
    s, _ = st_pair
    assert safe_for(resolve(s, closed=True).term, 300)[0]
