"""Property catalog: every lemma and theorem of the model checked at bounded index.

Each property draws its cases from a generator seeded by ``(seed, property,
case number)``, so cases are independent of each other and of run order.
A refuted case is shrunk before it is reported.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from typing import Callable, Iterator

from .derivation import DerivationError, derive, validate
from .evaluator import safe_for, step, trace
from .generators import GenConfig, gen_any_term, gen_term_of, gen_type, gen_typed_term
from .semantics import Checker, Outcome, ProbeConfig, Verdict, Witness
from .terms import (
    Abs, App, Const, Fix, OpenTerm, SApp, SConst, SFix, SVar, Term, Var, instantiate, is_value,
    parse_closed, print_term, resolve, subterms,
)
from .typeexpr import (
    BOT, NAT, TOP, Arrow, Floor, Mu, TypeExpr, apply_functional, parse_type, print_type, unfold,
)

__all__ = [
    "CATALOG", "Counterexample", "GUARDED_FUNCTIONALS", "NEGATIVE_CORPUS", "PROPERTIES",
    "PropertyReport", "check_negative_corpus",
    "SAFETY_BUDGET", "format_report", "mu_fixpoint_disagreements",
    "wf_equation_disagreements", "run_property", "run_suite", "shrink", "successors",
]

SAFETY_BUDGET = 1000
MU_INDEX_CAP = 10
WF_INDEX_CAP = 8

GUARDED_FUNCTIONALS: tuple[Mu, ...] = tuple(parse_type(s) for s in (
    "mu X. Nat -> X",
    "mu X. (X -> Nat) -> Nat",
    "mu X. X -> Nat",
    "mu X. X -> X",
    "mu X. Nat -> Nat -> X",
    "mu X. (Nat -> X) -> Nat",
    "mu X. Top -> X",
    "mu X. X -> Top",
    "mu X. (Nat -> Nat) -> X",
    "mu X. mu Y. X -> Y",
    "mu X. Bot -> X",
    "mu X. floor(Nat -> X, 7)",
))

UNGUARDED = parse_type("mu X. X")

ADVERSARIAL_VALUES: tuple[Term, ...] = tuple(parse_closed(src) for src in (
    "0", "3", r"\x. x", r"\x. 0", r"\x. 0 0", r"\x. x 0", r"\f. f f", r"\x. \y. x",
    r"\x. \y. y", r"\f. f (\x. 0)", r"\f. f 0 0", r"\x. x x x",
))


# ill-behaved closed terms, and whether each one gets stuck
NEGATIVE_CORPUS: tuple[tuple[str, bool], ...] = (
    ("0 0", True),
    (r"(\x. x x) 0 0", True),
    ("fix 0", True),
    ("fix 0 1", True),
    (r"fix (\x. 0) 1", True),
    (r"(\x. x 0) 1", True),
    (r"(\x. 0 0) 1", True),
    (r"\x. x", False),
    (r"\x. 0 0", False),
    (r"(\x. \y. y) 0", False),
    (r"fix \f. \x. f", False),
    (r"(\f. f 0) 2", True),
    (r"(\f. f (f 0)) 0", True),
    (r"(\x. x) 0 1", True),
    (r"(\x. \y. x y) 3 4", True),
    (r"(\x. x x) (\y. 0) 1", True),
    (r"fix (\f. \x. x) 0 1", True),
    (r"(\x. \y. 0 0) 1 2", True),
    (r"(\x. x) (\y. y)", False),
    (r"1 (\x. x)", True),
)


def check_negative_corpus(pcfg: ProbeConfig | None = None) -> list[tuple[str, bool, bool, Verdict]]:
    """For each corpus term: (text, expected stuck, flagged stuck, verdict against Nat at size + 1)."""
    checker = Checker(pcfg or ProbeConfig())
    out = []
    for text, stuck in NEGATIVE_CORPUS:
        a = parse_closed(text)
        k = a.size + 1
        flagged = not safe_for(a, k)[0]
        out.append((text, stuck, flagged, checker.models({}, a, k, NAT)))
    return out


@dataclass(frozen=True)
class Counterexample:
    terms: tuple[Term, ...]
    types: tuple[TypeExpr, ...]
    k: int
    detail: str = ""
    witness: Witness | None = None

    def size(self) -> int:
        return sum(t.size for t in self.terms)

    def lines(self) -> list[str]:
        out = [f"term: {print_term(t)}" for t in self.terms]
        out += [f"type: {print_type(t)}" for t in self.types]
        out.append(f"k: {self.k}")
        if self.detail:
            out.append(f"detail: {self.detail}")
        if self.witness is not None:
            out.append("witness:")
            out.extend("  " + ln for ln in self.witness.lines())
        return out


@dataclass
class PropertyReport:
    name: str
    cases: int = 0
    skipped: int = 0
    refutations: int = 0
    tally: dict[str, int] = field(default_factory=dict)
    counterexample: Counterexample | None = None

    @property
    def passed(self) -> bool:
        return self.refutations == 0

    def count(self, key: str, n: int = 1) -> None:
        self.tally[key] = self.tally.get(key, 0) + n


def format_report(r: PropertyReport) -> str:
    lines = [f"property: {r.name}", f"cases: {r.cases}"]
    if r.skipped:
        lines.append(f"skipped: {r.skipped}")
    lines.append(f"refutations: {r.refutations}")
    if r.tally:
        lines.append("summary: " + ", ".join(f"{k}={v}" for k, v in sorted(r.tally.items())))
    lines.append(f"status: {'pass' if r.passed else 'FAIL'}")
    if r.counterexample is not None:
        lines.append("counterexample:")
        lines.extend("  " + ln for ln in r.counterexample.lines())
    return "\n".join(lines)


# -- shrinking -------------------------------------------------------------

def _replacements(a: Term) -> Iterator[Term]:
    """Terms obtained from ``a`` by replacing one subterm with a closed one.

    Replacements never move a subterm across a binder, so scope is kept.
    """
    yield from subterms(a)
    match a:
        case App(f, x):
            for f2 in _replacements(f):
                yield App(f2, x)
            for x2 in _replacements(x):
                yield App(f, x2)
        case Abs(body, hint):
            for b2 in _replacements(body):
                yield Abs(b2, hint)
        case Fix(body):
            for b2 in _replacements(body):
                yield Fix(b2)
    if not isinstance(a, Const):
        yield Const(0)


def _shrink_candidates(cx: Counterexample) -> Iterator[Counterexample]:
    for i, t in enumerate(cx.terms):
        seen = set()
        smaller = []
        for r in _replacements(t):
            if r.size < t.size and r.free_bound <= t.free_bound and r not in seen:
                seen.add(r)
                smaller.append(r)
        smaller.sort(key=lambda r: (r.size, print_term(r)))
        for r in smaller:
            yield replace(cx, terms=cx.terms[:i] + (r,) + cx.terms[i + 1:])
    for k in range(cx.k):
        yield replace(cx, k=k)


def shrink(cx: Counterexample, refutes: Callable[[Counterexample], Witness | str | None],
           max_rounds: int = 500) -> Counterexample:
    """Greedy minimization over subterms and indices.

    ``refutes`` replays a candidate and returns its failure (or None when it
    no longer fails).  Each accepted step makes the terms smaller or the
    index lower, so this terminates; the result fails, and no single
    candidate step from it still fails.
    """
    current = cx
    for _ in range(max_rounds):
        for cand in _shrink_candidates(current):
            failure = refutes(cand)
            if failure:
                current = replace(cand, witness=failure if isinstance(failure, Witness) else None,
                                  detail=failure if isinstance(failure, str) else cand.detail)
                break
        else:
            return current
    return current


# -- case generation helpers -------------------------------------------------

def successors(a: Term) -> list[Term]:
    """All one-step reducts of ``a``, read off the three rules independently."""
    out: list[Term] = []
    if isinstance(a, App) and isinstance(a.fun, Abs):
        out.append(instantiate(a.fun.body, a.arg))
    if isinstance(a, App):
        out.extend(App(f2, a.arg) for f2 in successors(a.fun))
    if isinstance(a, Fix):
        out.append(App(a.body, a))
    return out


def _sample_type(rng: random.Random, depth: int) -> TypeExpr:
    r = rng.random()
    if depth <= 0 or r < 0.3:
        return rng.choice((NAT, NAT, NAT, TOP, BOT))
    if r < 0.4:
        return rng.choice(GUARDED_FUNCTIONALS[:6])
    if r < 0.5:
        return Floor(_sample_type(rng, depth - 1), rng.randint(0, 8))
    return Arrow(_sample_type(rng, depth - 1), _sample_type(rng, depth - 1))


def _closed(s) -> Term:
    return resolve(s, closed=True).term


def _term_for(rng: random.Random, ty: TypeExpr, gcfg: GenConfig, typed_bias: float = 0.7) -> Term:
    if rng.random() < typed_bias:
        return _closed(gen_term_of(rng, ty, rng.randint(1, gcfg.max_term_size)))
    if rng.random() < 0.3:
        return rng.choice(ADVERSARIAL_VALUES)
    return _closed(gen_any_term(gcfg, rng))


def _values_for(checker: Checker, m: Mu, rng: random.Random, gcfg: GenConfig) -> list[Term]:
    pool = list(checker.candidates(m)) + list(checker.candidates(unfold(m))) + list(ADVERSARIAL_VALUES)
    for _ in range(3):
        pool.append(_closed(gen_term_of(rng, m, rng.randint(2, 10))))
    seen, out = set(), []
    for t in pool:
        if is_value(t) and t not in seen:
            seen.add(t)
            out.append(t)
    return out


def mu_fixpoint_disagreements(functionals=GUARDED_FUNCTIONALS, k_max: int = MU_INDEX_CAP,
                              pcfg: ProbeConfig | None = None, seed: int = 0,
                              ) -> tuple[int, list[tuple[Mu, Term, int, Outcome, Outcome]]]:
    """Compare mu F with F(mu F) on every probed value and every index up to ``k_max``.

    Returns the number of comparisons made and the disagreements found.
    """
    checker = Checker(pcfg or ProbeConfig(seed=seed))
    gcfg = GenConfig(seed=seed)
    n, bad = 0, []
    for m in functionals:
        rng = random.Random(f"{seed}:mu:{print_type(m)}")
        unfolded = unfold(m)
        for v in _values_for(checker, m, rng, gcfg):
            for k in range(k_max + 1):
                a = checker.value_member(k, v, m)
                b = checker.value_member(k, v, unfolded)
                n += 1
                if a.outcome is not b.outcome:
                    bad.append((m, v, k, a.outcome, b.outcome))
    return n, bad


WF_ARGUMENTS: tuple[TypeExpr, ...] = tuple(parse_type(s) for s in (
    "Bot", "Top", "Nat", "Nat -> Nat", "mu X. Nat -> X", "floor(Nat -> Nat, 2)",
))


def wf_equation_disagreements(functionals=GUARDED_FUNCTIONALS, k_max: int = 6,
                              arguments=WF_ARGUMENTS, pcfg: ProbeConfig | None = None, seed: int = 0,
                              ) -> tuple[int, list[tuple[Mu, TypeExpr, Term, int, int]]]:
    """Check floor(F(t), k+1) against floor(F(floor(t, k)), k+1) on probed values, for k <= k_max."""
    checker = Checker(pcfg or ProbeConfig(seed=seed))
    gcfg = GenConfig(seed=seed)
    n, bad = 0, []
    for m in functionals:
        rng = random.Random(f"{seed}:wf:{print_type(m)}")
        values = _values_for(checker, m, rng, gcfg)
        for tau in arguments:
            for k in range(k_max + 1):
                lhs = Floor(apply_functional(m, tau), k + 1)
                rhs = Floor(apply_functional(m, Floor(tau, k)), k + 1)
                for v in values:
                    for j in range(k + 2):
                        n += 1
                        a, b = checker.value_member(j, v, lhs), checker.value_member(j, v, rhs)
                        if a.outcome is not b.outcome:
                            bad.append((m, tau, v, k, j))
    return n, bad


def _same_class(a: Verdict, b: Verdict) -> bool:
    return a.outcome is b.outcome


# -- properties ----------------------------------------------------------------
# Each property takes (case rng, case number, gen config, probe config, report)
# and returns None on success or a (Counterexample, refutes) pair.

def _prop_determinism(rng, i, gcfg, pcfg, rep):
    if rng.random() < 0.5:
        term = _closed(gen_typed_term(gcfg, rng)[0])
    else:
        term = _closed(gen_any_term(gcfg, rng))

    def refutes(cx: Counterexample):
        a = cx.terms[0]
        for n in range(40):
            succ = successors(a)
            s = step(a)
            if len(succ) > 1:
                return f"{len(succ)} rules apply after {n} steps"
            if (s is None) != (not succ) or (s is not None and s != succ[0]):
                return f"step disagrees with the rules after {n} steps"
            if s is None:
                break
            a = s
        if trace(cx.terms[0], 40) != trace(cx.terms[0], 40):
            return "trace does not replay"
        return None

    cx = Counterexample((term,), (), 0)
    rep.count("steps", trace(term, 40).steps_taken)
    return (cx, refutes) if refutes(cx) else None


def _prop_index0(rng, i, gcfg, pcfg, rep):
    term = _term_for(rng, NAT, gcfg, 0.5)
    ty = _sample_type(rng, gcfg.max_type_depth)
    checker = Checker(pcfg)

    def refutes(cx):
        v = checker.holds(cx.terms[0], 0, cx.types[0])
        return None if v.outcome is Outcome.HOLDS else f"index 0 gave {v.outcome.value}"

    cx = Counterexample((term,), (ty,), 0)
    return (cx, refutes) if refutes(cx) else None


def _prop_downward(rng, i, gcfg, pcfg, rep):
    ty = _sample_type(rng, gcfg.max_type_depth)
    term = _term_for(rng, ty, gcfg)
    k = rng.randint(0, gcfg.max_index)
    checker = Checker(pcfg)
    top = checker.holds(term, k, ty)
    if top.refuted:
        return "skip"
    rep.count(top.outcome.value)

    def refutes(cx):
        a, t = cx.terms[0], cx.types[0]
        if checker.holds(a, cx.k, t).refuted:
            return None
        for j in range(cx.k):
            r = checker.holds(a, j, t)
            if r.refuted:
                return f"not refuted at {cx.k} but refuted at {j}"
        if is_value(a):
            for j in range(cx.k + 1):
                if checker.value_member(j, a, t).refuted and not checker.value_member(cx.k, a, t).refuted:
                    return f"value membership refuted at {j} but not at {cx.k}"
        return None

    cx = Counterexample((term,), (ty,), k)
    return (cx, refutes) if refutes(cx) else None


def _prop_safety(rng, i, gcfg, pcfg, rep):
    if i % 3 == 0:
        ty = gen_type(rng, gcfg.max_type_depth, gcfg.with_mu)
        s = gen_term_of(rng, Arrow(ty, ty), rng.randint(2, gcfg.max_term_size - 1))
        s = SFix(s)
    else:
        s, ty = gen_typed_term(gcfg, rng)
    try:
        d = derive({}, s)
        validate(d)
    except DerivationError as e:
        cx = Counterexample((_closed(s),), (ty,), SAFETY_BUDGET,
                            f"generator produced an underivable term: {e}")
        return cx, lambda c: None
    term = _closed(s)
    if "fix" in print_term(term):
        rep.count("fix-bearing")
    ok, tr = safe_for(term, SAFETY_BUDGET)
    rep.count(tr.terminal.value)

    def refutes(cx):
        good, t2 = safe_for(cx.terms[0], cx.k)
        if good:
            return None
        return Witness("holds", "stuck", cx.terms[0], cx.k, d.type, trace=t2)

    cx = Counterexample((term,), (d.type,), SAFETY_BUDGET)
    if ok:
        return None
    # shrinking may leave the typed fragment; the claim being refuted is safety of this term
    return replace(cx, witness=refutes(cx)), refutes


def _lemma_types(rng, gcfg) -> tuple[TypeExpr, TypeExpr]:
    depth = max(1, gcfg.max_type_depth - 1)
    return gen_type(rng, depth, gcfg.with_mu), gen_type(rng, depth, gcfg.with_mu)


def _prop_application(rng, i, gcfg, pcfg, rep):
    t1, t2 = _lemma_types(rng, gcfg)
    a1 = _term_for(rng, Arrow(t1, t2), gcfg)
    a2 = _term_for(rng, t1, gcfg)
    k = rng.randint(1, gcfg.max_index)

    def premises(a1, a2, k, checker):
        return (not checker.holds(a1, k, Arrow(t1, t2)).refuted
                and not checker.holds(a2, k, t1).refuted)

    seen: list[str] = []

    def refutes(cx):
        b1, b2 = cx.terms
        checker = Checker(pcfg.with_probes((t1, b2)))
        if not premises(b1, b2, cx.k, checker):
            return None
        r = checker.holds(App(b1, b2), cx.k, t2)
        seen.append(r.outcome.value)
        return r.witness if r.refuted else None

    checker = Checker(pcfg.with_probes((t1, a2)))
    if not premises(a1, a2, k, checker):
        return "skip"
    cx = Counterexample((a1, a2), (t1, t2), k)
    w = refutes(cx)
    rep.count(seen[0])
    return (replace(cx, witness=w), refutes) if w else None


def _prop_abstraction(rng, i, gcfg, pcfg, rep):
    t1, t2 = _lemma_types(rng, gcfg)
    env_names = ("y",) if rng.random() < 0.5 else ()
    env = {n: gen_type(rng, 1, False) for n in env_names}
    inner_env = tuple(env.items()) + (("x", t1),)
    if rng.random() < 0.75:
        body_s = gen_term_of(rng, t2, rng.randint(1, gcfg.max_term_size // 2), inner_env)
    else:
        body_s = rng.choice((SVar("x"), SApp(SVar("x"), SConst(0)), SConst(0)))
    context = tuple(sorted(env)) + ("x",)
    body = resolve(body_s, context).term
    if len(resolve(body_s, context).context) != len(context):
        return "skip"
    k = rng.randint(1, min(gcfg.max_index, 12))
    checker = Checker(pcfg)
    inner = {**env, "x": t1}

    def premise(b, kk):
        return all(not checker.models(inner, OpenTerm(b, context), j, t2).refuted for j in range(kk + 1))

    def conclusion(b, kk):
        # the abstraction binds the last context slot
        lam = _abstract_last(b, len(context))
        return checker.models(env, OpenTerm(lam, context[:-1]), kk, Arrow(t1, t2))

    if not premise(body, k):
        return "skip"

    seen: list[str] = []

    def refutes(cx):
        b = cx.terms[0]
        if not premise(b, cx.k):
            return None
        r = conclusion(b, cx.k)
        seen.append(r.outcome.value)
        return r.witness if r.refuted else None

    cx = Counterexample((body,), (t1, t2), k, f"env {sorted(env.items())!r}")
    w = refutes(cx)
    rep.count(seen[0])
    return (replace(cx, witness=w), refutes) if w else None


def _abstract_last(a: Term, n: int) -> Term:
    """Turn free variable ``n - 1`` (the last of ``n`` slots) into a fresh binder."""
    def go(t: Term, depth: int) -> Term:
        if t.free_bound <= depth:
            return t
        match t:
            case Var(i):
                j = i - depth
                if j == n - 1:
                    return Var(depth)
                return Var(i + 1)
            case Abs(body, hint):
                return Abs(go(body, depth + 1), hint)
            case App(f, x):
                return App(go(f, depth), go(x, depth))
            case Fix(body):
                return Fix(go(body, depth))
        return t

    return Abs(go(a, 0), "x")


def _prop_fix(rng, i, gcfg, pcfg, rep):
    depth = max(1, gcfg.max_type_depth - 1)
    ty = gen_type(rng, depth, gcfg.with_mu)
    a = _term_for(rng, Arrow(ty, ty), gcfg, 0.8)
    k = rng.randint(1, gcfg.max_index)

    seen: list[str] = []

    def refutes(cx):
        b = cx.terms[0]
        checker = Checker(pcfg.with_probes((ty, Fix(b))))
        if checker.holds(b, cx.k, Arrow(ty, ty)).refuted:
            return None
        r = checker.holds(Fix(b), cx.k, ty)
        seen.append(r.outcome.value)
        return r.witness if r.refuted else None

    checker = Checker(pcfg.with_probes((ty, Fix(a))))
    if checker.holds(a, k, Arrow(ty, ty)).refuted:
        return "skip"
    cx = Counterexample((a,), (ty,), k)
    w = refutes(cx)
    rep.count(seen[0])
    return (replace(cx, witness=w), refutes) if w else None


def _prop_mu_fixpoint(rng, i, gcfg, pcfg, rep):
    m = GUARDED_FUNCTIONALS[i % len(GUARDED_FUNCTIONALS)]
    checker = Checker(pcfg)
    values = _values_for(checker, m, rng, gcfg)
    v = values[rng.randrange(len(values))]
    kmax = min(gcfg.max_index, MU_INDEX_CAP)
    unfolded = unfold(m)

    def refutes(cx):
        for k in range(cx.k + 1):
            a = checker.value_member(k, cx.terms[0], m)
            b = checker.value_member(k, cx.terms[0], unfolded)
            if not _same_class(a, b):
                return f"index {k}: mu F gives {a.outcome.value}, F(mu F) gives {b.outcome.value}"
        return None

    cx = Counterexample((v,), (m,), kmax)
    rep.count("comparisons", kmax + 1)
    return (cx, refutes) if refutes(cx) else None


def _prop_mu_floor(rng, i, gcfg, pcfg, rep):
    m = GUARDED_FUNCTIONALS[i % len(GUARDED_FUNCTIONALS)]
    checker = Checker(pcfg)
    values = _values_for(checker, m, rng, gcfg)
    v = values[rng.randrange(len(values))]
    cut = rng.randint(0, min(gcfg.max_index, MU_INDEX_CAP))
    unfolded = unfold(m)

    def refutes(cx):
        a = cx.terms[0]
        for j in range(cx.k + 1):
            x = checker.value_member(j, a, Floor(m, cut))
            y = checker.value_member(j, a, Floor(unfolded, cut))
            if not _same_class(x, y):
                return f"floor {cut} at index {j}: {x.outcome.value} vs {y.outcome.value}"
        # mu F is a type: closed under decreasing index
        seen_refuted = False
        for j in range(cx.k + 1):
            r = checker.value_member(j, a, m).refuted
            if seen_refuted and not r:
                return f"mu F membership refuted below {j} but not at {j}"
            seen_refuted = seen_refuted or r
        return None

    cx = Counterexample((v,), (m,), min(gcfg.max_index, MU_INDEX_CAP))
    return (cx, refutes) if refutes(cx) else None


def _prop_floor_defs(rng, i, gcfg, pcfg, rep):
    ty = _sample_type(rng, gcfg.max_type_depth)
    checker = Checker(pcfg)
    pool = [t for t in checker.candidates(ty) + ADVERSARIAL_VALUES if is_value(t)]
    v = pool[rng.randrange(len(pool))]
    cut = rng.randint(0, 8)

    def refutes(cx):
        a = cx.terms[0]
        for k in range(cx.k + 1):
            inner = checker.value_member(k, a, ty)
            fl = checker.value_member(k, a, Floor(ty, cut))
            expect_refuted = k >= cut or inner.refuted
            if fl.refuted != expect_refuted:
                return f"floor({cut}) at index {k} disagrees with the definition"
            nested = checker.value_member(k, a, Floor(Floor(ty, 2), 5))
            if nested.outcome is not checker.value_member(k, a, Floor(ty, 2)).outcome:
                return f"floor(floor(t, 2), 5) differs from floor(t, 2) at index {k}"
            if not checker.value_member(k, a, Floor(NAT, 0)).refuted:
                return "floor(Nat, 0) is not empty"
            if checker.value_member(k, a, Floor(TOP, 3)).refuted != (k >= 3):
                return f"floor(Top, 3) wrong at index {k}"
        return None

    cx = Counterexample((v,), (ty,), min(gcfg.max_index, 10), f"cutoff {cut}")
    return (cx, refutes) if refutes(cx) else None


def _prop_wf_equation(rng, i, gcfg, pcfg, rep):
    m = GUARDED_FUNCTIONALS[i % len(GUARDED_FUNCTIONALS)]
    tau = _sample_type(rng, 1)
    checker = Checker(pcfg)
    values = _values_for(checker, m, rng, gcfg)
    v = values[rng.randrange(len(values))]
    kmax = min(gcfg.max_index, WF_INDEX_CAP)

    def refutes(cx):
        a = cx.terms[0]
        for k in range(cx.k + 1):
            lhs = Floor(apply_functional(m, tau), k + 1)
            rhs = Floor(apply_functional(m, Floor(tau, k)), k + 1)
            for j in range(k + 2):
                x, y = checker.value_member(j, a, lhs), checker.value_member(j, a, rhs)
                if not _same_class(x, y):
                    return f"k={k}, index {j}: {x.outcome.value} vs {y.outcome.value}"
        for j in range(cx.k + 1):
            if not checker.value_member(j, a, UNGUARDED).refuted:
                return f"mu X. X admits a value at index {j}"
        return None

    cx = Counterexample((v,), (m, tau), kmax)
    return (cx, refutes) if refutes(cx) else None


PROPERTIES: dict[str, Callable] = {
    "determinism": _prop_determinism,
    "index0-vacuity": _prop_index0,
    "downward-closure": _prop_downward,
    "safety-theorem": _prop_safety,
    "application-lemma": _prop_application,
    "abstraction-theorem": _prop_abstraction,
    "fix-lemma": _prop_fix,
    "mu-floor": _prop_mu_floor,
    "mu-fixpoint": _prop_mu_fixpoint,
    "floor-defs": _prop_floor_defs,
    "wf-equation": _prop_wf_equation,
}
CATALOG = tuple(PROPERTIES)


def run_property(name: str, cfg: GenConfig | None = None, pcfg: ProbeConfig | None = None,
                 max_attempts: int | None = None) -> PropertyReport:
    """Run ``cfg.cases_per_property`` cases of one property.

    Cases whose premises fail do not count; up to ``max_attempts`` (default
    20 per requested case) are drawn to reach the requested number.
    """
    if name not in PROPERTIES:
        raise KeyError(f"unknown property {name!r}; known: {', '.join(CATALOG)}")
    cfg = cfg or GenConfig()
    pcfg = pcfg or ProbeConfig(seed=cfg.seed)
    prop = PROPERTIES[name]
    rep = PropertyReport(name)
    attempts = max_attempts if max_attempts is not None else 20 * cfg.cases_per_property
    n = 0
    while rep.cases < cfg.cases_per_property and n < attempts:
        rng = random.Random(f"{cfg.seed}:{name}:{n}")
        out = prop(rng, n, cfg, pcfg, rep)
        n += 1
        if out == "skip":
            rep.skipped += 1
            continue
        rep.cases += 1
        if out is None:
            continue
        cx, refutes = out
        rep.refutations += 1
        if rep.counterexample is None:
            rep.counterexample = shrink(cx, refutes) if refutes(cx) else cx
    return rep


def run_suite(names: list[str] | tuple[str, ...] | None = None, cfg: GenConfig | None = None,
              pcfg: ProbeConfig | None = None) -> list[PropertyReport]:
    return [run_property(n, cfg, pcfg) for n in (names or CATALOG)]
