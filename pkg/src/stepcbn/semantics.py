"""Step-indexed type membership.

Decides, or tries to refute, the judgements

* ``<k, v> in t``           -- :func:`value_member`
* ``a :_k t``               -- :func:`holds`
* ``g :_k env``             -- :func:`subst_holds`
* ``env |= a :_k t``        -- :func:`models`

Membership in an arrow type quantifies over every closed term, which no
procedure can decide.  It is replaced by a finite list of probe terms, so a
query has three possible outcomes: a definite refutation carrying a
replayable witness, bounded evidence from the probes that were tried, or an
exact answer for queries that never reach the quantifier (Bot, Top, Nat,
floors of those, and anything at index 0 or 1).

The probe list for a type does not depend on the step index.  Together with
the premise filter this makes the arrow check at index ``k + 1`` a superset
of the check at ``k``, so refutations are monotone in the index.
"""

from __future__ import annotations

import enum
import itertools
import random
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Iterable, Mapping

from .evaluator import Terminal, Trace, _step, format_trace, trace
from .generators import gen_term_of
from .terms import (
    Abs, App, Const, OpenTerm, OpenTermError, Term, Var, close_with,
    free_vars, instantiate, is_value, parse_closed, print_term, resolve,
)
from .typeexpr import (
    Arrow, Bot, Floor, Mu, Nat, Top, TypeExpr, TypeEnv, is_guarded,
    mu_unroll, print_type, types_equal, unfold,
)

__all__ = [
    "Checker", "DomainMismatchError", "FreeVariableError", "OMEGA", "Outcome",
    "ProbeConfig", "Verdict", "Witness", "format_verdict", "holds", "models",
    "probes_for", "replay", "subst_holds", "value_member",
]

OMEGA = parse_closed(r"(\x. x x) (\x. x x)")
_DIVERGE = parse_closed(r"fix \x. x")
_ID = parse_closed(r"\x. x")
_WRONG = parse_closed(r"\x. 0 0")
_SELF = parse_closed(r"\x. x x")


class FreeVariableError(ValueError):
    pass


class DomainMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class ProbeConfig:
    probes_per_type: int = 5
    max_probe_size: int = 6
    seed: int = 0
    extra_probes: tuple[tuple[TypeExpr, Term], ...] = ()
    max_substitutions: int = 125

    def __post_init__(self):
        if self.probes_per_type < 1:
            raise ValueError("probes_per_type must be at least 1")
        object.__setattr__(self, "extra_probes", tuple(self.extra_probes))
        for ty, term in self.extra_probes:
            if term.free_bound:
                raise OpenTermError("extra probes must be closed terms")

    def with_probes(self, *pairs: tuple[TypeExpr, Term]) -> ProbeConfig:
        return replace(self, extra_probes=self.extra_probes + tuple(pairs))


class Outcome(enum.Enum):
    REFUTED = "refuted"
    PASSED = "passed"
    HOLDS = "holds"


@dataclass(frozen=True)
class Witness:
    """Why a judgement failed; enough to re-run the failure.

    ``judgement`` is one of member / holds / subst / models and says how
    ``term``, ``index`` and ``type`` are to be read.  ``cause`` is the
    failing sub-judgement, if any.
    """

    judgement: str
    reason: str
    term: Term
    index: int
    type: TypeExpr
    trace: Trace | None = None
    probe: Term | None = None
    probe_index: int | None = None
    gamma: tuple[tuple[str, Term], ...] = ()
    variable: str | None = None
    context: tuple[str, ...] = ()
    cause: Witness | None = None
    source: TypeExpr | None = None

    def headline(self) -> str:
        t = print_term(self.term, self.context)
        ty = print_type(self.type)
        if self.judgement == "member":
            return f"<{self.index}, {t}> in {ty}"
        if self.judgement == "models":
            return f"env |= {t} :_{self.index} {ty}"
        return f"{t} :_{self.index} {ty}"

    def lines(self) -> list[str]:
        out = [f"judgement: {self.headline()}", f"reason: {self.reason}"]
        if self.variable is not None:
            out.append(f"variable: {self.variable}")
        for name, term in self.gamma:
            out.append(f"gamma: {name} := {print_term(term)}")
        if self.probe is not None:
            out.append(f"probe: {print_term(self.probe)} at index {self.probe_index}")
        if self.trace is not None:
            out.append("trace:")
            out.extend("  " + ln for ln in format_trace(self.trace).splitlines())
        if self.cause is not None:
            out.append("cause:")
            out.extend("  " + ln for ln in self.cause.lines())
        return out

    def __str__(self):
        return "\n".join(self.lines())


@dataclass(frozen=True)
class Verdict:
    outcome: Outcome
    probes: int = 0
    witness: Witness | None = None

    @property
    def refuted(self) -> bool:
        return self.outcome is Outcome.REFUTED

    @property
    def exact(self) -> bool:
        return self.outcome is Outcome.HOLDS

    def __str__(self):
        return format_verdict(self)


HOLDS = Verdict(Outcome.HOLDS)


def _refuted(w: Witness) -> Verdict:
    return Verdict(Outcome.REFUTED, 0, w)


def _conj(verdicts: Iterable[Verdict]) -> Verdict:
    total, exact = 0, True
    for v in verdicts:
        if v.refuted:
            return v
        total += v.probes
        exact = exact and v.exact
    return HOLDS if exact else Verdict(Outcome.PASSED, total)


def format_verdict(v: Verdict) -> str:
    lines = [f"verdict: {v.outcome.value}", f"probes: {v.probes}"]
    if v.witness is not None:
        lines.append("witness:")
        lines.extend("  " + ln for ln in v.witness.lines())
    return "\n".join(lines)


@dataclass
class _ArrowState:
    # checks for j in [1, upto) are done; counts[j] = checks with index < j
    upto: int = 1
    counts: list[int] = field(default_factory=lambda: [0, 0])
    fail_index: int | None = None
    fail_probe: Term | None = None
    fail_cause: Witness | None = None


class Checker:
    """Membership queries under one probe configuration.

    Results are memoized.  Every cached answer is a pure function of the
    query and the configuration, so a checker can be shared between queries
    without changing any answer.
    """

    def __init__(self, cfg: ProbeConfig | None = None):
        self.cfg = cfg or ProbeConfig()
        self._runs: dict[Term, list[Term]] = {}
        self._finished: set[Term] = set()
        self._members: dict[tuple[Term, int, TypeExpr, TypeExpr], Verdict] = {}
        self._arrows: dict[tuple[Term, TypeExpr, TypeExpr], _ArrowState] = {}
        self._candidates: dict[TypeExpr, tuple[Term, ...]] = {}
        self._canon: dict[tuple[TypeExpr, int], tuple[Term, ...]] = {}

    # -- evaluation ----------------------------------------------------------

    def _reach(self, a: Term, budget: int) -> tuple[int, Term] | None:
        """First irreducible reduct of ``a`` within ``budget`` steps, with its step count."""
        run = self._runs.get(a)
        if run is None:
            run = self._runs[a] = [a]
        while True:
            last = len(run) - 1
            if a in self._finished:
                return (last, run[-1]) if last <= budget else None
            if last > budget:
                return None
            nxt = _step(run[-1])
            if nxt is None:
                self._finished.add(a)
                continue
            run.append(nxt)
            if last == budget:
                return None

    def _trace_to(self, a: Term, j: int) -> Trace:
        run = self._runs[a][: j + 1]
        return Trace(tuple(run), Terminal.VALUE if is_value(run[-1]) else Terminal.STUCK)

    # -- judgements ------------------------------------------------------------

    def holds(self, a: Term, k: int, t: TypeExpr) -> Verdict:
        """``a :_k t``: any irreducible reduct reached in j < k steps is in ``t`` at k - j."""
        if a.free_bound:
            raise OpenTermError(f"term is not closed: {print_term(a)}")
        _require_closed_type(t)
        return self._holds(a, k, t, t)

    def value_member(self, k: int, v: Term, t: TypeExpr) -> Verdict:
        """``<k, v> in t``."""
        if not is_value(v):
            raise ValueError(f"not a value: {print_term(v)}")
        _require_closed_type(t)
        return self._value_member(k, v, t, t)

    # ``src`` is the type probes are drawn from.  It is ``t`` itself except
    # inside the unrolling of a mu type, where it is the matching part of the
    # mu type: the approximants F^n(Bot) are an artifact of the definition,
    # and drawing their probes from F(mu F) keeps both sides of the fixpoint
    # equation looking at the same terms.

    def _holds(self, a: Term, k: int, t: TypeExpr, src: TypeExpr) -> Verdict:
        if k <= 0:
            return HOLDS
        hit = self._reach(a, k - 1)
        if hit is None:
            return HOLDS
        j, b = hit
        if not is_value(b):
            return _refuted(Witness("holds", "stuck", a, k, t, trace=self._trace_to(a, j)))
        v = self._value_member(k - j, b, t, src)
        if v.refuted:
            tr = self._trace_to(a, j) if j else None
            return _refuted(Witness("holds", "reduct not in type", a, k, t, trace=tr,
                                    cause=v.witness, source=_src(src, t)))
        return v

    def _value_member(self, k: int, v: Term, t: TypeExpr, src: TypeExpr) -> Verdict:
        src = _align(src, t)
        key = (v, k, t, src)
        hit = self._members.get(key)
        if hit is None:
            hit = self._members[key] = self._member(k, v, t, src)
        return hit

    def _member(self, k: int, v: Term, t: TypeExpr, src: TypeExpr) -> Verdict:
        match t:
            case Bot():
                return _refuted(Witness("member", "empty type", v, k, t))
            case Top():
                return HOLDS
            case Nat():
                if isinstance(v, Const):
                    return HOLDS
                return _refuted(Witness("member", "not a constant", v, k, t))
            case Floor(inner, cutoff):
                if k >= cutoff:
                    return _refuted(Witness("member", f"index {k} not below cutoff {cutoff}", v, k, t))
                r = self._value_member(k, v, inner, src.inner)
                if r.refuted:
                    return _refuted(Witness("member", "inner type", v, k, t,
                                            cause=r.witness, source=_src(src, t)))
                return r
            case Mu():
                r = self._value_member(k, v, mu_unroll(t, k + 1), src)
                if r.refuted:
                    return _refuted(Witness("member", f"unrolled {k + 1} times", v, k, t,
                                            cause=r.witness, source=_src(src, t)))
                return r
            case Arrow():
                return self._arrow_member(k, v, t, src)
        raise TypeError(f"not a type expression: {t!r}")

    def _arrow_member(self, k: int, v: Term, t: Arrow, src: Arrow) -> Verdict:
        if not isinstance(v, Abs):
            return _refuted(Witness("member", "not an abstraction", v, k, t))
        state = self._arrows.get((v, t, src))
        if state is None:
            state = self._arrows[(v, t, src)] = _ArrowState()
        while state.fail_index is None and state.upto < k:
            # j = 0 is vacuous on both sides of the implication
            j = state.upto
            done = state.counts[j]
            for b in self.candidates(src.dom):
                if self._holds(b, j, t.dom, src.dom).refuted:
                    continue
                done += 1
                r = self._holds(instantiate(v.body, b), j, t.cod, src.cod)
                if r.refuted:
                    state.fail_index, state.fail_probe, state.fail_cause = j, b, r.witness
                    break
            if state.fail_index is not None:
                break
            state.counts.append(done)
            state.upto = j + 1
        if state.fail_index is not None and state.fail_index < k:
            return _refuted(Witness("member", "probe result not in codomain", v, k, t,
                                    probe=state.fail_probe, probe_index=state.fail_index,
                                    cause=state.fail_cause, source=_src(src, t)))
        if k <= 1:
            return HOLDS
        return Verdict(Outcome.PASSED, state.counts[k])

    def subst_holds(self, g: Mapping[str, Term], k: int, env: TypeEnv) -> Verdict:
        """``g :_k env``, variable by variable in name order."""
        if set(g) != set(env):
            raise DomainMismatchError(
                f"substitution domain {sorted(g)} differs from environment domain {sorted(env)}")
        results = []
        for name in sorted(g):
            r = self.holds(g[name], k, env[name])
            if r.refuted:
                return _refuted(Witness("subst", "variable", g[name], k, env[name],
                                        variable=name, cause=r.witness))
            results.append(r)
        return _conj(results)

    def models(self, env: TypeEnv, a: OpenTerm | Term, k: int, t: TypeExpr) -> Verdict:
        """``env |= a :_k t`` over ground substitutions drawn from the probes."""
        if not isinstance(a, OpenTerm):
            a = OpenTerm(a, ())
        slots = sorted(free_vars(a.term))
        for i in slots:
            if i >= len(a.context) or a.context[i] not in env:
                name = a.context[i] if i < len(a.context) else f"#{i}"
                raise FreeVariableError(f"free variable {name} is not in the environment")
        _require_closed_type(t)
        if k <= 0:
            return HOLDS
        if not slots:
            r = self.holds(a.term, k, t)
            if r.refuted:
                return _refuted(Witness("models", "closed term", a.term, k, t,
                                        context=a.context, cause=r.witness))
            return r
        names = [a.context[i] for i in slots]
        pools = []
        for name in names:
            ty = env[name]
            pools.append([p for p in self.candidates(ty) if not self.holds(p, k, ty).refuted])
        filler = [OMEGA] * len(a.context)
        tried = 0
        for combo in itertools.islice(itertools.product(*pools), self.cfg.max_substitutions):
            ground = list(filler)
            for i, p in zip(slots, combo):
                ground[i] = p
            closed = close_with(a.term, ground)
            r = self.holds(closed, k, t)
            tried += 1
            if r.refuted:
                return _refuted(Witness("models", "ground substitution", a.term, k, t,
                                        gamma=tuple(zip(names, combo)), context=a.context,
                                        cause=r.witness))
        return Verdict(Outcome.PASSED, tried)

    # -- probes ----------------------------------------------------------------

    def candidates(self, t: TypeExpr) -> tuple[Term, ...]:
        """Index-independent probe candidates for ``t``.

        Canonical members first, then Omega, then terms generated backwards
        from the typing lemmata, capped at ``probes_per_type``; caller
        supplied extras for ``t`` come on top of the cap.  Floors are
        ignored: ``floor(t, c)`` is probed with the candidates of ``t``.
        """
        hit = self._candidates.get(t)
        if hit is not None:
            return hit
        # floors only cut off indices, and candidates are index-independent
        base = _erase_floors(t)
        core, backup = self._canonical(base, 2)
        ordered = [*core, OMEGA, *self._generated(base), *backup]
        cap = self.cfg.probes_per_type
        out = _dedupe(ordered)[:cap]
        if OMEGA not in out:
            out = out[: cap - 1] + [OMEGA]
        extras = [p for ty, p in self.cfg.extra_probes if ty == t or types_equal(ty, t)]
        out = tuple(_dedupe(out + extras))
        self._candidates[t] = out
        return out

    def _canonical(self, t: TypeExpr, depth: int) -> tuple[list[Term], list[Term]]:
        match t:
            case Bot():
                return [_DIVERGE], []
            case Top():
                return [Const(0), _ID, _WRONG], [_SELF, Const(1)]
            case Nat():
                return [Const(0), Const(1)], [Const(2), App(_ID, Const(3))]
            case Floor(inner, _):
                return self._canonical(inner, depth)
            case Mu():
                if not is_guarded(t):
                    return [], []
                return self._canonical(unfold(t), depth)
            case Arrow(dom, cod):
                core: list[Term] = [Abs(OMEGA)]
                backup: list[Term] = []
                if depth > 0:
                    results = [p for p in self._flat(cod, depth - 1) if p is not OMEGA]
                    if results:
                        core.append(Abs(results[0]))
                        backup.extend(Abs(p) for p in results[1:])
                    if dom == cod:
                        core.append(_ID)
                    elif isinstance(dom, Arrow) and dom.cod == cod:
                        args = [p for p in self._flat(dom.dom, depth - 1) if p is not OMEGA]
                        if args:
                            core.append(Abs(App(Var(0), args[0]), "f"))
                return core, backup
        raise TypeError(f"not a closed type expression: {t!r}")

    def _flat(self, t: TypeExpr, depth: int) -> tuple[Term, ...]:
        key = (t, depth)
        hit = self._canon.get(key)
        if hit is None:
            core, backup = self._canonical(t, depth)
            hit = self._canon[key] = tuple(core + backup)
        return hit

    def _generated(self, t: TypeExpr) -> list[Term]:
        rng = random.Random(f"{self.cfg.seed}:{print_type(t)}")
        out = []
        for _ in range(self.cfg.probes_per_type):
            s = gen_term_of(rng, t, rng.randint(2, max(2, self.cfg.max_probe_size)))
            out.append(resolve(s, closed=True).term)
        return out

    def probes_for(self, t: TypeExpr, j: int) -> list[Term]:
        """Probe terms for ``t`` at index ``j``, filtered by a shallow membership check."""
        _require_closed_type(t)
        shallow = _checker(replace(self.cfg, probes_per_type=min(2, self.cfg.probes_per_type)))
        return [b for b in self.candidates(t) if not shallow.holds(b, j, t).refuted]


def _erase_floors(t: TypeExpr) -> TypeExpr:
    match t:
        case Floor(inner, _):
            return _erase_floors(inner)
        case Arrow(a, b):
            return Arrow(_erase_floors(a), _erase_floors(b))
        case Mu(body, hint):
            return Mu(_erase_floors(body), hint)
    return t


def _src(src: TypeExpr, t: TypeExpr) -> TypeExpr | None:
    return None if src == t else src


def _align(src: TypeExpr, t: TypeExpr) -> TypeExpr:
    """Unfold ``src`` until it has the same outer shape as ``t``; fall back to ``t``."""
    if src is t:
        return t
    for _ in range(8):
        if type(src) is type(t):
            return src
        if not (isinstance(src, Mu) and is_guarded(src)):
            break
        src = unfold(src)
    return t


def _dedupe(terms: Iterable[Term]) -> list[Term]:
    seen: set[Term] = set()
    out = []
    for t in terms:
        if t not in seen:
            seen.add(t)
            out.append(t)
    return out


def _require_closed_type(t: TypeExpr) -> None:
    if t.free_bound:
        raise ValueError(f"type has an unbound type variable: {print_type(t)}")


@lru_cache(maxsize=8)
def _checker(cfg: ProbeConfig) -> Checker:
    return Checker(cfg)


def _resolve_cfg(cfg: ProbeConfig | None) -> Checker:
    return _checker(cfg or ProbeConfig())


def value_member(k: int, v: Term, t: TypeExpr, cfg: ProbeConfig | None = None) -> Verdict:
    return _resolve_cfg(cfg).value_member(k, v, t)


def holds(a: Term, k: int, t: TypeExpr, cfg: ProbeConfig | None = None) -> Verdict:
    return _resolve_cfg(cfg).holds(a, k, t)


def probes_for(t: TypeExpr, j: int, cfg: ProbeConfig | None = None) -> list[Term]:
    return _resolve_cfg(cfg).probes_for(t, j)


def subst_holds(g: Mapping[str, Term], k: int, env: TypeEnv, cfg: ProbeConfig | None = None) -> Verdict:
    return _resolve_cfg(cfg).subst_holds(g, k, env)


def models(env: TypeEnv, a: OpenTerm | Term, k: int, t: TypeExpr, cfg: ProbeConfig | None = None) -> Verdict:
    return _resolve_cfg(cfg).models(env, a, k, t)


def replay(w: Witness, cfg: ProbeConfig | None = None) -> bool:
    """Re-run a refutation from scratch and confirm it still fails.

    Leaf witnesses are re-checked directly (a stuck trace is re-evaluated,
    a non-constant is looked at); probe witnesses re-check the premise on
    the probe and replay the failing conclusion.
    """
    c = Checker(cfg or ProbeConfig())
    src = w.source or w.type
    if w.judgement == "member":
        if not is_value(w.term) or not c._value_member(w.index, w.term, w.type, src).refuted:
            return False
    elif w.judgement == "holds":
        if w.term.free_bound or not c._holds(w.term, w.index, w.type, src).refuted:
            return False
    elif w.judgement == "subst":
        if not c.holds(w.term, w.index, w.type).refuted:
            return False
    elif w.judgement == "models":
        ground = [OMEGA] * len(w.context)
        named = dict(w.gamma)
        for i, name in enumerate(w.context):
            if name in named:
                ground[i] = named[name]
        if not c.holds(close_with(w.term, ground), w.index, w.type).refuted:
            return False
    else:
        return False

    if w.reason == "stuck":
        tr = trace(w.term, w.index - 1)
        if tr.terminal is not Terminal.STUCK or tr.steps_taken >= w.index:
            return False
    elif w.reason == "not a constant" and isinstance(w.term, Const):
        return False
    elif w.reason == "not an abstraction" and isinstance(w.term, Abs):
        return False
    elif w.reason == "probe result not in codomain":
        dom, cod = w.type.dom, w.type.cod
        src = _align(src, w.type)
        if c._holds(w.probe, w.probe_index, dom, src.dom).refuted:
            return False
        if not c._holds(instantiate(w.term.body, w.probe), w.probe_index, cod, src.cod).refuted:
            return False
    return w.cause is None or replay(w.cause, cfg)
