"""Syntax-directed derivation of ``env |= a : t`` from the typing lemmata.

Binders carry type annotations, so every rule is chosen by the shape of the
term.  Recursive types are equi-recursive: where a rule needs an arrow and
the type at hand is a mu type, it is unfolded on the spot and a MuUnfold
node is recorded; the dual MuFold is recorded when an argument's type is
the unfolding of the expected mu type.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Mapping

from .semantics import Checker, ProbeConfig, Verdict, models
from .terms import SAbs, SApp, SConst, SFix, SurfaceTerm, SVar, print_term, resolve
from .typeexpr import NAT, Arrow, Mu, TypeExpr, print_type, types_equal, unfold

__all__ = [
    "ARROW", "DerivationError", "Derivation", "MatchResult", "Rule",
    "check_derivation", "derive", "type_match", "validate",
]

DEFAULT_UNROLL_BUDGET = 32


class DerivationError(ValueError):
    pass


class TypeMatchError(DerivationError):
    pass


class Rule(enum.Enum):
    VAR = "Var"
    CONST = "Const"
    APP = "App"
    ABS = "Abs"
    FIX = "Fix"
    MU_FOLD = "MuFold"
    MU_UNFOLD = "MuUnfold"


class _ArrowShape:
    def __repr__(self):
        return "ARROW"


ARROW = _ArrowShape()


@dataclass(frozen=True)
class Derivation:
    env: Mapping[str, TypeExpr]
    term: SurfaceTerm
    type: TypeExpr
    rule: Rule
    premises: tuple[Derivation, ...] = ()

    def lines(self, indent: int = 0) -> list[str]:
        pad = "  " * indent
        head = f"{_env_str(self.env)} |= {print_term(self.term)} : {print_type(self.type)}"
        out = [f"{pad}[{self.rule.value}] {head}"]
        for p in self.premises:
            out.extend(p.lines(indent + 1))
        return out

    def __str__(self):
        return "\n".join(self.lines())

    def to_dict(self) -> dict:
        return {
            "rule": self.rule.value,
            "env": {k: print_type(v) for k, v in sorted(self.env.items())},
            "term": print_term(self.term),
            "type": print_type(self.type),
            "premises": [p.to_dict() for p in self.premises],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _env_str(env: Mapping[str, TypeExpr]) -> str:
    if not env:
        return "{}"
    return "{" + ", ".join(f"{k}: {print_type(v)}" for k, v in sorted(env.items())) + "}"


@dataclass(frozen=True)
class MatchResult:
    type: TypeExpr
    steps: tuple[Rule, ...] = field(default=())


def type_match(expected, actual: TypeExpr, unroll_budget: int = DEFAULT_UNROLL_BUDGET) -> MatchResult:
    """Match ``actual`` against an expected shape.

    ``expected`` is either :data:`ARROW`, in which case mu types are
    unfolded until an arrow appears, or a concrete type, compared by
    equi-recursive equality and recording a fold or unfold when one level
    of unrolling on either side makes the two meet.
    """
    if unroll_budget < 0:
        raise ValueError("unroll budget must be non-negative")
    if expected is ARROW:
        steps = []
        t = actual
        while isinstance(t, Mu):
            if len(steps) >= unroll_budget:
                raise TypeMatchError(f"unroll budget {unroll_budget} exhausted on {print_type(actual)}")
            t = unfold(t)
            steps.append(Rule.MU_UNFOLD)
        if not isinstance(t, Arrow):
            raise TypeMatchError(f"expected arrow, found {print_type(actual)}")
        return MatchResult(t, tuple(steps))
    if actual == expected:
        return MatchResult(expected)
    if isinstance(expected, Mu) and unfold(expected) == actual:
        return MatchResult(expected, (Rule.MU_FOLD,))
    if isinstance(actual, Mu) and unfold(actual) == expected:
        return MatchResult(expected, (Rule.MU_UNFOLD,))
    if types_equal(expected, actual):
        return MatchResult(expected)
    raise TypeMatchError(f"expected {print_type(expected)}, found {print_type(actual)}")


def _apply_steps(d: Derivation, steps: tuple[Rule, ...], target: TypeExpr) -> Derivation:
    for rule in steps:
        if rule is Rule.MU_UNFOLD:
            d = Derivation(d.env, d.term, unfold(d.type), rule, (d,))
        else:
            d = Derivation(d.env, d.term, target, rule, (d,))
    return d


def derive(env: Mapping[str, TypeExpr], s: SurfaceTerm,
           unroll_budget: int = DEFAULT_UNROLL_BUDGET) -> Derivation:
    """Derive a type for the annotated term ``s`` under ``env``."""
    env = dict(env)
    match s:
        case SVar(name):
            if name not in env:
                raise DerivationError(f"unbound variable {name}")
            return Derivation(env, s, env[name], Rule.VAR)
        case SConst():
            return Derivation(env, s, NAT, Rule.CONST)
        case SAbs(name, body, annot):
            if annot is None:
                raise DerivationError(f"binder {name} has no type annotation")
            inner = derive({**env, name: annot}, body, unroll_budget)
            return Derivation(env, s, Arrow(annot, inner.type), Rule.ABS, (inner,))
        case SApp(fun, arg):
            df = derive(env, fun, unroll_budget)
            try:
                m = type_match(ARROW, df.type, unroll_budget)
            except TypeMatchError as e:
                raise DerivationError(f"in {print_term(s)}: {e}") from None
            df = _apply_steps(df, m.steps, m.type)
            da = derive(env, arg, unroll_budget)
            try:
                ma = type_match(m.type.dom, da.type, unroll_budget)
            except TypeMatchError as e:
                raise DerivationError(f"argument of {print_term(s)}: {e}") from None
            da = _apply_steps(da, ma.steps, m.type.dom)
            return Derivation(env, s, m.type.cod, Rule.APP, (df, da))
        case SFix(body):
            db = derive(env, body, unroll_budget)
            try:
                m = type_match(ARROW, db.type, unroll_budget)
            except TypeMatchError as e:
                raise DerivationError(f"fix body: {e}") from None
            if not types_equal(m.type.dom, m.type.cod):
                raise DerivationError(
                    f"fix body must have shape T -> T, found {print_type(m.type)}")
            db = _apply_steps(db, m.steps, m.type)
            return Derivation(env, s, m.type.dom, Rule.FIX, (db,))
    raise DerivationError(f"not a surface term: {s!r}")


def validate(d: Derivation) -> None:
    """Check that every node is an instance of its rule; raise otherwise."""
    def bad(msg: str):
        raise DerivationError(f"invalid {d.rule.value} node for {print_term(d.term)}: {msg}")

    ps = d.premises
    match d.rule:
        case Rule.VAR:
            if ps or not isinstance(d.term, SVar) or d.env.get(d.term.name) != d.type:
                bad("type differs from the environment")
        case Rule.CONST:
            if ps or not isinstance(d.term, SConst) or d.type != NAT:
                bad("constants have type Nat")
        case Rule.ABS:
            if len(ps) != 1 or not isinstance(d.term, SAbs):
                bad("shape")
            p = ps[0]
            if p.term != d.term.body or dict(p.env) != {**d.env, d.term.name: d.term.annot}:
                bad("premise does not extend the environment with the binder")
            if d.type != Arrow(d.term.annot, p.type):
                bad("conclusion is not annotation -> body type")
        case Rule.APP:
            if len(ps) != 2 or not isinstance(d.term, SApp):
                bad("shape")
            pf, pa = ps
            if pf.term != d.term.fun or pa.term != d.term.arg:
                bad("premises are not the function and argument")
            if not isinstance(pf.type, Arrow) or pf.type.cod != d.type:
                bad("function premise is not an arrow into the conclusion")
            if not types_equal(pa.type, pf.type.dom):
                bad("argument type differs from the domain")
        case Rule.FIX:
            if len(ps) != 1 or not isinstance(d.term, SFix):
                bad("shape")
            p = ps[0]
            if p.term != d.term.body or not isinstance(p.type, Arrow):
                bad("premise is not an arrow typing of the body")
            if not types_equal(p.type.dom, p.type.cod) or p.type.dom != d.type:
                bad("premise is not T -> T")
        case Rule.MU_UNFOLD:
            if len(ps) != 1 or not isinstance(ps[0].type, Mu) or unfold(ps[0].type) != d.type:
                bad("conclusion is not the unfolding of the premise")
            if ps[0].term != d.term:
                bad("term changed")
        case Rule.MU_FOLD:
            if len(ps) != 1 or not isinstance(d.type, Mu) or not types_equal(unfold(d.type), ps[0].type):
                bad("premise is not the unfolding of the conclusion")
            if ps[0].term != d.term:
                bad("term changed")
    for p in ps:
        if d.rule is not Rule.ABS and dict(p.env) != dict(d.env):
            raise DerivationError(f"premise environment changed under {d.rule.value}")
        validate(p)


def check_derivation(d: Derivation, k: int, cfg: ProbeConfig | None = None,
                     checker: Checker | None = None) -> Verdict:
    """Semantic check of the conclusion of ``d`` at index ``k``."""
    names = tuple(sorted(d.env))
    open_term = resolve(d.term, names)
    if checker is not None:
        return checker.models(d.env, open_term, k, d.type)
    return models(d.env, open_term, k, d.type, cfg)
