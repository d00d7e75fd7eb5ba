"""Seeded generators for types, well-typed annotated terms and arbitrary terms.

Well-typed terms are built backwards through the typing lemmata: pick the
goal type first, then a rule whose conclusion matches it.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .terms import SAbs, SApp, SConst, SFix, SVar, SurfaceTerm
from .typeexpr import NAT, Arrow, Mu, Nat, TVar, TypeExpr, is_guarded, parse_type, types_equal, unfold

__all__ = [
    "GenConfig", "MU_TYPES", "OMEGA_SURFACE", "gen_any_term", "gen_term_of",
    "gen_type", "gen_typed_term", "surface_size",
]

MU_TYPES: tuple[Mu, ...] = (
    Mu(Arrow(NAT, TVar(0))),
    Mu(Arrow(Arrow(TVar(0), NAT), NAT)),
    Mu(Arrow(NAT, Arrow(NAT, TVar(0)))),
)

OMEGA_SURFACE = SApp(SAbs("x", SApp(SVar("x"), SVar("x"))), SAbs("x", SApp(SVar("x"), SVar("x"))))


@dataclass(frozen=True)
class GenConfig:
    seed: int = 0
    max_term_size: int = 30
    max_type_depth: int = 2
    max_index: int = 25
    cases_per_property: int = 100
    with_mu: bool = True

    def __post_init__(self):
        if min(self.max_term_size, self.max_type_depth, self.cases_per_property) < 1:
            raise ValueError("generator bounds must be at least 1")
        if self.max_index < 0:
            raise ValueError("max_index must be non-negative")


def surface_size(s: SurfaceTerm) -> int:
    match s:
        case SAbs(_, body) | SFix(body):
            return 1 + surface_size(body)
        case SApp(f, x):
            return 1 + surface_size(f) + surface_size(x)
    return 1


def gen_type(rng: random.Random, depth: int, with_mu: bool = True) -> TypeExpr:
    if depth <= 0 or rng.random() < 0.4:
        return NAT
    if with_mu and rng.random() < 0.12:
        return rng.choice(MU_TYPES)
    return Arrow(gen_type(rng, depth - 1, with_mu), gen_type(rng, depth - 1, with_mu))


def _diverge(ty: TypeExpr, env) -> SurfaceTerm:
    name = f"f{len(env)}"
    return SFix(SAbs(name, SVar(name), ty))


def gen_term_of(rng: random.Random, ty: TypeExpr, size: int,
                env: tuple[tuple[str, TypeExpr], ...] = ()) -> SurfaceTerm:
    """A term of type ``ty`` under ``env`` whose size is roughly ``size``."""
    matching = [n for n, t in env if types_equal(t, ty)]
    if size <= 1:
        if isinstance(ty, Nat):
            return SConst(0)
        if matching:
            return SVar(rng.choice(matching))
        if isinstance(ty, Arrow) and isinstance(ty.cod, Nat):
            name = f"x{len(env)}"
            return SAbs(name, SConst(0), ty.dom)
        return _diverge(ty, env)

    options: list[tuple[str, int]] = []
    if matching:
        options.append(("var", 3))
    if isinstance(ty, Nat):
        options.append(("const", 3))
    if isinstance(ty, Arrow):
        options.append(("abs", 6))
    if isinstance(ty, Mu) and is_guarded(ty):
        options.append(("unfold", 6))
    if size >= 3:
        options.append(("app", 3))
        options.append(("fix", 1))
    if not options:
        return _diverge(ty, env)

    kinds, weights = zip(*options)
    kind = rng.choices(kinds, weights)[0]
    if kind == "var":
        return SVar(rng.choice(matching))
    if kind == "const":
        return SConst(rng.randrange(4))
    if kind == "abs":
        name = f"x{len(env)}"
        body = gen_term_of(rng, ty.cod, size - 1, env + ((name, ty.dom),))
        return SAbs(name, body, ty.dom)
    if kind == "unfold":
        return gen_term_of(rng, unfold(ty), size, env)
    if kind == "app":
        arg_ty = gen_type(rng, 1, with_mu=False)
        fun_size = rng.randint(1, size - 2)
        fun = gen_term_of(rng, Arrow(arg_ty, ty), fun_size, env)
        arg = gen_term_of(rng, arg_ty, size - 1 - fun_size, env)
        return SApp(fun, arg)
    # fix: body of shape ty -> ty
    return SFix(gen_term_of(rng, Arrow(ty, ty), size - 1, env))


def gen_typed_term(cfg: GenConfig, rng: random.Random | None = None,
                   ty: TypeExpr | None = None) -> tuple[SurfaceTerm, TypeExpr]:
    """A closed annotated term and the type it is built to have."""
    rng = rng or random.Random(cfg.seed)
    if cfg.max_term_size <= 1 and ty is None:
        return SConst(0), NAT
    if ty is None:
        ty = gen_type(rng, cfg.max_type_depth, cfg.with_mu)
    for _ in range(16):
        s = gen_term_of(rng, ty, rng.randint(1, cfg.max_term_size))
        if surface_size(s) <= cfg.max_term_size:
            return s, ty
    if isinstance(ty, Nat):
        return SConst(0), ty
    return _diverge(ty, ()), ty


def _any(rng: random.Random, scope: list[str], size: int) -> SurfaceTerm:
    if size <= 1:
        if scope and rng.random() < 0.6:
            return SVar(rng.choice(scope))
        return SConst(rng.randrange(3))
    r = rng.random()
    if r < 0.05:
        return OMEGA_SURFACE
    if r < 0.35:
        name = f"x{len(scope)}"
        return SAbs(name, _any(rng, scope + [name], size - 1))
    if r < 0.42:
        return SFix(_any(rng, scope, size - 1))
    if size >= 3:
        fun_size = rng.randint(1, size - 2)
        if rng.random() < 0.3:
            fun: SurfaceTerm = SConst(rng.randrange(3))
        else:
            fun = _any(rng, scope, fun_size)
        return SApp(fun, _any(rng, scope, size - 1 - fun_size))
    return SConst(rng.randrange(3))


def gen_any_term(cfg: GenConfig, rng: random.Random | None = None) -> SurfaceTerm:
    """An arbitrary closed term; constants often end up in function position."""
    rng = rng or random.Random(cfg.seed)
    return _any(rng, [], rng.randint(1, cfg.max_term_size))


def parse_mu(text: str) -> Mu:
    t = parse_type(text)
    if not isinstance(t, Mu):
        raise ValueError(f"not a mu type: {text}")
    return t
