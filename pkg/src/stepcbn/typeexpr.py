"""Finite descriptions of semantic types.

Types are nameless: ``TVar(0)`` refers to the nearest enclosing ``Mu``.
The membership semantics lives in :mod:`stepcbn.semantics`; this module
only covers syntax, functional application, unrolling and guardedness.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping, Union

from ._lexer import ParseError, TokenStream

__all__ = [
    "Arrow", "BOT", "Bot", "Floor", "Mu", "NAT", "Nat", "TOP", "Top", "TVar",
    "TypeExpr", "TypeEnv", "apply_functional", "floor_wrap", "is_closed_type",
    "is_guarded", "mu_unroll", "parse_type", "print_type", "types_equal", "unfold",
]


class _Node:
    __slots__ = ()

    def __eq__(self, other):
        if self is other:
            return True
        if type(other) is not type(self) or hash(self) != hash(other):
            return False
        return self._key() == other._key()

    def __hash__(self):
        return self._hash

    def __str__(self):
        return print_type(self)


@dataclass(frozen=True, eq=False, slots=True)
class Bot(_Node):
    _hash: int = field(init=False, repr=False, default=hash("Bot"))
    free_bound: int = field(init=False, repr=False, default=0)

    def _key(self):
        return ()


@dataclass(frozen=True, eq=False, slots=True)
class Top(_Node):
    _hash: int = field(init=False, repr=False, default=hash("Top"))
    free_bound: int = field(init=False, repr=False, default=0)

    def _key(self):
        return ()


@dataclass(frozen=True, eq=False, slots=True)
class Nat(_Node):
    _hash: int = field(init=False, repr=False, default=hash("Nat"))
    free_bound: int = field(init=False, repr=False, default=0)

    def _key(self):
        return ()


@dataclass(frozen=True, eq=False, slots=True)
class Arrow(_Node):
    dom: TypeExpr
    cod: TypeExpr
    _hash: int = field(init=False, repr=False, compare=False)
    free_bound: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash(("Arrow", self.dom._hash, self.cod._hash)))
        object.__setattr__(self, "free_bound", max(self.dom.free_bound, self.cod.free_bound))

    def _key(self):
        return (self.dom, self.cod)


@dataclass(frozen=True, eq=False, slots=True)
class Mu(_Node):
    body: TypeExpr
    hint: str = field(default="X", compare=False)
    _hash: int = field(init=False, repr=False, compare=False)
    free_bound: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash(("Mu", self.body._hash)))
        object.__setattr__(self, "free_bound", max(self.body.free_bound - 1, 0))

    def _key(self):
        return (self.body,)


@dataclass(frozen=True, eq=False, slots=True)
class TVar(_Node):
    index: int
    _hash: int = field(init=False, repr=False, compare=False)
    free_bound: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.index < 0:
            raise ValueError("type variable index must be non-negative")
        object.__setattr__(self, "_hash", hash(("TVar", self.index)))
        object.__setattr__(self, "free_bound", self.index + 1)

    def _key(self):
        return (self.index,)


@dataclass(frozen=True, eq=False, slots=True)
class Floor(_Node):
    inner: TypeExpr
    cutoff: int
    _hash: int = field(init=False, repr=False, compare=False)
    free_bound: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.cutoff < 0:
            raise ValueError("floor cutoff must be non-negative")
        object.__setattr__(self, "_hash", hash(("Floor", self.inner._hash, self.cutoff)))
        object.__setattr__(self, "free_bound", self.inner.free_bound)

    def _key(self):
        return (self.inner, self.cutoff)


TypeExpr = Union[Bot, Top, Nat, Arrow, Mu, TVar, Floor]
TypeEnv = Mapping[str, TypeExpr]

BOT, TOP, NAT = Bot(), Top(), Nat()


def is_closed_type(t: TypeExpr) -> bool:
    return t.free_bound == 0


def _shift(t: TypeExpr, d: int, cutoff: int = 0) -> TypeExpr:
    if d == 0 or t.free_bound <= cutoff:
        return t
    match t:
        case TVar(i):
            return TVar(i + d) if i >= cutoff else t
        case Arrow(a, b):
            return Arrow(_shift(a, d, cutoff), _shift(b, d, cutoff))
        case Mu(body, hint):
            return Mu(_shift(body, d, cutoff + 1), hint)
        case Floor(inner, c):
            return Floor(_shift(inner, d, cutoff), c)
    return t


def _instantiate(t: TypeExpr, arg: TypeExpr, depth: int = 0) -> TypeExpr:
    """Replace ``TVar(depth)`` by ``arg`` and lower the variables above it."""
    if t.free_bound <= depth:
        return t
    match t:
        case TVar(i):
            if i == depth:
                return _shift(arg, depth)
            return TVar(i - 1)
        case Arrow(a, b):
            return Arrow(_instantiate(a, arg, depth), _instantiate(b, arg, depth))
        case Mu(body, hint):
            return Mu(_instantiate(body, arg, depth + 1), hint)
        case Floor(inner, c):
            return Floor(_instantiate(inner, arg, depth), c)
    return t


def apply_functional(m: Mu, arg: TypeExpr) -> TypeExpr:
    """F(arg), where F is the functional described by the body of ``m``."""
    if not isinstance(m, Mu):
        raise TypeError(f"expected a mu type, got {print_type(m)}")
    return _instantiate(m.body, arg)


@lru_cache(maxsize=4096)
def unfold(m: Mu) -> TypeExpr:
    """One-level unrolling F(mu F)."""
    return apply_functional(m, m)


@lru_cache(maxsize=4096)
def mu_unroll(m: Mu, n: int) -> TypeExpr:
    """F^n(Bot)."""
    if n < 0:
        raise ValueError("unroll count must be non-negative")
    if n == 0:
        return BOT
    # built on the cached F^(n-1) so that successive approximants share
    # subtrees and compare by identity instead of structurally
    return apply_functional(m, mu_unroll(m, n - 1))


def _guarded(t: TypeExpr, depth: int, under_arrow: bool) -> bool:
    match t:
        case TVar(i):
            return i != depth or under_arrow
        case Arrow(a, b):
            return _guarded(a, depth, True) and _guarded(b, depth, True)
        case Mu(body):
            return _guarded(body, 0, False) and _guarded(body, depth + 1, under_arrow)
        case Floor(inner):
            return _guarded(inner, depth, under_arrow)
    return True


def is_guarded(m: Mu) -> bool:
    """True when every occurrence of the bound variable sits beneath an arrow.

    Nested mu binders must be guarded in their own variable as well.  This
    is a sufficient syntactic condition for the functional to be well
    founded, not a necessary one.
    """
    return _guarded(m.body, 0, False)


def floor_wrap(t: TypeExpr, k: int) -> Floor:
    return Floor(t, k)


def types_equal(a: TypeExpr, b: TypeExpr) -> bool:
    """Equi-recursive equality: guarded mu types equal their unfoldings.

    Coinductive check with a set of pairs assumed equal.  Unguarded mu types
    are never unfolded and only compare structurally.
    """
    return _teq(a, b, set())


def _teq(a: TypeExpr, b: TypeExpr, assumed: set) -> bool:
    if a == b or (a, b) in assumed:
        return True
    if isinstance(a, Mu) and is_guarded(a):
        assumed.add((a, b))
        return _teq(unfold(a), b, assumed)
    if isinstance(b, Mu) and is_guarded(b):
        assumed.add((a, b))
        return _teq(a, unfold(b), assumed)
    match a, b:
        case Arrow(a1, a2), Arrow(b1, b2):
            return _teq(a1, b1, assumed) and _teq(a2, b2, assumed)
        case Floor(ai, ac), Floor(bi, bc):
            return ac == bc and _teq(ai, bi, assumed)
    return False


# -- concrete syntax --------------------------------------------------------

_TYPE_KEYWORDS = {"Bot", "Top", "Nat", "mu", "floor"}


def parse_type(text: str) -> TypeExpr:
    """Parse ``Bot | Top | Nat | T -> T | mu X. T | X | floor(T, k)``."""
    ts = TokenStream(text)
    t = _parse_type(ts, [], allow_mu=True)
    ts.expect_end()
    return t


def _parse_type(ts: TokenStream, scope: list[str], allow_mu: bool) -> TypeExpr:
    tok = ts.peek
    if tok.kind == "IDENT" and tok.text == "mu":
        if not allow_mu:
            ts.error("mu type must be parenthesized here")
        ts.next()
        name = ts.expect("IDENT")
        if name.text in _TYPE_KEYWORDS:
            ts.error(f"{name.text!r} cannot be a type variable", name.pos)
        ts.expect("DOT")
        body = _parse_type(ts, scope + [name.text], allow_mu)
        return Mu(body, name.text)
    dom = _parse_type_atom(ts, scope)
    if ts.accept("ARROW"):
        return Arrow(dom, _parse_type(ts, scope, allow_mu))
    return dom


def _parse_type_atom(ts: TokenStream, scope: list[str]) -> TypeExpr:
    tok = ts.peek
    if ts.accept("LPAREN"):
        t = _parse_type(ts, scope, allow_mu=True)
        ts.expect("RPAREN")
        return t
    if tok.kind != "IDENT":
        ts.error(f"expected a type, found {tok.text or 'end of input'!r}")
    ts.next()
    if tok.text == "Bot":
        return BOT
    if tok.text == "Top":
        return TOP
    if tok.text == "Nat":
        return NAT
    if tok.text == "floor":
        ts.expect("LPAREN")
        inner = _parse_type(ts, scope, allow_mu=True)
        ts.expect("COMMA")
        k = ts.expect("NUM")
        ts.expect("RPAREN")
        return Floor(inner, int(k.text))
    if tok.text == "mu":
        ts.error("unexpected 'mu'", tok.pos)
    for depth, name in enumerate(reversed(scope)):
        if name == tok.text:
            return TVar(depth)
    ts.error(f"unbound type variable {tok.text!r}", tok.pos)


def print_type(t: TypeExpr, names: tuple[str, ...] = (), annotation: bool = False) -> str:
    """Render ``t``; ``names`` names the enclosing binders, innermost last.

    With ``annotation`` set, mu types are parenthesized so the result can
    sit between ``\\x:`` and the ``.`` of a lambda.
    """
    return _pt(t, list(names), "ann" if annotation else "top")


def _fresh_tvar(hint: str, scope: list[str]) -> str:
    name = hint if hint not in _TYPE_KEYWORDS else "X"
    while name in scope:
        name += "'"
    return name


def _pt(t: TypeExpr, scope: list[str], ctx: str) -> str:
    match t:
        case Bot():
            return "Bot"
        case Top():
            return "Top"
        case Nat():
            return "Nat"
        case TVar(i):
            return scope[-1 - i] if i < len(scope) else f"?{i}"
        case Floor(inner, c):
            return f"floor({_pt(inner, scope, 'top')}, {c})"
        case Arrow(a, b):
            s = f"{_pt(a, scope, 'dom')} -> {_pt(b, scope, 'ann' if ctx == 'ann' else 'top')}"
            return f"({s})" if ctx == "dom" else s
        case Mu(body, hint):
            name = _fresh_tvar(hint, scope)
            s = f"mu {name}. {_pt(body, scope + [name], 'top')}"
            return f"({s})" if ctx in ("dom", "ann") else s
    raise TypeError(f"not a type expression: {t!r}")
