"""Terms of the call-by-name lambda calculus with constants and ``fix``.

Two layers: a named surface syntax (``S*`` classes, optionally annotated
binders) produced by the parser, and a nameless core (:class:`Const`,
:class:`Var`, :class:`Abs`, :class:`App`, :class:`Fix`) used by everything
that computes.  In the core, ``Var(i)`` under ``d`` binders refers to the
enclosing binder ``i`` when ``i < d`` and to free variable ``i - d``
of the surrounding context otherwise.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from typing import Iterator, Union

from ._lexer import ParseError, TokenStream
from .typeexpr import TypeExpr, _parse_type, print_type

__all__ = [
    "Abs", "App", "Const", "Fix", "OpenTerm", "OpenTermError", "SAbs", "SApp",
    "SConst", "SFix", "SVar", "SurfaceTerm", "Term", "UnboundVariableError",
    "Var", "alpha_eq", "free_vars", "instantiate", "is_closed", "is_value",
    "parse_closed", "parse_term", "print_term", "resolve", "subterms",
    "substitute", "close_with",
]

if sys.getrecursionlimit() < 20000:
    # reduction can build deeply nested argument spines
    sys.setrecursionlimit(20000)


class UnboundVariableError(ValueError):
    def __init__(self, names):
        self.names = tuple(names)
        super().__init__("unbound variable" + ("s " if len(self.names) > 1 else " ")
                         + ", ".join(self.names))


class OpenTermError(ValueError):
    pass


# -- nameless core ------------------------------------------------------------

class _Term:
    __slots__ = ()

    def __eq__(self, other):
        if self is other:
            return True
        if type(other) is not type(self) or self._hash != other._hash:
            return False
        return self._key() == other._key()

    def __hash__(self):
        return self._hash

    def __str__(self):
        return print_term(self)


@dataclass(frozen=True, eq=False, slots=True)
class Const(_Term):
    n: int
    _hash: int = field(init=False, repr=False)
    free_bound: int = field(init=False, repr=False, default=0)
    size: int = field(init=False, repr=False, default=1)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("constants are natural numbers")
        object.__setattr__(self, "_hash", hash(("Const", self.n)))

    def _key(self):
        return (self.n,)


@dataclass(frozen=True, eq=False, slots=True)
class Var(_Term):
    index: int
    _hash: int = field(init=False, repr=False)
    free_bound: int = field(init=False, repr=False)
    size: int = field(init=False, repr=False, default=1)

    def __post_init__(self):
        if self.index < 0:
            raise ValueError("variable index must be non-negative")
        object.__setattr__(self, "_hash", hash(("Var", self.index)))
        object.__setattr__(self, "free_bound", self.index + 1)

    def _key(self):
        return (self.index,)


@dataclass(frozen=True, eq=False, slots=True)
class Abs(_Term):
    body: Term
    hint: str = field(default="x", compare=False)
    _hash: int = field(init=False, repr=False)
    free_bound: int = field(init=False, repr=False)
    size: int = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash(("Abs", self.body._hash)))
        object.__setattr__(self, "free_bound", max(self.body.free_bound - 1, 0))
        object.__setattr__(self, "size", self.body.size + 1)

    def _key(self):
        return (self.body,)


@dataclass(frozen=True, eq=False, slots=True)
class App(_Term):
    fun: Term
    arg: Term
    _hash: int = field(init=False, repr=False)
    free_bound: int = field(init=False, repr=False)
    size: int = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash(("App", self.fun._hash, self.arg._hash)))
        object.__setattr__(self, "free_bound", max(self.fun.free_bound, self.arg.free_bound))
        object.__setattr__(self, "size", self.fun.size + self.arg.size + 1)

    def _key(self):
        return (self.fun, self.arg)


@dataclass(frozen=True, eq=False, slots=True)
class Fix(_Term):
    body: Term
    _hash: int = field(init=False, repr=False)
    free_bound: int = field(init=False, repr=False)
    size: int = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash(("Fix", self.body._hash)))
        object.__setattr__(self, "free_bound", self.body.free_bound)
        object.__setattr__(self, "size", self.body.size + 1)

    def _key(self):
        return (self.body,)


Term = Union[Const, Var, Abs, App, Fix]


def is_closed(a: Term) -> bool:
    return a.free_bound == 0


def is_value(a: Term) -> bool:
    """A constant, or a closed abstraction."""
    return isinstance(a, Const) or (isinstance(a, Abs) and a.free_bound == 0)


def alpha_eq(a: Term, b: Term) -> bool:
    # binder hints do not take part in equality
    return a == b


def shift(a: Term, d: int, cutoff: int = 0) -> Term:
    if d == 0 or a.free_bound <= cutoff:
        return a
    match a:
        case Var(i):
            return Var(i + d) if i >= cutoff else a
        case Abs(body, hint):
            return Abs(shift(body, d, cutoff + 1), hint)
        case App(f, x):
            return App(shift(f, d, cutoff), shift(x, d, cutoff))
        case Fix(body):
            return Fix(shift(body, d, cutoff))
    return a


def instantiate(body: Term, b: Term, depth: int = 0) -> Term:
    """The body of an abstraction with its bound variable replaced by ``b``.

    ``instantiate(a, b)`` is ``a[x -> b]`` where ``x`` is the binder that
    ``a`` sat under; variables above it move down by one.
    """
    if body.free_bound <= depth:
        return body
    match body:
        case Var(i):
            if i == depth:
                return shift(b, depth)
            return Var(i - 1)
        case Abs(inner, hint):
            return Abs(instantiate(inner, b, depth + 1), hint)
        case App(f, x):
            return App(instantiate(f, b, depth), instantiate(x, b, depth))
        case Fix(inner):
            return Fix(instantiate(inner, b, depth))
    return body


def substitute(a: Term, x: int, b: Term) -> Term:
    """Capture-avoiding ``a[x -> b]`` for free variable number ``x``.

    ``a`` and ``b`` live in the same free-variable context.  The slot ``x``
    stays in the context but no longer occurs.
    """
    return _subst(a, x, b, 0)


def _subst(a: Term, x: int, b: Term, depth: int) -> Term:
    if a.free_bound <= depth + x:
        return a
    match a:
        case Var(i):
            return shift(b, depth) if i == depth + x else a
        case Abs(body, hint):
            return Abs(_subst(body, x, b, depth + 1), hint)
        case App(f, y):
            return App(_subst(f, x, b, depth), _subst(y, x, b, depth))
        case Fix(body):
            return Fix(_subst(body, x, b, depth))
    return a


def close_with(a: Term, terms: tuple[Term, ...] | list[Term]) -> Term:
    """Replace free variable ``i`` by the closed term ``terms[i]``."""
    if any(t.free_bound for t in terms):
        raise OpenTermError("ground substitution must map to closed terms")
    return _close(a, tuple(terms), 0)


def _close(a: Term, terms: tuple[Term, ...], depth: int) -> Term:
    if a.free_bound <= depth:
        return a
    match a:
        case Var(i):
            return terms[i - depth]
        case Abs(body, hint):
            return Abs(_close(body, terms, depth + 1), hint)
        case App(f, y):
            return App(_close(f, terms, depth), _close(y, terms, depth))
        case Fix(body):
            return Fix(_close(body, terms, depth))
    return a


def free_vars(a: Term) -> frozenset[int]:
    """Indices of the free variables of ``a``."""
    out: set[int] = set()

    def walk(t: Term, depth: int) -> None:
        if t.free_bound <= depth:
            return
        match t:
            case Var(i):
                out.add(i - depth)
            case Abs(body):
                walk(body, depth + 1)
            case App(f, y):
                walk(f, depth)
                walk(y, depth)
            case Fix(body):
                walk(body, depth)

    walk(a, 0)
    return frozenset(out)


def subterms(a: Term) -> Iterator[Term]:
    """Every closed subterm of a closed term, outermost first."""
    stack = [a]
    while stack:
        t = stack.pop()
        if t.free_bound == 0:
            yield t
        match t:
            case Abs(body) | Fix(body):
                stack.append(body)
            case App(f, y):
                stack.append(y)
                stack.append(f)


@dataclass(frozen=True)
class OpenTerm:
    """A core term together with names for its free variables."""

    term: Term
    context: tuple[str, ...] = ()

    @property
    def is_closed(self) -> bool:
        return self.term.free_bound == 0

    def __str__(self):
        return print_term(self.term, self.context)


# -- named surface layer ----------------------------------------------------

@dataclass(frozen=True)
class SConst:
    n: int


@dataclass(frozen=True)
class SVar:
    name: str


@dataclass(frozen=True)
class SAbs:
    name: str
    body: SurfaceTerm
    annot: TypeExpr | None = None


@dataclass(frozen=True)
class SApp:
    fun: SurfaceTerm
    arg: SurfaceTerm


@dataclass(frozen=True)
class SFix:
    body: SurfaceTerm


SurfaceTerm = Union[SConst, SVar, SAbs, SApp, SFix]

_KEYWORDS = {"fix"}


def parse_term(text: str) -> SurfaceTerm:
    """Parse ``c | x | \\x. a | \\x:T. a | a b | fix a`` with parentheses.

    Application associates to the left, a lambda body extends as far right
    as possible, and ``fix`` takes one operand (``fix f x`` is ``(fix f) x``).
    """
    ts = TokenStream(text)
    t = _parse(ts)
    ts.expect_end()
    return t


def _parse(ts: TokenStream) -> SurfaceTerm:
    if ts.peek.kind == "LAMBDA":
        return _parse_lambda(ts)
    head = _parse_operand(ts)
    while True:
        tok = ts.peek
        if tok.kind == "LAMBDA":
            return SApp(head, _parse_lambda(ts))
        if tok.kind in ("NUM", "LPAREN") or tok.kind == "IDENT":
            head = SApp(head, _parse_operand(ts))
        else:
            return head


def _parse_lambda(ts: TokenStream) -> SAbs:
    ts.expect("LAMBDA")
    name = ts.expect("IDENT")
    if name.text in _KEYWORDS:
        ts.error(f"{name.text!r} cannot be bound", name.pos)
    annot = None
    if ts.accept("COLON"):
        annot = _parse_type(ts, [], allow_mu=False)
    ts.expect("DOT")
    return SAbs(name.text, _parse(ts), annot)


def _parse_operand(ts: TokenStream) -> SurfaceTerm:
    tok = ts.peek
    if tok.kind == "NUM":
        ts.next()
        return SConst(int(tok.text))
    if tok.kind == "IDENT" and tok.text == "fix":
        ts.next()
        if ts.peek.kind == "LAMBDA":
            return SFix(_parse_lambda(ts))
        return SFix(_parse_operand(ts))
    if tok.kind == "IDENT":
        ts.next()
        return SVar(tok.text)
    if ts.accept("LPAREN"):
        t = _parse(ts)
        ts.expect("RPAREN")
        return t
    ts.error(f"expected a term, found {tok.text or 'end of input'!r}")


def resolve(s: SurfaceTerm, context: tuple[str, ...] = (), closed: bool = False) -> OpenTerm:
    """Convert names to nameless references.

    Free variables get slots in ``context`` (given names first, then new ones
    in order of first occurrence).  With ``closed=True`` any free variable is
    an error.
    """
    ctx = list(context)

    def go(t: SurfaceTerm, scope: list[str]) -> Term:
        match t:
            case SConst(n):
                return Const(n)
            case SVar(name):
                for depth, bound in enumerate(reversed(scope)):
                    if bound == name:
                        return Var(depth)
                if name not in ctx:
                    ctx.append(name)
                return Var(len(scope) + ctx.index(name))
            case SAbs(name, body):
                return Abs(go(body, scope + [name]), name)
            case SApp(f, x):
                return App(go(f, scope), go(x, scope))
            case SFix(body):
                return Fix(go(body, scope))
        raise TypeError(f"not a surface term: {t!r}")

    term = go(s, [])
    if closed:
        fv = sorted(ctx[i] for i in free_vars(term))
        if fv:
            raise UnboundVariableError(fv)
        return OpenTerm(term, ())
    return OpenTerm(term, tuple(ctx))


def parse_closed(text: str) -> Term:
    return resolve(parse_term(text), closed=True).term


# -- printing -----------------------------------------------------------------

def print_term(a: Term | SurfaceTerm | OpenTerm, context: tuple[str, ...] = ()) -> str:
    """Concrete syntax that parses back to an alpha-equivalent term."""
    if isinstance(a, OpenTerm):
        return _pn(a.term, [], list(a.context), "top")
    if isinstance(a, (SConst, SVar, SAbs, SApp, SFix)):
        return _ps(a, "top")
    return _pn(a, [], list(context), "top")


def _fresh(hint: str, avoid) -> str:
    base = hint if hint and hint not in _KEYWORDS else "x"
    name = base
    n = 0
    while name in avoid:
        n += 1
        name = f"{base}{n}"
    return name


def _wrap(s: str, yes: bool) -> str:
    return f"({s})" if yes else s


def _ends_open(t) -> bool:
    # whether the printed form ends in a lambda that would swallow a trailing argument
    match t:
        case Abs() | SAbs():
            return True
        case Fix(body) | SFix(body):
            return _ends_open(body)
    return False


def _pn(t: Term, scope: list[str], free: list[str], ctx: str) -> str:
    match t:
        case Const(n):
            return str(n)
        case Var(i):
            if i < len(scope):
                return scope[-1 - i]
            j = i - len(scope)
            return free[j] if j < len(free) else f"free{j}"
        case Abs(body, hint):
            avoid = set(scope) | set(free)
            name = _fresh(hint, avoid)
            return _wrap(f"\\{name}. {_pn(body, scope + [name], free, 'top')}", ctx in ("fun", "arg"))
        case App(f, x):
            s = f"{_pn(f, scope, free, 'fun')} {_pn(x, scope, free, 'arg')}"
            return _wrap(s, ctx in ("arg", "fixarg"))
        case Fix(body):
            s = f"fix {_pn(body, scope, free, 'fixarg')}"
            return _wrap(s, ctx == "arg" or (ctx == "fun" and _ends_open(body)))
    raise TypeError(f"not a term: {t!r}")


def _ps(t: SurfaceTerm, ctx: str) -> str:
    match t:
        case SConst(n):
            return str(n)
        case SVar(name):
            return name
        case SAbs(name, body, annot):
            ann = "" if annot is None else ":" + print_type(annot, annotation=True)
            return _wrap(f"\\{name}{ann}. {_ps(body, 'top')}", ctx in ("fun", "arg"))
        case SApp(f, x):
            return _wrap(f"{_ps(f, 'fun')} {_ps(x, 'arg')}", ctx in ("arg", "fixarg"))
        case SFix(body):
            s = f"fix {_ps(body, 'fixarg')}"
            return _wrap(s, ctx == "arg" or (ctx == "fun" and _ends_open(body)))
    raise TypeError(f"not a surface term: {t!r}")
