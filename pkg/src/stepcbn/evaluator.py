"""Deterministic call-by-name small-step reduction.

Three rules: beta at the root, reduction in the function position of an
application, and ``fix a -> a (fix a)``.  Arguments are never reduced.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .terms import Abs, App, Fix, OpenTermError, Term, instantiate, is_value, print_term

__all__ = ["Terminal", "Trace", "safe_for", "step", "trace", "format_trace"]


class Terminal(enum.Enum):
    VALUE = "value"
    STUCK = "stuck"
    BUDGET = "budget"


@dataclass(frozen=True)
class Trace:
    steps: tuple[Term, ...]
    terminal: Terminal

    @property
    def steps_taken(self) -> int:
        return len(self.steps) - 1

    @property
    def last(self) -> Term:
        return self.steps[-1]

    def __str__(self):
        return format_trace(self)


def _require_closed(a: Term) -> None:
    if a.free_bound:
        raise OpenTermError(f"term is not closed: {print_term(a)}")


def _step(a: Term) -> Term | None:
    args = []
    node = a
    while isinstance(node, App) and not isinstance(node.fun, Abs):
        args.append(node.arg)
        node = node.fun
    if isinstance(node, App):
        out = instantiate(node.fun.body, node.arg)
    elif isinstance(node, Fix):
        out = App(node.body, node)
    else:
        return None
    for arg in reversed(args):
        out = App(out, arg)
    return out


def step(a: Term) -> Term | None:
    """The unique successor of closed ``a``, or None when it is irreducible."""
    _require_closed(a)
    return _step(a)


def trace(a: Term, budget: int) -> Trace:
    """Take at most ``budget`` steps from ``a`` and classify where it stopped."""
    _require_closed(a)
    if budget < 0:
        raise ValueError("budget must be non-negative")
    steps = [a]
    for _ in range(budget):
        nxt = _step(steps[-1])
        if nxt is None:
            break
        steps.append(nxt)
    return Trace(tuple(steps), _classify(steps[-1]))


def _classify(a: Term) -> Terminal:
    if is_value(a):
        return Terminal.VALUE
    if _step(a) is None:
        return Terminal.STUCK
    return Terminal.BUDGET


def safe_for(a: Term, k: int) -> tuple[bool, Trace]:
    """Whether every reduct reachable in fewer than ``k`` steps is a value or steps."""
    _require_closed(a)
    if k <= 0:
        return True, Trace((a,), Terminal.BUDGET if _step(a) is not None else _classify(a))
    t = trace(a, k - 1)
    return t.terminal is not Terminal.STUCK, t


def format_trace(t: Trace, context: tuple[str, ...] = ()) -> str:
    lines = [print_term(s, context) for s in t.steps[:-1]]
    lines.append(f"{t.terminal.value}: {print_term(t.last, context)}")
    return "\n".join(lines)
