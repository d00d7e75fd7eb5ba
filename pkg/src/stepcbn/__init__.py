"""Step-indexed semantic types for the call-by-name lambda calculus."""

from ._lexer import ParseError
from .derivation import Derivation, DerivationError, Rule, check_derivation, derive, type_match, validate
from .evaluator import Terminal, Trace, safe_for, step, trace
from .generators import GenConfig, gen_any_term, gen_typed_term
from .harness import CATALOG, PropertyReport, run_property, run_suite, shrink
from .semantics import (
    OMEGA, Checker, Outcome, ProbeConfig, Verdict, Witness, holds, models, probes_for, replay,
    subst_holds, value_member,
)
from .terms import (
    Abs, App, Const, Fix, OpenTerm, Term, Var, alpha_eq, instantiate, is_closed, is_value,
    parse_closed, parse_term, print_term, resolve, substitute,
)
from .typeexpr import (
    BOT, NAT, TOP, Arrow, Bot, Floor, Mu, Nat, Top, TVar, TypeExpr, apply_functional, floor_wrap,
    is_guarded, mu_unroll, parse_type, print_type, types_equal, unfold,
)

__version__ = "0.1.0"
