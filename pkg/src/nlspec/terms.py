"""Logical forms: a simply-typed lambda calculus with Heyting connectives.

Binders are named; substitution renames on the fly to avoid capture, and
`alpha_key` gives a binder-independent form for comparison and hashing.
"""

from __future__ import annotations

import itertools
from collections.abc import Mapping
from dataclasses import dataclass
from typing import Optional

from ._lexer import TokenStream
from .categories import (
    NAT, PROP, UNIT, Arrow, SemType, apply_type, read_type, show_type, type_vars,
)

__all__ = [
    "Term", "Var", "Const", "Lit", "Lam", "App", "And", "Or", "Impl", "Not",
    "Top", "Bot", "Eq", "Forall", "Exists", "UnitVal", "TypeCheckError",
    "lam", "forall", "exists", "app", "free_vars", "constants", "substitute",
    "beta_normalize", "is_beta_normal", "alpha_key", "alpha_eq", "type_check",
    "subst_types", "term_type_vars", "pretty", "parse_term", "INFIX",
]


class Term:
    __slots__ = ()

    def __str__(self):
        return pretty(self)


@dataclass(frozen=True, slots=True)
class Var(Term):
    name: str


@dataclass(frozen=True, slots=True)
class Const(Term):
    name: str


@dataclass(frozen=True, slots=True)
class Lit(Term):
    value: int


@dataclass(frozen=True, slots=True)
class Lam(Term):
    name: str
    ty: SemType
    body: Term


@dataclass(frozen=True, slots=True)
class App(Term):
    fun: Term
    arg: Term


@dataclass(frozen=True, slots=True)
class And(Term):
    left: Term
    right: Term


@dataclass(frozen=True, slots=True)
class Or(Term):
    left: Term
    right: Term


@dataclass(frozen=True, slots=True)
class Impl(Term):
    left: Term
    right: Term


@dataclass(frozen=True, slots=True)
class Not(Term):
    arg: Term


@dataclass(frozen=True, slots=True)
class Top(Term):
    pass


@dataclass(frozen=True, slots=True)
class Bot(Term):
    pass


@dataclass(frozen=True, slots=True)
class Eq(Term):
    lhs: Term
    rhs: Term


@dataclass(frozen=True, slots=True)
class Forall(Term):
    domain: SemType
    body: Lam


@dataclass(frozen=True, slots=True)
class Exists(Term):
    domain: SemType
    body: Lam


@dataclass(frozen=True, slots=True)
class UnitVal(Term):
    pass


_BINARY = (And, Or, Impl, Eq)
_QUANT = (Forall, Exists)
_NULLARY = (Const, Lit, Top, Bot, UnitVal)

# Binary constants printed infix; the term reader maps the symbols back.
INFIX = {"le": "<=", "ge": ">=", "lt": "<", "gt": ">"}
_INFIX_NAMES = {sym: name for name, sym in INFIX.items()}


def lam(name: str, ty: SemType, body: Term) -> Lam:
    return Lam(name, ty, body)


def forall(name: str, ty: SemType, body: Term) -> Forall:
    return Forall(ty, Lam(name, ty, body))


def exists(name: str, ty: SemType, body: Term) -> Exists:
    return Exists(ty, Lam(name, ty, body))


def app(f: Term, *args: Term) -> Term:
    for a in args:
        f = App(f, a)
    return f


def _children(t: Term) -> tuple:
    if isinstance(t, (App,)):
        return (t.fun, t.arg)
    if isinstance(t, (And, Or, Impl)):
        return (t.left, t.right)
    if isinstance(t, Eq):
        return (t.lhs, t.rhs)
    if isinstance(t, Not):
        return (t.arg,)
    if isinstance(t, _QUANT):
        return (t.body,)
    if isinstance(t, Lam):
        return (t.body,)
    return ()


def _rebuild(t: Term, kids: tuple) -> Term:
    if isinstance(t, App):
        return App(*kids)
    if isinstance(t, (And, Or, Impl, Eq)):
        return type(t)(*kids)
    if isinstance(t, Not):
        return Not(kids[0])
    if isinstance(t, _QUANT):
        return type(t)(t.domain, kids[0])
    if isinstance(t, Lam):
        return Lam(t.name, t.ty, kids[0])
    return t


def free_vars(t: Term) -> set[str]:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, Lam):
        return free_vars(t.body) - {t.name}
    out = set()
    for k in _children(t):
        out |= free_vars(k)
    return out


def constants(t: Term) -> set[str]:
    if isinstance(t, Const):
        return {t.name}
    out = set()
    for k in _children(t):
        out |= constants(k)
    return out


def _all_names(t: Term) -> set[str]:
    if isinstance(t, Var):
        return {t.name}
    out = {t.name} if isinstance(t, Lam) else set()
    for k in _children(t):
        out |= _all_names(k)
    return out


def _fresh(base: str, avoid: set[str]) -> str:
    stem = base.rstrip("0123456789") or "x"
    for i in itertools.count():
        cand = f"{stem}{i}"
        if cand not in avoid:
            return cand


# -- substitution and normalization ----------------------------------------

def substitute(t: Term, name: str, value: Term, _fv: Optional[set] = None) -> Term:
    """Capture-avoiding ``t[name := value]``."""
    if _fv is None:
        _fv = free_vars(value)
    if isinstance(t, Var):
        return value if t.name == name else t
    if isinstance(t, _NULLARY):
        return t
    if isinstance(t, Lam):
        if t.name == name:
            return t
        if t.name in _fv:
            new = _fresh(t.name, _fv | _all_names(t.body) | {name})
            body = substitute(t.body, t.name, Var(new))
            return Lam(new, t.ty, substitute(body, name, value, _fv))
        return Lam(t.name, t.ty, substitute(t.body, name, value, _fv))
    return _rebuild(t, tuple(substitute(k, name, value, _fv) for k in _children(t)))


def beta_normalize(t: Term) -> Term:
    """Full beta-normal form (normal order).  No eta, no logical simplification."""
    if isinstance(t, App):
        f = beta_normalize(t.fun)
        if isinstance(f, Lam):
            return beta_normalize(substitute(f.body, f.name, t.arg))
        return App(f, beta_normalize(t.arg))
    if isinstance(t, (Var,) + _NULLARY):
        return t
    return _rebuild(t, tuple(beta_normalize(k) for k in _children(t)))


def is_beta_normal(t: Term) -> bool:
    if isinstance(t, App) and isinstance(t.fun, Lam):
        return False
    return all(is_beta_normal(k) for k in _children(t))


# -- alpha equivalence ------------------------------------------------------

def alpha_key(t: Term, _env: tuple = ()) -> tuple:
    """Nameless (de Bruijn) rendering: alpha-equivalent terms have equal keys."""
    if isinstance(t, Var):
        try:
            return ("v", _env.index(t.name))
        except ValueError:
            return ("free", t.name)
    if isinstance(t, Lam):
        return ("lam", t.ty, alpha_key(t.body, (t.name,) + _env))
    if isinstance(t, Const):
        return ("c", t.name)
    if isinstance(t, Lit):
        return ("n", t.value)
    if isinstance(t, _QUANT):
        return (type(t).__name__, t.domain, alpha_key(t.body, _env))
    return (type(t).__name__,) + tuple(alpha_key(k, _env) for k in _children(t))


def alpha_eq(a: Term, b: Term) -> bool:
    return alpha_key(a) == alpha_key(b)


# -- types ------------------------------------------------------------------

class TypeCheckError(Exception):
    """Ill-typed term; `term` is the offending subterm."""

    def __init__(self, message: str, term: Optional[Term] = None):
        self.term = term
        if term is not None:
            message = f"{message} in `{pretty(term)}`"
        super().__init__(message)


def type_check(t: Term, env: Mapping[str, SemType], _ctx: Optional[dict] = None) -> SemType:
    """Type of closed term `t` given constant signatures `env`.

    Type variables are treated as rigid: ``?0`` only matches ``?0``.
    """
    ctx = _ctx or {}
    if isinstance(t, Var):
        if t.name not in ctx:
            raise TypeCheckError(f"unbound variable {t.name!r}", t)
        return ctx[t.name]
    if isinstance(t, Const):
        if t.name not in env:
            raise TypeCheckError(f"unknown constant {t.name!r}", t)
        return env[t.name]
    if isinstance(t, Lit):
        return NAT
    if isinstance(t, UnitVal):
        return UNIT
    if isinstance(t, (Top, Bot)):
        return PROP
    if isinstance(t, Lam):
        body = type_check(t.body, env, {**ctx, t.name: t.ty})
        return Arrow(t.ty, body)
    if isinstance(t, App):
        f = type_check(t.fun, env, ctx)
        a = type_check(t.arg, env, ctx)
        if not isinstance(f, Arrow):
            raise TypeCheckError(f"applying a non-function of type {show_type(f)}", t)
        if f.dom != a:
            raise TypeCheckError(
                f"argument has type {show_type(a)}, expected {show_type(f.dom)}", t)
        return f.cod
    if isinstance(t, (And, Or, Impl)):
        for side in (t.left, t.right):
            ty = type_check(side, env, ctx)
            if ty != PROP:
                raise TypeCheckError(f"connective operand has type {show_type(ty)}, expected Prop", side)
        return PROP
    if isinstance(t, Not):
        ty = type_check(t.arg, env, ctx)
        if ty != PROP:
            raise TypeCheckError(f"negated term has type {show_type(ty)}, expected Prop", t)
        return PROP
    if isinstance(t, Eq):
        lt = type_check(t.lhs, env, ctx)
        rt = type_check(t.rhs, env, ctx)
        if lt != rt:
            raise TypeCheckError(f"equation sides differ: {show_type(lt)} vs {show_type(rt)}", t)
        return PROP
    if isinstance(t, _QUANT):
        if not isinstance(t.body, Lam) or t.body.ty != t.domain:
            raise TypeCheckError("quantifier body must bind a variable of the domain type", t)
        ty = type_check(t.body, env, ctx)
        if ty.cod != PROP:
            raise TypeCheckError(f"quantified body has type {show_type(ty.cod)}, expected Prop", t)
        return PROP
    raise TypeCheckError(f"not a term: {t!r}")


def subst_types(t: Term, s: Mapping[int, SemType]) -> Term:
    """Apply a type substitution to every binder annotation in `t`."""
    if not s:
        return t
    if isinstance(t, Lam):
        return Lam(t.name, apply_type(s, t.ty), subst_types(t.body, s))
    if isinstance(t, _QUANT):
        return type(t)(apply_type(s, t.domain), subst_types(t.body, s))
    if isinstance(t, (Var,) + _NULLARY):
        return t
    return _rebuild(t, tuple(subst_types(k, s) for k in _children(t)))


def term_type_vars(t: Term, acc: Optional[list] = None) -> list[int]:
    if acc is None:
        acc = []
    if isinstance(t, Lam):
        type_vars(t.ty, acc)
    elif isinstance(t, _QUANT):
        type_vars(t.domain, acc)
    for k in _children(t):
        term_type_vars(k, acc)
    return acc


# -- printing ---------------------------------------------------------------
#
# Precedence, loosest first: binders, ->, \/, /\, ~, comparisons, application.

_P_BINDER, _P_IMPL, _P_OR, _P_AND, _P_NOT, _P_CMP, _P_APP, _P_ATOM = range(8)
_KEYWORDS = {"forall", "exists", "true", "false", "unit", "Prop"}


def _infix(t: Term):
    if (isinstance(t, App) and isinstance(t.fun, App)
            and isinstance(t.fun.fun, Const) and t.fun.fun.name in INFIX):
        return INFIX[t.fun.fun.name], t.fun.arg, t.arg
    return None


def pretty(t: Term) -> str:
    """Render `t` in the concrete term syntax accepted by `parse_term`."""
    reserved = constants(t) | free_vars(t) | _KEYWORDS
    return _pp(t, _P_BINDER, {}, reserved)


def _binder(name: str, scope: dict, reserved: set) -> str:
    taken = set(scope.values()) | reserved
    if name not in taken and name != "_":
        return name
    if name == "_" and "_" not in taken:
        return name
    return _fresh("x", taken)


def _pp(t: Term, prec: int, scope: dict, reserved: set) -> str:
    def wrap(s, own):
        return f"({s})" if own < prec else s

    if isinstance(t, Var):
        return scope.get(t.name, t.name)
    if isinstance(t, Const):
        return t.name
    if isinstance(t, Lit):
        return str(t.value)
    if isinstance(t, Top):
        return "true"
    if isinstance(t, Bot):
        return "false"
    if isinstance(t, UnitVal):
        return "unit"
    if isinstance(t, Lam):
        shown = _binder(t.name, scope, reserved)
        body = _pp(t.body, _P_BINDER, {**scope, t.name: shown}, reserved)
        return wrap(f"\\{shown}:{show_type(t.ty)}. {body}", _P_BINDER)
    if isinstance(t, _QUANT):
        kw = "forall" if isinstance(t, Forall) else "exists"
        shown = _binder(t.body.name, scope, reserved)
        body = _pp(t.body.body, _P_BINDER, {**scope, t.body.name: shown}, reserved)
        return wrap(f"{kw} {shown}:{show_type(t.domain)}, {body}", _P_BINDER)
    if isinstance(t, Impl):
        return wrap(f"{_pp(t.left, _P_OR, scope, reserved)} -> "
                    f"{_pp(t.right, _P_IMPL, scope, reserved)}", _P_IMPL)
    if isinstance(t, Or):
        return wrap(f"{_pp(t.left, _P_AND, scope, reserved)} \\/ "
                    f"{_pp(t.right, _P_OR, scope, reserved)}", _P_OR)
    if isinstance(t, And):
        return wrap(f"{_pp(t.left, _P_NOT, scope, reserved)} /\\ "
                    f"{_pp(t.right, _P_AND, scope, reserved)}", _P_AND)
    if isinstance(t, Not):
        return wrap(f"~{_pp(t.arg, _P_NOT, scope, reserved)}", _P_NOT)
    if isinstance(t, Eq):
        return wrap(f"{_pp(t.lhs, _P_APP, scope, reserved)} = "
                    f"{_pp(t.rhs, _P_APP, scope, reserved)}", _P_CMP)
    if isinstance(t, App):
        inf = _infix(t)
        if inf is not None:
            sym, a, b = inf
            return wrap(f"{_pp(a, _P_APP, scope, reserved)} {sym} "
                        f"{_pp(b, _P_APP, scope, reserved)}", _P_CMP)
        return wrap(f"{_pp(t.fun, _P_APP, scope, reserved)} "
                    f"{_pp(t.arg, _P_ATOM, scope, reserved)}", _P_APP)
    raise TypeError(f"not a term: {t!r}")


# -- reading ----------------------------------------------------------------

def parse_term(text: str) -> Term:
    """Parse the concrete term syntax.

    Identifiers bound by an enclosing binder become `Var`, all others `Const`.

    >>> pretty(parse_term("forall x:nat, even x"))
    'forall x:nat, even x'
    """
    ts = TokenStream(text)
    t = _Reader(ts).term(frozenset())
    ts.expect_end()
    return t


class _Reader:
    def __init__(self, ts: TokenStream):
        self.ts = ts

    def term(self, bound):
        ts = self.ts
        if ts.at("\\") and ts.peek_at(1).kind == "ident":
            ts.next()
            name = ts.expect_kind("ident").value
            ts.expect(":")
            ty = read_type(ts)
            ts.expect(".")
            return Lam(name, ty, self.term(bound | {name}))
        if ts.at("forall") or ts.at("exists"):
            kind = ts.next().value
            name = ts.expect_kind("ident").value
            ts.expect(":")
            ty = read_type(ts)
            ts.expect(",")
            body = Lam(name, ty, self.term(bound | {name}))
            return Forall(ty, body) if kind == "forall" else Exists(ty, body)
        return self.impl(bound)

    def _rhs(self, bound, level):
        if self.ts.at("\\") or self.ts.at("forall") or self.ts.at("exists"):
            return self.term(bound)
        return level(bound)

    def impl(self, bound):
        left = self.disj(bound)
        if self.ts.accept("->"):
            return Impl(left, self._rhs(bound, self.impl))
        return left

    def disj(self, bound):
        left = self.conj(bound)
        if self.ts.accept("\\/"):
            return Or(left, self._rhs(bound, self.disj))
        return left

    def conj(self, bound):
        left = self.neg(bound)
        if self.ts.accept("/\\"):
            return And(left, self._rhs(bound, self.conj))
        return left

    def neg(self, bound):
        if self.ts.accept("~"):
            return Not(self._rhs(bound, self.neg))
        return self.cmp(bound)

    def cmp(self, bound):
        left = self.application(bound)
        ts = self.ts
        if ts.accept("="):
            return Eq(left, self.application(bound))
        for sym, name in _INFIX_NAMES.items():
            if ts.accept(sym):
                return app(Const(name), left, self.application(bound))
        return left

    def application(self, bound):
        t = self.atom(bound)
        while self._starts_atom():
            t = App(t, self.atom(bound))
        return t

    def _starts_atom(self):
        tok = self.ts.peek
        if tok.kind in ("num",):
            return True
        if tok.kind == "ident":
            return tok.value not in ("forall", "exists")
        return tok.kind == "op" and tok.value == "("

    def atom(self, bound):
        ts = self.ts
        tok = ts.peek
        if ts.accept("("):
            t = self.term(bound)
            ts.expect(")")
            return t
        if tok.kind == "num":
            ts.next()
            return Lit(int(tok.value))
        if tok.kind == "ident" and tok.value not in ("forall", "exists"):
            ts.next()
            if tok.value in bound:
                return Var(tok.value)
            if tok.value == "true":
                return Top()
            if tok.value == "false":
                return Bot()
            if tok.value == "unit":
                return UnitVal()
            return Const(tok.value)
        ts.fail("expected a term")


__all__.append("ParseError")
