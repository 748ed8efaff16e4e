"""Retargeting logical forms into other truth-value structures.

`retarget` walks the propositional skeleton of a term and hands each
connective to a `TargetAlgebra`.  Three algebras ship here:

* `PropSymbolic` rebuilds the term itself (the identity target);
* `Evaluator` computes a truth value over a `FiniteModel`;
* `LtlTarget` emits `LtlFormula` trees, with ``always``, ``eventually``
  and ``until`` constants read as temporal operators.
"""

from __future__ import annotations

import ast
import re
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping, Optional

from .categories import Arrow, Base, SemType, show_type
from .terms import (
    And, App, Bot, Const, Eq, Exists, Forall, Impl, Lam, Lit, Not, Or, Term, Top,
    UnitVal, Var, pretty,
)

__all__ = [
    "TargetAlgebra", "PropSymbolic", "Evaluator", "LtlTarget", "FiniteModel",
    "UnsupportedConstruct", "UnknownConstant", "ModelError",
    "LtlFormula", "Atom", "LTrue", "LFalse", "LAnd", "LOr", "LImpl", "LNot",
    "Always", "Eventually", "Until",
    "retarget", "eval_prop", "pretty", "parse_model", "load_model",
]


class UnsupportedConstruct(Exception):
    pass


class UnknownConstant(Exception):
    pass


class ModelError(Exception):
    pass


class TargetAlgebra:
    """Heyting-algebra interface; quantifiers and equality are optional."""

    name = "abstract"

    def top_(self):
        raise NotImplementedError

    def bot_(self):
        raise NotImplementedError

    def and_(self, a, b):
        raise NotImplementedError

    def or_(self, a, b):
        raise NotImplementedError

    def impl_(self, a, b):
        raise NotImplementedError

    def not_(self, a):
        raise NotImplementedError

    def forall_(self, var: str, domain: SemType, body: Callable[[Any], Any]):
        raise UnsupportedConstruct(f"{self.name} target has no universal quantifier")

    def exists_(self, var: str, domain: SemType, body: Callable[[Any], Any]):
        raise UnsupportedConstruct(f"{self.name} target has no existential quantifier")

    def eq_(self, lhs: Term, rhs: Term, env: dict):
        raise UnsupportedConstruct(f"{self.name} target has no equality")

    def atom(self, t: Term, env: dict, recurse: Callable[[Term], Any]):
        """Interpret a non-connective proposition such as ``even 4``."""
        raise NotImplementedError


def retarget(t: Term, alg: TargetAlgebra, env: Optional[dict] = None):
    """Map `t` homomorphically into `alg`."""
    env = env or {}

    def go(u: Term, env: dict):
        if isinstance(u, And):
            return alg.and_(go(u.left, env), go(u.right, env))
        if isinstance(u, Or):
            return alg.or_(go(u.left, env), go(u.right, env))
        if isinstance(u, Impl):
            return alg.impl_(go(u.left, env), go(u.right, env))
        if isinstance(u, Not):
            return alg.not_(go(u.arg, env))
        if isinstance(u, Top):
            return alg.top_()
        if isinstance(u, Bot):
            return alg.bot_()
        if isinstance(u, (Forall, Exists)):
            name, body = u.body.name, u.body.body
            quant = alg.forall_ if isinstance(u, Forall) else alg.exists_
            return quant(name, u.domain, lambda v: go(body, {**env, name: v}))
        if isinstance(u, Eq):
            return alg.eq_(u.lhs, u.rhs, env)
        return alg.atom(u, env, lambda sub: go(sub, env))

    return go(t, env)


# -- symbolic Prop ------------------------------------------------------------

class PropSymbolic(TargetAlgebra):
    """Rebuilds terms; unknown constants pass through untouched."""

    name = "prop"

    def top_(self):
        return Top()

    def bot_(self):
        return Bot()

    def and_(self, a, b):
        return And(a, b)

    def or_(self, a, b):
        return Or(a, b)

    def impl_(self, a, b):
        return Impl(a, b)

    def not_(self, a):
        return Not(a)

    def forall_(self, var, domain, body):
        return Forall(domain, Lam(var, domain, body(Var(var))))

    def exists_(self, var, domain, body):
        return Exists(domain, Lam(var, domain, body(Var(var))))

    def eq_(self, lhs, rhs, env):
        return Eq(lhs, rhs)

    def atom(self, t, env, recurse):
        return t

    def render(self, value: Term) -> str:
        return pretty(value)


# -- finite models --------------------------------------------------------------

@dataclass
class FiniteModel:
    """Finite domains per base sort and Python values for constants.

    Function constants are curried callables; ``arity`` records how many
    arguments each declared ``fun`` takes.
    """

    domains: dict[str, list] = field(default_factory=dict)
    consts: dict[str, Any] = field(default_factory=dict)
    arity: dict[str, int] = field(default_factory=dict)

    def domain(self, ty: SemType) -> list:
        if not isinstance(ty, Base) or ty.name not in self.domains:
            raise ModelError(f"model has no finite domain for {show_type(ty)}")
        return self.domains[ty.name]

    def validate(self, signatures: Mapping[str, SemType]) -> list[str]:
        """Problems where a constant's arity or domains disagree with its signature."""
        problems = []
        for name, n in self.arity.items():
            if name not in signatures:
                continue
            ty, params = signatures[name], []
            while isinstance(ty, Arrow):
                params.append(ty.dom)
                ty = ty.cod
            if len(params) != n:
                problems.append(f"{name}: model takes {n} arguments, signature {len(params)}")
                continue
            for p in params:
                if isinstance(p, Base) and p.name not in self.domains:
                    problems.append(f"{name}: no domain for parameter sort {p.name}")
        return problems

    def with_const(self, name: str, value: Any, arity: int = 0) -> "FiniteModel":
        consts = {**self.consts, name: value}
        ar = {**self.arity, name: arity}
        return FiniteModel(dict(self.domains), consts, ar)


class _Curried:
    __slots__ = ("fn", "arity", "args")

    def __init__(self, fn, arity, args=()):
        self.fn, self.arity, self.args = fn, arity, args

    def __call__(self, x):
        args = self.args + (x,)
        if len(args) == self.arity:
            return self.fn(*args)
        return _Curried(self.fn, self.arity, args)


def _value(t: Term, m: FiniteModel, env: dict):
    if isinstance(t, Var):
        if t.name not in env:
            raise ModelError(f"unbound variable {t.name!r}")
        return env[t.name]
    if isinstance(t, Const):
        if t.name not in m.consts:
            raise UnknownConstant(t.name)
        return m.consts[t.name]
    if isinstance(t, Lit):
        return t.value
    if isinstance(t, UnitVal):
        return ()
    if isinstance(t, Top):
        return True
    if isinstance(t, Bot):
        return False
    if isinstance(t, App):
        return _value(t.fun, m, env)(_value(t.arg, m, env))
    if isinstance(t, Lam):
        return lambda v: _value(t.body, m, {**env, t.name: v})
    if isinstance(t, And):
        return bool(_value(t.left, m, env)) and bool(_value(t.right, m, env))
    if isinstance(t, Or):
        return bool(_value(t.left, m, env)) or bool(_value(t.right, m, env))
    if isinstance(t, Impl):
        return (not _value(t.left, m, env)) or bool(_value(t.right, m, env))
    if isinstance(t, Not):
        return not _value(t.arg, m, env)
    if isinstance(t, Eq):
        return _value(t.lhs, m, env) == _value(t.rhs, m, env)
    if isinstance(t, Forall):
        return all(_value(t.body.body, m, {**env, t.body.name: v}) for v in m.domain(t.domain))
    if isinstance(t, Exists):
        return any(_value(t.body.body, m, {**env, t.body.name: v}) for v in m.domain(t.domain))
    raise ModelError(f"cannot evaluate {t!r}")


class Evaluator(TargetAlgebra):
    """Classical two-valued evaluation over a finite model."""

    name = "model"

    def __init__(self, model: FiniteModel):
        self.model = model

    def top_(self):
        return True

    def bot_(self):
        return False

    def and_(self, a, b):
        return a and b

    def or_(self, a, b):
        return a or b

    def impl_(self, a, b):
        return (not a) or b

    def not_(self, a):
        return not a

    def forall_(self, var, domain, body):
        return all(body(v) for v in self.model.domain(domain))

    def exists_(self, var, domain, body):
        return any(body(v) for v in self.model.domain(domain))

    def eq_(self, lhs, rhs, env):
        return _value(lhs, self.model, env) == _value(rhs, self.model, env)

    def atom(self, t, env, recurse):
        return bool(_value(t, self.model, env))


def eval_prop(t: Term, model: FiniteModel) -> bool:
    return retarget(t, Evaluator(model))


# Model files:
#   domain nat = 0..9          (or a comma list of integers)
#   fun even(n) = n mod 2 == 0
#   const zero = 0

_DOMAIN = re.compile(r"domain\s+(\w+)\s*=\s*(.+)$")
_FUN = re.compile(r"fun\s+(\w+)\s*\(([^)]*)\)\s*=\s*(.+)$")
_CONST = re.compile(r"const\s+(\w+)\s*=\s*(.+)$")

_ALLOWED = (
    ast.Expression, ast.BinOp, ast.UnaryOp, ast.BoolOp, ast.Compare, ast.Name, ast.Load,
    ast.Constant, ast.Add, ast.Sub, ast.Mult, ast.Mod, ast.FloorDiv, ast.USub, ast.Not,
    ast.And, ast.Or, ast.Eq, ast.NotEq, ast.Lt, ast.LtE, ast.Gt, ast.GtE,
)
_BINOPS = {
    ast.Add: lambda a, b: a + b, ast.Sub: lambda a, b: a - b, ast.Mult: lambda a, b: a * b,
    ast.Mod: lambda a, b: a % b, ast.FloorDiv: lambda a, b: a // b,
}
_CMPS = {
    ast.Eq: lambda a, b: a == b, ast.NotEq: lambda a, b: a != b, ast.Lt: lambda a, b: a < b,
    ast.LtE: lambda a, b: a <= b, ast.Gt: lambda a, b: a > b, ast.GtE: lambda a, b: a >= b,
}


def _compile_expr(text: str, params: list[str], where: str):
    src = re.sub(r"\bmod\b", "%", text)
    src = re.sub(r"\btrue\b", "True", re.sub(r"\bfalse\b", "False", src))
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise ModelError(f"{where}: bad expression {text!r}") from exc
    for node in ast.walk(tree):
        if not isinstance(node, _ALLOWED):
            raise ModelError(f"{where}: unsupported syntax {type(node).__name__} in {text!r}")
        if isinstance(node, ast.Name) and node.id not in params:
            raise ModelError(f"{where}: unknown name {node.id!r}")
        if isinstance(node, ast.Constant) and not isinstance(node.value, (int, bool)):
            raise ModelError(f"{where}: only integer and boolean literals are allowed")

    def ev(node, env):
        if isinstance(node, ast.Expression):
            return ev(node.body, env)
        if isinstance(node, ast.Constant):
            return node.value
        if isinstance(node, ast.Name):
            return env[node.id]
        if isinstance(node, ast.BinOp):
            return _BINOPS[type(node.op)](ev(node.left, env), ev(node.right, env))
        if isinstance(node, ast.UnaryOp):
            v = ev(node.operand, env)
            return -v if isinstance(node.op, ast.USub) else not v
        if isinstance(node, ast.BoolOp):
            vals = (ev(v, env) for v in node.values)
            return all(vals) if isinstance(node.op, ast.And) else any(vals)
        left = ev(node.left, env)
        for op, comp in zip(node.ops, node.comparators):
            right = ev(comp, env)
            if not _CMPS[type(op)](left, right):
                return False
            left = right
        return True

    return lambda *args: ev(tree, dict(zip(params, args)))


def parse_model(text: str, source: str = "<model>") -> FiniteModel:
    m = FiniteModel()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        where = f"{source}:{lineno}"
        if mt := _DOMAIN.fullmatch(line):
            spec = mt.group(2).strip()
            if rng := re.fullmatch(r"(-?\d+)\s*\.\.\s*(-?\d+)", spec):
                lo, hi = int(rng.group(1)), int(rng.group(2))
                m.domains[mt.group(1)] = list(range(lo, hi + 1))
            else:
                try:
                    m.domains[mt.group(1)] = [int(v) for v in spec.split(",")]
                except ValueError as exc:
                    raise ModelError(f"{where}: bad domain {spec!r}") from exc
        elif mt := _FUN.fullmatch(line):
            params = [p.strip() for p in mt.group(2).split(",") if p.strip()]
            fn = _compile_expr(mt.group(3), params, where)
            m.consts[mt.group(1)] = _Curried(fn, len(params)) if params else fn()
            m.arity[mt.group(1)] = len(params)
        elif mt := _CONST.fullmatch(line):
            m.consts[mt.group(1)] = _compile_expr(mt.group(2), [], where)()
            m.arity[mt.group(1)] = 0
        else:
            raise ModelError(f"{where}: unrecognised declaration: {line}")
    return m


def load_model(path) -> FiniteModel:
    with open(path, encoding="utf-8") as fh:
        return parse_model(fh.read(), str(path))


# -- LTL ------------------------------------------------------------------------

class LtlFormula:
    def __str__(self):
        return show_ltl(self)


@dataclass(frozen=True)
class Atom(LtlFormula):
    name: str


@dataclass(frozen=True)
class LTrue(LtlFormula):
    pass


@dataclass(frozen=True)
class LFalse(LtlFormula):
    pass


@dataclass(frozen=True)
class LAnd(LtlFormula):
    left: LtlFormula
    right: LtlFormula


@dataclass(frozen=True)
class LOr(LtlFormula):
    left: LtlFormula
    right: LtlFormula


@dataclass(frozen=True)
class LImpl(LtlFormula):
    left: LtlFormula
    right: LtlFormula


@dataclass(frozen=True)
class LNot(LtlFormula):
    arg: LtlFormula


@dataclass(frozen=True)
class Always(LtlFormula):
    arg: LtlFormula


@dataclass(frozen=True)
class Eventually(LtlFormula):
    arg: LtlFormula


@dataclass(frozen=True)
class Until(LtlFormula):
    left: LtlFormula
    right: LtlFormula


_LTL_BIN = {LAnd: "&", LOr: "|", LImpl: "->", Until: "U"}


def show_ltl(f: LtlFormula) -> str:
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, LTrue):
        return "true"
    if isinstance(f, LFalse):
        return "false"
    if isinstance(f, LNot):
        return f"!{_ltl_operand(f.arg)}"
    if isinstance(f, Always):
        return f"G {_ltl_operand(f.arg)}"
    if isinstance(f, Eventually):
        return f"F {_ltl_operand(f.arg)}"
    sym = _LTL_BIN[type(f)]
    return f"{_ltl_operand(f.left)} {sym} {_ltl_operand(f.right)}"


def _ltl_operand(f: LtlFormula) -> str:
    s = show_ltl(f)
    return f"({s})" if isinstance(f, tuple(_LTL_BIN)) else s


def ltl_well_formed(f: Any) -> bool:
    if isinstance(f, Atom):
        return isinstance(f.name, str) and bool(f.name)
    if isinstance(f, (LTrue, LFalse)):
        return True
    if isinstance(f, (LNot, Always, Eventually)):
        return ltl_well_formed(f.arg)
    if isinstance(f, tuple(_LTL_BIN)):
        return ltl_well_formed(f.left) and ltl_well_formed(f.right)
    return False


def _head(t: Term):
    args = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fun
    return t, args[::-1]


class LtlTarget(TargetAlgebra):
    """Propositional LTL; quantifiers and equality are rejected."""

    name = "ltl"
    unary = {"always": Always, "eventually": Eventually}
    binary = {"until": Until}

    def top_(self):
        return LTrue()

    def bot_(self):
        return LFalse()

    def and_(self, a, b):
        return LAnd(a, b)

    def or_(self, a, b):
        return LOr(a, b)

    def impl_(self, a, b):
        return LImpl(a, b)

    def not_(self, a):
        return LNot(a)

    def atom(self, t, env, recurse):
        head, args = _head(t)
        if isinstance(head, Const):
            if head.name in self.unary and len(args) == 1:
                return self.unary[head.name](recurse(args[0]))
            if head.name in self.binary and len(args) == 2:
                return self.binary[head.name](recurse(args[0]), recurse(args[1]))
            if all(not isinstance(a, (Lam, Var)) for a in args):
                if not args:
                    return Atom(head.name)
                return Atom(f"{head.name}({','.join(pretty(a) for a in args)})")
        raise UnsupportedConstruct(f"no LTL atom for `{pretty(t)}`")


__all__.append("ltl_well_formed")
__all__.append("show_ltl")
