"""Semantic types, grammatical categories and unification over their indices.

Categories are indexed by semantic types: ``NP[nat]`` is a noun phrase
denoting a natural number, ``ADJ[nat]`` a predicate over naturals.  Lexicon
schemas may leave an index open as a type variable (``?0``); variables are
resolved by first-order unification while parsing.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass
from typing import Optional, Union

from ._lexer import TokenStream

__all__ = [
    "SemType", "PropSort", "UnitSort", "Base", "Arrow", "TVar", "PROP", "UNIT", "NAT",
    "Cat", "S", "NP", "ADJ", "CN", "Over", "Under", "quant",
    "Subst", "UnificationError",
    "interp", "unify_sem", "unify_cat", "erase", "apply_type", "apply_cat",
    "type_vars", "cat_vars", "is_ground", "parse_type", "parse_cat", "read_type",
]


# -- semantic types ---------------------------------------------------------

class SemType:
    __slots__ = ()

    def __str__(self):
        return show_type(self)


@dataclass(frozen=True, slots=True)
class PropSort(SemType):
    pass


@dataclass(frozen=True, slots=True)
class UnitSort(SemType):
    pass


@dataclass(frozen=True, slots=True)
class Base(SemType):
    name: str


@dataclass(frozen=True, slots=True)
class Arrow(SemType):
    dom: SemType
    cod: SemType


@dataclass(frozen=True, slots=True)
class TVar(SemType):
    id: int


PROP = PropSort()
UNIT = UnitSort()
NAT = Base("nat")


def show_type(t: SemType) -> str:
    if isinstance(t, Arrow):
        dom = show_type(t.dom)
        if isinstance(t.dom, Arrow):
            dom = f"({dom})"
        return f"{dom} -> {show_type(t.cod)}"
    if isinstance(t, PropSort):
        return "Prop"
    if isinstance(t, UnitSort):
        return "unit"
    if isinstance(t, Base):
        return t.name
    if isinstance(t, TVar):
        return f"?{t.id}"
    raise TypeError(f"not a semantic type: {t!r}")


# -- categories -------------------------------------------------------------

class Cat:
    __slots__ = ()

    def __str__(self):
        return show_cat(self)

    def __truediv__(self, other: "Cat") -> "Over":
        return Over(self, other)

    def under(self, result: "Cat") -> "Under":
        """``self.under(B)`` is ``self \\ B``: takes ``self`` on the left, yields ``B``."""
        return Under(self, result)


@dataclass(frozen=True, slots=True)
class S(Cat):
    pass


# An index of None marks an erased category.
@dataclass(frozen=True, slots=True)
class NP(Cat):
    index: Optional[SemType]


@dataclass(frozen=True, slots=True)
class ADJ(Cat):
    index: Optional[SemType]


@dataclass(frozen=True, slots=True)
class CN(Cat):
    index: Optional[SemType]


@dataclass(frozen=True, slots=True)
class Over(Cat):
    """``result / arg``: looks right for ``arg``."""
    result: Cat
    arg: Cat


@dataclass(frozen=True, slots=True)
class Under(Cat):
    """``arg \\ result``: looks left for ``arg``."""
    arg: Cat
    result: Cat


_INDEXED = (NP, ADJ, CN)


def quant(index: SemType) -> Cat:
    """The quantifier category ``(S / (NP[a] \\ S)) / CN[a]``."""
    return Over(Over(S(), Under(NP(index), S())), CN(index))


def show_cat(c: Cat) -> str:
    if isinstance(c, S):
        return "S"
    if isinstance(c, _INDEXED):
        name = type(c).__name__
        return name if c.index is None else f"{name}[{show_type(c.index)}]"
    if isinstance(c, Over):
        return f"{_operand(c.result)} / {_operand(c.arg)}"
    if isinstance(c, Under):
        return f"{_operand(c.arg)} \\ {_operand(c.result)}"
    raise TypeError(f"not a category: {c!r}")


def _operand(c: Cat) -> str:
    s = show_cat(c)
    return f"({s})" if isinstance(c, (Over, Under)) else s


# -- interp -----------------------------------------------------------------

def interp(c: Cat) -> SemType:
    """Semantic type inhabited by denotations of category `c`."""
    if isinstance(c, S):
        return PROP
    if isinstance(c, NP):
        return c.index
    if isinstance(c, ADJ):
        return Arrow(c.index, PROP)
    if isinstance(c, CN):
        return UNIT
    if isinstance(c, Over):
        return Arrow(interp(c.arg), interp(c.result))
    if isinstance(c, Under):
        return Arrow(interp(c.arg), interp(c.result))
    raise TypeError(f"not a category: {c!r}")


def erase(c: Cat) -> Cat:
    if isinstance(c, _INDEXED):
        return type(c)(None)
    if isinstance(c, Over):
        return Over(erase(c.result), erase(c.arg))
    if isinstance(c, Under):
        return Under(erase(c.arg), erase(c.result))
    return c


# -- substitutions and unification ------------------------------------------

Subst = dict  # TVar id -> SemType; kept idempotent


class UnificationError(Exception):
    pass


def type_vars(t: SemType, acc: Optional[list] = None) -> list[int]:
    """TVar ids of `t` in order of first occurrence."""
    if acc is None:
        acc = []
    if isinstance(t, TVar):
        if t.id not in acc:
            acc.append(t.id)
    elif isinstance(t, Arrow):
        type_vars(t.dom, acc)
        type_vars(t.cod, acc)
    return acc


def cat_vars(c: Cat, acc: Optional[list] = None) -> list[int]:
    if acc is None:
        acc = []
    if isinstance(c, _INDEXED):
        if c.index is not None:
            type_vars(c.index, acc)
    elif isinstance(c, Over):
        cat_vars(c.result, acc)
        cat_vars(c.arg, acc)
    elif isinstance(c, Under):
        cat_vars(c.arg, acc)
        cat_vars(c.result, acc)
    return acc


def _type_has_vars(t: SemType) -> bool:
    if isinstance(t, TVar):
        return True
    if isinstance(t, Arrow):
        return _type_has_vars(t.dom) or _type_has_vars(t.cod)
    return False


def is_ground(x: Union[SemType, Cat]) -> bool:
    if isinstance(x, SemType):
        return not _type_has_vars(x)
    if isinstance(x, _INDEXED):
        return x.index is None or not _type_has_vars(x.index)
    if isinstance(x, Over):
        return is_ground(x.result) and is_ground(x.arg)
    if isinstance(x, Under):
        return is_ground(x.arg) and is_ground(x.result)
    return True


def apply_type(s: Mapping[int, SemType], t: SemType) -> SemType:
    if not s:
        return t
    if isinstance(t, TVar):
        return s.get(t.id, t)
    if isinstance(t, Arrow):
        dom, cod = apply_type(s, t.dom), apply_type(s, t.cod)
        if dom is t.dom and cod is t.cod:
            return t
        return Arrow(dom, cod)
    return t


def apply_cat(s: Mapping[int, SemType], c: Cat) -> Cat:
    if not s:
        return c
    if isinstance(c, _INDEXED):
        if c.index is None:
            return c
        return type(c)(apply_type(s, c.index))
    if isinstance(c, Over):
        return Over(apply_cat(s, c.result), apply_cat(s, c.arg))
    if isinstance(c, Under):
        return Under(apply_cat(s, c.arg), apply_cat(s, c.result))
    return c


def _occurs(v: int, t: SemType) -> bool:
    if isinstance(t, TVar):
        return t.id == v
    if isinstance(t, Arrow):
        return _occurs(v, t.dom) or _occurs(v, t.cod)
    return False


def _bind(s: dict, v: int, t: SemType) -> None:
    if _occurs(v, t):
        raise UnificationError(f"occurs check: ?{v} in {show_type(t)}")
    single = {v: t}
    for k in s:
        s[k] = apply_type(single, s[k])
    s[v] = t


def _unify(a: SemType, b: SemType, s: dict) -> None:
    a, b = apply_type(s, a), apply_type(s, b)
    if a == b:
        return
    if isinstance(a, TVar):
        _bind(s, a.id, b)
    elif isinstance(b, TVar):
        _bind(s, b.id, a)
    elif isinstance(a, Arrow) and isinstance(b, Arrow):
        _unify(a.dom, b.dom, s)
        _unify(a.cod, b.cod, s)
    else:
        raise UnificationError(f"cannot unify {show_type(a)} with {show_type(b)}")


def unify_sem(a: SemType, b: SemType, s: Optional[Mapping[int, SemType]] = None) -> Subst:
    """Most general extension of `s` equating `a` and `b`.

    Raises UnificationError on a constructor clash or occurs-check failure.
    The input substitution is not modified.
    """
    out = dict(s) if s else {}
    _unify(a, b, out)
    return out


def _unify_cat(a: Cat, b: Cat, s: dict) -> None:
    if type(a) is not type(b):
        raise UnificationError(f"cannot unify {show_cat(a)} with {show_cat(b)}")
    if isinstance(a, _INDEXED):
        if a.index is None or b.index is None:
            if a.index is not b.index:
                raise UnificationError("cannot unify erased with indexed category")
            return
        _unify(a.index, b.index, s)
    elif isinstance(a, Over):
        _unify_cat(a.result, b.result, s)
        _unify_cat(a.arg, b.arg, s)
    elif isinstance(a, Under):
        _unify_cat(a.arg, b.arg, s)
        _unify_cat(a.result, b.result, s)


def unify_cat(a: Cat, b: Cat, s: Optional[Mapping[int, SemType]] = None) -> Subst:
    """Most general extension of `s` making categories `a` and `b` equal."""
    out = dict(s) if s else {}
    _unify_cat(a, b, out)
    return out


# -- concrete syntax --------------------------------------------------------

def read_type(ts: TokenStream) -> SemType:
    """Read an arrow type from `ts`; arrows associate to the right."""
    dom = _read_type_atom(ts)
    if ts.accept("->"):
        return Arrow(dom, read_type(ts))
    return dom


def _read_type_atom(ts: TokenStream) -> SemType:
    tok = ts.peek
    if ts.accept("("):
        t = read_type(ts)
        ts.expect(")")
        return t
    if tok.kind == "tvar":
        ts.next()
        return TVar(int(tok.value[1:]))
    if tok.kind == "ident":
        ts.next()
        if tok.value == "Prop":
            return PROP
        if tok.value == "unit":
            return UNIT
        return Base(tok.value)
    ts.fail("expected a type")


def parse_type(text: str) -> SemType:
    ts = TokenStream(text)
    t = read_type(ts)
    ts.expect_end()
    return t


_CAT_HEADS = {"NP": NP, "ADJ": ADJ, "CN": CN}


def read_cat(ts: TokenStream) -> Cat:
    left = _read_cat_atom(ts)
    while True:
        if ts.accept("/"):
            left = Over(left, _read_cat_atom(ts))
        elif ts.at("\\"):
            ts.next()
            left = Under(left, _read_cat_atom(ts))
        else:
            return left


def _read_cat_atom(ts: TokenStream) -> Cat:
    tok = ts.peek
    if ts.accept("("):
        c = read_cat(ts)
        ts.expect(")")
        return c
    if tok.kind == "ident":
        if tok.value == "S":
            ts.next()
            return S()
        if tok.value in _CAT_HEADS or tok.value == "Quant":
            ts.next()
            index = None
            if ts.accept("["):
                index = read_type(ts)
                ts.expect("]")
            if tok.value == "Quant":
                if index is None:
                    ts.fail("Quant requires an index")
                return quant(index)
            return _CAT_HEADS[tok.value](index)
    ts.fail("expected a category")


def parse_cat(text: str) -> Cat:
    """Parse ``S``, ``NP[nat]``, ``A / B``, ``A \\ B``, ``Quant[T]``; slashes associate left."""
    ts = TokenStream(text)
    c = read_cat(ts)
    ts.expect_end()
    return c


__all__.append("ParseError")
