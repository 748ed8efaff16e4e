"""Chart parsing over the combination rules, with denotations built alongside.

Rules (left child first)::

    RApp   A/B  B     => A      f a
    LApp   A    A\\B  => B      f a   (f from the right child)
    RComp  A/B  B/C   => A/C    \\x. e (f x)
    LComp  A\\B B\\C  => A\\C   \\x. f (e x)
    Shift  A\\(B/C)   => (A\\B)/C   \\r. \\l. f l r

Reassociation needs no rule of its own: chart cells hold flat spans, so
every bracketing of a span is explored.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Optional, Sequence

from .categories import (
    Cat, Over, S, SemType, TVar, Under, UnificationError, apply_cat, apply_type,
    cat_vars, interp, is_ground, show_cat, unify_cat,
)
from .lexicon import CoordSchema, LexEntry, Lexicon, instantiate_coord, lift_depth
from .terms import (
    App, Lam, Term, TypeCheckError, Var, alpha_key, beta_normalize, subst_types,
    term_type_vars, type_check,
)

__all__ = [
    "Derivation", "Parse", "SearchLimits", "ParseFailure", "UnknownWord", "NoParse",
    "ResourceExceeded", "RuleError", "ReplayError", "BINARY_RULES",
    "tokenize", "parse", "parse_sentence", "denote", "apply_rule", "replay",
    "enumerate_parses_bruteforce",
]

BINARY_RULES = ("RApp", "LApp", "RComp", "LComp")


class ParseFailure(Exception):
    pass


class UnknownWord(ParseFailure):
    def __init__(self, word: str):
        self.word = word
        super().__init__(f"unknown word {word!r}")


class NoParse(ParseFailure):
    pass


class ResourceExceeded(ParseFailure):
    """The chart cell cap dropped items and no goal parse survived."""


class RuleError(Exception):
    pass


class ReplayError(Exception):
    def __init__(self, message: str, path: str = "root"):
        self.path = path
        super().__init__(f"{path}: {message}")


@dataclass(frozen=True)
class SearchLimits:
    max_lift_level: int = 3
    max_parses: int = 16
    max_span_items: int = 256

    def __post_init__(self):
        for name in ("max_lift_level", "max_parses", "max_span_items"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


@dataclass(frozen=True)
class Derivation:
    """Rule-labelled tree over a token span.

    Leaves (``rule == "Lex"``) name a lexicon entry; `inst` grounds the
    entry's type variables as sorted ``(var id, type)`` pairs.
    """

    rule: str
    span: tuple[int, int]
    cat: Cat
    children: tuple["Derivation", ...] = ()
    entry: Optional[str] = None
    inst: tuple[tuple[int, SemType], ...] = ()

    @property
    def instantiation(self) -> dict[int, SemType]:
        return dict(self.inst)

    def size(self) -> int:
        return 1 + sum(c.size() for c in self.children)

    def height(self) -> int:
        return 1 + max((c.height() for c in self.children), default=0)

    def walk(self) -> Iterator["Derivation"]:
        yield self
        for c in self.children:
            yield from c.walk()

    def rule_names(self) -> tuple[str, ...]:
        return tuple(d.rule for d in self.walk())

    def leaves(self) -> list["Derivation"]:
        return [d for d in self.walk() if d.rule == "Lex"]

    def rank(self) -> tuple:
        return (self.size(), self.rule_names())

    def is_ground(self) -> bool:
        return all(is_ground(d.cat) and all(is_ground(t) for _, t in d.inst)
                   for d in self.walk())

    def __str__(self):
        if self.rule == "Lex":
            return f"[Lex {self.entry}]"
        return f"[{self.rule} " + " ".join(str(c) for c in self.children) + "]"


class Parse(NamedTuple):
    derivation: Derivation
    denotation: Term

    @property
    def cat(self) -> Cat:
        return self.derivation.cat


def tokenize(sentence: str) -> list[str]:
    """Maximal runs of non-whitespace characters, in order."""
    return sentence.split()


# -- rules ------------------------------------------------------------------

def apply_rule(rule: str, children: Sequence[tuple[Cat, Term]], s: Optional[dict] = None):
    """Combine child (category, denotation) pairs by `rule`.

    Returns ``(cat, term, subst)`` where `subst` extends `s` and has been
    applied to both; the term is beta-normal.  Raises RuleError when the
    children do not fit the rule's pattern.
    """
    s = dict(s) if s else {}
    try:
        if rule == "Shift":
            ((c, f),) = children
            if not (isinstance(c, Under) and isinstance(c.result, Over)):
                raise RuleError(f"Shift needs A \\ (B / C), got {show_cat(c)}")
            a, b, cc = c.arg, c.result.result, c.result.arg
            cat = Over(Under(a, b), cc)
            term = Lam("r", interp(cc), Lam("l", interp(a), App(App(f, Var("l")), Var("r"))))
        else:
            (lc, lt), (rc, rt) = children
            if rule == "RApp":
                if not isinstance(lc, Over):
                    raise RuleError(f"RApp needs A / B on the left, got {show_cat(lc)}")
                s = unify_cat(lc.arg, rc, s)
                cat, term = lc.result, App(lt, rt)
            elif rule == "LApp":
                if not isinstance(rc, Under):
                    raise RuleError(f"LApp needs A \\ B on the right, got {show_cat(rc)}")
                s = unify_cat(rc.arg, lc, s)
                cat, term = rc.result, App(rt, lt)
            elif rule == "RComp":
                if not (isinstance(lc, Over) and isinstance(rc, Over)):
                    raise RuleError("RComp needs A / B and B / C")
                s = unify_cat(lc.arg, rc.result, s)
                cat = Over(lc.result, rc.arg)
                term = Lam("x", interp(rc.arg), App(lt, App(rt, Var("x"))))
            elif rule == "LComp":
                if not (isinstance(lc, Under) and isinstance(rc, Under)):
                    raise RuleError("LComp needs A \\ B and B \\ C")
                s = unify_cat(lc.result, rc.arg, s)
                cat = Under(lc.arg, rc.result)
                term = Lam("x", interp(lc.arg), App(rt, App(lt, Var("x"))))
            else:
                raise RuleError(f"unknown rule {rule!r}")
    except UnificationError as exc:
        raise RuleError(f"{rule}: {exc}") from exc
    return apply_cat(s, cat), beta_normalize(subst_types(term, s)), s


# -- shared plumbing ---------------------------------------------------------

def _subst_deriv(d: Derivation, s: dict) -> Derivation:
    if not s:
        return d
    return Derivation(
        d.rule, d.span, apply_cat(s, d.cat),
        tuple(_subst_deriv(c, s) for c in d.children),
        d.entry, tuple((v, apply_type(s, t)) for v, t in d.inst),
    )


def _instantiate(entry: LexEntry, pos: int, counter) -> tuple[Cat, Term, Derivation]:
    vs = cat_vars(entry.cat)
    term_type_vars(entry.denotation, vs)
    ren = {v: TVar(next(counter)) for v in vs}
    cat = apply_cat(ren, entry.cat)
    term = subst_types(entry.denotation, ren)
    d = Derivation("Lex", (pos, pos + 1), cat, entry=entry.id, inst=tuple(sorted(ren.items())))
    return cat, term, d


def _coord_leaf(schema: CoordSchema, pos: int, x: Cat, max_lift: int):
    depth = lift_depth(x)
    if depth is None or depth > max_lift:
        return None
    e = instantiate_coord(schema, x, depth)
    return e.cat, e.denotation, Derivation("Lex", (pos, pos + 1), e.cat, entry=schema.id)


def _check_words(words: Sequence[str], lex: Lexicon) -> None:
    if not words:
        raise NoParse("empty input")
    for w in words:
        if not lex.knows(w):
            raise UnknownWord(w)


def _finish(cat: Cat, term: Term, d: Derivation, goal: Cat):
    """Unify with the goal; None unless the whole derivation is then ground."""
    try:
        s = unify_cat(cat, goal)
    except UnificationError:
        return None
    cat, term, d = apply_cat(s, cat), subst_types(term, s), _subst_deriv(d, s)
    if term_type_vars(term) or not d.is_ground():
        return None
    return Parse(d, term)


# -- chart parser ------------------------------------------------------------

class _Item:
    __slots__ = ("cat", "term", "deriv", "rank")

    def __init__(self, cat, term, deriv):
        self.cat, self.term, self.deriv = cat, term, deriv
        self.rank = deriv.rank()


def _item_key(cat: Cat, term: Term) -> tuple:
    vs = cat_vars(cat)
    term_type_vars(term, vs)
    if vs:
        ren = {v: TVar(k) for k, v in enumerate(vs)}
        cat, term = apply_cat(ren, cat), subst_types(term, ren)
    return (cat, alpha_key(term))


class _Cell:
    def __init__(self, cap: int):
        self.items: dict[tuple, _Item] = {}
        self.cap = cap
        self.truncated = False

    def add(self, cat, term, deriv):
        key = _item_key(cat, term)
        new = _Item(cat, term, deriv)
        old = self.items.get(key)
        if old is None:
            if len(self.items) >= self.cap:
                self.truncated = True
                return
            self.items[key] = new
        elif new.rank < old.rank:
            self.items[key] = new

    def __iter__(self):
        return iter(list(self.items.values()))


def _shift_closure(cell: _Cell, span, counter=None):
    for it in cell:
        if isinstance(it.cat, Under) and isinstance(it.cat.result, Over):
            cat, term, _ = apply_rule("Shift", [(it.cat, it.term)])
            cell.add(cat, term, Derivation("Shift", span, cat, (it.deriv,)))


def _combine(left: _Item, right: _Item, span, emit):
    lc, rc = left.cat, right.cat
    for rule in BINARY_RULES:
        if rule == "RApp" and not isinstance(lc, Over):
            continue
        if rule == "LApp" and not isinstance(rc, Under):
            continue
        if rule == "RComp" and not (isinstance(lc, Over) and isinstance(rc, Over)):
            continue
        if rule == "LComp" and not (isinstance(lc, Under) and isinstance(rc, Under)):
            continue
        try:
            cat, term, s = apply_rule(rule, [(lc, left.term), (rc, right.term)])
        except RuleError:
            continue
        d = Derivation(rule, span, cat, (_subst_deriv(left.deriv, s), _subst_deriv(right.deriv, s)))
        emit(cat, term, d)


def parse(words: Sequence[str], goal: Cat = S(), lex: Optional[Lexicon] = None,
          limits: SearchLimits = SearchLimits()) -> list[Parse]:
    """All parses of `words` at `goal`, one per distinct denotation.

    Results are ordered by derivation size, then by the preorder sequence of
    rule names, and cut to ``limits.max_parses``.  Raises UnknownWord,
    NoParse, or ResourceExceeded when a cell cap dropped items and nothing
    reached the goal.
    """
    if lex is None:
        from .lexicon import core_lexicon
        lex = core_lexicon()
    words = list(words)
    _check_words(words, lex)
    n = len(words)
    counter = itertools.count()
    chart: dict[tuple[int, int], _Cell] = {}

    for i, w in enumerate(words):
        cell = _Cell(limits.max_span_items)
        for e in lex.lookup(w):
            cell.add(*_instantiate(e, i, counter))
        _shift_closure(cell, (i, i + 1))
        chart[i, i + 1] = cell

    for width in range(2, n + 1):
        for i in range(n - width + 1):
            j = i + width
            cell = _Cell(limits.max_span_items)
            for m in range(i + 1, j):
                for left in chart[i, m]:
                    for right in chart[m, j]:
                        _combine(left, right, (i, j), cell.add)
            schema = lex.coordinator(words[i])
            if schema is not None:
                for right in chart[i + 1, j]:
                    leaf = _coord_leaf(schema, i, right.cat, limits.max_lift_level)
                    if leaf is None:
                        continue
                    cat, term, _ = apply_rule("RApp", [leaf[:2], (right.cat, right.term)])
                    cell.add(cat, term, Derivation("RApp", (i, j), cat, (leaf[2], right.deriv)))
            _shift_closure(cell, (i, j))
            chart[i, j] = cell

    found: dict[tuple, Parse] = {}
    for it in chart[0, n]:
        p = _finish(it.cat, it.term, it.deriv, goal)
        if p is None:
            continue
        key = alpha_key(p.denotation)
        if key not in found or p.derivation.rank() < found[key].derivation.rank():
            found[key] = p
    if not found:
        if any(c.truncated for c in chart.values()):
            raise ResourceExceeded(f"cell cap {limits.max_span_items} reached without a parse")
        raise NoParse(f"no parse of {' '.join(words)!r} as {show_cat(goal)}")
    ordered = sorted(found.values(), key=lambda p: p.derivation.rank())
    return ordered[:limits.max_parses]


def parse_sentence(sentence: str, goal: Cat = S(), lex: Optional[Lexicon] = None,
                   limits: SearchLimits = SearchLimits()) -> list[Parse]:
    return parse(tokenize(sentence), goal, lex, limits)


def denote(sentence: str, lex: Optional[Lexicon] = None) -> Term:
    """Logical form of the first sentence-level parse of `sentence`."""
    return parse_sentence(sentence, S(), lex)[0].denotation


# -- replay -----------------------------------------------------------------

def replay(d: Derivation, lex: Lexicon, words: Optional[Sequence[str]] = None,
           max_lift_level: int = 3) -> tuple[Cat, Term]:
    """Recompute a derivation's category and denotation bottom-up.

    Every node is re-checked: lexical leaves against the lexicon (and
    `words`, when given), spans for adjacency, rules by `apply_rule`, and
    cached categories for agreement.  The root denotation must type-check
    at ``interp(cat)``.  Raises ReplayError naming the first bad node.
    """
    cat, term = _replay(d, lex, words, max_lift_level, "root")
    try:
        ty = type_check(term, lex.constants)
    except TypeCheckError as exc:
        raise ReplayError(f"denotation does not type-check: {exc}") from exc
    if ty != interp(cat):
        raise ReplayError(f"denotation has type {ty}, category needs {interp(cat)}")
    return cat, term


def _replay(d: Derivation, lex, words, max_lift, path):
    lo, hi = d.span
    if d.rule == "Lex":
        if d.children or hi - lo != 1:
            raise ReplayError("lexical leaf must cover exactly one token", path)
        entry = lex.entry(d.entry or "")
        if entry is None:
            raise ReplayError(f"no lexicon entry {d.entry!r}", path)
        if words is not None and (lo >= len(words) or words[lo] != entry.word):
            raise ReplayError(f"entry {d.entry!r} is not for the token at position {lo}", path)
        if isinstance(entry, CoordSchema):
            c = d.cat
            if not (isinstance(c, Over) and isinstance(c.result, Under)
                    and c.arg == c.result.arg == c.result.result):
                raise ReplayError(f"coordinator category must be (X \\ X) / X, got {show_cat(c)}", path)
            depth = lift_depth(c.arg)
            if depth is None or depth > max_lift:
                raise ReplayError(f"{show_cat(c.arg)} is not Prop-like within the lift bound", path)
            e = instantiate_coord(entry, c.arg, depth)
            return e.cat, e.denotation
        inst = d.instantiation
        needed = cat_vars(entry.cat)
        term_type_vars(entry.denotation, needed)
        if set(needed) - set(inst):
            raise ReplayError(f"instantiation of {d.entry!r} leaves type variables open", path)
        cat = apply_cat(inst, entry.cat)
        term = subst_types(entry.denotation, inst)
        if not is_ground(cat) or term_type_vars(term):
            raise ReplayError(f"instantiation of {d.entry!r} is not ground", path)
        if cat != d.cat:
            raise ReplayError(f"entry {d.entry!r} has category {show_cat(cat)}, "
                              f"node claims {show_cat(d.cat)}", path)
        return cat, term
    if d.rule == "Shift":
        if len(d.children) != 1 or d.children[0].span != d.span:
            raise ReplayError("Shift must have one child over the same span", path)
        kids = [_replay(d.children[0], lex, words, max_lift, path + ".0")]
    elif d.rule in BINARY_RULES:
        if len(d.children) != 2:
            raise ReplayError(f"{d.rule} must have two children", path)
        l, r = d.children
        if l.span[0] != lo or l.span[1] != r.span[0] or r.span[1] != hi or lo >= l.span[1] or r.span[0] >= hi:
            raise ReplayError("children spans are not adjacent and covering", path)
        kids = [_replay(l, lex, words, max_lift, path + ".0"),
                _replay(r, lex, words, max_lift, path + ".1")]
    else:
        raise ReplayError(f"unknown rule {d.rule!r}", path)
    try:
        cat, term, _ = apply_rule(d.rule, kids)
    except RuleError as exc:
        raise ReplayError(str(exc), path) from exc
    if cat != d.cat:
        raise ReplayError(f"rule yields {show_cat(cat)}, node claims {show_cat(d.cat)}", path)
    return cat, term


# -- brute-force oracle --------------------------------------------------------

def enumerate_parses_bruteforce(words: Sequence[str], goal: Cat = S(),
                                lex: Optional[Lexicon] = None,
                                depth_cap: Optional[int] = None,
                                max_lift_level: int = 3) -> list[Parse]:
    """Every derivation of `words` at `goal`, by exhaustive recursion.

    No chart, no sharing, no deduplication: each span is re-derived for
    every split that needs it.  Meant as a test oracle for short inputs.
    """
    if lex is None:
        from .lexicon import core_lexicon
        lex = core_lexicon()
    words = list(words)
    if len(words) > 6:
        raise ValueError("oracle is limited to six tokens")
    _check_words(words, lex)
    counter = itertools.count()

    def with_shifts(items):
        out = list(items)
        for cat, term, d in items:
            try:
                c2, t2, _ = apply_rule("Shift", [(cat, term)])
            except RuleError:
                continue
            out.append((c2, t2, Derivation("Shift", d.span, c2, (d,))))
        return out

    def derive(i, j):
        found = []
        if j - i == 1:
            for e in lex.lookup(words[i]):
                found.append(_instantiate(e, i, counter))
        else:
            for m in range(i + 1, j):
                for lc, lt, ld in derive(i, m):
                    for rc, rt, rd in derive(m, j):
                        for rule in BINARY_RULES:
                            try:
                                cat, term, s = apply_rule(rule, [(lc, lt), (rc, rt)])
                            except RuleError:
                                continue
                            found.append((cat, term, Derivation(
                                rule, (i, j), cat, (_subst_deriv(ld, s), _subst_deriv(rd, s)))))
            schema = lex.coordinator(words[i])
            if schema is not None:
                for rc, rt, rd in derive(i + 1, j):
                    leaf = _coord_leaf(schema, i, rc, max_lift_level)
                    if leaf is None:
                        continue
                    cat, term, _ = apply_rule("RApp", [leaf[:2], (rc, rt)])
                    found.append((cat, term, Derivation("RApp", (i, j), cat, (leaf[2], rd))))
        found = with_shifts(found)
        if depth_cap is not None:
            found = [f for f in found if f[2].height() <= depth_cap]
        return found

    out = []
    for cat, term, d in derive(0, len(words)):
        p = _finish(cat, term, d, goal)
        if p is not None:
            out.append(p)
    out.sort(key=lambda p: p.derivation.rank())
    return out
