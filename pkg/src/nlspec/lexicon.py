"""Typed lexicons: entries, coordination schemas, the file loader and the linter."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from importlib import resources
from os import PathLike
from typing import Iterable, Optional, Union

from ._lexer import ParseError
from .categories import (
    ADJ, NAT, NP, PROP, Cat, Over, S, SemType, TVar, Under,
    UnificationError, apply_cat, cat_vars, erase, interp, parse_cat, parse_type,
    show_cat, show_type, unify_cat,
)
from .terms import (
    And, Lam, Lit, Or, Term, TypeCheckError, App, Var, beta_normalize,
    parse_term, pretty, type_check,
)

__all__ = [
    "LexEntry", "CoordSchema", "Lexicon", "LexiconError", "LexiconSyntaxError",
    "LexiconTypeError", "DuplicateEntryError", "AmbiguityWarning",
    "load", "loads", "core_lexicon", "ltl_lexicon", "data_path",
    "proplike", "lift_depth", "instantiate_coord", "lint_ambiguity",
    "numeral_entry", "rename_apart",
]


@dataclass(frozen=True)
class LexEntry:
    id: str
    word: str
    cat: Cat
    denotation: Term
    provenance: str = "<builtin>"

    def __str__(self):
        return f'{self.id}: "{self.word}" {show_cat(self.cat)} := {pretty(self.denotation)}'


@dataclass(frozen=True)
class CoordSchema:
    word: str
    op: str  # "and" | "or"
    provenance: str = "<builtin>"

    @property
    def id(self) -> str:
        return f"coord:{self.word}"


class LexiconError(Exception):
    pass


class LexiconSyntaxError(LexiconError):
    pass


class LexiconTypeError(LexiconError):
    pass


class DuplicateEntryError(LexiconError):
    pass


_NUMERAL = re.compile(r"\d+")


def numeral_entry(word: str) -> LexEntry:
    """Built-in entry for an all-digit token: ``NP[nat]`` denoting the literal."""
    return LexEntry(f"num:{word}", word, NP(NAT), Lit(int(word)), "<numeral>")


class Lexicon:
    """Word to (category, denotation) multimap plus coordination schemas.

    Treated as immutable once built; `merge` returns a new lexicon.
    """

    def __init__(self, entries: Iterable[LexEntry] = (), coords: Iterable[CoordSchema] = (),
                 constants: Optional[dict] = None):
        self.entries: dict[str, LexEntry] = {}
        self.by_word: dict[str, list[LexEntry]] = {}
        self.coords: dict[str, CoordSchema] = {}
        self.constants: dict[str, SemType] = dict(constants or {})
        for e in entries:
            if e.id in self.entries:
                raise DuplicateEntryError(f"{e.provenance}: duplicate entry id {e.id!r}")
            self.entries[e.id] = e
            self.by_word.setdefault(e.word, []).append(e)
        for c in coords:
            prev = self.coords.get(c.word)
            if prev is not None and prev.op != c.op:
                raise DuplicateEntryError(
                    f"{c.provenance}: coordinator {c.word!r} already bound to {prev.op!r}")
            self.coords.setdefault(c.word, c)

    def __len__(self):
        return len(self.entries)

    def __repr__(self):
        return f"<Lexicon {len(self.entries)} entries, {len(self.coords)} coordinators>"

    def lookup(self, word: str) -> list[LexEntry]:
        found = list(self.by_word.get(word, ()))
        if not found and _NUMERAL.fullmatch(word):
            found.append(numeral_entry(word))
        return found

    def coordinator(self, word: str) -> Optional[CoordSchema]:
        return self.coords.get(word)

    def knows(self, word: str) -> bool:
        return bool(self.lookup(word)) or word in self.coords

    def entry(self, entry_id: str) -> Union[LexEntry, CoordSchema, None]:
        """Resolve an entry id, including ``num:<digits>`` and ``coord:<word>``."""
        if entry_id in self.entries:
            return self.entries[entry_id]
        if entry_id.startswith("num:") and _NUMERAL.fullmatch(entry_id[4:]):
            return numeral_entry(entry_id[4:])
        if entry_id.startswith("coord:"):
            return self.coords.get(entry_id[6:])
        return None

    def merge(self, other: "Lexicon") -> "Lexicon":
        consts = dict(self.constants)
        for name, ty in other.constants.items():
            if name in consts and consts[name] != ty:
                raise LexiconTypeError(
                    f"constant {name!r} declared as {show_type(consts[name])} and {show_type(ty)}")
            consts[name] = ty
        return Lexicon(list(self.entries.values()) + list(other.entries.values()),
                       list(self.coords.values()) + list(other.coords.values()), consts)


# -- file format ------------------------------------------------------------

_WORD_LINE = re.compile(r'word\s+"((?:[^"\\]|\\.)*)"\s*(?:@(\S+)\s+)?(.*?)\s*:=\s*(.*)$')
_CONST_LINE = re.compile(r"const\s+([A-Za-z_][A-Za-z0-9_']*)\s*:\s*(.+)$")
_COORD_LINE = re.compile(r'coord\s+"((?:[^"\\]|\\.)*)"\s+(and|or)\s*$')


def _strip_comment(line: str) -> str:
    quoted = False
    for i, ch in enumerate(line):
        if ch == '"':
            quoted = not quoted
        elif ch == "#" and not quoted:
            return line[:i]
    return line


def _parse_file(text: str, source: str):
    consts, words, coords = [], [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        where = f"{source}:{lineno}"
        try:
            if line.startswith("const") and (m := _CONST_LINE.fullmatch(line)):
                consts.append((m.group(1), parse_type(m.group(2)), where))
            elif line.startswith("word") and (m := _WORD_LINE.fullmatch(line)):
                word, ident, cat_text, term_text = m.groups()
                words.append((word, ident, parse_cat(cat_text), parse_term(term_text), where))
            elif line.startswith("coord") and (m := _COORD_LINE.fullmatch(line)):
                coords.append(CoordSchema(m.group(1), m.group(2), where))
            else:
                raise LexiconSyntaxError(f"{where}: unrecognised declaration: {line}")
        except ParseError as exc:
            raise LexiconSyntaxError(f"{where}: {exc}") from exc
    return consts, words, coords


def _build(parsed: list) -> Lexicon:
    constants: dict[str, SemType] = {}
    for consts, _, _ in parsed:
        for name, ty, where in consts:
            if name in constants and constants[name] != ty:
                raise LexiconTypeError(
                    f"{where}: constant {name!r} redeclared as {show_type(ty)} "
                    f"(was {show_type(constants[name])})")
            constants[name] = ty
    entries, counts, coords = [], {}, []
    for _, words, cs in parsed:
        coords.extend(cs)
        for word, ident, cat, term, where in words:
            counts[word] = counts.get(word, 0) + 1
            entry = LexEntry(ident or f"{word}/{counts[word]}", word, cat, term, where)
            check_entry(entry, constants)
            entries.append(entry)
    return Lexicon(entries, coords, constants)


def check_entry(entry: LexEntry, constants: dict) -> None:
    """Raise LexiconTypeError unless the denotation inhabits ``interp(cat)``."""
    expected = interp(entry.cat)
    try:
        actual = type_check(entry.denotation, constants)
    except TypeCheckError as exc:
        raise LexiconTypeError(
            f"{entry.provenance}: entry {entry.id!r} is ill-typed: {exc}") from exc
    if actual != expected:
        raise LexiconTypeError(
            f"{entry.provenance}: entry {entry.id!r} at {show_cat(entry.cat)} expects "
            f"{show_type(expected)} but its denotation has type {show_type(actual)}")


def loads(text: str, source: str = "<string>") -> Lexicon:
    return _build([_parse_file(text, source)])


def load(paths: Iterable[Union[str, PathLike]]) -> Lexicon:
    """Load and merge lexicon files; later files may add senses for known words."""
    parsed = []
    for p in paths:
        with open(p, encoding="utf-8") as fh:
            parsed.append(_parse_file(fh.read(), str(p)))
    return _build(parsed)


def data_path(name: str):
    return resources.files("nlspec") / "data" / name


def core_lexicon() -> Lexicon:
    return load([data_path("core.lex")])


def ltl_lexicon() -> Lexicon:
    """Core lexicon extended with the temporal demo vocabulary."""
    return load([data_path("core.lex"), data_path("ltl.lex")])


# -- coordination -----------------------------------------------------------

def proplike(c: Cat, level: int) -> bool:
    """Whether `c` is Prop-like at `level`: S or ADJ at 0, a slash over a level-(k-1) result at k."""
    if level == 0:
        return isinstance(c, (S, ADJ))
    if isinstance(c, (Over, Under)):
        return proplike(c.result, level - 1)
    return False


def lift_depth(c: Cat) -> Optional[int]:
    """Number of pointwise lifts coordination needs at `c`, or None if not Prop-like.

    This counts arrows of ``interp(c)``, so ``ADJ`` needs one lift although
    it is Prop-like at grammatical level 0.
    """
    if isinstance(c, S):
        return 0
    if isinstance(c, ADJ):
        return 1
    if isinstance(c, (Over, Under)):
        inner = lift_depth(c.result)
        return None if inner is None else inner + 1
    return None


_OPS = {"and": And, "or": Or}
_POINT_NAMES = "xyzuvw"


def _lifted(op, ty: SemType, depth: int) -> Term:
    # Takes the right conjunct first, matching the category (x \ x) / x.
    if depth == 0:
        return Lam("q", PROP, Lam("p", PROP, op(Var("p"), Var("q"))))
    inner = _lifted(op, ty.cod, depth - 1)
    v = _POINT_NAMES[depth % len(_POINT_NAMES)] if depth < len(_POINT_NAMES) else f"v{depth}"
    body = App(App(inner, App(Var("Q"), Var(v))), App(Var("P"), Var(v)))
    return Lam("Q", ty, Lam("P", ty, Lam(v, ty.dom, body)))


def instantiate_coord(schema: CoordSchema, x: Cat, level: int) -> LexEntry:
    """Entry for `schema` at conjunct category `x`: category ``(x \\ x) / x``.

    `level` is the lift depth of `x` (see `lift_depth`); the left conjunct
    ends up as the left operand of the connective.
    """
    depth = lift_depth(x)
    if depth is None or depth != level:
        raise ValueError(f"{show_cat(x)} is not Prop-like at lift level {level}")
    ty = interp(x)
    term = beta_normalize(_lifted(_OPS[schema.op], ty, depth))
    return LexEntry(schema.id, schema.word, Over(Under(x, x), x), term, schema.provenance)


# -- lint -------------------------------------------------------------------

@dataclass(frozen=True)
class AmbiguityWarning:
    word: str
    first: str
    second: str
    erased: str

    def __str__(self):
        return (f'ambiguous entries for "{self.word}": {self.first} and {self.second} '
                f"share category {self.erased} with overlapping indices")


def rename_apart(c: Cat, offset: int) -> Cat:
    vs = cat_vars(c)
    return apply_cat({v: TVar(v + offset) for v in vs}, c)


def _overlap(a: Cat, b: Cat) -> bool:
    shift = 1 + max(cat_vars(a) + [-1])
    try:
        unify_cat(a, rename_apart(b, shift))
    except UnificationError:
        return False
    return True


def ambiguous_pair(a: LexEntry, b: LexEntry) -> bool:
    return a.word == b.word and erase(a.cat) == erase(b.cat) and _overlap(a.cat, b.cat)


def lint_ambiguity(lex: Lexicon) -> list[AmbiguityWarning]:
    """One warning per pair of same-word entries whose indices are not clearly distinct."""
    out = []
    for word in sorted(lex.by_word):
        group = sorted(lex.by_word[word], key=lambda e: e.id)
        for a, b in itertools.combinations(group, 2):
            if ambiguous_pair(a, b):
                out.append(AmbiguityWarning(word, a.id, b.id, show_cat(erase(a.cat))))
    return out
