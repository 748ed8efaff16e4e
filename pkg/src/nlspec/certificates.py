"""Checkable parse certificates.

A certificate records a sentence, its tokens, a derivation, a digest of
every lexicon entry the derivation uses, and the category and denotation
the derivation is claimed to produce.  `check` re-derives everything from
the lexicon and reports each disagreement separately; it never trusts the
parser that produced the certificate.  The text format is described in
``docs/certificate-format.md``.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass
from typing import Optional, Union

from ._lexer import ParseError
from .categories import Cat, Over, TVar, Under, apply_cat, cat_vars, interp, parse_cat, parse_type, show_cat, show_type
from .engine import Derivation, ReplayError, replay, tokenize
from .lexicon import CoordSchema, LexEntry, Lexicon, ambiguous_pair
from .terms import (
    Lam, Term, TypeCheckError, Var, _children, _rebuild, alpha_eq, beta_normalize,
    parse_term, pretty, subst_types, substitute, term_type_vars, type_check,
)

__all__ = [
    "Certificate", "Violation", "CertificateFormatError", "VIOLATION_KINDS",
    "emit", "check", "dumps", "loads", "entry_digest", "canonical_entry", "HEADER",
]

HEADER = "ccg-cert/1"

VIOLATION_KINDS = (
    "tokenization", "missing-entry", "digest-mismatch", "replay",
    "category-mismatch", "denotation-mismatch", "type-mismatch", "ambiguity",
)


@dataclass(frozen=True)
class Certificate:
    sentence: str
    tokens: tuple[str, ...]
    derivation: Derivation
    digests: tuple[tuple[str, str], ...]  # (entry id, sha256 hex), sorted by id
    claimed_cat: Cat
    claimed_denotation: Term


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str

    def __str__(self):
        return f"{self.kind}: {self.message}"


class CertificateFormatError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1):
        self.line, self.column = line, column
        super().__init__(f"line {line}, column {column}: {message}")


# -- digests ----------------------------------------------------------------

def _canon_binders(t: Term, depth: int = 0) -> Term:
    if isinstance(t, Lam):
        name = f"b{depth}"
        body = substitute(t.body, t.name, Var(name)) if name != t.name else t.body
        return Lam(name, t.ty, _canon_binders(body, depth + 1))
    kids = _children(t)
    if not kids:
        return t
    return _rebuild(t, tuple(_canon_binders(k, depth) for k in kids))


def canonical_entry(entry: Union[LexEntry, CoordSchema]) -> str:
    """Formatting-independent rendering: type variables renumbered, binders renamed."""
    if isinstance(entry, CoordSchema):
        return f"coord\t{entry.word}\t{entry.op}"
    vs = cat_vars(entry.cat)
    term_type_vars(entry.denotation, vs)
    ren = {v: TVar(k) for k, v in enumerate(vs)}
    cat = apply_cat(ren, entry.cat)
    term = _canon_binders(subst_types(entry.denotation, ren))
    return f"entry\t{entry.word}\t{show_cat(cat)}\t{pretty(term)}"


def entry_digest(entry: Union[LexEntry, CoordSchema]) -> str:
    return hashlib.sha256(canonical_entry(entry).encode("utf-8")).hexdigest()


def _referenced(d: Derivation) -> list[str]:
    return sorted({leaf.entry for leaf in d.leaves()})


# -- emit / check -------------------------------------------------------------

def emit(sentence: str, d: Derivation, lex: Lexicon, max_lift_level: int = 3) -> Certificate:
    """Certificate for derivation `d` of `sentence`; claims come from replaying `d`."""
    tokens = tuple(tokenize(sentence))
    if d.span != (0, len(tokens)):
        raise ReplayError(f"derivation spans {d.span}, sentence has {len(tokens)} tokens")
    cat, term = replay(d, lex, tokens, max_lift_level)
    digests = tuple((eid, entry_digest(lex.entry(eid))) for eid in _referenced(d))
    return Certificate(sentence, tokens, d, digests, cat, beta_normalize(term))


def check(cert: Certificate, lex: Lexicon, max_lift_level: int = 3) -> list[Violation]:
    """Every way `cert` disagrees with `lex`; an empty list means it checks."""
    out: list[Violation] = []
    d = cert.derivation

    if tuple(tokenize(cert.sentence)) != tuple(cert.tokens):
        out.append(Violation("tokenization",
                             f"sentence tokenizes to {tokenize(cert.sentence)}, certificate lists {list(cert.tokens)}"))

    claimed = dict(cert.digests)
    referenced = _referenced(d)
    entries = {}
    for eid in referenced:
        entry = lex.entry(eid)
        if entry is None:
            out.append(Violation("missing-entry", f"lexicon has no entry {eid!r}"))
            continue
        entries[eid] = entry
        if eid not in claimed:
            out.append(Violation("digest-mismatch", f"no digest recorded for {eid!r}"))
        elif claimed[eid] != entry_digest(entry):
            out.append(Violation("digest-mismatch", f"entry {eid!r} differs from the certified definition"))
    for eid in sorted(set(claimed) - set(referenced)):
        out.append(Violation("digest-mismatch", f"digest for {eid!r}, which the derivation does not use"))

    replayed = None
    if d.span != (0, len(cert.tokens)):
        out.append(Violation("replay", f"derivation spans {d.span}, certificate has {len(cert.tokens)} tokens"))
    else:
        try:
            replayed = replay(d, lex, cert.tokens, max_lift_level)
        except ReplayError as exc:
            out.append(Violation("replay", str(exc)))
    if replayed is not None:
        cat, term = replayed
        if cat != cert.claimed_cat:
            out.append(Violation("category-mismatch",
                                 f"derivation yields {show_cat(cat)}, certificate claims {show_cat(cert.claimed_cat)}"))
        if not alpha_eq(beta_normalize(term), beta_normalize(cert.claimed_denotation)):
            out.append(Violation("denotation-mismatch",
                                 f"derivation yields `{pretty(term)}`, certificate claims "
                                 f"`{pretty(cert.claimed_denotation)}`"))

    try:
        ty = type_check(cert.claimed_denotation, lex.constants)
        if ty != interp(cert.claimed_cat):
            out.append(Violation("type-mismatch",
                                 f"claimed denotation has type {show_type(ty)}, "
                                 f"{show_cat(cert.claimed_cat)} needs {show_type(interp(cert.claimed_cat))}"))
    except TypeCheckError as exc:
        out.append(Violation("type-mismatch", f"claimed denotation is ill-typed: {exc}"))

    seen = set()
    for eid, entry in entries.items():
        if not isinstance(entry, LexEntry):
            continue
        for other in lex.lookup(entry.word):
            pair = tuple(sorted((eid, other.id)))
            if other.id == eid or pair in seen:
                continue
            if ambiguous_pair(entry, other):
                seen.add(pair)
                out.append(Violation("ambiguity",
                                     f'"{entry.word}" has entries {pair[0]} and {pair[1]} '
                                     f"that erase to the same category with overlapping indices"))
    return out


# -- text format ----------------------------------------------------------------

def _q(s: str) -> str:
    return json.dumps(s, ensure_ascii=True)


def _sexp(d: Derivation) -> str:
    lo, hi = d.span
    if d.rule == "Lex":
        inst = "".join(f" ({v} {_q(show_type(t))})" for v, t in d.inst)
        return f"(Lex {lo} {hi} {_q(show_cat(d.cat))} {_q(d.entry)}{inst})"
    kids = "".join(" " + _sexp(c) for c in d.children)
    return f"({d.rule} {lo} {hi} {_q(show_cat(d.cat))}{kids})"


def dumps(cert: Certificate) -> str:
    lines = [
        HEADER,
        f"sentence {_q(cert.sentence)}",
        "tokens " + json.dumps(list(cert.tokens), ensure_ascii=True),
        f"claimed-cat {_q(show_cat(cert.claimed_cat))}",
        f"claimed-denotation {_q(pretty(cert.claimed_denotation))}",
    ]
    lines += [f"digest {eid} {h}" for eid, h in cert.digests]
    lines += [f"derivation {_sexp(cert.derivation)}", "end"]
    return "\n".join(lines) + "\n"


_SEXP_TOKEN = re.compile(r'\s*(?:(\()|(\))|("(?:[^"\\]|\\.)*")|(-?\d+)|([A-Za-z][A-Za-z0-9_-]*))')
_RULES = {"Lex", "Shift", "RApp", "LApp", "RComp", "LComp"}


class _SexpReader:
    def __init__(self, text: str, line: int, offset: int):
        self.text, self.line, self.offset, self.pos = text, line, offset, 0

    def fail(self, msg: str, pos: Optional[int] = None):
        col = self.offset + (self.pos if pos is None else pos) + 1
        raise CertificateFormatError(msg, self.line, col)

    def token(self):
        m = _SEXP_TOKEN.match(self.text, self.pos)
        if not m or m.end() == self.pos:
            if self.text[self.pos:].strip():
                self.fail("unexpected character")
            self.fail("unexpected end of derivation")
        start = m.start(m.lastindex)
        self.pos = m.end()
        kind = ("open", "close", "str", "int", "sym")[m.lastindex - 1]
        return kind, m.group(m.lastindex), start

    def expect(self, kind: str, what: str):
        k, v, start = self.token()
        if k != kind:
            self.fail(f"expected {what}", start)
        if kind == "str":
            try:
                return json.loads(v), start
            except json.JSONDecodeError as exc:
                self.fail(f"malformed string: {exc.msg}", start + exc.pos)
        if kind == "int":
            return int(v), start
        return v, start

    def node(self) -> Derivation:
        self.expect("open", "'('")
        rule, start = self.expect("sym", "a rule name")
        if rule not in _RULES:
            self.fail(f"unknown rule {rule!r}", start)
        lo, _ = self.expect("int", "span start")
        hi, _ = self.expect("int", "span end")
        cat_text, start = self.expect("str", "a quoted category")
        cat = self._parse(_indexed_cat, cat_text, start)
        if rule == "Lex":
            entry, _ = self.expect("str", "a quoted entry id")
            inst = []
            while True:
                k, _, start = self.peek()
                if k == "close":
                    self.token()
                    break
                self.expect("open", "'(' or ')'")
                var, _ = self.expect("int", "a type variable number")
                ty_text, start = self.expect("str", "a quoted type")
                inst.append((var, self._parse(parse_type, ty_text, start)))
                self.expect("close", "')'")
            return Derivation("Lex", (lo, hi), cat, entry=entry, inst=tuple(sorted(inst)))
        kids = []
        while True:
            k, _, _ = self.peek()
            if k == "close":
                self.token()
                break
            kids.append(self.node())
        return Derivation(rule, (lo, hi), cat, tuple(kids))

    def peek(self):
        save = self.pos
        tok = self.token()
        self.pos = save
        return tok

    def _parse(self, fn, text, start):
        try:
            return fn(text)
        except ParseError as exc:
            self.fail(f"bad value {text!r}: {exc}", start)


def _string_field(rest: str, lineno: int, col: int):
    try:
        value = json.loads(rest)
    except json.JSONDecodeError as exc:
        raise CertificateFormatError(f"malformed string: {exc.msg}", lineno, col + exc.pos) from exc
    return value


def _erased_somewhere(c: Cat) -> bool:
    if isinstance(c, (Over, Under)):
        return any(_erased_somewhere(k) for k in (c.arg, c.result))
    return getattr(c, "index", False) is None


def _indexed_cat(text: str) -> Cat:
    c = parse_cat(text)
    if _erased_somewhere(c):
        raise ParseError("categories in certificates must carry their indices")
    return c


def loads(text: str) -> Certificate:
    """Parse the text format; raises CertificateFormatError with a location."""
    try:
        return _loads(text)
    except RecursionError:
        raise CertificateFormatError("nesting too deep", 1) from None


def _loads(text: str) -> Certificate:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    fields = ["sentence", "tokens", "claimed-cat", "claimed-denotation"]
    if not lines or lines[0] != HEADER:
        raise CertificateFormatError(f"expected header {HEADER!r}", 1)
    values = {}
    i = 1
    for name in fields:
        lineno = i + 1
        if i >= len(lines):
            raise CertificateFormatError(f"missing field {name!r}", lineno)
        line = lines[i]
        if not line.startswith(name + " "):
            raise CertificateFormatError(f"expected field {name!r}", lineno)
        col = len(name) + 2
        value = _string_field(line[len(name) + 1:], lineno, col)
        try:
            if name == "tokens":
                if not (isinstance(value, list) and all(isinstance(w, str) for w in value)):
                    raise CertificateFormatError("tokens must be a list of strings", lineno, col)
                value = tuple(value)
            elif not isinstance(value, str):
                raise CertificateFormatError(f"{name} must be a string", lineno, col)
            elif name == "claimed-cat":
                value = _indexed_cat(value)
            elif name == "claimed-denotation":
                value = parse_term(value)
        except ParseError as exc:
            raise CertificateFormatError(f"bad {name}: {exc}", lineno, col) from exc
        values[name] = value
        i += 1
    digests = []
    while i < len(lines) and lines[i].startswith("digest "):
        parts = lines[i].split(" ")
        if len(parts) != 3 or not re.fullmatch(r"[0-9a-f]{64}", parts[2]):
            raise CertificateFormatError("expected 'digest <entry-id> <sha256 hex>'", i + 1)
        digests.append((parts[1], parts[2]))
        i += 1
    if [e for e, _ in digests] != sorted({e for e, _ in digests}):
        raise CertificateFormatError("digest lines must be sorted by entry id without repeats", i)
    if i >= len(lines) or not lines[i].startswith("derivation "):
        raise CertificateFormatError("expected 'derivation' line", i + 1)
    reader = _SexpReader(lines[i][len("derivation "):], i + 1, len("derivation "))
    deriv = reader.node()
    if reader.text[reader.pos:].strip():
        reader.fail("trailing text after derivation", reader.pos + 1)
    i += 1
    if i >= len(lines) or lines[i] != "end":
        raise CertificateFormatError("expected 'end'", i + 1)
    if i + 1 != len(lines):
        raise CertificateFormatError("content after 'end'", i + 2)
    return Certificate(values["sentence"], values["tokens"], deriv, tuple(digests),
                       values["claimed-cat"], values["claimed-denotation"])
