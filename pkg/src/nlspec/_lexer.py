"""Tokenizer shared by the type, category and term readers."""

from __future__ import annotations

import re
from dataclasses import dataclass

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<op>->|/\\|\\/|<=|>=|:=|[()\[\]/\\.,:~=<>])
  | (?P<tvar>\?\d+)
  | (?P<num>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
    """,
    re.VERBOSE,
)


class ParseError(ValueError):
    """Malformed type, category or term text; `pos` is a 0-based column."""

    def __init__(self, message: str, pos: int | None = None, text: str | None = None):
        self.pos = pos
        self.text = text
        if pos is not None:
            message = f"{message} (at column {pos + 1})"
        super().__init__(message)


@dataclass(frozen=True)
class Token:
    kind: str
    value: str
    pos: int


def tokenize(text: str) -> list[Token]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        if kind != "ws":
            out.append(Token(kind, m.group(), pos))
        pos = m.end()
    out.append(Token("eof", "", len(text)))
    return out


class TokenStream:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def peek(self) -> Token:
        return self.tokens[self.i]

    def peek_at(self, k: int) -> Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.tokens[self.i]
        if tok.kind != "eof":
            self.i += 1
        return tok

    def at(self, value: str) -> bool:
        tok = self.peek
        return tok.kind in ("op", "ident") and tok.value == value

    def accept(self, value: str) -> bool:
        if self.at(value):
            self.i += 1
            return True
        return False

    def expect(self, value: str) -> Token:
        if not self.at(value):
            self.fail(f"expected {value!r}")
        return self.next()

    def expect_kind(self, kind: str) -> Token:
        if self.peek.kind != kind:
            self.fail(f"expected {kind}")
        return self.next()

    def fail(self, message: str):
        tok = self.peek
        found = tok.value if tok.kind != "eof" else "end of input"
        raise ParseError(f"{message}, found {found!r}", tok.pos, self.text)

    def expect_end(self):
        if self.peek.kind != "eof":
            self.fail("unexpected trailing input")
