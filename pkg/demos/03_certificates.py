"""Emit a certificate, check it, then tamper with it in a few ways.

Each tampering should be caught by a specific violation kind.
"""

import dataclasses

from nlspec import core_lexicon, parse_sentence
from nlspec.certificates import check, dumps, emit, loads
from nlspec.categories import NAT, NP
from nlspec.lexicon import data_path, loads as load_lexicon
from nlspec.terms import parse_term

lex = core_lexicon()
sentence = "four is even"
cert = emit(sentence, parse_sentence(sentence, lex=lex)[0].derivation, lex)
text = dumps(cert)
print(text)
print("check:", check(loads(text), lex) or "ok")
print()

core_text = data_path("core.lex").read_text()
tampered = {
    "claim NP[nat]": (dataclasses.replace(cert, claimed_cat=NP(NAT)), lex),
    "claim positive 4": (dataclasses.replace(cert, claimed_denotation=parse_term("positive 4")), lex),
    "edit a token": (dataclasses.replace(cert, tokens=("four", "is", "odd")), lex),
    "second 'even' entry": (
        cert, load_lexicon(core_text + '\nword "even" @even_alt ADJ[nat] := positive\n')),
}
for name, (c, against) in tampered.items():
    kinds = sorted({v.kind for v in check(loads(dumps(c)), against)})
    print(f"{name:22} -> {', '.join(kinds)}")
