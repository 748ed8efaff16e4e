"""Parse a few sentences with the shipped lexicon and show what comes back.

    python3 demos/01_parsing.py
"""

from nlspec import core_lexicon, parse_sentence, pretty
from nlspec.categories import interp, show_cat, show_type
from nlspec.engine import UnknownWord, NoParse

lex = core_lexicon()

for sentence in ["four is even", "addone given 3 is 4", "addone is monotone"]:
    p = parse_sentence(sentence, lex=lex)[0]
    print(sentence)
    print("  category   ", show_cat(p.cat), "::", show_type(interp(p.cat)))
    print("  denotation ", pretty(p.denotation))
    print("  derivation ", p.derivation)
    print()

# Failures are typed exceptions, not empty lists.
for bad in ["four is purple", "is four even"]:
    try:
        parse_sentence(bad, lex=lex)
    except UnknownWord as e:
        print(f"{bad!r}: unknown word ({e})")
    except NoParse as e:
        print(f"{bad!r}: no parse ({e})")
