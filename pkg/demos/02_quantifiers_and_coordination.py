"""Quantified subjects and `and` at several categories.

The coordinator is polymorphic: the same word joins adjectives, verb
phrases and whole sentences, and each use gets its own instance.
"""

from nlspec import core_lexicon, parse_sentence, pretty
from nlspec.categories import show_cat

lex = core_lexicon()

sentences = [
    "every natural is even",
    "every natural is non-negative",
    "four is even and positive",
    "four is even and is positive",
    "every natural is non-negative and some natural is even",
]

for s in sentences:
    parses = parse_sentence(s, lex=lex)
    print(s)
    for p in parses:
        coord = [d.cat for d in p.derivation.leaves() if (d.entry or "").startswith("coord:")]
        used = ", ".join(show_cat(c) for c in coord) or "-"
        print(f"  {pretty(p.denotation)}")
        print(f"    coordinator instance: {used}")
    print()
