"""Read the same logical forms into a temporal-logic target.

A target supplies the connectives; `retarget` walks the term and calls
them.  Quantifiers have no LTL counterpart, so they are refused.
"""

from nlspec import ltl_lexicon, parse_sentence, retarget, LtlTarget, PropSymbolic, pretty
from nlspec.targets import UnsupportedConstruct, show_ltl
from nlspec.terms import parse_term

lex = ltl_lexicon()
for s in ["always door is open", "eventually window is open",
          "door is open until window is open",
          "always door is open and eventually window is open"]:
    print(s)
    for p in parse_sentence(s, lex=lex):
        print("  logic:", pretty(retarget(p.denotation, PropSymbolic())))
        print("  LTL:  ", show_ltl(retarget(p.denotation, LtlTarget())))

try:
    retarget(parse_term("forall n:nat, even n"), LtlTarget())
except UnsupportedConstruct as e:
    print("\nforall n:nat, even n ->", type(e).__name__, e)
