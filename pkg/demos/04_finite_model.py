"""Evaluate parsed sentences in a finite model.

The model file fixes a domain and gives each constant a meaning.  Swapping
the meaning of `positive` changes the verdict of a sentence that uses it.
"""

from nlspec import core_lexicon, parse_sentence, parse_model, eval_prop, pretty
from nlspec.lexicon import data_path

lex = core_lexicon()
model = parse_model(data_path("arith.model").read_text())

for s in ["four is even", "every natural is non-negative", "every natural is even",
          "addone given 3 is 4", "addone is monotone"]:
    t = parse_sentence(s, lex=lex)[0].denotation
    print(f"{eval_prop(t, model)!s:5}  {s}    [{pretty(t)}]")

print()
template = data_path("arith.model").read_text()
t = parse_sentence("four is positive and four is even", lex=lex)[0].denotation
for definition in ["n > 0", "n > 4"]:
    text = "\n".join(
        f"fun positive(n) = {definition}" if line.startswith("fun positive") else line
        for line in template.splitlines())
    print(f"positive(n) = {definition:6} -> {eval_prop(t, parse_model(text))}")
