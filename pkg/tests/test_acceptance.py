"""Acceptance criteria 1-8.

Each test prints a one-line verdict, and the conftest hook repeats the
per-criterion PASS/FAIL summary at the end of the session.  Run alone with

    pytest tests/test_acceptance.py -v
"""

import dataclasses
import itertools
import random
import time

import pytest

from nlspec.categories import NAT, NP, S, interp
from nlspec.certificates import check, dumps, emit, loads
from nlspec.engine import (
    NoParse, SearchLimits, enumerate_parses_bruteforce, parse, parse_sentence, replay, tokenize,
)
from nlspec.lexicon import core_lexicon, lint_ambiguity, loads as load_lexicon
from nlspec.targets import (
    LtlFormula, LtlTarget, UnsupportedConstruct, eval_prop, ltl_well_formed,
    parse_model, retarget,
)
from nlspec.terms import alpha_eq, alpha_key, is_beta_normal, parse_term, type_check
from reference_eval import ARITH, evaluate

# Logical forms as displayed for each sentence, written out by hand.
GOLDEN = [
    ("four is even", "even 4"),
    ("addone is monotone", "forall x:nat, forall y:nat, x <= y -> addone x <= addone y"),
    ("addone given 3 is 4", "addone 3 = 4"),
    ("every natural is even", "forall n:nat, even n"),
    ("every natural is non-negative", "forall n:nat, n >= 0"),
    ("every natural is non-negative and some natural is even",
     "(forall n:nat, n >= 0) /\\ (exists n:nat, even n)"),
    ("four is even and positive", "even 4 /\\ positive 4"),
]

MINI = ["four", "3", "is", "even", "positive", "every", "natural", "and", "addone", "given"]
ALL = SearchLimits(max_parses=1_000_000)


def verdict(n, ok, detail):
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}")
    return ok


# -- 1 ----------------------------------------------------------------------

@pytest.mark.criterion(1, "golden denotations")
def test_c1_golden_denotations(core):
    failures = []
    for sentence, expected in GOLDEN:
        t0 = time.perf_counter()
        parses = parse_sentence(sentence, lex=core)
        elapsed = time.perf_counter() - t0
        got = parses[0].denotation
        if not (alpha_eq(got, parse_term(expected)) and is_beta_normal(got) and elapsed < 1.0):
            failures.append((sentence, str(got), elapsed))
    assert verdict(1, not failures, f"{len(GOLDEN) - len(failures)}/{len(GOLDEN)} exact"), failures


# -- 2 ----------------------------------------------------------------------

def random_sentence(rng: random.Random) -> str:
    """A grammatical sentence over the mini-lexicon."""

    def num():
        return rng.choice(["four", "3", str(rng.randint(0, 99))])

    def np():
        return num() if rng.random() < 0.7 else f"addone given {num()}"

    def adj(depth=0):
        if depth < 2 and rng.random() < 0.3:
            return f"{adj(depth + 1)} and {adj(depth + 1)}"
        return rng.choice(["even", "positive"])

    def clause():
        r = rng.random()
        if r < 0.35:
            return f"{np()} is {adj()}"
        if r < 0.55:
            return f"{np()} is {np()}"
        if r < 0.75:
            return f"every natural is {adj()}"
        if r < 0.85:
            return f"{np()} is {adj()} and is {adj()}"
        return "addone is addone"

    return clause() if rng.random() < 0.7 else f"{clause()} and {clause()}"


@pytest.mark.criterion(2, "typing invariant")
def test_c2_typing_invariant(core):
    rng = random.Random(20240611)
    sentences = [s for s, _ in GOLDEN] + [random_sentence(rng) for _ in range(1000)]
    checked, failures = 0, []
    for s in sentences:
        for p in parse_sentence(s, lex=core, limits=ALL):
            checked += 1
            ty = type_check(p.denotation, core.constants)
            cat, term = replay(p.derivation, core, tokenize(s))
            if ty != interp(p.cat) or cat != p.cat or not alpha_eq(term, p.denotation):
                failures.append(s)
    assert verdict(2, not failures, f"{checked} parses of {len(sentences)} sentences well-typed"), failures[:5]


# -- 3 ----------------------------------------------------------------------

@pytest.mark.criterion(3, "oracle equivalence")
def test_c3_oracle_equivalence(core):
    t0 = time.perf_counter()
    sequences = grammatical = 0
    discrepancies = []
    for n in range(1, 6):
        for words in itertools.product(MINI, repeat=n):
            sequences += 1
            oracle = {alpha_key(p.denotation) for p in enumerate_parses_bruteforce(words, S(), core)}
            try:
                chart = {alpha_key(p.denotation) for p in parse(words, S(), core, ALL)}
            except NoParse:
                chart = set()
            grammatical += bool(oracle)
            if chart != oracle:
                discrepancies.append(" ".join(words))
    elapsed = time.perf_counter() - t0
    ok = not discrepancies and elapsed < 600
    assert verdict(3, ok, f"{sequences} sequences ({grammatical} grammatical), "
                          f"{len(discrepancies)} discrepancies, {elapsed:.0f} s"), discrepancies[:5]


# -- 4 ----------------------------------------------------------------------

def _shift_shaped_four_is_even(core):
    for p in enumerate_parses_bruteforce(tokenize("four is even"), S(), core):
        if "Shift" in p.derivation.rule_names():
            return p.derivation
    raise AssertionError("no Shift derivation of 'four is even'")


def _swap_leaves(d, a, b):
    def go(n):
        if n.rule == "Lex":
            if n.span == a.span:
                return dataclasses.replace(n, entry=b.entry, cat=b.cat, inst=b.inst)
            if n.span == b.span:
                return dataclasses.replace(n, entry=a.entry, cat=a.cat, inst=a.inst)
            return n
        return dataclasses.replace(n, children=tuple(go(c) for c in n.children))
    return go(d)


@pytest.mark.criterion(4, "certificate round-trip and red team")
def test_c4_certificates(core, core_text):
    round_trips = 0
    for sentence, _ in GOLDEN:
        cert = loads(dumps(emit(sentence, parse_sentence(sentence, lex=core)[0].derivation, core)))
        assert check(cert, core) == [], sentence
        round_trips += 1

    base = emit("four is even", _shift_shaped_four_is_even(core), core)
    mono = emit("addone is monotone", parse_sentence("addone is monotone", lex=core)[0].derivation, core)
    leaves = base.derivation.leaves()
    sabotaged = core_text.replace(
        "\\f:nat -> nat. forall x:nat, forall y:nat, x <= y -> f x <= f y", "\\f:nat -> nat. true")
    assert sabotaged != core_text
    attacks = [
        ("leaf swap", dataclasses.replace(
            base, derivation=_swap_leaves(base.derivation, leaves[0], leaves[2])), core, "replay"),
        ("duplicate even", base,
         load_lexicon(core_text + '\nword "even" @even_injected ADJ[nat] := positive\n'), "ambiguity"),
        ("monotone redefinition", mono, load_lexicon(sabotaged), "digest-mismatch"),
        ("claimed category", dataclasses.replace(base, claimed_cat=NP(NAT)), core, "category-mismatch"),
        ("denotation edit", dataclasses.replace(base, claimed_denotation=parse_term("positive 4")), core,
         "denotation-mismatch"),
        ("token edit", dataclasses.replace(base, tokens=("four", "is", "odd")), core, "tokenization"),
    ]
    detected = []
    for name, cert, lex, kind in attacks:
        found = {v.kind for v in check(loads(dumps(cert)), lex)}
        if kind in found:
            detected.append(name)
    ok = round_trips == len(GOLDEN) and len(detected) == len(attacks)
    assert verdict(4, ok, f"{round_trips} round-trips, {len(detected)}/{len(attacks)} attacks detected"), detected


# -- 5 ----------------------------------------------------------------------

@pytest.mark.criterion(5, "lint")
def test_c5_lint(core, core_text):
    clean = lint_ambiguity(core)
    assert len(core.lookup("is")) == 2
    injected = lint_ambiguity(load_lexicon(core_text + '\nword "even" @even_dup ADJ[nat] := even\n'))
    ok = clean == [] and len(injected) == 1 and injected[0].word == "even"
    assert verdict(5, ok, f"core: {len(clean)} warnings, with duplicate even: {len(injected)}")


# -- 6 ----------------------------------------------------------------------

ARITH_TEXT = """domain nat = 0..9
fun even(n) = n mod 2 == 0
fun positive(n) = {positive}
fun le(a, b) = a <= b
fun ge(a, b) = a >= b
fun addone(n) = n + 1
"""

# (positive definition in the model file, the same definition in Python)
VARIANTS = [
    ("n > 0", lambda n: n > 0),
    ("n > 4", lambda n: n > 4),
    ("n == 0", lambda n: n == 0),
]


@pytest.mark.criterion(6, "evaluator oracle")
def test_c6_evaluator(core, arith):
    results = []
    for sentence in ["four is even", "every natural is non-negative"]:
        t = parse_sentence(sentence, lex=core)[0].denotation
        mine, ref = eval_prop(t, arith), evaluate(t, ARITH, list(range(10)))
        results.append(mine is True and ref is True)
    t = parse_sentence("four is positive and four is even", lex=core)[0].denotation
    values = []
    for text, fn in VARIANTS:
        model = parse_model(ARITH_TEXT.format(positive=text))
        mine = eval_prop(t, model)
        ref = evaluate(t, {**ARITH, "positive": fn}, list(range(10)))
        values.append(mine)
        results.append(mine == ref)
    # the positive 0 / positive 4 variants decide the conjunction
    results.append(values == [True, False, False])
    assert verdict(6, all(results), f"{sum(results)}/{len(results)} evaluator checks"), results


# -- 7 ----------------------------------------------------------------------

@pytest.mark.criterion(7, "retargeting")
def test_c7_ltl(ltl):
    sentences = [
        "always door is open",
        "eventually window is open",
        "door is open until window is open",
        "always door is open and eventually window is open",
    ]
    formed = 0
    for s in sentences:
        f = retarget(parse_sentence(s, lex=ltl)[0].denotation, LtlTarget())
        formed += isinstance(f, LtlFormula) and ltl_well_formed(f)
    with pytest.raises(UnsupportedConstruct):
        retarget(parse_term("forall n:nat, even n"), LtlTarget())
    assert verdict(7, formed >= 3, f"{formed}/{len(sentences)} LTL formulas, Forall rejected")


# -- 8 ----------------------------------------------------------------------

@pytest.mark.criterion(8, "performance floor")
def test_c8_performance():
    t0 = time.perf_counter()
    lex = core_lexicon()
    for sentence, _ in GOLDEN:
        parse_sentence(sentence, lex=lex)
    cold = time.perf_counter() - t0

    rng = random.Random(8)
    batch = [tuple(rng.choice(MINI) for _ in range(5)) for _ in range(2000)]
    t0 = time.perf_counter()
    for words in batch:
        try:
            parse(words, S(), lex)
        except NoParse:
            pass
    rate = len(batch) / (time.perf_counter() - t0)
    ok = cold < 2.0 and rate > 100
    assert verdict(8, ok, f"golden set cold {cold * 1000:.0f} ms, {rate:.0f} length-5 sentences/s")
