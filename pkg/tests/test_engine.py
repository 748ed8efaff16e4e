import pytest
from hypothesis import given, settings, strategies as st

from nlspec.categories import ADJ, NAT, NP, S, Under, interp, parse_cat
from nlspec.engine import (
    Derivation, NoParse, ReplayError, ResourceExceeded, RuleError, SearchLimits, UnknownWord,
    apply_rule, denote, enumerate_parses_bruteforce, parse, parse_sentence, replay, tokenize,
)
from nlspec.terms import Const, Lit, alpha_eq, alpha_key, parse_term, type_check

MINI = ["four", "3", "is", "even", "positive", "every", "natural", "and", "addone", "given"]


def forms(parses):
    return {alpha_key(p.denotation) for p in parses}


# -- tokenize -------------------------------------------------------------

@pytest.mark.parametrize("text, words", [
    ("four is even", ["four", "is", "even"]),
    ("  addone   is  monotone ", ["addone", "is", "monotone"]),
    ("", []),
])
def test_tokenize(text, words):
    assert tokenize(text) == words


# -- parse ----------------------------------------------------------------

@pytest.mark.parametrize("sentence, expected", [
    ("four is even", "even 4"),
    ("every natural is even", "forall n:nat, even n"),
    ("addone given 3 is 4", "addone 3 = 4"),
    ("four is even and positive", "even 4 /\\ positive 4"),
    ("four is even or positive", "even 4 \\/ positive 4"),
    ("some natural is positive", "exists n:nat, positive n"),
    ("addone given 3 is positive", "positive (addone 3)"),
])
def test_parse_examples(core, sentence, expected):
    assert alpha_eq(denote(sentence, core), parse_term(expected))


def test_ungrammatical_order(core):
    with pytest.raises(NoParse):
        parse(["even", "four", "is"], S(), core)


def test_empty_input(core):
    with pytest.raises(NoParse):
        parse([], S(), core)


def test_unknown_word_names_the_token(core):
    with pytest.raises(UnknownWord) as info:
        parse_sentence("colorless green ideas", lex=core)
    assert info.value.word == "colorless"


def test_non_sentence_goal(core):
    (p,) = parse(["four"], NP(NAT), core)
    assert p.denotation == Lit(4) and p.cat == NP(NAT)
    (p,) = parse(["addone", "given", "3"], NP(NAT), core)
    assert alpha_eq(p.denotation, parse_term("addone 3"))


def test_goal_with_variables_unifies(core):
    (p,) = parse(["four"], NP(parse_cat("NP[?7]").index), core)
    assert p.cat == NP(NAT)


def test_results_are_deduplicated_and_ordered(core):
    ps = parse_sentence("four is non-negative and even and positive", lex=core)
    keys = [alpha_key(p.denotation) for p in ps]
    assert len(keys) == len(set(keys)) == 2
    ranks = [p.derivation.rank() for p in ps]
    assert ranks == sorted(ranks)


def test_max_parses_truncates(core):
    ps = parse_sentence("four is non-negative and even and positive", lex=core,
                        limits=SearchLimits(max_parses=1))
    assert len(ps) == 1


def test_resource_exceeded_is_distinct_from_no_parse(core):
    with pytest.raises(ResourceExceeded):
        parse_sentence("every natural is even and some natural is positive", lex=core,
                       limits=SearchLimits(max_span_items=1))


TRANSITIVE = """
const divides : nat -> nat -> Prop
const exceeds : nat -> nat -> Prop
word "four" NP[nat] := 4
word "divides" (NP[nat] \\ S) / NP[nat] := \\y:nat. \\x:nat. divides x y
word "exceeds" (NP[nat] \\ S) / NP[nat] := \\y:nat. \\x:nat. exceeds x y
coord "and" and
"""


def test_lift_bound_limits_coordination():
    from nlspec.lexicon import loads
    lex = loads(TRANSITIVE)
    words = tokenize("four divides and exceeds 3")
    (p,) = parse(words, S(), lex, SearchLimits(max_lift_level=2))
    assert alpha_eq(p.denotation, parse_term("divides 4 3 /\\ exceeds 4 3"))
    with pytest.raises(NoParse):
        parse(words, S(), lex, SearchLimits(max_lift_level=1))
    assert forms(enumerate_parses_bruteforce(words, S(), lex, max_lift_level=1)) == set()


def test_limits_must_be_positive():
    with pytest.raises(ValueError):
        SearchLimits(max_parses=0)


def test_determinism(core):
    s = "every natural is even and some natural is positive"
    a = [(str(p.derivation), p.denotation) for p in parse_sentence(s, lex=core)]
    b = [(str(p.derivation), p.denotation) for p in parse_sentence(s, lex=core)]
    assert a == b


# -- rules ------------------------------------------------------------------

def test_rapp_is_even():
    is_cat = parse_cat("(NP[nat] \\ S) / ADJ[nat]")
    f = parse_term("\\p:nat -> Prop. \\n:nat. p n")
    cat, term, _ = apply_rule("RApp", [(is_cat, f), (ADJ(NAT), Const("even"))])
    assert cat == Under(NP(NAT), S())
    assert alpha_eq(term, parse_term("\\n:nat. even n"))


def test_rapp_unifies_indices():
    is_cat = parse_cat("(NP[?0] \\ S) / ADJ[?0]")
    f = parse_term("\\p:?0 -> Prop. \\n:?0. p n")
    cat, term, s = apply_rule("RApp", [(is_cat, f), (ADJ(NAT), Const("even"))])
    assert s == {0: NAT} and cat == Under(NP(NAT), S())


def test_shift_moves_the_slash():
    c = parse_cat("NP[nat] \\ (S / ADJ[nat])")
    f = parse_term("\\n:nat. \\p:nat -> Prop. p n")
    cat, term, _ = apply_rule("Shift", [(c, f)])
    assert cat == parse_cat("(NP[nat] \\ S) / ADJ[nat]")
    assert alpha_eq(term, parse_term("\\r:nat -> Prop. \\l:nat. r l"))


def test_lcomp_mismatch_fails():
    a = parse_cat("NP[nat] \\ S")
    b = parse_cat("ADJ[nat] \\ S")
    with pytest.raises(RuleError):
        apply_rule("LComp", [(a, Const("f")), (b, Const("g"))])


def test_comp_terms():
    ab, bc = parse_cat("S / S"), parse_cat("S / NP[nat]")
    cat, term, _ = apply_rule("RComp", [(ab, Const("e")), (bc, Const("f"))])
    assert cat == parse_cat("S / NP[nat]")
    assert alpha_eq(term, parse_term("\\x:nat. e (f x)"))
    ab, bc = parse_cat("NP[nat] \\ S"), parse_cat("S \\ S")
    cat, term, _ = apply_rule("LComp", [(ab, Const("e")), (bc, Const("f"))])
    assert cat == parse_cat("NP[nat] \\ S")
    assert alpha_eq(term, parse_term("\\x:nat. f (e x)"))


def test_unknown_rule():
    with pytest.raises(RuleError):
        apply_rule("Reassoc", [(S(), Const("p")), (S(), Const("q"))])


# -- replay ---------------------------------------------------------------

def shift_tree():
    is_cat = parse_cat("NP[nat] \\ (S / ADJ[nat])")
    four = Derivation("Lex", (0, 1), NP(NAT), entry="fourlex")
    is_ = Derivation("Lex", (1, 2), is_cat, entry="noun_is_adj_sentence", inst=((0, NAT),))
    shift = Derivation("Shift", (1, 2), parse_cat("(NP[nat] \\ S) / ADJ[nat]"), (is_,))
    even = Derivation("Lex", (2, 3), ADJ(NAT), entry="even_lex")
    vp = Derivation("RApp", (1, 3), parse_cat("NP[nat] \\ S"), (shift, even))
    return Derivation("LApp", (0, 3), S(), (four, vp))


def test_replay_hand_built_tree(core):
    cat, term = replay(shift_tree(), core, ["four", "is", "even"])
    assert cat == S() and alpha_eq(term, parse_term("even 4"))
    assert str(shift_tree()) == "[LApp [Lex fourlex] [RApp [Shift [Lex noun_is_adj_sentence]] [Lex even_lex]]]"


def test_replay_round_trips_parses(core):
    for s in ["four is even", "every natural is even and some natural is positive",
              "addone given 3 is 4", "four is even or positive"]:
        for p in parse_sentence(s, lex=core):
            cat, term = replay(p.derivation, core, tokenize(s))
            assert cat == p.cat and alpha_eq(term, p.denotation)


def _swap_leaf(d, entry, cat):
    if d.rule == "Lex":
        return Derivation("Lex", d.span, cat, entry=entry) if d.entry == "even_lex" else d
    return Derivation(d.rule, d.span, d.cat, tuple(_swap_leaf(c, entry, cat) for c in d.children))


def test_replay_catches_swapped_leaf(core):
    bad = _swap_leaf(shift_tree(), "fourlex", NP(NAT))
    with pytest.raises(ReplayError) as info:
        replay(bad, core)
    assert info.value.path.startswith("root")


@pytest.mark.parametrize("mutate", [
    lambda d: Derivation(d.rule, d.span, NP(NAT), d.children),
    lambda d: Derivation("RApp", d.span, d.cat, d.children),
    lambda d: Derivation(d.rule, (0, 4), d.cat, d.children),
    lambda d: Derivation(d.rule, d.span, d.cat, d.children[::-1]),
    lambda d: Derivation("Bogus", d.span, d.cat, d.children),
])
def test_replay_rejects_tampering(core, mutate):
    with pytest.raises(ReplayError):
        replay(mutate(shift_tree()), core)


def test_replay_requires_grounding(core):
    is_ = Derivation("Lex", (0, 1), parse_cat("NP[nat] \\ (S / ADJ[nat])"), entry="noun_is_adj_sentence")
    with pytest.raises(ReplayError, match="open"):
        replay(is_, core)


def test_replay_checks_tokens(core):
    with pytest.raises(ReplayError):
        replay(shift_tree(), core, ["four", "is", "positive"])


# -- oracle -----------------------------------------------------------------

def test_oracle_examples(core):
    assert enumerate_parses_bruteforce(["four"], S(), core) == []
    (p,) = enumerate_parses_bruteforce(["four"], NP(NAT), core)
    assert p.denotation == Lit(4)
    assert forms(enumerate_parses_bruteforce(tokenize("four is even"), S(), core)) == \
        forms(parse_sentence("four is even", lex=core))


def test_oracle_keeps_every_derivation(core):
    ds = enumerate_parses_bruteforce(tokenize("four is even"), S(), core)
    assert {str(p.derivation) for p in ds} == {
        "[RApp [LApp [Lex fourlex] [Lex noun_is_adj_sentence]] [Lex even_lex]]",
        "[LApp [Lex fourlex] [RApp [Shift [Lex noun_is_adj_sentence]] [Lex even_lex]]]",
    }


def test_oracle_length_limit(core):
    with pytest.raises(ValueError):
        enumerate_parses_bruteforce(["four"] * 7, S(), core)


@settings(max_examples=150, deadline=None)
@given(st.lists(st.sampled_from(MINI), min_size=1, max_size=5))
def test_chart_matches_oracle(core, words):
    oracle = enumerate_parses_bruteforce(words, S(), core)
    try:
        chart = parse(words, S(), core, SearchLimits(max_parses=10_000))
    except NoParse:
        chart = []
    assert forms(chart) == forms(oracle)
    for p in oracle:
        # every oracle derivation is rule-valid and well-typed
        cat, term = replay(p.derivation, core, words)
        assert type_check(term, core.constants) == interp(cat)
