import itertools

import pytest
from hypothesis import assume, given, settings

from nlspec.categories import NAT, Base
from nlspec.engine import denote
from nlspec.targets import (
    Always, Atom, Evaluator, Eventually, FiniteModel, LAnd, LFalse, LImpl, LNot, LOr, LTrue,
    LtlTarget, ModelError, PropSymbolic, TargetAlgebra, UnknownConstant, Until,
    UnsupportedConstruct, eval_prop, ltl_well_formed, parse_model, retarget, show_ltl,
)
from nlspec.terms import (
    And, App, Bot, Const, Eq, Forall, Impl, Lam, Lit, Not, Or, Top, alpha_eq,
    alpha_key, constants, parse_term, pretty,
)
from reference_eval import ARITH, evaluate
from strategies import props

EVEN4 = App(Const("even"), Lit(4))


# -- symbolic -------------------------------------------------------------

def test_symbolic_examples():
    assert pretty(retarget(EVEN4, PropSymbolic())) == "even 4"
    t = parse_term("(forall n:nat, n >= 0) /\\ (exists n:nat, even n)")
    assert retarget(t, PropSymbolic()) == t


def test_symbolic_keeps_unknown_constants():
    t = App(Const("mystery"), Lit(1))
    assert retarget(t, PropSymbolic()) == t


@settings(max_examples=150, deadline=None)
@given(props(), props())
def test_symbolic_is_injective_up_to_alpha(a, b):
    ra, rb = retarget(a, PropSymbolic()), retarget(b, PropSymbolic())
    assert alpha_eq(ra, a)
    assert (alpha_key(ra) == alpha_key(rb)) == (alpha_key(a) == alpha_key(b))


# -- evaluator ------------------------------------------------------------

def test_eval_examples(arith, core):
    assert eval_prop(EVEN4, arith) is True
    small = FiniteModel({"nat": list(range(6))}, dict(arith.consts), dict(arith.arity))
    assert eval_prop(parse_term("forall n:nat, ge n 0"), small) is True
    assert eval_prop(Bot(), arith) is False
    assert eval_prop(denote("every natural is even", core), arith) is False


def test_eval_unknown_constant(arith):
    with pytest.raises(UnknownConstant):
        eval_prop(App(Const("odd"), Lit(1)), arith)


def test_eval_missing_domain(arith):
    with pytest.raises(ModelError):
        eval_prop(Forall(Base("sig"), Lam("s", Base("sig"), Top())), arith)


ATOMS = [Top(), Bot(), EVEN4, App(Const("even"), Lit(3))]


@pytest.mark.parametrize("a, b", list(itertools.product(ATOMS, repeat=2)))
def test_evaluator_homomorphism(arith, a, b):
    va, vb = eval_prop(a, arith), eval_prop(b, arith)
    assert eval_prop(And(a, b), arith) == (va and vb)
    assert eval_prop(Or(a, b), arith) == (va or vb)
    assert eval_prop(Impl(a, b), arith) == ((not va) or vb)
    assert eval_prop(Not(a), arith) == (not va)


@pytest.mark.parametrize("a, b, c", list(itertools.product([True, False], repeat=3)))
def test_evaluator_lattice_laws(arith, a, b, c):
    ev = Evaluator(arith)
    assert ev.and_(a, b) == ev.and_(b, a) and ev.or_(a, b) == ev.or_(b, a)
    assert ev.and_(a, ev.and_(b, c)) == ev.and_(ev.and_(a, b), c)
    assert ev.or_(a, ev.or_(b, c)) == ev.or_(ev.or_(a, b), c)
    assert ev.and_(a, ev.top_()) == a and ev.or_(a, ev.bot_()) == a
    assert ev.and_(a, ev.bot_()) is False and ev.or_(a, ev.top_()) is True


@settings(max_examples=300, deadline=None)
@given(props(depth=4))
def test_evaluator_agrees_with_reference(arith, t):
    # the arithmetic model has no higher-order constants
    assume("twice" not in constants(t))
    assert eval_prop(t, arith) == evaluate(t, ARITH, arith.domains["nat"])


# -- model files ----------------------------------------------------------

def test_model_file(arith):
    assert arith.domains["nat"] == list(range(10))
    assert arith.consts["even"](4) is True
    assert arith.consts["le"](2)(3) is True
    assert arith.consts["addone"](9) == 10
    assert arith.arity == {"even": 1, "positive": 1, "le": 2, "ge": 2, "addone": 1}


def test_model_syntax_variants():
    m = parse_model("domain nat = 1, 3, 5\nconst zero = 0\nfun odd(n) = not n mod 2 == 0 and true")
    assert m.domains["nat"] == [1, 3, 5]
    assert m.consts["zero"] == 0
    assert m.consts["odd"](3) is True


@pytest.mark.parametrize("bad", [
    "domain nat = a..b",
    "fun f(n) = __import__('os')",
    "fun f(n) = m + 1",
    "fun f(n) = n.real",
    "fun f(n) = 'x'",
    "whatever",
])
def test_model_rejects(bad):
    with pytest.raises(ModelError):
        parse_model(bad)


def test_validate_against_signatures(arith, core):
    assert arith.validate(core.constants) == []
    broken = parse_model("domain nat = 0..3\nfun even(a, b) = a == b")
    assert broken.validate(core.constants)


# -- LTL ------------------------------------------------------------------

def test_ltl_conjunction():
    p, q = Const("p"), Const("q")
    assert retarget(And(p, q), LtlTarget()) == LAnd(Atom("p"), Atom("q"))


def test_ltl_connectives():
    t = parse_term("~p -> q \\/ true /\\ false")
    assert retarget(t, LtlTarget()) == LImpl(LNot(Atom("p")), LOr(Atom("q"), LAnd(LTrue(), LFalse())))


def test_ltl_rejects_quantifiers_and_equality():
    with pytest.raises(UnsupportedConstruct):
        retarget(parse_term("forall n:nat, even n"), LtlTarget())
    with pytest.raises(UnsupportedConstruct):
        retarget(parse_term("exists n:nat, even n"), LtlTarget())
    with pytest.raises(UnsupportedConstruct):
        retarget(Eq(Lit(1), Lit(2)), LtlTarget())


@pytest.mark.parametrize("sentence, formula, shown", [
    ("always door is open", Always(Atom("opened(door)")), "G opened(door)"),
    ("eventually window is open", Eventually(Atom("opened(window)")), "F opened(window)"),
    ("door is open until window is open", Until(Atom("opened(door)"), Atom("opened(window)")),
     "opened(door) U opened(window)"),
    ("always door is open and eventually window is open",
     LAnd(Always(Atom("opened(door)")), Eventually(Atom("opened(window)"))),
     "G opened(door) & F opened(window)"),
])
def test_ltl_sentences(ltl, sentence, formula, shown):
    f = retarget(denote(sentence, ltl), LtlTarget())
    assert f == formula and ltl_well_formed(f) and show_ltl(f) == shown


def test_abstract_algebra_is_abstract():
    with pytest.raises(NotImplementedError):
        retarget(Top(), TargetAlgebra())
    with pytest.raises(UnsupportedConstruct):
        TargetAlgebra().forall_("x", NAT, lambda v: v)
