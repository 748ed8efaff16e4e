"""Parse controlled-English specification sentences into typed logical forms.

Typical use::

    from nlspec import core_lexicon, parse_sentence
    lex = core_lexicon()
    parse_sentence("addone is monotone", lex=lex)[0].denotation
"""

from ._lexer import ParseError
from .categories import (
    ADJ, CN, NAT, NP, PROP, UNIT, Arrow, Base, Cat, Over, S, SemType, TVar, Under,
    UnificationError, interp, parse_cat, parse_type, quant, unify_cat, unify_sem,
)
from .certificates import Certificate, CertificateFormatError, Violation, check, emit
from .engine import (
    Derivation, NoParse, Parse, ParseFailure, ReplayError, ResourceExceeded, SearchLimits,
    UnknownWord, denote, enumerate_parses_bruteforce, parse, parse_sentence, replay, tokenize,
)
from .lexicon import (
    CoordSchema, LexEntry, Lexicon, LexiconError, core_lexicon, instantiate_coord,
    lint_ambiguity, load, loads, ltl_lexicon,
)
from .targets import (
    Evaluator, FiniteModel, LtlTarget, PropSymbolic, TargetAlgebra, UnsupportedConstruct,
    eval_prop, load_model, parse_model, retarget,
)
from .terms import Term, alpha_eq, beta_normalize, parse_term, pretty, type_check

__version__ = "0.1.0"

__all__ = [
    "ADJ",
    "alpha_eq",
    "Arrow",
    "Base",
    "beta_normalize",
    "Cat",
    "Certificate",
    "CertificateFormatError",
    "check",
    "CN",
    "CoordSchema",
    "core_lexicon",
    "core_lexicon",
    "denote",
    "Derivation",
    "emit",
    "enumerate_parses_bruteforce",
    "eval_prop",
    "Evaluator",
    "FiniteModel",
    "instantiate_coord",
    "interp",
    "LexEntry",
    "Lexicon",
    "LexiconError",
    "lint_ambiguity",
    "load",
    "load_model",
    "loads",
    "ltl_lexicon",
    "LtlTarget",
    "NAT",
    "NoParse",
    "NP",
    "Over",
    "Parse",
    "parse",
    "parse_cat",
    "parse_model",
    "parse_sentence",
    "parse_sentence",
    "parse_term",
    "parse_type",
    "ParseError",
    "ParseFailure",
    "pretty",
    "PROP",
    "PropSymbolic",
    "quant",
    "replay",
    "ReplayError",
    "ResourceExceeded",
    "retarget",
    "S",
    "SearchLimits",
    "SemType",
    "TargetAlgebra",
    "Term",
    "tokenize",
    "TVar",
    "type_check",
    "Under",
    "UnificationError",
    "unify_cat",
    "unify_sem",
    "UNIT",
    "UnknownWord",
    "UnsupportedConstruct",
    "Violation",
]
