"""Command-line frontend: ``nlspec parse|certify|check|lint|eval|lexicon-show``.

Exit codes: 0 success, 1 no parse / failed check / strict lint,
2 unknown word, 3 configuration, I/O or malformed certificate.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

from . import certificates
from ._lexer import ParseError
from .categories import Cat, S, parse_cat, show_cat
from .engine import NoParse, Parse, ResourceExceeded, SearchLimits, UnknownWord, parse_sentence
from .lexicon import Lexicon, LexiconError, data_path, lint_ambiguity, load
from .targets import (
    LtlTarget, ModelError, PropSymbolic, UnknownConstant, UnsupportedConstruct,
    eval_prop, load_model, retarget, show_ltl,
)
from .terms import pretty

EXIT_OK, EXIT_FAIL, EXIT_UNKNOWN_WORD, EXIT_CONFIG = 0, 1, 2, 3

_ALIASES = {"@core": ["core.lex"], "@ltl": ["core.lex", "ltl.lex"]}


class ConfigError(Exception):
    pass


@dataclass(frozen=True)
class CliConfig:
    lexicon_paths: tuple[str, ...]
    goal: Cat
    target: str
    limits: SearchLimits
    strict: bool
    structured: bool


def _lexicon_paths(specs: Sequence[str]) -> list[str]:
    out: list[str] = []
    for spec in specs:
        paths = [str(data_path(n)) for n in _ALIASES[spec]] if spec in _ALIASES else [spec]
        out.extend(p for p in paths if p not in out)
    return out


def make_config(args) -> CliConfig:
    paths = tuple(_lexicon_paths(args.lexicon or ["@core"]))
    try:
        goal = parse_cat(args.goal)
    except ParseError as exc:
        raise ConfigError(f"bad --goal: {exc}") from exc
    target = args.target
    if not (target in ("prop", "ltl") or target.startswith("model:")):
        raise ConfigError(f"bad --target {target!r}: expected prop, ltl or model:FILE")
    try:
        limits = SearchLimits(max_lift_level=args.max_lift, max_parses=args.max_parses)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return CliConfig(paths, goal, target, limits, args.strict, args.format == "structured")


def _load_lexicon(cfg: CliConfig) -> Lexicon:
    try:
        return load(cfg.lexicon_paths)
    except OSError as exc:
        raise ConfigError(f"cannot read lexicon: {exc}") from exc
    except LexiconError as exc:
        raise ConfigError(str(exc)) from exc


def _load_model(path: str):
    try:
        return load_model(path)
    except OSError as exc:
        raise ConfigError(f"cannot read model: {exc}") from exc
    except ModelError as exc:
        raise ConfigError(str(exc)) from exc


def _target_value(p: Parse, cfg: CliConfig, model=None):
    """Render a parse in the configured target; returns (text, json value)."""
    if cfg.target == "prop" or p.cat != S():
        t = retarget(p.denotation, PropSymbolic()) if p.cat == S() else p.denotation
        return pretty(t), pretty(t)
    if cfg.target == "ltl":
        f = retarget(p.denotation, LtlTarget())
        return show_ltl(f), show_ltl(f)
    v = eval_prop(p.denotation, model)
    return ("true" if v else "false"), v


def _sentences(sentence: Optional[str]) -> list[str]:
    if sentence is not None and sentence != "-":
        return [sentence]
    return [line.strip() for line in sys.stdin if line.strip()]


def _parse_one(sentence, lex, cfg, out, model=None, header=False) -> int:
    try:
        parses = parse_sentence(sentence, cfg.goal, lex, cfg.limits)
    except UnknownWord as exc:
        _report_failure(sentence, f"unknown word {exc.word!r}", "unknown-word", cfg, out)
        return EXIT_UNKNOWN_WORD
    except (NoParse, ResourceExceeded) as exc:
        kind = "no-parse" if isinstance(exc, NoParse) else "resource-exceeded"
        _report_failure(sentence, str(exc), kind, cfg, out)
        return EXIT_FAIL
    rows = []
    code = EXIT_OK
    for p in parses:
        try:
            text, value = _target_value(p, cfg, model)
        except (UnsupportedConstruct, UnknownConstant, ModelError) as exc:
            text, value = f"<{type(exc).__name__}: {exc}>", None
            code = EXIT_FAIL
        rows.append((p, text, value))
    if cfg.structured:
        doc = {"sentence": sentence, "status": "ok", "parses": [
            {"category": show_cat(p.cat), "denotation": pretty(p.denotation),
             "target": cfg.target, "value": value, "derivation": str(p.derivation)}
            for p, _, value in rows]}
        print(json.dumps(doc, ensure_ascii=False), file=out)
    else:
        if header:
            print(f"# {sentence}", file=out)
        for p, text, _ in rows:
            print(f"{show_cat(p.cat)} : {text}", file=out)
    return code


def _report_failure(sentence, message, kind, cfg, out):
    if cfg.structured:
        print(json.dumps({"sentence": sentence, "status": kind, "error": message}), file=out)
    else:
        print(f"error: {sentence!r}: {message}", file=sys.stderr)


def cmd_parse(args, cfg: CliConfig) -> int:
    lex = _load_lexicon(cfg)
    model = _load_model(cfg.target[6:]) if cfg.target.startswith("model:") else None
    batch = args.sentence in (None, "-")
    codes = [_parse_one(s, lex, cfg, sys.stdout, model, header=batch) for s in _sentences(args.sentence)]
    return max(codes, default=EXIT_OK)


def cmd_eval(args, cfg: CliConfig) -> int:
    lex = _load_lexicon(cfg)
    path = args.model or (cfg.target[6:] if cfg.target.startswith("model:") else str(data_path("arith.model")))
    model = _load_model(path)
    problems = model.validate(lex.constants)
    if problems:
        raise ConfigError("model does not match the lexicon: " + "; ".join(problems))
    codes = []
    for sentence in _sentences(args.sentence):
        try:
            p = parse_sentence(sentence, S(), lex, cfg.limits)[0]
            value = eval_prop(p.denotation, model)
        except UnknownWord as exc:
            _report_failure(sentence, f"unknown word {exc.word!r}", "unknown-word", cfg, sys.stdout)
            codes.append(EXIT_UNKNOWN_WORD)
            continue
        except (NoParse, ResourceExceeded) as exc:
            _report_failure(sentence, str(exc), "no-parse", cfg, sys.stdout)
            codes.append(EXIT_FAIL)
            continue
        except (UnknownConstant, ModelError) as exc:
            raise ConfigError(f"cannot evaluate in model: {type(exc).__name__}: {exc}") from exc
        if cfg.structured:
            print(json.dumps({"sentence": sentence, "denotation": pretty(p.denotation), "value": value}))
        else:
            print("true" if value else "false")
        codes.append(EXIT_OK)
    return max(codes, default=EXIT_OK)


def cmd_certify(args, cfg: CliConfig) -> int:
    lex = _load_lexicon(cfg)
    try:
        parses = parse_sentence(args.sentence, cfg.goal, lex, cfg.limits)
    except UnknownWord as exc:
        print(f"error: unknown word {exc.word!r}", file=sys.stderr)
        return EXIT_UNKNOWN_WORD
    except (NoParse, ResourceExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    cert = certificates.emit(args.sentence, parses[0].derivation, lex, cfg.limits.max_lift_level)
    text = certificates.dumps(cert)
    if args.cert in (None, "-"):
        sys.stdout.write(text)
    else:
        try:
            with open(args.cert, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise ConfigError(f"cannot write certificate: {exc}") from exc
    return EXIT_OK


def cmd_check(args, cfg: CliConfig) -> int:
    path = args.certificate or args.cert
    if path is None:
        raise ConfigError("check needs a certificate path")
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read certificate: {exc}") from exc
    try:
        cert = certificates.loads(text)
    except certificates.CertificateFormatError as exc:
        print(f"error: {path}:{exc.line}:{exc.column}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    lex = _load_lexicon(cfg)
    violations = certificates.check(cert, lex, cfg.limits.max_lift_level)
    fatal = [v for v in violations if v.kind != "ambiguity" or cfg.strict]
    if cfg.structured:
        print(json.dumps({"certificate": path, "ok": not fatal,
                          "violations": [{"kind": v.kind, "message": v.message} for v in violations]}))
    else:
        for v in violations:
            print(str(v))
        print("ok" if not fatal else f"FAILED ({len(fatal)} violation{'s' if len(fatal) != 1 else ''})")
    return EXIT_OK if not fatal else EXIT_FAIL


def cmd_lint(args, cfg: CliConfig) -> int:
    lex = _load_lexicon(cfg)
    warnings = lint_ambiguity(lex)
    if cfg.structured:
        print(json.dumps({"warnings": [
            {"word": w.word, "first": w.first, "second": w.second, "erased": w.erased}
            for w in warnings]}))
    else:
        for w in warnings:
            print(f"warning: {w}")
        if not warnings:
            print("clean")
    return EXIT_FAIL if warnings and cfg.strict else EXIT_OK


def cmd_lexicon_show(args, cfg: CliConfig) -> int:
    lex = _load_lexicon(cfg)
    if cfg.structured:
        print(json.dumps({
            "entries": [{"id": e.id, "word": e.word, "category": show_cat(e.cat),
                         "denotation": pretty(e.denotation)} for e in lex.entries.values()],
            "coordinators": [{"word": c.word, "op": c.op} for c in lex.coords.values()],
        }))
    else:
        for e in lex.entries.values():
            print(e)
        for c in lex.coords.values():
            print(f'{c.id}: "{c.word}" {c.op}')
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--lexicon", action="append", metavar="PATH",
                        help="lexicon file (repeatable); @core and @ltl name the shipped ones")
    common.add_argument("--goal", default="S", metavar="CAT", help="goal category (default S)")
    common.add_argument("--target", default="prop", metavar="prop|model:FILE|ltl")
    common.add_argument("--max-parses", type=int, default=16, metavar="N")
    common.add_argument("--max-lift", type=int, default=3, metavar="N")
    common.add_argument("--strict", action="store_true",
                        help="treat ambiguity warnings as failures")
    common.add_argument("--format", choices=("text", "structured"), default="text")
    common.add_argument("--cert", metavar="OUT", help="certificate output (certify) or input (check)")

    p = argparse.ArgumentParser(prog="nlspec", description="Typed categorial-grammar parser for specification sentences.")
    sub = p.add_subparsers(dest="command", required=True)
    sp = sub.add_parser("parse", parents=[common], help="parse sentences and print logical forms")
    sp.add_argument("sentence", nargs="?", help="sentence; omit or '-' to read lines from stdin")
    sp.set_defaults(func=cmd_parse)
    sp = sub.add_parser("certify", parents=[common], help="write a checkable certificate")
    sp.add_argument("sentence")
    sp.set_defaults(func=cmd_certify)
    sp = sub.add_parser("check", parents=[common], help="verify a certificate against the lexicon")
    sp.add_argument("certificate", nargs="?")
    sp.set_defaults(func=cmd_check)
    sp = sub.add_parser("lint", parents=[common], help="report ambiguous lexicon entries")
    sp.set_defaults(func=cmd_lint)
    sp = sub.add_parser("eval", parents=[common], help="evaluate sentences in a finite model")
    sp.add_argument("sentence", nargs="?")
    sp.add_argument("--model", metavar="FILE", help="model file (default: shipped arithmetic model)")
    sp.set_defaults(func=cmd_eval)
    sp = sub.add_parser("lexicon-show", parents=[common], help="list lexicon entries")
    sp.set_defaults(func=cmd_lexicon_show)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    try:
        cfg = make_config(args)
        return args.func(args, cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
