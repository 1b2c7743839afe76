"""Command-line front end.

Exit status: 0 for pass/true, 1 for fail/false, 2 for usage or input errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Callable, Sequence

from . import equations, formulas, pseudofinite, recognisers, rewrite
from .upsets import Colouring1, LiteralError
from .words import Alphabet, AlphabetError


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"no such file: {path}")
    return p.read_text()


def _registry(args) -> formulas.PredRegistry:
    if args.registry:
        return formulas.PredRegistry.parse(_read(args.registry), args.registry)
    return formulas.PredRegistry()


def _alphabet(args, registry: formulas.PredRegistry | None = None) -> Alphabet:
    if args.alphabet:
        return Alphabet.of(args.alphabet)
    if registry is not None and registry.alphabet is not None:
        return registry.alphabet
    return Alphabet.of("ab")


def _colouring(text: str) -> Colouring1:
    return Colouring1.parse(text)


def _oracle(spec: str, alphabet: Alphabet) -> tuple[Callable[[str], bool], Alphabet]:
    """A recogniser file, or a builtin (``factor:ab``, ``parity:a``, ``all``, ``none``)."""
    if Path(spec).is_file():
        r = recognisers.Recogniser1.load(spec)
        return r, r.alphabet
    name = spec.removeprefix("builtin:")
    try:
        return recognisers.builtin_oracle(name), alphabet
    except ValueError:
        raise UsageError(f"{spec!r} is neither a recogniser file nor a builtin oracle") from None


def _truth(value: bool) -> int:
    print("true" if value else "false")
    return 0 if value else 1


# ---------------------------------------------------------------------------


def cmd_parse(args) -> int:
    reg = _registry(args)
    phi = formulas.parse(args.sentence, reg, _alphabet(args, reg))
    print(phi)
    print(formulas.tree(phi))
    return 0


def cmd_eval(args) -> int:
    reg = _registry(args)
    alphabet = _alphabet(args, reg)
    phi = formulas.parse(args.sentence, reg, alphabet)
    return _truth(formulas.evaluate(phi, alphabet.check(args.word), reg))


def cmd_compile(args) -> int:
    reg = _registry(args)
    alphabet = _alphabet(args, reg)
    r = recognisers.compile_sentence(args.sentence, alphabet, reg, reduce_colours=not args.no_reduce)
    if args.out:
        Path(args.out).write_text(r.dumps())
    else:
        sys.stdout.write(r.dumps())
    return 0


def cmd_member(args) -> int:
    r = recognisers.Recogniser1.load(_path(args.rec))
    return _truth(r.accepts(r.alphabet.check(args.word)))


def cmd_equiv(args) -> int:
    r1 = recognisers.Recogniser1.load(_path(args.first))
    r2 = recognisers.Recogniser1.load(_path(args.second))
    w = recognisers.separating_word(r1, r2)
    if w is None:
        print("equivalent")
        return 0
    print(f"not equivalent; separating word: {w if w else '(empty)'}")
    return 1


def cmd_check_eq(args) -> int:
    oracle, alphabet = _oracle(args.oracle, _alphabet(args))
    q = _colouring(args.col)
    if args.family:
        report = equations.check_family(oracle, q, _family(args.family), args.max_len, alphabet)
    else:
        report = equations.check_all(oracle, q, args.max_len, alphabet)
    print(report)
    return 0 if report else 1


def _family(text: str) -> equations.EquationFamily:
    parts = text.split(":")
    if parts[0] == "swap" and len(parts) == 3:
        return equations.SwapEq(parts[1], parts[2])
    if parts[0] == "dup" and len(parts) == 3:
        return equations.DupEq(parts[1], parts[2])
    if parts[0] == "append" and len(parts) == 2:
        return equations.AppendEq(parts[1])
    raise UsageError(f"bad family {text!r}; use swap:a:b, dup:a:b or append:a")


def cmd_search_col(args) -> int:
    oracle, alphabet = _oracle(args.oracle, _alphabet(args))
    hit = equations.search_colouring(
        oracle, alphabet, args.max_len, max_threshold=args.max_threshold, max_modulus=args.max_modulus
    )
    if hit is None:
        print("none")
        return 1
    print(hit[0])
    return 0


def cmd_witness(args) -> int:
    q = _colouring(args.col)
    try:
        chain = rewrite.witness_chain(q, args.source, args.target)
    except rewrite.ProfileMismatch as exc:
        print(f"mismatch: {exc}")
        return 1
    for step in chain.steps:
        print(step)
    if args.out:
        Path(args.out).write_text(chain.dumps())
    return 0


def cmd_verify(args) -> int:
    chain = rewrite.RewriteChain.load(_path(args.chain))
    oracle = _oracle(args.oracle, _alphabet(args))[0] if args.oracle else None
    check = rewrite.verify_chain(chain, oracle)
    print(check)
    return 0 if check else 1


def _gword(args) -> pseudofinite.GeneralizedWord1:
    alphabet = Alphabet.of(args.alphabet) if args.alphabet else None
    return pseudofinite.GeneralizedWord1.load(_path(args.gword), alphabet)


def cmd_pf_check(args) -> int:
    g = _gword(args)
    crit = pseudofinite.content_criterion(g)
    report = pseudofinite.bounded_pseudofinite_check(g, args.max_modulus, args.max_threshold)
    print(f"content-criterion {'PASS' if crit else 'FAIL'}")
    print(f"bounded-check {report}")
    return 0 if crit and report else 1


def cmd_pf_witness(args) -> int:
    g = _gword(args)
    try:
        print(pseudofinite.word_witness(g, _colouring(args.col)) or "(empty)")
    except pseudofinite.Infeasible as exc:
        print(f"infeasible: {exc}")
        return 1
    return 0


def _path(path: str) -> str:
    if not Path(path).is_file():
        raise UsageError(f"no such file: {path}")
    return path


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wordlogic", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True)

    def verb(name: str, func, help: str, registry: bool = False) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help)
        p.set_defaults(func=func)
        p.add_argument("--alphabet", help="letters, e.g. ab (default: ab or the registry's)")
        if registry:
            p.add_argument("--registry", help="predicate registry file")
        return p

    p = verb("parse", cmd_parse, "parse a sentence and print its syntax tree", registry=True)
    p.add_argument("--sentence", required=True)

    p = verb("eval", cmd_eval, "evaluate a sentence on a word", registry=True)
    p.add_argument("--sentence", required=True)
    p.add_argument("--word", required=True)

    p = verb("compile", cmd_compile, "compile a one-variable sentence to a recogniser", registry=True)
    p.add_argument("--sentence", required=True)
    p.add_argument("--out")
    p.add_argument("--no-reduce", action="store_true", help="keep the full common refinement")

    p = verb("member", cmd_member, "test a word against a recogniser file")
    p.add_argument("--rec", required=True)
    p.add_argument("--word", required=True)

    p = verb("equiv", cmd_equiv, "decide whether two recognisers accept the same words")
    p.add_argument("first")
    p.add_argument("second")

    p = verb("check-eq", cmd_check_eq, "check the equation families up to a length bound")
    p.add_argument("--oracle", required=True, help="recogniser file or builtin (factor:ab, parity:a, all, none)")
    p.add_argument("--col", required=True, help="colouring literal, e.g. 'col[up:/10, up:/01]'")
    p.add_argument("--max-len", type=int, required=True)
    p.add_argument("--family", help="only one family: swap:a:b, dup:a:b or append:a")

    p = verb("search-col", cmd_search_col, "search threshold/residue colourings passing every family")
    p.add_argument("--oracle", required=True)
    p.add_argument("--max-len", type=int, default=5)
    p.add_argument("--max-threshold", type=int, default=3)
    p.add_argument("--max-modulus", type=int, default=3)

    p = verb("witness", cmd_witness, "rewrite chain between two words with equal profile")
    p.add_argument("--col", required=True)
    p.add_argument("--from", dest="source", required=True)
    p.add_argument("--to", dest="target", required=True)
    p.add_argument("--out", help="also write the chain file here")

    p = verb("verify", cmd_verify, "replay and check a chain file")
    p.add_argument("--chain", required=True)
    p.add_argument("--oracle")

    p = verb("pf-check", cmd_pf_check, "content criterion and bounded pseudofiniteness check")
    p.add_argument("--gword", required=True)
    p.add_argument("--max-modulus", type=int, default=4)
    p.add_argument("--max-threshold", type=int, default=4)

    p = verb("pf-witness", cmd_pf_witness, "finite word matching a generalized word on a colouring")
    p.add_argument("--gword", required=True)
    p.add_argument("--col", required=True)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (
        UsageError,
        LiteralError,
        AlphabetError,
        formulas.FormulaError,
        formulas.EvalError,
        recognisers.RecogniserFormatError,
        ValueError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())
