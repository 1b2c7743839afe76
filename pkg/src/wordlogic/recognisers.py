"""Profile recognisers: a colouring of N plus a set of accepted profiles.

A word is accepted iff its profile on the colouring is in the accepted set.
Every language in the Boolean algebra generated by one-variable sentences
has such a recogniser, and this module builds them from generators and
sentences, combines them, and decides equivalence.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable

from .formulas import And, Const, Formula, FormulaError, Gen, Not, Or, PredRegistry, generators, parse, sentence_to_generators
from .upsets import Colouring1, LiteralError, UPSet, refine, refine_all
from . import words
from .words import (
    Alphabet,
    Profile,
    achievable_profiles,
    all_profiles,
    format_profile,
    parse_profile,
    profile,
    realize,
)

Oracle = Callable[[str], bool]


class RecogniserFormatError(ValueError):
    pass


@dataclass(frozen=True)
class Recogniser1:
    alphabet: Alphabet
    colouring: Colouring1
    accepted: frozenset[Profile]

    def __post_init__(self) -> None:
        accepted = frozenset(tuple(frozenset(b) for b in p) for p in self.accepted)
        object.__setattr__(self, "accepted", accepted)
        letters = set(self.alphabet.letters)
        for p in accepted:
            if len(p) != len(self.colouring):
                raise ValueError(f"profile {format_profile(p)} does not have {len(self.colouring)} components")
            for b in p:
                if not b <= letters:
                    raise ValueError(f"profile {format_profile(p)} uses letters outside {self.alphabet}")

    def accepts(self, w: str) -> bool:
        return profile(w, self.colouring) in self.accepted

    __call__ = accepts

    # -- constructors -----------------------------------------------------

    @classmethod
    def kqb(cls, alphabet: Alphabet, colouring: Colouring1, prof: Profile) -> Recogniser1:
        """The class of all words whose profile on ``colouring`` is exactly ``prof``."""
        return cls(alphabet, colouring, frozenset([tuple(frozenset(b) for b in prof)]))

    @classmethod
    def everything(cls, alphabet: Alphabet) -> Recogniser1:
        return cls(alphabet, Colouring1.trivial(), frozenset(all_profiles(1, alphabet)))

    @classmethod
    def nothing(cls, alphabet: Alphabet) -> Recogniser1:
        return cls(alphabet, Colouring1.trivial(), frozenset())

    # -- Boolean algebra --------------------------------------------------

    def complement(self) -> Recogniser1:
        full = frozenset(all_profiles(len(self.colouring), self.alphabet))
        return Recogniser1(self.alphabet, self.colouring, full - self.accepted)

    def union(self, other: Recogniser1) -> Recogniser1:
        return _combine(self, other, lambda x, y: x or y)

    def intersection(self, other: Recogniser1) -> Recogniser1:
        return _combine(self, other, lambda x, y: x and y)

    def difference(self, other: Recogniser1) -> Recogniser1:
        return _combine(self, other, lambda x, y: x and not y)

    __invert__ = complement
    __or__ = union
    __and__ = intersection
    __sub__ = difference

    # -- serialisation ----------------------------------------------------

    def dumps(self) -> str:
        lines = [f"alphabet {self.alphabet}", f"colouring {self.colouring}"]
        lines += [f"accept {format_profile(p)}" for p in sorted(self.accepted, key=_profile_key)]
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str, source: str = "<recogniser>") -> Recogniser1:
        alphabet = colouring = None
        accepted = []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                head, _, rest = line.partition(" ")
                if head == "alphabet":
                    alphabet = Alphabet.parse(line)
                elif head == "colouring":
                    colouring = Colouring1.parse(rest)
                elif head == "accept":
                    if alphabet is None or colouring is None:
                        raise RecogniserFormatError("'accept' before 'alphabet' and 'colouring'")
                    p = parse_profile(rest, alphabet)
                    if len(p) != len(colouring):
                        raise RecogniserFormatError(f"profile has {len(p)} components, colouring has {len(colouring)}")
                    accepted.append(p)
                else:
                    raise RecogniserFormatError(f"unknown directive {head!r}")
            except (RecogniserFormatError, LiteralError, ValueError) as exc:
                raise RecogniserFormatError(f"{source}:{lineno}: {exc}") from None
        if alphabet is None or colouring is None:
            raise RecogniserFormatError(f"{source}: missing 'alphabet' or 'colouring' line")
        return cls(alphabet, colouring, frozenset(accepted))

    @classmethod
    def load(cls, path: str | Path) -> Recogniser1:
        path = Path(path)
        return cls.loads(path.read_text(), str(path))


def _profile_key(p: Profile):
    return tuple((len(b), sorted(b)) for b in p)


def coarsen(p: Profile, cell_map: tuple[int, ...], ncells: int) -> Profile:
    """Profile on a coarser colouring, by finite additivity of contents."""
    parts: list[frozenset[str]] = [frozenset()] * ncells
    for i, b in enumerate(p):
        parts[cell_map[i]] = parts[cell_map[i]] | b
    return tuple(parts)


def _same_alphabet(r1: Recogniser1, r2: Recogniser1) -> None:
    if r1.alphabet != r2.alphabet:
        raise ValueError(f"alphabets differ: {r1.alphabet} vs {r2.alphabet}")


def _combine(r1: Recogniser1, r2: Recogniser1, op: Callable[[bool, bool], bool]) -> Recogniser1:
    _same_alphabet(r1, r2)
    q, m1, m2 = refine(r1.colouring, r2.colouring)
    n1, n2 = len(r1.colouring), len(r2.colouring)
    accepted = set()
    for p in all_profiles(len(q), r1.alphabet):
        if op(coarsen(p, m1, n1) in r1.accepted, coarsen(p, m2, n2) in r2.accepted):
            accepted.add(p)
    return Recogniser1(r1.alphabet, q, frozenset(accepted))


def from_generator(a: str, q: UPSet, alphabet: Alphabet) -> Recogniser1:
    """Words with an occurrence of ``a`` at a position in ``q``."""
    if a not in alphabet:
        raise ValueError(f"letter {a!r} not in alphabet {alphabet}")
    col = Colouring1.from_set(q)
    if q.is_empty:
        return Recogniser1.nothing(alphabet)
    accepted = frozenset(p for p in all_profiles(len(col), alphabet) if a in p[0])
    return Recogniser1(alphabet, col, accepted)


def membership(r: Recogniser1, w: str) -> bool:
    return r.accepts(w)


def achievable(r_or_q: Recogniser1 | Colouring1, prof: Profile) -> bool:
    q = r_or_q.colouring if isinstance(r_or_q, Recogniser1) else r_or_q
    return words.achievable(q, prof)


# ---------------------------------------------------------------------------
# Equivalence


def separating_word(r1: Recogniser1, r2: Recogniser1) -> str | None:
    """A shortest-profile word accepted by exactly one recogniser, or None."""
    _same_alphabet(r1, r2)
    q, m1, m2 = refine(r1.colouring, r2.colouring)
    n1, n2 = len(r1.colouring), len(r2.colouring)
    best = None
    for p in achievable_profiles(q, r1.alphabet):
        if (coarsen(p, m1, n1) in r1.accepted) != (coarsen(p, m2, n2) in r2.accepted):
            w = realize(q, p)
            if best is None or (len(w), w) < (len(best), best):
                best = w
    return best


def equivalent(r1: Recogniser1, r2: Recogniser1) -> bool:
    return separating_word(r1, r2) is None


# ---------------------------------------------------------------------------
# From sentences


def _eval_on_profile(expr: Formula, p: Profile, inside: dict[Gen, list[int]]) -> bool:
    if isinstance(expr, Gen):
        return any(expr.letters in p[i] for i in inside[expr])
    if isinstance(expr, Not):
        return not _eval_on_profile(expr.arg, p, inside)
    if isinstance(expr, And):
        return all(_eval_on_profile(a, p, inside) for a in expr.args)
    if isinstance(expr, Or):
        return any(_eval_on_profile(a, p, inside) for a in expr.args)
    if isinstance(expr, Const):
        return expr.value
    raise TypeError(f"unexpected node {expr!r}")


def from_generators(expr: Formula, alphabet: Alphabet, reduce_colours: bool = True) -> Recogniser1:
    """Recogniser for a Boolean combination of one-letter generator languages."""
    gens = generators(expr)
    for g in gens:
        if len(g.letters) != 1 or not isinstance(g.cell, UPSet):
            raise FormulaError(f"generator {g} is not unary; only one-variable blocks compile")
    q = refine_all(Colouring1.from_set(g.cell) for g in gens)
    inside = {g: [i for i, cell in enumerate(q.cells) if cell.issubset(g.cell)] for g in gens}
    accepted = frozenset(p for p in all_profiles(len(q), alphabet) if _eval_on_profile(expr, p, inside))
    r = Recogniser1(alphabet, q, accepted)
    return reduce(r) if reduce_colours else r


def compile_sentence(
    phi: Formula | str,
    alphabet: Alphabet,
    registry: PredRegistry | None = None,
    reduce_colours: bool = True,
) -> Recogniser1:
    """Compile a sentence whose blocks bind one variable each."""
    if isinstance(phi, str):
        phi = parse(phi, registry, alphabet)
    expr = sentence_to_generators(phi, alphabet, registry)
    return from_generators(expr, alphabet, reduce_colours)


def reduce(r: Recogniser1) -> Recogniser1:
    """Merge pairs of colours while the accepted set is saturated by the merge.

    Sound (membership is unchanged) but not guaranteed minimal.
    """
    changed = True
    while changed and len(r.colouring) > 1:
        changed = False
        n = len(r.colouring)
        full = list(all_profiles(n, r.alphabet))
        for i, j in itertools.combinations(range(n), 2):
            cell_map = tuple(k if k < j else (i if k == j else k - 1) for k in range(n))
            verdict: dict[Profile, bool] = {}
            ok = True
            for p in full:
                c = coarsen(p, cell_map, n - 1)
                acc = p in r.accepted
                if verdict.setdefault(c, acc) != acc:
                    ok = False
                    break
            if not ok:
                continue
            cells = list(r.colouring.cells)
            cells[i] = cells[i] | cells[j]
            del cells[j]
            accepted = frozenset(c for c, acc in verdict.items() if acc)
            r = Recogniser1(r.alphabet, Colouring1(tuple(cells)), accepted)
            changed = True
            break
    return r


# ---------------------------------------------------------------------------
# From a membership oracle


def synthesize(oracle: Oracle, colouring: Colouring1, alphabet: Alphabet, len_bound: int) -> Recogniser1:
    """Query ``oracle`` once per profile realisable by a word of length <= len_bound.

    The result agrees with the oracle whenever the oracle's language is a
    union of profile classes of ``colouring`` and every profile it accepts
    is realisable within the bound; otherwise it may disagree on longer
    words.
    """
    accepted = set()
    for p in achievable_profiles(colouring, alphabet, max_len=len_bound):
        if oracle(realize(colouring, p)):
            accepted.add(p)
    return Recogniser1(alphabet, colouring, frozenset(accepted))


# ---------------------------------------------------------------------------
# Builtin oracles


def factor_language(factor: str) -> Oracle:
    """A*·factor·A*"""
    def oracle(w: str) -> bool:
        return factor in w

    oracle.__name__ = f"factor:{factor}"
    return oracle


def count_parity(letter: str, parity: int = 0) -> Oracle:
    """Words whose number of ``letter`` has the given parity."""
    def oracle(w: str) -> bool:
        return w.count(letter) % 2 == parity

    oracle.__name__ = f"parity:{letter}"
    return oracle


def constant(value: bool) -> Oracle:
    def oracle(w: str) -> bool:
        return value

    oracle.__name__ = "all" if value else "none"
    return oracle


def builtin_oracle(spec: str) -> Oracle:
    """``factor:ab``, ``parity:a``, ``all`` or ``none``."""
    kind, _, arg = spec.partition(":")
    if kind == "factor" and arg:
        return factor_language(arg)
    if kind == "parity" and arg:
        return count_parity(arg)
    if kind in ("all", "none") and not arg:
        return constant(kind == "all")
    raise ValueError(f"unknown builtin oracle {spec!r}; try factor:ab, parity:a, all, none")


def agree_upto(o1: Oracle, o2: Oracle, alphabet: Alphabet, max_len: int) -> str | None:
    """First word (shortlex) of length <= max_len on which two oracles differ."""
    for w in alphabet.words_upto(max_len):
        if o1(w) != o2(w):
            return w
    return None


def union_all(rs: Iterable[Recogniser1]) -> Recogniser1:
    rs = list(rs)
    out = rs[0]
    for r in rs[1:]:
        out = out | r
    return out
