"""Bounded checks of the three equation families against a membership oracle.

Each family compares a language on two words that differ only at
same-coloured positions:

* swap(a, b):   a at j1 and b at j2  vs  b at j1 and a at j2;
* dup(a, b):    (a, a, b) at (j1, j2, j3)  vs  (a, b, b);
* append(a):    a at j with colour(j) = colour(|w|)  vs  the same word followed by a.

Checks enumerate every word up to a length bound, so a pass only certifies
that bound.  The word reported in a failure is the left-hand word, i.e. the
one carrying (a, b), (a, a, b), or the one before appending.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from .upsets import Colouring1
from .words import Alphabet

Oracle = Callable[[str], bool]


@dataclass(frozen=True)
class SwapEq:
    a: str
    b: str
    name = "swap"

    @property
    def letters(self) -> str:
        return self.a + self.b

    def __str__(self):
        return f"fam=swap a={self.a} b={self.b}"


@dataclass(frozen=True)
class DupEq:
    a: str
    b: str
    name = "dup"

    @property
    def letters(self) -> str:
        return self.a + self.b

    def __str__(self):
        return f"fam=dup a={self.a} b={self.b}"


@dataclass(frozen=True)
class AppendEq:
    a: str
    name = "append"

    @property
    def letters(self) -> str:
        return self.a

    def __str__(self):
        return f"fam=append a={self.a}"


EquationFamily = SwapEq | DupEq | AppendEq


def families(alphabet: Alphabet) -> list[EquationFamily]:
    """Every instance, in checking order: swaps, then dups, then appends."""
    pairs = list(itertools.product(alphabet.letters, repeat=2))
    return (
        [SwapEq(a, b) for a, b in pairs]
        + [DupEq(a, b) for a, b in pairs]
        + [AppendEq(a) for a in alphabet.letters]
    )


@dataclass(frozen=True)
class CheckReport:
    passed: bool
    family: EquationFamily | None = None
    word: str | None = None
    positions: tuple[int, ...] = ()
    colour: int | None = None
    max_len: int | None = None

    def __bool__(self) -> bool:
        return self.passed

    @property
    def counterpart(self) -> str | None:
        """The right-hand word the failing word was compared with."""
        if self.passed:
            return None
        return right_word(self.family, self.word, self.positions)

    def replay(self, oracle: Oracle) -> bool:
        """True iff the reported witness really separates the two sides."""
        if self.passed:
            return True
        left = left_word(self.family, self.word, self.positions)
        return left == self.word and oracle(self.word) != oracle(self.counterpart)

    def __str__(self) -> str:
        if self.passed:
            return "PASS"
        j = ",".join(str(p) for p in self.positions)
        return f"FAIL {self.family} w={self.word} j={j}"


# ---------------------------------------------------------------------------
# Substitutions


def substitute(w: str, positions: Sequence[int], letters: Sequence[str]) -> str:
    """Replace w[positions[m]] by letters[m]."""
    if len(positions) != len(letters):
        raise ValueError("positions and letters must have the same length")
    if len(set(positions)) != len(positions):
        raise ValueError(f"positions {tuple(positions)} are not pairwise distinct")
    out = list(w)
    for j, a in zip(positions, letters):
        if not 0 <= j < len(w):
            raise ValueError(f"position {j} is out of range for a word of length {len(w)}")
        out[j] = a
    return "".join(out)


def left_word(fam: EquationFamily, w: str, positions: Sequence[int]) -> str:
    if isinstance(fam, SwapEq):
        return substitute(w, positions, (fam.a, fam.b))
    if isinstance(fam, DupEq):
        return substitute(w, positions, (fam.a, fam.a, fam.b))
    return substitute(w, positions, (fam.a,))


def right_word(fam: EquationFamily, w: str, positions: Sequence[int]) -> str:
    if isinstance(fam, SwapEq):
        return substitute(w, positions, (fam.b, fam.a))
    if isinstance(fam, DupEq):
        return substitute(w, positions, (fam.a, fam.b, fam.b))
    return substitute(w, positions, (fam.a,)) + fam.a


# ---------------------------------------------------------------------------
# Vectorised membership tables


class MembershipTable:
    """Oracle answers for every word of a given length, indexed by lexicographic rank."""

    def __init__(self, oracle: Oracle, alphabet: Alphabet):
        self.oracle = oracle
        self.alphabet = alphabet
        self.base = len(alphabet)
        self._member: dict[int, np.ndarray] = {}
        self._digits: dict[int, np.ndarray] = {}

    def digits(self, n: int) -> np.ndarray:
        if n not in self._digits:
            if n == 0:
                self._digits[n] = np.zeros((1, 0), dtype=np.int64)
            else:
                grid = np.indices((self.base,) * n).reshape(n, -1).T
                self._digits[n] = np.ascontiguousarray(grid, dtype=np.int64)
        return self._digits[n]

    def member(self, n: int) -> np.ndarray:
        if n not in self._member:
            letters = self.alphabet.letters
            words = ("".join(letters[d] for d in row) for row in self.digits(n))
            self._member[n] = np.fromiter((bool(self.oracle(w)) for w in words), dtype=bool)
        return self._member[n]

    def weights(self, n: int) -> np.ndarray:
        return self.base ** np.arange(n - 1, -1, -1, dtype=np.int64)

    def word(self, n: int, code: int) -> str:
        return "".join(self.alphabet.letters[d] for d in self.digits(n)[code])


def _same_colour_tuples(colours: Sequence[int], arity: int) -> Iterator[tuple[int, ...]]:
    n = len(colours)
    for js in itertools.permutations(range(n), arity):
        if all(colours[j] == colours[js[0]] for j in js):
            yield js


def _first_failure(table: MembershipTable, q: Colouring1, fam: EquationFamily, n: int):
    """Smallest (word rank, positions) violating ``fam`` among words of length n."""
    if isinstance(fam, (SwapEq, DupEq)) and fam.a == fam.b:
        return None
    idx = {a: i for i, a in enumerate(table.alphabet.letters)}
    colours = q.colours(n)
    D = table.digits(n)
    M = table.member(n)
    W = table.weights(n)
    codes = np.arange(len(M), dtype=np.int64)
    best = None

    def consider(fail: np.ndarray, js: tuple[int, ...]):
        nonlocal best
        hits = np.flatnonzero(fail)
        if hits.size:
            cand = (int(hits[0]), js)
            if best is None or cand < best:
                best = cand

    if isinstance(fam, SwapEq):
        ia, ib = idx[fam.a], idx[fam.b]
        for js in _same_colour_tuples(colours, 2):
            j1, j2 = js
            mask = (D[:, j1] == ia) & (D[:, j2] == ib)
            other = codes + (ib - D[:, j1]) * W[j1] + (ia - D[:, j2]) * W[j2]
            consider(mask & (M != M[other]), js)
    elif isinstance(fam, DupEq):
        ia, ib = idx[fam.a], idx[fam.b]
        for js in _same_colour_tuples(colours, 3):
            j1, j2, j3 = js
            mask = (D[:, j1] == ia) & (D[:, j2] == ia) & (D[:, j3] == ib)
            other = codes + (ib - D[:, j2]) * W[j2]
            consider(mask & (M != M[other]), js)
    else:
        ia = idx[fam.a]
        longer = table.member(n + 1)
        target = q.colour(n)
        for j in range(n):
            if colours[j] != target:
                continue
            mask = D[:, j] == ia
            consider(mask & (M != longer[codes * table.base + ia]), (j,))
    if best is None:
        return None
    code, js = best
    return table.word(n, code), js, colours[js[0]]


def _check_letters(fam: EquationFamily, alphabet: Alphabet) -> None:
    for a in fam.letters:
        if a not in alphabet:
            raise ValueError(f"letter {a!r} of {fam} is not in alphabet {alphabet}")


def check_family(
    oracle: Oracle | MembershipTable,
    q: Colouring1,
    fam: EquationFamily,
    max_len: int,
    alphabet: Alphabet | None = None,
) -> CheckReport:
    """Exhaustively test one family on all words of length <= max_len."""
    table = oracle if isinstance(oracle, MembershipTable) else MembershipTable(oracle, _need(alphabet))
    _check_letters(fam, table.alphabet)
    for n in range(max_len + 1):
        hit = _first_failure(table, q, fam, n)
        if hit is not None:
            w, js, c = hit
            return CheckReport(False, fam, w, js, c, max_len)
    return CheckReport(True, fam, max_len=max_len)


def check_all(
    oracle: Oracle | MembershipTable,
    q: Colouring1,
    max_len: int,
    alphabet: Alphabet | None = None,
) -> CheckReport:
    """All three families for every choice of letters; first failure wins."""
    table = oracle if isinstance(oracle, MembershipTable) else MembershipTable(oracle, _need(alphabet))
    for fam in families(table.alphabet):
        report = check_family(table, q, fam, max_len)
        if not report:
            return report
    return CheckReport(True, max_len=max_len)


def _need(alphabet: Alphabet | None) -> Alphabet:
    if alphabet is None:
        raise ValueError("an alphabet is required to enumerate words")
    return alphabet


# ---------------------------------------------------------------------------
# Arbitrary equations


Projection = Callable[[str, tuple[int, ...]], int]


def coordinate(m: int) -> Projection:
    return lambda w, js: js[m]


def word_length(w: str, js: tuple[int, ...]) -> int:
    return len(w)


@dataclass(frozen=True)
class Equation:
    """A user-supplied pair of word maps on marked words, plus the projections
    that must land in one colour for the pair to be compared."""

    left: Callable[[str, tuple[int, ...]], str]
    right: Callable[[str, tuple[int, ...]], str]
    arity: int
    projections: tuple[Projection, ...] = field(default=())
    name: str = "custom"

    def projections_or_default(self) -> tuple[Projection, ...]:
        return self.projections or tuple(coordinate(m) for m in range(self.arity))


def as_equation(fam: EquationFamily) -> Equation:
    """The family as a plain word-map pair (slow path, for cross-checking)."""
    if isinstance(fam, AppendEq):
        return Equation(
            lambda w, js: left_word(fam, w, js),
            lambda w, js: right_word(fam, w, js),
            1,
            (coordinate(0), word_length),
            fam.name,
        )
    arity = 2 if isinstance(fam, SwapEq) else 3
    return Equation(lambda w, js: left_word(fam, w, js), lambda w, js: right_word(fam, w, js), arity, (), fam.name)


def check_equation(
    oracle: Oracle,
    q: Colouring1,
    eq: Equation,
    alphabet: Alphabet,
    max_len: int,
) -> tuple[str, tuple[int, ...]] | None:
    """First (word, positions) in shortlex/lex order where the two sides disagree.

    Position tuples range over pairwise-distinct positions of the word; the
    pair is compared only when every projection has the same colour.
    """
    projections = eq.projections_or_default()
    for w in alphabet.words_upto(max_len):
        for js in itertools.permutations(range(len(w)), eq.arity):
            cs = {q.colour(p(w, js)) for p in projections}
            if len(cs) != 1:
                continue
            if oracle(eq.left(w, js)) != oracle(eq.right(w, js)):
                return w, js
    return None


# ---------------------------------------------------------------------------
# Searching for a colouring


def candidate_colourings(max_threshold: int, max_modulus: int, singletons: bool = False) -> list[Colouring1]:
    """Threshold/residue colourings, threshold-major, without repeats.

    By default the positions below the threshold share one cell.
    """
    out: list[Colouring1] = []
    for t in range(max_threshold + 1):
        for m in range(1, max_modulus + 1):
            q = Colouring1.threshold_residue(t, m, singletons)
            if q not in out:
                out.append(q)
    return out


def search_colouring(
    oracle: Oracle,
    alphabet: Alphabet,
    max_len: int,
    candidates: Iterable[Colouring1] | None = None,
    max_threshold: int = 3,
    max_modulus: int = 3,
) -> tuple[Colouring1, CheckReport] | None:
    """First candidate colouring under which the oracle passes every family.

    A hit is evidence up to ``max_len``, not a proof.
    """
    table = MembershipTable(oracle, alphabet)
    if candidates is None:
        candidates = candidate_colourings(max_threshold, max_modulus)
    for q in candidates:
        report = check_all(table, q, max_len)
        if report:
            return q, report
    return None
