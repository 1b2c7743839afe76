"""Finite words, their contents and colour profiles.

Words are plain strings whose characters are letters of an :class:`Alphabet`.
A k-tuple of letters is written as a length-k string, so the content of
``"ababb"`` on the diagonal of N^2 is ``{"aa", "bb"}``.  Positions are 0-based.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Union

from .upsets import Colouring1, TupleSet, UPSet, WindowColouringK

Profile = tuple[frozenset[str], ...]


class AlphabetError(ValueError):
    pass


@dataclass(frozen=True)
class Alphabet:
    letters: tuple[str, ...]

    def __post_init__(self) -> None:
        letters = tuple(self.letters)
        object.__setattr__(self, "letters", letters)
        if not letters:
            raise AlphabetError("alphabet must be nonempty")
        if len(set(letters)) != len(letters):
            raise AlphabetError("alphabet has repeated letters")
        for a in letters:
            if len(a) != 1 or a.isspace() or a in "()|&!.,{}":
                raise AlphabetError(f"letter {a!r} must be a single non-reserved symbol")

    @classmethod
    def of(cls, letters: str) -> Alphabet:
        return cls(tuple(letters))

    @classmethod
    def parse(cls, line: str) -> Alphabet:
        """Read an ``alphabet ab`` declaration."""
        parts = line.split()
        if len(parts) != 2 or parts[0] != "alphabet":
            raise AlphabetError(f"expected 'alphabet <letters>', got {line.strip()!r}")
        return cls.of(parts[1])

    def __iter__(self) -> Iterator[str]:
        return iter(self.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __contains__(self, a: object) -> bool:
        return a in self.letters

    def __str__(self) -> str:
        return "".join(self.letters)

    def check(self, word: str) -> str:
        for i, a in enumerate(word):
            if a not in self.letters:
                raise AlphabetError(f"letter {a!r} at position {i} is not in alphabet {self}")
        return word

    def words(self, length: int) -> Iterator[str]:
        """All words of the given length in lexicographic order."""
        for t in itertools.product(self.letters, repeat=length):
            yield "".join(t)

    def words_upto(self, max_len: int) -> Iterator[str]:
        """Shortlex enumeration of all words of length <= max_len."""
        for n in range(max_len + 1):
            yield from self.words(n)

    def tuples(self, k: int) -> list[str]:
        return ["".join(t) for t in itertools.product(self.letters, repeat=k)]

    def subsets(self) -> list[frozenset[str]]:
        """P(A), ordered by size then alphabetically."""
        out = []
        for r in range(len(self.letters) + 1):
            out.extend(frozenset(c) for c in itertools.combinations(self.letters, r))
        return out


Cell = Union[UPSet, TupleSet]


def content(w: str, letters: str, alphabet: Alphabet | None = None) -> frozenset[tuple[int, ...]]:
    """Tuples of positions of ``w`` carrying ``letters`` coordinatewise."""
    if alphabet is not None:
        alphabet.check(letters)
    k = len(letters)
    if k < 1:
        raise ValueError("arity must be >= 1")
    per = [[i for i, c in enumerate(w) if c == a] for a in letters]
    return frozenset(itertools.product(*per))


def positions(w: str, a: str) -> frozenset[int]:
    """The 1-ary content c_a(w) as plain integers."""
    return frozenset(i for i, c in enumerate(w) if c == a)


def content_on(w: str, cell: Cell, k: int = 1) -> frozenset[str]:
    """Letter tuples occurring in ``w`` at position tuples inside ``cell``."""
    n = len(w)
    if k == 1 and isinstance(cell, UPSet):
        return frozenset(w[i] for i in range(n) if i in cell)
    out = set()
    for point in itertools.product(range(n), repeat=k):
        if cell.contains(point, n) if isinstance(cell, TupleSet) else point[0] in cell:
            out.add("".join(w[i] for i in point))
    return frozenset(out)


def profile(w: str, q: Colouring1 | WindowColouringK) -> Profile:
    """Componentwise content of ``w`` on the cells of ``q``."""
    if isinstance(q, Colouring1):
        return _profile1(w, q)
    if len(w) > q.size:
        raise ValueError(f"window {q.size} is smaller than the word length {len(w)}")
    n = len(w)
    parts: list[set[str]] = [set() for _ in q.names]
    for point in itertools.product(range(n), repeat=q.k):
        parts[q.cell_of(point)].add("".join(w[i] for i in point))
    return tuple(frozenset(p) for p in parts)


def _profile1(w: str, q: Colouring1) -> Profile:
    parts: list[set[str]] = [set() for _ in q.cells]
    for c, a in zip(_colour_prefix(q, len(w)), w):
        parts[c].add(a)
    return tuple(frozenset(p) for p in parts)


@lru_cache(maxsize=4096)
def _colour_prefix(q: Colouring1, n: int) -> tuple[int, ...]:
    return q.colours(n)


# ---------------------------------------------------------------------------
# Which profiles are realised by words, and by which lengths


def feasible_lengths(q: Colouring1, prof: Profile) -> tuple[int, float, int | None, int | None]:
    """The interval of word lengths N admitting a word with profile ``prof``.

    A length works iff every cell with empty content misses [0, N) and every
    other cell has at least |B_i| positions below N.  The first condition is
    downward closed and the second upward closed, so the feasible lengths form
    an interval ``[lo, hi]``.  Returns ``(lo, hi, lo_cell, hi_cell)``, the cells
    being the ones that pin each end (``None`` when unconstrained).  ``hi``
    is ``inf`` when unbounded; ``lo`` is ``inf`` when some cell has fewer
    positions than required letters, and then no length works.
    """
    if len(prof) != len(q):
        raise ValueError(f"profile has {len(prof)} components, colouring has {len(q)} cells")
    lo, hi = 0, float("inf")
    lo_cell = hi_cell = None
    for i, (cell, letters) in enumerate(zip(q.cells, prof)):
        if letters:
            last = cell.nth(len(letters) - 1)
            need = float("inf") if last is None else last + 1
            if need > lo:
                lo, lo_cell = need, i
        else:
            first = cell.min()
            if first is not None and first < hi:
                hi, hi_cell = first, i
    return lo, hi, lo_cell, hi_cell


def achievable(q: Colouring1, prof: Profile) -> bool:
    lo, hi, _, _ = feasible_lengths(q, prof)
    return lo <= hi and lo != float("inf")


def realize(q: Colouring1, prof: Profile, length: int | None = None) -> str | None:
    """A word with the given profile (shortest by default), or None."""
    if not achievable(q, prof):
        return None
    lo, hi, _, _ = feasible_lengths(q, prof)
    n = int(lo) if length is None else length
    if not lo <= n <= hi:
        return None
    letters = [sorted(b) for b in prof]
    used = [0] * len(q)
    out = []
    for pos in range(n):
        c = q.colour(pos)
        pool = letters[c]
        out.append(pool[min(used[c], len(pool) - 1)])
        used[c] += 1
    return "".join(out)


def achievable_profiles(q: Colouring1, alphabet: Alphabet, max_len: int | None = None) -> Iterator[Profile]:
    """Every profile some word realises, optionally only by words of length <= max_len.

    Backtracks cell by cell, pruning as soon as the running length interval
    becomes empty.
    """
    subsets = alphabet.subsets()
    cells = q.cells
    cap = float("inf") if max_len is None else max_len

    def rec(i: int, lo: float, hi: float, acc: list[frozenset[str]]):
        if i == len(cells):
            yield tuple(acc)
            return
        cell = cells[i]
        for b in subsets:
            if b:
                last = cell.nth(len(b) - 1)
                if last is None:
                    continue
                nlo, nhi = max(lo, last + 1), hi
            else:
                first = cell.min()
                nlo, nhi = lo, min(hi, first if first is not None else float("inf"))
            if nlo <= nhi and nlo <= cap:
                acc.append(b)
                yield from rec(i + 1, nlo, nhi, acc)
                acc.pop()

    yield from rec(0, 0, float("inf"), [])


def all_profiles(ncells: int, alphabet: Alphabet) -> Iterator[Profile]:
    """The whole of P(A)^ncells."""
    return itertools.product(alphabet.subsets(), repeat=ncells)


def format_profile(prof: Profile) -> str:
    return "|".join("{" + "".join(sorted(b)) + "}" for b in prof)


def parse_profile(text: str, alphabet: Alphabet | None = None) -> Profile:
    parts = []
    for chunk in text.split("|"):
        chunk = chunk.strip()
        if not (chunk.startswith("{") and chunk.endswith("}")):
            raise ValueError(f"profile component {chunk!r} must look like {{ab}}")
        letters = chunk[1:-1].replace(",", "").replace(" ", "")
        if alphabet is not None:
            alphabet.check(letters)
        parts.append(frozenset(letters))
    return tuple(parts)
