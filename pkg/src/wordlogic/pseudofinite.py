"""Generalized words over N given by finite unions of two kinds of closed sets.

``hat(Q)`` stands for the clopen set of all ultrafilters containing Q and
``star(R)`` for the free ultrafilters containing R.  A generalized word
assigns one such closed set to every letter; a finite word w is the special
case letter -> hat(positions of that letter in w).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

from .upsets import EMPTY, Colouring1, LiteralError, UPSet, intersection_infinite, refine
from .words import Alphabet, Profile, feasible_lengths, format_profile, realize


@dataclass(frozen=True)
class Hat:
    q: UPSet

    def __str__(self):
        return f"hat({self.q})"


@dataclass(frozen=True)
class Star:
    r: UPSet

    def __str__(self):
        return f"star({self.r})"


def _modulo_finite(r: UPSet) -> UPSet:
    """A canonical representative of r up to finite sets: the periodic set it ends in."""
    p, t = len(r.cycle), r.threshold
    return UPSet("", "".join(r.cycle[(i - t) % p] for i in range(p)))


@dataclass(frozen=True)
class ClosedExpr:
    """``hat(clopen) ∪ star(remainder)`` in normal form.

    Hats merge into one hat, stars into one star; the star part is reduced
    modulo finite sets and modulo the hat part, and dropped when finite.
    """

    clopen: UPSet = EMPTY
    remainder: UPSet = EMPTY

    def __post_init__(self) -> None:
        rem = _modulo_finite(self.remainder - self.clopen)
        object.__setattr__(self, "remainder", rem)

    @classmethod
    def of(cls, atoms: Iterable[Hat | Star]) -> ClosedExpr:
        clopen, rem = EMPTY, EMPTY
        for atom in atoms:
            if isinstance(atom, Hat):
                clopen = clopen | atom.q
            else:
                rem = rem | atom.r
        return cls(clopen, rem)

    @property
    def atoms(self) -> tuple[Hat | Star, ...]:
        out: list[Hat | Star] = []
        if not self.clopen.is_empty:
            out.append(Hat(self.clopen))
        if not self.remainder.is_empty:
            out.append(Star(self.remainder))
        return tuple(out)

    @property
    def is_empty(self) -> bool:
        return not self.atoms

    def __or__(self, other: ClosedExpr) -> ClosedExpr:
        return ClosedExpr(self.clopen | other.clopen, self.remainder | other.remainder)

    def __str__(self) -> str:
        return " + ".join(str(a) for a in self.atoms) or "0"

    @classmethod
    def parse(cls, text: str) -> ClosedExpr:
        text = text.strip()
        if text == "0":
            return cls()
        atoms: list[Hat | Star] = []
        for chunk in text.split("+"):
            m = re.fullmatch(r"\s*(hat|star)\((up:[01]*/[01]+)\)\s*", chunk)
            if not m:
                raise LiteralError(f"bad closed-set atom {chunk.strip()!r}; expected hat(up:..) or star(up:..)")
            q = UPSet.parse(m.group(2))
            atoms.append(Hat(q) if m.group(1) == "hat" else Star(q))
        return cls.of(atoms)


def content(e: ClosedExpr) -> UPSet:
    """The principal points of the closed set; remainder atoms contribute nothing."""
    return e.clopen


def meets_clopen(e: ClosedExpr, q: UPSet) -> bool:
    return not (e.clopen & q).is_empty or intersection_infinite(e.remainder, q)


@dataclass(frozen=True)
class GeneralizedWord1:
    letters: Mapping[str, ClosedExpr]

    def __post_init__(self) -> None:
        object.__setattr__(self, "letters", dict(self.letters))

    def __getitem__(self, a: str) -> ClosedExpr:
        return self.letters.get(a, ClosedExpr())

    def __hash__(self):
        return hash(tuple(sorted(self.letters.items())))

    @classmethod
    def of_word(cls, w: str, alphabet: Alphabet) -> GeneralizedWord1:
        return cls({a: ClosedExpr(UPSet.finite(i for i, c in enumerate(w) if c == a)) for a in alphabet})

    def dumps(self) -> str:
        return "".join(f"{a} = {e}\n" for a, e in self.letters.items())

    @classmethod
    def loads(cls, text: str, alphabet: Alphabet | None = None, source: str = "<gword>") -> GeneralizedWord1:
        letters: dict[str, ClosedExpr] = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line or line.startswith("alphabet"):
                continue
            try:
                a, eq, rhs = line.partition("=")
                a = a.strip()
                if not eq or len(a) != 1:
                    raise LiteralError("expected '<letter> = <closed set>'")
                if alphabet is not None and a not in alphabet:
                    raise LiteralError(f"letter {a!r} not in alphabet {alphabet}")
                if a in letters:
                    raise LiteralError(f"letter {a} defined twice")
                letters[a] = ClosedExpr.parse(rhs)
            except LiteralError as exc:
                raise LiteralError(f"{source}:{lineno}: {exc}") from None
        if alphabet is not None:
            for a in alphabet:
                letters.setdefault(a, ClosedExpr())
        return cls(letters)

    @classmethod
    def load(cls, path: str | Path, alphabet: Alphabet | None = None) -> GeneralizedWord1:
        path = Path(path)
        return cls.loads(path.read_text(), alphabet, str(path))


def gw_profile(g: GeneralizedWord1, q: Colouring1) -> Profile:
    return tuple(frozenset(a for a, e in g.letters.items() if meets_clopen(e, cell)) for cell in q.cells)


def content_criterion(g: GeneralizedWord1) -> bool:
    """Contents pairwise disjoint and together a downset of N."""
    seen = EMPTY
    for e in g.letters.values():
        c = content(e)
        if not (seen & c).is_empty:
            return False
        seen = seen | c
    return seen.is_downset()


class Infeasible(Exception):
    """No finite word has the required profile; ``cells`` pin the contradiction."""

    def __init__(self, colouring: Colouring1, prof: Profile, cells: tuple[int, ...], message: str):
        self.colouring = colouring
        self.profile = prof
        self.cells = cells
        super().__init__(message)


def word_witness(g: GeneralizedWord1, q: Colouring1) -> str:
    """A finite word with the same profile on ``q`` as ``g``; raises Infeasible."""
    prof = gw_profile(g, q)
    lo, hi, lo_cell, hi_cell = feasible_lengths(q, prof)
    if lo > hi or lo == float("inf"):
        if lo == float("inf"):
            msg = f"cell {lo_cell} ({q.cells[lo_cell]}) has fewer positions than letters {format_profile((prof[lo_cell],))}"
            raise Infeasible(q, prof, (lo_cell,), msg)
        msg = (
            f"cell {hi_cell} ({q.cells[hi_cell]}) needs empty content, forcing length <= {hi}; "
            f"cell {lo_cell} ({q.cells[lo_cell]}) needs {format_profile((prof[lo_cell],))}, forcing length >= {lo}"
        )
        raise Infeasible(q, prof, (hi_cell, lo_cell), msg)
    w = realize(q, prof)
    assert w is not None
    return w


def candidate_colourings(g: GeneralizedWord1, modulus_bound: int, threshold_bound: int) -> list[Colouring1]:
    """Singleton-prefix threshold/residue colourings refined by the sets appearing in ``g``."""
    atoms = Colouring1.trivial()
    for e in g.letters.values():
        for s in (e.clopen, e.remainder):
            atoms = refine(atoms, Colouring1.from_set(s))[0]
    out: list[Colouring1] = []
    for t in range(threshold_bound + 1):
        for m in range(1, modulus_bound + 1):
            q = refine(Colouring1.threshold_residue(t, m), atoms)[0]
            if q not in out:
                out.append(q)
    return out


@dataclass(frozen=True)
class PseudofiniteReport:
    passed: bool
    colouring: Colouring1 | None = None
    reason: str = ""
    checked: int = 0

    def __bool__(self) -> bool:
        return self.passed

    def __str__(self) -> str:
        if self.passed:
            return f"PASS ({self.checked} colourings)"
        return f"FAIL colouring {self.colouring}: {self.reason}"


def bounded_pseudofinite_check(g: GeneralizedWord1, modulus_bound: int, threshold_bound: int) -> PseudofiniteReport:
    """Look for a candidate colouring on which no finite word matches ``g``.

    Passing only means no counterexample exists among the candidates.
    """
    if modulus_bound < 1 or threshold_bound < 0:
        raise ValueError("need modulus_bound >= 1 and threshold_bound >= 0")
    cands = candidate_colourings(g, modulus_bound, threshold_bound)
    for q in cands:
        try:
            word_witness(g, q)
        except Infeasible as exc:
            return PseudofiniteReport(False, q, str(exc), len(cands))
    return PseudofiniteReport(True, checked=len(cands))
