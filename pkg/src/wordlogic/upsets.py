"""Ultimately periodic subsets of the naturals, colourings built from them,
and finite-window colourings of N^k.

A :class:`UPSet` is stored as two bit strings, a prefix and a cycle, so that
``n`` is a member iff the bit at ``n`` (reading the prefix first, then the
cycle repeated forever) is ``'1'``.  Every constructor canonicalises, which
makes ``==`` coincide with set equality.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Iterator


class LiteralError(ValueError):
    """Malformed ``up:`` or ``col[...]`` literal."""


def _primitive(cycle: str) -> str:
    p = len(cycle)
    for d in range(1, p + 1):
        if p % d == 0 and cycle[:d] * (p // d) == cycle:
            return cycle[:d]
    return cycle  # unreachable


@dataclass(frozen=True)
class UPSet:
    prefix: str = ""
    cycle: str = "0"

    def __post_init__(self) -> None:
        if not self.cycle:
            raise ValueError("cycle must have length >= 1")
        if set(self.prefix + self.cycle) - {"0", "1"}:
            raise ValueError("prefix and cycle must be bit strings")
        prefix, cycle = self.prefix, _primitive(self.cycle)
        # rotating the last prefix bit into the cycle keeps the set unchanged
        while prefix and prefix[-1] == cycle[-1]:
            prefix = prefix[:-1]
            cycle = cycle[-1] + cycle[:-1]
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "cycle", cycle)

    # -- constructors -----------------------------------------------------

    @classmethod
    def empty(cls) -> UPSet:
        return cls("", "0")

    @classmethod
    def naturals(cls) -> UPSet:
        return cls("", "1")

    @classmethod
    def finite(cls, members: Iterable[int]) -> UPSet:
        members = set(members)
        if not members:
            return cls.empty()
        if min(members) < 0:
            raise ValueError("members must be natural numbers")
        top = max(members)
        return cls("".join("1" if n in members else "0" for n in range(top + 1)), "0")

    @classmethod
    def initial_segment(cls, n: int) -> UPSet:
        """The downset {0, ..., n-1}."""
        return cls("1" * n, "0")

    @classmethod
    def residue(cls, r: int, m: int, start: int = 0) -> UPSet:
        """{n >= start : n = r mod m}."""
        if m < 1:
            raise ValueError("modulus must be >= 1")
        cycle = "".join("1" if (start + i) % m == r % m else "0" for i in range(m))
        return cls("0" * start, cycle)

    @classmethod
    def from_predicate(cls, pred: Callable[[int], bool], threshold: int, period: int) -> UPSet:
        """Sample ``pred`` on ``[0, threshold + period)``; the caller vouches for periodicity."""
        bits = "".join("1" if pred(n) else "0" for n in range(threshold + period))
        return cls(bits[:threshold], bits[threshold:])

    @classmethod
    def parse(cls, text: str) -> UPSet:
        m = re.fullmatch(r"\s*up:([01]*)/([01]+)\s*", text)
        if not m:
            raise LiteralError(f"bad set literal {text!r}; expected up:<prefix-bits>/<cycle-bits>")
        return cls(m.group(1), m.group(2))

    # -- basic queries ----------------------------------------------------

    @property
    def threshold(self) -> int:
        return len(self.prefix)

    @property
    def period(self) -> int:
        return len(self.cycle)

    def __contains__(self, n: object) -> bool:
        if not isinstance(n, int) or n < 0:
            return False
        t = len(self.prefix)
        if n < t:
            return self.prefix[n] == "1"
        return self.cycle[(n - t) % len(self.cycle)] == "1"

    def member(self, n: int) -> bool:
        return n in self

    @property
    def is_empty(self) -> bool:
        return self.cycle == "0" and self.prefix == ""

    @property
    def is_finite(self) -> bool:
        return "1" not in self.cycle

    @property
    def is_full(self) -> bool:
        return self.cycle == "1" and self.prefix == ""

    def is_downset(self) -> bool:
        """True for the empty set, an initial segment, or all of N."""
        if self.cycle == "0":
            return "0" not in self.prefix
        return self.cycle == "1" and self.prefix == ""

    def members_below(self, n: int) -> list[int]:
        return [i for i in range(n) if i in self]

    def count_below(self, n: int) -> int:
        """|S ∩ [0, n)|."""
        t = len(self.prefix)
        if n <= t:
            return self.prefix[:n].count("1")
        full, rest = divmod(n - t, len(self.cycle))
        return self.prefix.count("1") + full * self.cycle.count("1") + self.cycle[:rest].count("1")

    def nth(self, k: int) -> int | None:
        """The k-th smallest member (0-based), or None if there are fewer."""
        ones = self.prefix.count("1")
        if k < ones:
            return [i for i, bit in enumerate(self.prefix) if bit == "1"][k]
        per = self.cycle.count("1")
        if per == 0:
            return None
        k -= ones
        laps, r = divmod(k, per)
        offsets = [i for i, bit in enumerate(self.cycle) if bit == "1"]
        return len(self.prefix) + laps * len(self.cycle) + offsets[r]

    def min(self) -> int | None:
        return self.nth(0)

    def __iter__(self) -> Iterator[int]:
        """Members in increasing order; infinite unless the set is finite."""
        k = 0
        while (n := self.nth(k)) is not None:
            yield n
            k += 1

    # -- Boolean algebra --------------------------------------------------

    def combine(self, other: UPSet, op: Callable[[bool, bool], bool]) -> UPSet:
        t = max(self.threshold, other.threshold)
        p = math.lcm(self.period, other.period)
        bits = "".join("1" if op(n in self, n in other) else "0" for n in range(t + p))
        return UPSet(bits[:t], bits[t:])

    def __or__(self, other: UPSet) -> UPSet:
        return self.combine(other, lambda x, y: x or y)

    def __and__(self, other: UPSet) -> UPSet:
        return self.combine(other, lambda x, y: x and y)

    def __sub__(self, other: UPSet) -> UPSet:
        return self.combine(other, lambda x, y: x and not y)

    def __xor__(self, other: UPSet) -> UPSet:
        return self.combine(other, lambda x, y: x != y)

    def __invert__(self) -> UPSet:
        flip = str.maketrans("01", "10")
        return UPSet(self.prefix.translate(flip), self.cycle.translate(flip))

    union = __or__
    intersection = __and__
    difference = __sub__

    def complement(self) -> UPSet:
        return ~self

    def issubset(self, other: UPSet) -> bool:
        return (self - other).is_empty

    def isdisjoint(self, other: UPSet) -> bool:
        return (self & other).is_empty

    def __str__(self) -> str:
        return f"up:{self.prefix}/{self.cycle}"


# Remainder predicates: facts about sets modulo finite sets.

def almost_included(s1: UPSet, s2: UPSet) -> bool:
    """s1 \\ s2 is finite."""
    return (s1 - s2).is_finite


def almost_equal(s1: UPSet, s2: UPSet) -> bool:
    """The symmetric difference of s1 and s2 is finite."""
    return (s1 ^ s2).is_finite


def intersection_infinite(s1: UPSet, s2: UPSet) -> bool:
    return not (s1 & s2).is_finite


EMPTY = UPSet.empty()
NATURALS = UPSet.naturals()
EVENS = UPSet("", "10")
ODDS = UPSet("", "01")


# ---------------------------------------------------------------------------
# Colourings of N


class ColouringError(ValueError):
    pass


@dataclass(frozen=True)
class Colouring1:
    """A finite partition of N into ordered, nonempty cells."""

    cells: tuple[UPSet, ...]

    def __post_init__(self) -> None:
        cells = tuple(self.cells)
        object.__setattr__(self, "cells", cells)
        if not cells:
            raise ColouringError("a colouring needs at least one cell")
        seen = EMPTY
        for i, cell in enumerate(cells):
            if cell.is_empty:
                raise ColouringError(f"cell {i} is empty")
            overlap = seen & cell
            if not overlap.is_empty:
                raise ColouringError(f"cell {i} overlaps an earlier cell at {overlap.min()}")
            seen = seen | cell
        if not seen.is_full:
            raise ColouringError(f"cells do not cover N; {(~seen).min()} is uncovered")

    @classmethod
    def trivial(cls) -> Colouring1:
        return cls((NATURALS,))

    @classmethod
    def from_set(cls, q: UPSet) -> Colouring1:
        """(Q, Q^c), collapsing to one cell when Q is empty or full."""
        if q.is_empty or q.is_full:
            return cls.trivial()
        return cls((q, ~q))

    @classmethod
    def threshold_residue(cls, threshold: int, modulus: int, singletons: bool = True) -> Colouring1:
        """Positions below the threshold, then residue classes mod m from the threshold on.

        With ``singletons`` each position below the threshold is its own
        cell; otherwise they form one initial-segment cell.
        """
        if singletons:
            cells = [UPSet.finite([n]) for n in range(threshold)]
        else:
            cells = [UPSet.initial_segment(threshold)] if threshold else []
        for r in range(modulus):
            cells.append(UPSet.residue((threshold + r) % modulus, modulus, start=threshold))
        return cls(tuple(cells))

    @classmethod
    def parse(cls, text: str) -> Colouring1:
        m = re.fullmatch(r"\s*col\[(.*)\]\s*", text)
        if not m:
            raise LiteralError(f"bad colouring literal {text!r}; expected col[up:..., ...]")
        parts = [p for p in m.group(1).split(",")]
        if not m.group(1).strip():
            raise LiteralError("colouring literal has no cells")
        try:
            return cls(tuple(UPSet.parse(p) for p in parts))
        except ColouringError as exc:
            raise LiteralError(f"invalid colouring {text.strip()!r}: {exc}") from None

    def __len__(self) -> int:
        return len(self.cells)

    @cached_property
    def threshold(self) -> int:
        return max(c.threshold for c in self.cells)

    @cached_property
    def period(self) -> int:
        return math.lcm(*(c.period for c in self.cells))

    @cached_property
    def _table(self) -> tuple[int, ...]:
        return tuple(self._lookup(n) for n in range(self.threshold + self.period))

    def _lookup(self, n: int) -> int:
        for i, cell in enumerate(self.cells):
            if n in cell:
                return i
        raise AssertionError("colouring does not cover N")

    def colour(self, n: int) -> int:
        """Index of the cell containing n."""
        t = self.threshold
        if n < t:
            return self._table[n]
        return self._table[t + (n - t) % self.period]

    def colours(self, length: int) -> tuple[int, ...]:
        return tuple(self.colour(n) for n in range(length))

    def __str__(self) -> str:
        return "col[" + ", ".join(str(c) for c in self.cells) + "]"


def refine(q1: Colouring1, q2: Colouring1) -> tuple[Colouring1, tuple[int, ...], tuple[int, ...]]:
    """Common refinement of two colourings.

    Returns the colouring of nonempty intersections ``q1[i] & q2[j]`` in
    (i, j) order, plus the maps sending each refined cell to its cell in
    ``q1`` and in ``q2``.
    """
    if q1 == q2:
        ident = tuple(range(len(q1)))
        return q1, ident, ident
    cells, map1, map2 = [], [], []
    for i, c1 in enumerate(q1.cells):
        for j, c2 in enumerate(q2.cells):
            c = c1 & c2
            if not c.is_empty:
                cells.append(c)
                map1.append(i)
                map2.append(j)
    return Colouring1(tuple(cells)), tuple(map1), tuple(map2)


def refine_all(colourings: Iterable[Colouring1]) -> Colouring1:
    result = Colouring1.trivial()
    for q in colourings:
        result = refine(result, q)[0]
    return result


# ---------------------------------------------------------------------------
# Subsets of N^k, evaluated pointwise


class NonUniformError(ValueError):
    """A set that depends on the word length cannot be used here."""


class TupleSet:
    """A decidable subset of N^k.

    ``contains`` receives a position tuple and the length of the word being
    inspected; only non-uniform (extern) sets look at the length.
    """

    arity: int

    def contains(self, point: tuple[int, ...], length: int | None = None) -> bool:
        raise NotImplementedError

    def on_diagonal(self) -> UPSet:
        """{n : (n, ..., n) in self} as an ultimately periodic set."""
        raise NotImplementedError

    @property
    def uniform(self) -> bool:
        return True

    def __or__(self, other: TupleSet) -> TupleSet:
        return Union((self, other))

    def __and__(self, other: TupleSet) -> TupleSet:
        return Intersection((self, other))

    def __invert__(self) -> TupleSet:
        return Complement(self)


@dataclass(frozen=True)
class Everything(TupleSet):
    arity: int = 1

    def contains(self, point, length=None):
        return True

    def on_diagonal(self):
        return NATURALS

    def __str__(self):
        return "all"


@dataclass(frozen=True)
class Nothing(TupleSet):
    arity: int = 1

    def contains(self, point, length=None):
        return False

    def on_diagonal(self):
        return EMPTY

    def __str__(self):
        return "none"


@dataclass(frozen=True)
class Product(TupleSet):
    factors: tuple[UPSet, ...]

    @property
    def arity(self) -> int:
        return len(self.factors)

    def contains(self, point, length=None):
        return all(i in f for i, f in zip(point, self.factors))

    def on_diagonal(self):
        out = NATURALS
        for f in self.factors:
            out = out & f
        return out

    def __str__(self):
        if len(self.factors) == 1:
            return str(self.factors[0])
        return "prod(" + ", ".join(str(f) for f in self.factors) + ")"


_COMPARATORS: dict[str, Callable[[int, int], bool]] = {
    "diag": lambda i, j: i == j,
    "lt": lambda i, j: i < j,
    "le": lambda i, j: i <= j,
    "gt": lambda i, j: i > j,
    "succ": lambda i, j: j == i + 1,
}


@dataclass(frozen=True)
class Comparator(TupleSet):
    """Builtin binary relation: diag, lt, le or succ."""

    name: str
    arity: int = 2

    def __post_init__(self):
        if self.name not in _COMPARATORS:
            raise ValueError(f"unknown comparator {self.name!r}")

    def contains(self, point, length=None):
        return _COMPARATORS[self.name](point[0], point[1])

    def on_diagonal(self):
        return NATURALS if _COMPARATORS[self.name](0, 0) else EMPTY

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Explicit(TupleSet):
    points: frozenset[tuple[int, ...]]
    arity: int = 1

    def contains(self, point, length=None):
        return tuple(point) in self.points

    def on_diagonal(self):
        return UPSet.finite(p[0] for p in self.points if len(set(p)) == 1)

    def __str__(self):
        return "{" + ", ".join(str(p) for p in sorted(self.points)) + "}"


@dataclass(frozen=True)
class Union(TupleSet):
    parts: tuple[TupleSet, ...]

    @property
    def arity(self):
        return self.parts[0].arity

    @property
    def uniform(self):
        return all(p.uniform for p in self.parts)

    def contains(self, point, length=None):
        return any(p.contains(point, length) for p in self.parts)

    def on_diagonal(self):
        out = EMPTY
        for p in self.parts:
            out = out | p.on_diagonal()
        return out

    def __str__(self):
        return "(" + " | ".join(str(p) for p in self.parts) + ")"


@dataclass(frozen=True)
class Intersection(TupleSet):
    parts: tuple[TupleSet, ...]

    @property
    def arity(self):
        return self.parts[0].arity

    @property
    def uniform(self):
        return all(p.uniform for p in self.parts)

    def contains(self, point, length=None):
        return all(p.contains(point, length) for p in self.parts)

    def on_diagonal(self):
        out = NATURALS
        for p in self.parts:
            out = out & p.on_diagonal()
        return out

    def __str__(self):
        return "(" + " & ".join(str(p) for p in self.parts) + ")"


@dataclass(frozen=True)
class Complement(TupleSet):
    inner: TupleSet

    @property
    def arity(self):
        return self.inner.arity

    @property
    def uniform(self):
        return self.inner.uniform

    def contains(self, point, length=None):
        return not self.inner.contains(point, length)

    def on_diagonal(self):
        return ~self.inner.on_diagonal()

    def __str__(self):
        return f"!{self.inner}"


@dataclass(frozen=True)
class Pullback(TupleSet):
    """{x in N^k : (x[i] for i in indices) in inner} -- a predicate applied to chosen variables."""

    inner: TupleSet
    indices: tuple[int, ...]
    arity: int = 1

    @property
    def uniform(self):
        return self.inner.uniform

    def contains(self, point, length=None):
        return self.inner.contains(tuple(point[i] for i in self.indices), length)

    def on_diagonal(self):
        return self.inner.on_diagonal()

    def __str__(self):
        return f"{self.inner}@{','.join(str(i) for i in self.indices)}"


@dataclass(frozen=True)
class Extern(TupleSet):
    """Evaluation-only predicate; may depend on the word length."""

    name: str
    func: Callable[[tuple[int, ...], int], bool] = field(compare=False)
    arity: int = 1

    @property
    def uniform(self):
        return False

    def contains(self, point, length=None):
        if length is None:
            raise NonUniformError(f"{self.name} needs the word length")
        return bool(self.func(tuple(point), length))

    def on_diagonal(self):
        raise NonUniformError(f"predicate {self.name} is not uniform and cannot be normalised")

    def __str__(self):
        return f"extern:{self.name}"


def as_tupleset(spec: UPSet | TupleSet) -> TupleSet:
    return Product((spec,)) if isinstance(spec, UPSet) else spec


# ---------------------------------------------------------------------------
# Colourings of a finite window of N^k


@dataclass(frozen=True)
class WindowReport:
    ok: bool
    witness: tuple[int, ...] | None = None
    cells: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        if len(self.cells) > 1:
            return f"cells {' and '.join(self.cells)} overlap at {self.witness}"
        return f"{self.witness} is not covered"


@dataclass(frozen=True)
class WindowColouringK:
    """Named cells over {0, ..., size-1}^k; ``default`` (if named) takes the rest."""

    k: int
    size: int
    cells: tuple[tuple[str, TupleSet], ...]
    default: str | None = None

    @property
    def names(self) -> tuple[str, ...]:
        names = tuple(n for n, _ in self.cells)
        return names + ((self.default,) if self.default is not None else ())

    def points(self) -> Iterator[tuple[int, ...]]:
        return itertools.product(range(self.size), repeat=self.k)

    def cell_of(self, point: tuple[int, ...]) -> int:
        """Index into ``names`` of the (first) cell holding ``point``."""
        for i, (_, spec) in enumerate(self.cells):
            if spec.contains(point, self.size):
                return i
        if self.default is not None:
            return len(self.cells)
        raise ColouringError(f"{point} is not covered")


def validate_window(q: WindowColouringK) -> WindowReport:
    """Check that the cells partition the window, reporting the first bad tuple."""
    for point in q.points():
        hits = [name for name, spec in q.cells if spec.contains(point, q.size)]
        if len(hits) > 1:
            return WindowReport(False, point, tuple(hits))
        if not hits and q.default is None:
            return WindowReport(False, point)
    return WindowReport(True)


def diagonal_colouring(size: int) -> WindowColouringK:
    """(strictly below, on, strictly above) the diagonal of N^2."""
    return WindowColouringK(
        2,
        size,
        (("lt", Comparator("lt")), ("diag", Comparator("diag")), ("gt", Comparator("gt"))),
    )
