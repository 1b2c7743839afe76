"""Brute-force oracles and random generators shared by the test modules.

Nothing here goes through the library's own set algebra: sets are plain
Python predicates on integers, and words are enumerated directly.
"""

from __future__ import annotations

import itertools
import math
import random

from wordlogic.formulas import PredRegistry
from wordlogic.recognisers import Recogniser1
from wordlogic.upsets import Colouring1, Comparator, UPSet
from wordlogic.words import Alphabet, all_profiles


def all_words(letters: str, max_len: int):
    for n in range(max_len + 1):
        for t in itertools.product(letters, repeat=n):
            yield "".join(t)


def bits_member(prefix: str, cycle: str, n: int) -> bool:
    """Membership read straight off the raw (uncanonicalised) bits."""
    if n < len(prefix):
        return prefix[n] == "1"
    return cycle[(n - len(prefix)) % len(cycle)] == "1"


def random_bits(rng: random.Random, max_prefix: int = 5, max_cycle: int = 6) -> tuple[str, str]:
    prefix = "".join(rng.choice("01") for _ in range(rng.randint(0, max_prefix)))
    cycle = "".join(rng.choice("01") for _ in range(rng.randint(1, max_cycle)))
    return prefix, cycle


def horizon(*pairs: tuple[str, str]) -> int:
    """t_max + 3 * lcm of the raw periods."""
    t = max(len(p) for p, _ in pairs)
    m = math.lcm(*(len(c) for _, c in pairs))
    return t + 3 * m


def random_colouring(rng: random.Random, ell: int, max_threshold: int = 4, max_period: int = 6) -> Colouring1:
    """ell cells; every one of the t + p slots gets a colour and each colour is used."""
    while True:
        t, p = rng.randint(0, max_threshold), rng.randint(1, max_period)
        slots = [rng.randrange(ell) for _ in range(t + p)]
        if len(set(slots)) == ell:
            break
    cells = tuple(
        UPSet.from_predicate(lambda n, c=c: slots[n if n < t else t + (n - t) % p] == c, t, p)
        for c in range(ell)
    )
    return Colouring1(cells)


def random_recogniser(rng: random.Random) -> Recogniser1:
    """ell <= 3, period <= 6, threshold <= 4, |A| <= 3; each profile accepted with probability 1/2."""
    alphabet = Alphabet.of("abc"[: rng.randint(1, 3)])
    ell = rng.randint(1, 3)
    q = random_colouring(rng, ell)
    accepted = frozenset(p for p in all_profiles(ell, alphabet) if rng.random() < 0.5)
    return Recogniser1(alphabet, q, accepted)


def random_recognisers(seed: int, count: int) -> list[Recogniser1]:
    rng = random.Random(seed)
    return [random_recogniser(rng) for _ in range(count)]


def brute_profile(w: str, cells: list) -> tuple[frozenset[str], ...]:
    """Profile with cells given as Python predicates on positions."""
    return tuple(frozenset(a for i, a in enumerate(w) if pred(i)) for pred in cells)


# -- formula corpora -------------------------------------------------------------

AB = Alphabet.of("ab")

REGISTRY = (
    PredRegistry.standard(AB)
    .with_pred("M3", 1, UPSet("", "100"))
    .with_pred("GE2", 1, UPSet("00", "1"))
    .with_pred("LOW", 1, UPSet("11", "0"))
    .with_pred("R41", 1, UPSet("", "0100"))
    .with_pred("GT", 2, Comparator("gt"))
)

# (arity, quantifier-free formula)
QF_CORPUS = [
    (1, "a(x1)"),
    (1, "a(x1) & !a(x1)"),
    (1, "a(x1) & EV(x1)"),
    (1, "b(x1) | M3(x1)"),
    (1, "!(a(x1) | LOW(x1))"),
    (1, "(a(x1) & GE2(x1)) | (b(x1) & OD(x1))"),
    (1, "!b(x1) & !R41(x1)"),
    (1, "EV(x1) & OD(x1)"),
    (1, "a(x1) | !a(x1)"),
    (1, "M3(x1) & !(b(x1) & EV(x1))"),
    (1, "¬a(x1) ∨ (LOW(x1) ∧ OD(x1))"),
    (2, "LE(x1, x2)"),
    (2, "a(x1) & a(x2) & DIAG(x1, x2)"),
    (2, "a(x1) & b(x2) & SUCC(x1, x2)"),
    (2, "LT(x1, x2) | b(x1)"),
    (2, "!LE(x1, x2) & a(x2)"),
    (2, "GT(x1, x2) & EV(x1) & OD(x2)"),
    (2, "(a(x1) | a(x2)) & !DIAG(x1, x2)"),
    (2, "SUCC(x1, x2) | SUCC(x2, x1)"),
    (2, "b(x1) & b(x2) & LT(x2, x1) & M3(x2)"),
    (2, "DIAG(x1, x2) & !a(x1) & a(x2)"),
    (2, "LE(x1, x2) & LE(x2, x1) & GE2(x1)"),
    (2, "!(a(x1) & b(x2)) | R41(x1)"),
    (2, "EV(x2) & a(x1)"),
]


def _has(w, pred):
    return any(pred(i, c) for i, c in enumerate(w))


# (sentence, independent Python reference for its language)
SENTENCE_CORPUS = [
    ("E x. a(x)", lambda w: "a" in w),
    ("E x. a(x) & EV(x)", lambda w: _has(w, lambda i, c: c == "a" and i % 2 == 0)),
    ("!(E x. b(x))", lambda w: "b" not in w),
    ("E x. a(x) | b(x)", lambda w: len(w) > 0),
    (
        "(E x. a(x) & OD(x)) & (E y. b(y) & EV(y))",
        lambda w: _has(w, lambda i, c: c == "a" and i % 2) and _has(w, lambda i, c: c == "b" and i % 2 == 0),
    ),
    ("E x. b(x) & M3(x)", lambda w: _has(w, lambda i, c: c == "b" and i % 3 == 0)),
    (
        "!(E x. a(x) & LOW(x)) | (E x. b(x) & GE2(x))",
        lambda w: "a" not in w[:2] or "b" in w[2:],
    ),
    ("E x. a(x) & R41(x)", lambda w: _has(w, lambda i, c: c == "a" and i % 4 == 1)),
    ("(E x. a(x)) & !(E x. b(x) & OD(x))", lambda w: "a" in w and "b" not in w[1::2]),
    ("E x. EV(x) & OD(x)", lambda w: False),
    ("E x. !a(x) & GE2(x)", lambda w: "b" in w[2:]),
    (
        "(E x. a(x) & M3(x)) | (E x. b(x) & R41(x))",
        lambda w: "a" in w[::3] or "b" in w[1::4],
    ),
    ("!(E x. a(x)) & !(E x. b(x))", lambda w: w == ""),
    ("E x. (a(x) | LOW(x)) & !EV(x)", lambda w: len(w) > 1 or "a" in w[1::2]),
    ("E x. GE2(x)", lambda w: len(w) >= 3),
    ("!(E x. OD(x))", lambda w: len(w) <= 1),
    ("E x. a(x) & !(M3(x) | OD(x))", lambda w: _has(w, lambda i, c: c == "a" and i % 3 and i % 2 == 0)),
    ("(E x. b(x) & LOW(x)) & (E x. a(x) & LOW(x))", lambda w: set(w[:2]) == {"a", "b"}),
    ("E x. (a(x) & EV(x)) | (b(x) & OD(x))", lambda w: "a" in w[::2] or "b" in w[1::2]),
    ("!(E x. !a(x))", lambda w: "b" not in w),
    ("∃x. b(x) ∧ ¬EV(x)", lambda w: "b" in w[1::2]),
]

# blocks binding two variables: evaluable, not compilable
PAIR_SENTENCES = [
    ("E x1 x2. a(x1) & a(x2) & DIAG(x1, x2)", lambda w: "a" in w),
    ("E x1 x2. a(x1) & a(x2) & SUCC(x1, x2)", lambda w: "aa" in w),
    ("E x y. a(x) & b(y) & EV(x) & EV(y)", lambda w: {"a", "b"} <= set(w[::2])),
    ("E x y. b(x) & a(y) & LT(x, y)", lambda w: "b" in w and "a" in w[w.index("b"):]),
]


# criterion number -> list of (part, ok, detail), filled by the acceptance tests
ACCEPTANCE: dict[int, list[tuple[str, bool, str]]] = {}
