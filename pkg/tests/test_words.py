import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import all_words, brute_profile, random_colouring
from wordlogic.upsets import EVENS, ODDS, Colouring1, Comparator, UPSet, diagonal_colouring
from wordlogic.words import (
    Alphabet,
    AlphabetError,
    achievable,
    achievable_profiles,
    content,
    content_on,
    feasible_lengths,
    format_profile,
    parse_profile,
    positions,
    profile,
    realize,
)

AB = Alphabet.of("ab")
PARITY = Colouring1((EVENS, ODDS))
F = frozenset


def test_alphabet_checks():
    assert list(AB.words(2)) == ["aa", "ab", "ba", "bb"]
    assert AB.subsets() == [F(), F("a"), F("b"), F("ab")]
    assert Alphabet.parse("alphabet xyz") == Alphabet.of("xyz")
    for bad in ("", "aa", "a(", "a "):
        with pytest.raises(AlphabetError):
            Alphabet.of(bad)
    with pytest.raises(AlphabetError):
        AB.check("abc")


def test_content_examples():
    assert content("aba", "a") == {(0,), (2,)}
    assert positions("aba", "a") == {0, 2}
    diag = {(1, 1)}
    assert {p for p in content("bab", "aa") if p[0] == p[1]} == diag
    assert content("", "a") == frozenset()


def test_content_on_examples():
    assert content_on("ababb", Comparator("diag"), 2) == {"aa", "bb"}
    assert content_on("", EVENS) == frozenset()
    assert content_on("", Comparator("lt"), 2) == frozenset()
    assert content_on("ab", EVENS) == {"a"}


def test_profile_examples():
    a2 = F({"aa", "ab", "ba", "bb"})
    assert profile("ababb", diagonal_colouring(5)) == (a2, F({"aa", "bb"}), a2)
    assert profile("ab", PARITY) == (F("a"), F("b"))
    assert profile("", Colouring1.threshold_residue(2, 3)) == (F(),) * 5


def test_profile_window_too_small():
    with pytest.raises(ValueError):
        profile("abc", diagonal_colouring(2))


words = st.text(alphabet="ab", max_size=10)


@given(words, st.integers(0, 1000))
def test_profile_matches_brute_force(w, seed):
    q = random_colouring(random.Random(seed), 3)
    preds = [lambda i, c=c: i in c for c in q.cells]
    assert profile(w, q) == brute_profile(w, preds)


@given(words, st.integers(0, 1000))
def test_content_finitely_additive(w, seed):
    q = random_colouring(random.Random(seed), 3)
    union = q.cells[0] | q.cells[1]
    assert content_on(w, union) == content_on(w, q.cells[0]) | content_on(w, q.cells[1])


@given(words, st.integers(0, 1000))
def test_content_empty_iff_window_misses_cell(w, seed):
    q = random_colouring(random.Random(seed), 3)
    for cell in q.cells:
        misses = all(i not in cell for i in range(len(w)))
        assert (content_on(w, cell) == frozenset()) == misses


@given(words, st.text(alphabet="ab", max_size=4), st.integers(0, 1000))
def test_content_monotone_under_append(w, tail, seed):
    q = random_colouring(random.Random(seed), 3)
    for b1, b2 in zip(profile(w, q), profile(w + tail, q)):
        assert b1 <= b2


# -- achievability -------------------------------------------------------------


def test_achievable_examples():
    assert achievable(PARITY, (F("a"), F("b")))
    assert realize(PARITY, (F("a"), F("b"))) == "ab"
    assert not achievable(PARITY, (F(), F("b")))
    assert achievable(Colouring1.trivial(), (F(),))
    assert realize(Colouring1.trivial(), (F(),)) == ""


def test_feasible_lengths_interval():
    lo, hi, lo_cell, hi_cell = feasible_lengths(PARITY, (F("ab"), F()))
    assert (lo, hi) == (3, 1)
    assert (lo_cell, hi_cell) == (0, 1)
    lo, hi, _, _ = feasible_lengths(Colouring1.trivial(), (F("ab"),))
    assert (lo, hi) == (2, float("inf"))
    q = Colouring1((UPSet.finite([0, 1]), UPSet("00", "1")))
    assert feasible_lengths(q, (F("ab"), F()))[:2] == (2, 2)
    assert realize(q, (F("ab"), F())) == "ab"


def test_finite_cell_short_of_letters():
    q = Colouring1((UPSet.finite([0]), UPSet("0", "1")))
    lo, _, lo_cell, _ = feasible_lengths(q, (F("ab"), F("a")))
    assert lo == float("inf") and lo_cell == 0
    assert not achievable(q, (F("ab"), F("a")))
    assert realize(q, (F("ab"), F("a"))) is None


@pytest.mark.parametrize("seed", range(12))
def test_achievable_profiles_match_word_enumeration(seed):
    rng = random.Random(seed)
    q = random_colouring(rng, rng.randint(1, 3), max_threshold=3, max_period=3)
    seen = {profile(w, q) for w in all_words("ab", 9)}
    listed = set(achievable_profiles(q, AB, max_len=9))
    assert listed == seen
    for p in achievable_profiles(q, AB):
        w = realize(q, p)
        assert w is not None and profile(w, q) == p
    # every realisable profile is realised by some word of bounded length
    assert set(achievable_profiles(q, AB)) >= seen


def test_realize_fixed_length():
    assert realize(Colouring1.trivial(), (F("ab"),), length=4) == "abbb"
    assert realize(PARITY, (F("a"), F("b")), length=1) is None


def test_profile_text_round_trip():
    p = (F("ab"), F(), F("b"))
    assert format_profile(p) == "{ab}|{}|{b}"
    assert parse_profile("{ab}|{}|{b}", AB) == p
    assert parse_profile("{a, b}") == (F("ab"),)
    with pytest.raises(ValueError):
        parse_profile("ab|{}")
