import itertools
import random

import pytest

from helpers import AB, REGISTRY, SENTENCE_CORPUS, random_recogniser
from wordlogic.equations import (
    AppendEq,
    DupEq,
    Equation,
    MembershipTable,
    SwapEq,
    as_equation,
    candidate_colourings,
    check_all,
    check_equation,
    check_family,
    families,
    left_word,
    right_word,
    search_colouring,
    substitute,
)
from wordlogic.recognisers import Recogniser1, builtin_oracle, compile_sentence
from wordlogic.upsets import EVENS, ODDS, Colouring1
from wordlogic.words import Alphabet

F = frozenset
TRIVIAL = Colouring1.trivial()
PARITY = Colouring1((EVENS, ODDS))
K_AB = Recogniser1.kqb(AB, PARITY, (F("a"), F("b")))


def brute_first_failure(oracle, q, fam, max_len, letters="ab"):
    """Direct transcription of the family definitions, no vectorisation."""
    arity = {"swap": 2, "dup": 3, "append": 1}[fam.name]
    for n in range(max_len + 1):
        for t in itertools.product(letters, repeat=n):
            w = "".join(t)
            for js in itertools.permutations(range(n), arity):
                cols = {q.colour(j) for j in js}
                if fam.name == "append":
                    cols.add(q.colour(n))
                if len(cols) != 1:
                    continue
                if fam.name == "swap":
                    if (w[js[0]], w[js[1]]) != (fam.a, fam.b):
                        continue
                    other = list(w)
                    other[js[0]], other[js[1]] = fam.b, fam.a
                    other = "".join(other)
                elif fam.name == "dup":
                    if fam.a == fam.b or (w[js[0]], w[js[1]], w[js[2]]) != (fam.a, fam.a, fam.b):
                        continue
                    other = w[: js[1]] + fam.b + w[js[1] + 1 :]
                else:
                    if w[js[0]] != fam.a:
                        continue
                    other = w + fam.a
                if oracle(w) != oracle(other):
                    return w, js
    return None


def test_substitute_examples():
    assert substitute("ab", (0, 1), ("b", "a")) == "ba"
    assert substitute("aab", (0, 1, 2), ("a", "b", "b")) == "abb"
    assert substitute("a", (0,), ("a",)) == "a"
    with pytest.raises(ValueError):
        substitute("ab", (0, 0), ("a", "b"))
    with pytest.raises(ValueError):
        substitute("ab", (2,), ("a",))


def test_family_order():
    fams = families(AB)
    assert [str(f) for f in fams[:4]] == ["fam=swap a=a b=a", "fam=swap a=a b=b", "fam=swap a=b b=a", "fam=swap a=b b=b"]
    assert len(fams) == 4 + 4 + 2
    assert isinstance(fams[-1], AppendEq)


def test_check_family_examples():
    for fam in families(AB):
        assert check_family(K_AB, PARITY, fam, 6, AB)
    report = check_family(builtin_oracle("factor:ab"), TRIVIAL, SwapEq("a", "b"), 3, AB)
    assert not report
    assert (report.word, report.positions) == ("ab", (0, 1))
    assert str(report) == "FAIL fam=swap a=a b=b w=ab j=0,1"
    assert report.counterpart == "ba"


def test_trivial_instances_pass():
    oracles = [builtin_oracle("factor:ab"), builtin_oracle("parity:a"), K_AB]
    for oracle, a in itertools.product(oracles, "ab"):
        assert check_family(oracle, TRIVIAL, SwapEq(a, a), 5, AB)
        assert check_family(oracle, TRIVIAL, DupEq(a, a), 5, AB)


def test_check_all_examples():
    for text, _ in SENTENCE_CORPUS[:8]:
        r = compile_sentence(text, AB, REGISTRY)
        assert check_all(r, r.colouring, 6, AB)
    report = check_all(builtin_oracle("parity:a"), TRIVIAL, 4, AB)
    assert not report
    assert report.family == DupEq("a", "b")
    assert report.word == "aab"
    assert report.positions == (0, 1, 2)
    assert report.counterpart == "abb"
    for q in candidate_colourings(2, 3):
        assert check_all(builtin_oracle("none"), q, 5, AB)


@pytest.mark.parametrize("seed", range(15))
def test_fast_path_matches_brute_force(seed):
    rng = random.Random(seed)
    letters = "ab"
    r = random_recogniser(rng)
    oracles = [
        Recogniser1(AB, r.colouring, frozenset(p for p in r.accepted if all(b <= set(letters) for b in p))),
        builtin_oracle("factor:" + rng.choice(["ab", "ba", "aa", "bab"])),
        builtin_oracle("parity:" + rng.choice(letters)),
    ]
    q = rng.choice([r.colouring, TRIVIAL, PARITY, Colouring1.threshold_residue(1, 2)])
    for oracle in oracles:
        table = MembershipTable(oracle, AB)
        for fam in families(AB):
            report = check_family(table, q, fam, 5)
            expect = brute_first_failure(oracle, q, fam, 5, letters)
            got = None if report else (report.word, report.positions)
            assert got == expect, (fam, q)


@pytest.mark.parametrize("seed", range(6))
def test_generic_equation_agrees(seed):
    rng = random.Random(50 + seed)
    oracle = rng.choice([builtin_oracle("factor:ab"), builtin_oracle("parity:b"), random_recogniser(rng)])
    alphabet = getattr(oracle, "alphabet", AB)
    q = rng.choice([TRIVIAL, PARITY, Colouring1.threshold_residue(2, 1)])
    for fam in families(alphabet):
        slow = check_equation(oracle, q, as_equation(fam), alphabet, 4)
        fast = check_family(oracle, q, fam, 4, alphabet)
        assert (slow is None) == bool(fast)
        if slow is not None:
            w, js = slow
            assert oracle(as_equation(fam).left(w, js)) != oracle(as_equation(fam).right(w, js))


def test_custom_equation():
    # reversal of the whole word, compared whenever the marked position is 0-coloured
    eq = Equation(lambda w, js: w, lambda w, js: w[::-1], 1, name="reverse")
    assert check_equation(builtin_oracle("factor:ab"), TRIVIAL, eq, AB, 3) == ("ab", (0,))
    assert check_equation(builtin_oracle("parity:a"), TRIVIAL, eq, AB, 4) is None


@pytest.mark.parametrize("seed", range(10))
def test_failure_witness_replays(seed):
    rng = random.Random(seed)
    oracle = builtin_oracle(rng.choice(["factor:ab", "factor:aab", "parity:a", "parity:b"]))
    q = rng.choice(candidate_colourings(2, 3))
    report = check_all(oracle, q, 6, AB)
    if not report:
        assert report.replay(oracle)
        assert left_word(report.family, report.word, report.positions) == report.word
        assert oracle(report.word) != oracle(right_word(report.family, report.word, report.positions))


@pytest.mark.parametrize("seed", range(6))
def test_check_family_monotone_in_bound(seed):
    rng = random.Random(seed)
    oracle = builtin_oracle(rng.choice(["factor:ab", "factor:bb", "parity:a"]))
    q = rng.choice(candidate_colourings(2, 2))
    for fam in families(AB):
        results = [bool(check_family(oracle, q, fam, n, AB)) for n in range(7)]
        # once failing, failing for every larger bound
        assert results == sorted(results, reverse=True)


def test_letters_must_be_in_alphabet():
    with pytest.raises(ValueError):
        check_family(K_AB, PARITY, SwapEq("a", "c"), 3, AB)
    with pytest.raises(ValueError):
        check_all(K_AB, PARITY, 3)


def test_search_colouring_examples():
    hit = search_colouring(K_AB, AB, 6, max_threshold=0, max_modulus=2)
    assert hit is not None and hit[0] == PARITY
    factor = builtin_oracle("factor:ab")
    sharing = [TRIVIAL, PARITY, Colouring1.threshold_residue(3, 1, singletons=False)]
    assert search_colouring(factor, AB, 3, candidates=sharing) is None
    assert search_colouring(factor, AB, 5) is None


def test_search_colouring_short_words_pass_vacuously():
    # below length 4 the colouring (t=1, m=3) gives every position its own colour
    hit = search_colouring(builtin_oracle("factor:ab"), AB, 3)
    assert hit is not None
    assert len(set(hit[0].colours(3))) == 3
    hit = search_colouring(builtin_oracle("all"), AB, 5)
    assert hit is not None and hit[0] == TRIVIAL


def test_candidate_family():
    cands = candidate_colourings(1, 2)
    assert cands[0] == TRIVIAL
    assert cands[1] == PARITY
    assert len(cands) == len(set(cands)) == 4
    assert Colouring1.threshold_residue(1, 2, singletons=False) in cands


def test_three_letter_alphabet():
    abc = Alphabet.of("abc")
    r = Recogniser1.kqb(abc, PARITY, (F("ac"), F("b")))
    assert check_all(r, PARITY, 6, abc)
    report = check_all(r, TRIVIAL, 4, abc)
    assert not report and report.replay(r)
