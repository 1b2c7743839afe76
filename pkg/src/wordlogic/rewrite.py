"""Rewrite chains between words with the same profile.

Each step is one instance of an equation family, applied forwards or
backwards (the families relate two words symmetrically).  ``witness_chain``
turns one word into another with equal profile in four stages: orient so
the source is the shorter word, append letters up to the target length,
fix the letter multiset of each colour with dup steps, then sort each
colour with swaps.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterator

from .upsets import Colouring1, LiteralError
from .words import Alphabet, format_profile, profile


class StepError(ValueError):
    """A step's precondition does not hold on the word it is applied to."""


class ProfileMismatch(ValueError):
    def __init__(self, colour: int, left: frozenset[str], right: frozenset[str]):
        self.colour = colour
        super().__init__(
            f"profiles differ at colour {colour}: "
            f"{{{''.join(sorted(left))}}} vs {{{''.join(sorted(right))}}}"
        )


@dataclass(frozen=True)
class Swap:
    j1: int
    j2: int
    a: str
    b: str

    def inverse(self) -> Swap:
        return Swap(self.j1, self.j2, self.b, self.a)

    def __str__(self):
        return f"swap {self.j1} {self.j2} {self.a} {self.b}"


@dataclass(frozen=True)
class Dup:
    j1: int
    j2: int
    j3: int
    a: str
    b: str
    forward: bool = True

    def inverse(self) -> Dup:
        return Dup(self.j1, self.j2, self.j3, self.a, self.b, not self.forward)

    def __str__(self):
        return f"dup {self.j1} {self.j2} {self.j3} {self.a} {self.b} {'fwd' if self.forward else 'bwd'}"


@dataclass(frozen=True)
class Append:
    j: int
    a: str
    forward: bool = True

    def inverse(self) -> Append:
        return Append(self.j, self.a, not self.forward)

    def __str__(self):
        return f"append {self.j} {self.a} {'fwd' if self.forward else 'bwd'}"


RewriteStep = Swap | Dup | Append


def _distinct(js, n):
    if len(set(js)) != len(js):
        raise StepError(f"positions {js} are not pairwise distinct")
    for j in js:
        if not 0 <= j < n:
            raise StepError(f"position {j} is out of range for length {n}")


def _same_colour(q: Colouring1, js) -> None:
    cs = {q.colour(j) for j in js}
    if len(cs) != 1:
        raise StepError(f"positions {tuple(js)} do not share a colour")


def _expect(w: str, js, letters) -> None:
    got = "".join(w[j] for j in js)
    if got != "".join(letters):
        raise StepError(f"expected {''.join(letters)} at {tuple(js)}, found {got}")


def apply_step(w: str, s: RewriteStep, q: Colouring1) -> str:
    out = list(w)
    if isinstance(s, Swap):
        js = (s.j1, s.j2)
        _distinct(js, len(w))
        _same_colour(q, js)
        _expect(w, js, (s.a, s.b))
        out[s.j1], out[s.j2] = s.b, s.a
        return "".join(out)
    if isinstance(s, Dup):
        js = (s.j1, s.j2, s.j3)
        _distinct(js, len(w))
        _same_colour(q, js)
        src, dst = ((s.a, s.a, s.b), (s.a, s.b, s.b)) if s.forward else ((s.a, s.b, s.b), (s.a, s.a, s.b))
        _expect(w, js, src)
        for j, c in zip(js, dst):
            out[j] = c
        return "".join(out)
    if isinstance(s, Append):
        base = w if s.forward else w[:-1]
        if not s.forward:
            if not w or w[-1] != s.a:
                raise StepError(f"word {w!r} does not end with {s.a}")
        _distinct((s.j,), len(base))
        _expect(base, (s.j,), (s.a,))
        if q.colour(s.j) != q.colour(len(base)):
            raise StepError(f"position {s.j} and length {len(base)} have different colours")
        return w + s.a if s.forward else base
    raise TypeError(f"not a rewrite step: {s!r}")


@dataclass(frozen=True)
class RewriteChain:
    source: str
    target: str
    colouring: Colouring1
    steps: tuple[RewriteStep, ...]

    def words(self) -> Iterator[str]:
        """The source followed by every intermediate word (no validation)."""
        w = self.source
        yield w
        for s in self.steps:
            w = apply_step(w, s, self.colouring)
            yield w

    def dumps(self, alphabet: Alphabet | None = None) -> str:
        lines = [f"alphabet {alphabet}"] if alphabet is not None else []
        lines += [f"colouring {self.colouring}", f"from {self.source}", f"to {self.target}"]
        lines += [str(s) for s in self.steps]
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str, source_name: str = "<chain>") -> RewriteChain:
        colouring = None
        src = tgt = None
        steps: list[RewriteStep] = []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            head, _, rest = line.partition(" ")
            try:
                if head == "alphabet":
                    Alphabet.parse(line)
                elif head == "colouring":
                    colouring = Colouring1.parse(rest)
                elif head == "from":
                    src = rest.strip()
                elif head == "to":
                    tgt = rest.strip()
                else:
                    steps.append(parse_step(line))
            except (LiteralError, ValueError) as exc:
                raise ValueError(f"{source_name}:{lineno}: {exc}") from None
        if colouring is None or src is None or tgt is None:
            raise ValueError(f"{source_name}: need 'colouring', 'from' and 'to' lines")
        return cls(src, tgt, colouring, tuple(steps))

    @classmethod
    def load(cls, path: str | Path) -> RewriteChain:
        path = Path(path)
        return cls.loads(path.read_text(), str(path))


def parse_step(line: str) -> RewriteStep:
    parts = line.split()
    direction = {"fwd": True, "bwd": False}
    try:
        if parts[0] == "swap" and len(parts) == 5:
            return Swap(int(parts[1]), int(parts[2]), parts[3], parts[4])
        if parts[0] == "dup" and len(parts) == 7:
            return Dup(int(parts[1]), int(parts[2]), int(parts[3]), parts[4], parts[5], direction[parts[6]])
        if parts[0] == "append" and len(parts) == 4:
            return Append(int(parts[1]), parts[2], direction[parts[3]])
    except (ValueError, KeyError):
        pass
    raise ValueError(f"bad step {line!r}")


# ---------------------------------------------------------------------------
# Constructing chains


def _check_profiles(q: Colouring1, w: str, w2: str) -> None:
    p1, p2 = profile(w, q), profile(w2, q)
    for i, (b1, b2) in enumerate(zip(p1, p2)):
        if b1 != b2:
            raise ProfileMismatch(i, b1, b2)


def witness_chain(q: Colouring1, w: str, w2: str) -> RewriteChain:
    """A chain of steps turning ``w`` into ``w2``; raises ProfileMismatch if impossible."""
    _check_profiles(q, w, w2)
    if len(w) > len(w2):
        back = _grow_chain(q, w2, w)
        steps = tuple(s.inverse() for s in reversed(back))
    else:
        steps = tuple(_grow_chain(q, w, w2))
    return RewriteChain(w, w2, q, steps)


def _grow_chain(q: Colouring1, w: str, w2: str) -> list[RewriteStep]:
    steps: list[RewriteStep] = []
    cur = list(w)

    def emit(s: RewriteStep) -> None:
        steps.append(s)
        cur[:] = apply_step("".join(cur), s, q)

    # lengthen: a same-coloured occurrence of the letter exists by profile equality
    for n in range(len(w), len(w2)):
        c, a = q.colour(n), w2[n]
        j = next(j for j in range(n) if cur[j] == a and q.colour(j) == c)
        emit(Append(j, a))

    # equalise letter counts inside each colour
    by_colour: dict[int, list[int]] = {}
    for pos in range(len(w2)):
        by_colour.setdefault(q.colour(pos), []).append(pos)
    for c in sorted(by_colour):
        pos = by_colour[c]
        want = Counter(w2[p] for p in pos)
        while True:
            have = Counter(cur[p] for p in pos)
            if have == want:
                break
            a = min(x for x in have if have[x] > want[x])
            b = min(x for x in want if want[x] > have[x])
            a_pos = [p for p in pos if cur[p] == a]
            b_pos = [p for p in pos if cur[p] == b]
            emit(Dup(a_pos[0], a_pos[1], b_pos[0], a, b))

    # sort each colour by transpositions
    for c in sorted(by_colour):
        pos = by_colour[c]
        for i, p in enumerate(pos):
            if cur[p] == w2[p]:
                continue
            r = next(r for r in pos[i + 1:] if cur[r] == w2[p] and cur[r] != w2[r])
            emit(Swap(p, r, cur[p], cur[r]))
    assert "".join(cur) == w2
    return steps


def chain_length_bound(w: str, w2: str) -> int:
    """Appends, plus at most one dup per position, plus the transpositions."""
    n = max(len(w), len(w2))
    return n + n + n * n


# ---------------------------------------------------------------------------
# Verification


@dataclass(frozen=True)
class ChainCheck:
    ok: bool
    step: int | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        return "OK" if self.ok else f"FAIL step {self.step}: {self.reason}"


def verify_chain(c: RewriteChain, oracle: Callable[[str], bool] | None = None) -> ChainCheck:
    """Replay the chain checking every precondition, profile invariance and the endpoint.

    With an oracle, also require membership to stay constant along the chain
    (meaningful when the oracle satisfies the equations for this colouring).
    """
    q = c.colouring
    w = c.source
    start = profile(w, q)
    member = oracle(w) if oracle is not None else None
    for i, s in enumerate(c.steps):
        try:
            w = apply_step(w, s, q)
        except StepError as exc:
            return ChainCheck(False, i, str(exc))
        p = profile(w, q)
        if p != start:
            return ChainCheck(False, i, f"profile changed to {format_profile(p)}")
        if oracle is not None and oracle(w) != member:
            return ChainCheck(False, i, f"membership changed at {w!r}")
    if w != c.target:
        return ChainCheck(False, len(c.steps), f"ends at {w!r}, not {c.target!r}")
    return ChainCheck(True)
