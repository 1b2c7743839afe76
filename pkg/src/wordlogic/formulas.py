"""Sentences built from one block of existential quantifiers over letter and
numerical predicates: syntax tree, parser, semantics on finite words, and
the quantifier-free normal form.

Concrete syntax::

    sentence := or ;  or := and ('|' and)* ;  and := not ('&' not)* ;
    not      := '!' not | '(' sentence ')' | block ;
    block    := 'E' var+ '.' qf ;            # qf: same Boolean grammar over atoms
    atom     := LETTER '(' var ')' | NAME '(' var (',' var)* ')'

A block's matrix runs to the end of the enclosing parenthesis, so
``E x. a(x) | b(x)`` is a single block.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

from .upsets import (
    Comparator,
    Complement,
    Everything,
    Explicit,
    Extern,
    Intersection,
    LiteralError,
    NonUniformError,
    Nothing,
    Product,
    Pullback,
    TupleSet,
    Union,
    UPSet,
)
from .words import Alphabet, content_on


class FormulaError(ValueError):
    """Syntax, scope or arity problem, with the character offset when known."""

    def __init__(self, message: str, pos: int | None = None):
        self.pos = pos
        super().__init__(message if pos is None else f"{message} (at position {pos})")


# ---------------------------------------------------------------------------
# Syntax tree


class Formula:
    def free_vars(self) -> frozenset[str]:
        raise NotImplementedError


@dataclass(frozen=True)
class Const(Formula):
    value: bool

    def free_vars(self):
        return frozenset()

    def __str__(self):
        return "T" if self.value else "F"


@dataclass(frozen=True)
class Letter(Formula):
    letter: str
    var: str

    def free_vars(self):
        return frozenset([self.var])

    def __str__(self):
        return f"{self.letter}({self.var})"


@dataclass(frozen=True)
class Pred(Formula):
    name: str
    args: tuple[str, ...]

    def free_vars(self):
        return frozenset(self.args)

    def __str__(self):
        return f"{self.name}({','.join(self.args)})"


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula

    def free_vars(self):
        return self.arg.free_vars()

    def __str__(self):
        return "!" + _wrap(self.arg, (Letter, Pred, Not, Const, Gen))


@dataclass(frozen=True)
class And(Formula):
    args: tuple[Formula, ...]

    def free_vars(self):
        return frozenset().union(*(a.free_vars() for a in self.args))

    def __str__(self):
        return " & ".join(_wrap(a, (Letter, Pred, Not, Const, Gen, And)) for a in self.args)


@dataclass(frozen=True)
class Or(Formula):
    args: tuple[Formula, ...]

    def free_vars(self):
        return frozenset().union(*(a.free_vars() for a in self.args))

    def __str__(self):
        return " | ".join(_wrap(a, (Letter, Pred, Not, Const, Gen, And, Or)) for a in self.args)


@dataclass(frozen=True)
class Exists(Formula):
    vars: tuple[str, ...]
    body: Formula

    def free_vars(self):
        return self.body.free_vars() - set(self.vars)

    def __str__(self):
        return f"E {' '.join(self.vars)}. {self.body}"


@dataclass(frozen=True)
class Gen(Formula):
    """Generator language: some occurrence of ``letters`` at a tuple inside ``cell``."""

    letters: str
    cell: UPSet | TupleSet

    def free_vars(self):
        return frozenset()

    def __str__(self):
        return f"<>[{self.letters}]{{{self.cell}}}"


def _wrap(f: Formula, bare: tuple[type, ...]) -> str:
    return str(f) if isinstance(f, bare) else f"({f})"


def is_quantifier_free(f: Formula) -> bool:
    if isinstance(f, Exists):
        return False
    if isinstance(f, Not):
        return is_quantifier_free(f.arg)
    if isinstance(f, (And, Or)):
        return all(is_quantifier_free(a) for a in f.args)
    return True


# ---------------------------------------------------------------------------
# Predicate registry


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, int(n**0.5) + 1))


EXTERN_FUNCS: dict[str, Callable[[tuple[int, ...], int], bool]] = {
    "prime": lambda p, n: _is_prime(p[0]),
    "last": lambda p, n: p[0] == n - 1,
    "end": lambda p, n: p[0] == n - 1,
    "first": lambda p, n: p[0] == 0,
}


def _unbound_extern(name: str):
    def func(point, length):
        raise NonUniformError(f"no implementation bound for extern predicate {name}")

    return func


@dataclass(frozen=True)
class PredDef:
    name: str
    arity: int
    spec: TupleSet

    @property
    def uniform(self) -> bool:
        return self.spec.uniform


@dataclass(frozen=True)
class PredRegistry:
    preds: Mapping[str, PredDef] = field(default_factory=dict)
    alphabet: Alphabet | None = None

    def __contains__(self, name: object) -> bool:
        return name in self.preds

    def __getitem__(self, name: str) -> PredDef:
        return self.preds[name]

    def __iter__(self):
        return iter(self.preds.values())

    def with_pred(self, name: str, arity: int, spec: UPSet | TupleSet) -> PredRegistry:
        if not re.fullmatch(r"[A-Z][A-Za-z0-9_]*", name):
            raise FormulaError(f"predicate name {name!r} must start with an uppercase letter")
        if arity < 1:
            raise FormulaError(f"predicate {name} must have arity >= 1")
        if isinstance(spec, UPSet):
            if arity != 1:
                raise FormulaError(f"set literal for {name} only fits arity 1")
            spec = Product((spec,))
        preds = dict(self.preds)
        preds[name] = PredDef(name, arity, spec)
        return PredRegistry(preds, self.alphabet)

    def bind(self, name: str, func: Callable[[tuple[int, ...], int], bool]) -> PredRegistry:
        """Attach a Python implementation to an extern predicate."""
        old = self.preds[name]
        return self.with_pred(name, old.arity, Extern(name, func, old.arity))

    @classmethod
    def standard(cls, alphabet: Alphabet | None = None) -> PredRegistry:
        """DIAG, LT, LE, SUCC, EV and OD, handy for experiments."""
        reg = cls({}, alphabet)
        for name in ("diag", "lt", "le", "succ"):
            reg = reg.with_pred(name.upper(), 2, Comparator(name))
        reg = reg.with_pred("EV", 1, UPSet("", "10"))
        return reg.with_pred("OD", 1, UPSet("", "01"))

    @classmethod
    def parse(cls, text: str, source: str = "<registry>") -> PredRegistry:
        """Read registry lines (``pred NAME ARITY SPEC``, ``alphabet ab``, ``#`` comments)."""
        reg = cls({}, None)
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                if line.startswith("alphabet"):
                    reg = PredRegistry(reg.preds, Alphabet.parse(line))
                    continue
                m = re.fullmatch(r"pred\s+(\S+)\s+(\d+)\s+(.+)", line)
                if not m:
                    raise FormulaError("expected 'pred NAME ARITY SPEC'")
                name, arity = m.group(1), int(m.group(2))
                if name in reg:
                    raise FormulaError(f"predicate {name} declared twice")
                spec = parse_set_spec(m.group(3), arity, name)
                if spec.arity != arity:
                    raise FormulaError(f"spec has arity {spec.arity}, declared {arity}")
                reg = reg.with_pred(name, arity, spec)
            except (FormulaError, LiteralError, ValueError) as exc:
                raise FormulaError(f"{source}:{lineno}: {exc}") from None
        return reg


def parse_set_spec(text: str, arity: int, name: str = "") -> TupleSet:
    """Set specs: ``up:..``, ``diag``/``lt``/``le``/``gt``/``succ``, ``prod(up:.., ..)``,
    ``{(0,1), (2,3)}``, ``extern [impl]``, combined with ``!``, ``&``, ``|`` and parentheses."""
    text = text.strip()
    m = re.fullmatch(r"extern(?:\s+(\w+))?", text)
    if m:
        impl = (m.group(1) or name).lower()
        func = EXTERN_FUNCS.get(impl) or _unbound_extern(name)
        return Extern(name, func, arity)
    toks = re.findall(r"up:[01]*/[01]+|prod\(|\{[^}]*\}|[A-Za-z]+|[()!&|]|\S", text)
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else None

    def take():
        nonlocal pos
        pos += 1
        return toks[pos - 1]

    def parse_or():
        parts = [parse_and()]
        while peek() == "|":
            take()
            parts.append(parse_and())
        return parts[0] if len(parts) == 1 else Union(tuple(parts))

    def parse_and():
        parts = [parse_not()]
        while peek() == "&":
            take()
            parts.append(parse_not())
        return parts[0] if len(parts) == 1 else Intersection(tuple(parts))

    def parse_not():
        tok = peek()
        if tok == "!":
            take()
            return Complement(parse_not())
        if tok == "(":
            take()
            inner = parse_or()
            if take() != ")":
                raise FormulaError(f"unbalanced parenthesis in {text!r}")
            return inner
        return parse_term()

    def parse_term():
        tok = take() if peek() is not None else None
        if tok is None:
            raise FormulaError(f"unexpected end of set spec {text!r}")
        if tok.startswith("up:"):
            if arity != 1:
                raise FormulaError(f"set literal {tok} needs arity 1; use prod(...)")
            return Product((UPSet.parse(tok),))
        if tok == "prod(":
            factors = []
            while True:
                factors.append(UPSet.parse(take()))
                sep = take()
                if sep == ")":
                    break
                if sep != ",":
                    raise FormulaError(f"bad product in {text!r}")
            return Product(tuple(factors))
        if tok.startswith("{"):
            pts = re.findall(r"\(([^)]*)\)|(\d+)", tok[1:-1])
            points = set()
            for tup, single in pts:
                nums = tuple(int(x) for x in (tup.split(",") if tup else [single]))
                if len(nums) != arity:
                    raise FormulaError(f"tuple {nums} does not have arity {arity}")
                points.add(nums)
            return Explicit(frozenset(points), arity)
        if tok in ("diag", "lt", "le", "gt", "succ"):
            if arity != 2:
                raise FormulaError(f"comparator {tok} is binary")
            return Comparator(tok)
        if tok in ("all", "none"):
            return Everything(arity) if tok == "all" else Nothing(arity)
        raise FormulaError(f"unknown set spec {tok!r}")

    spec = parse_or()
    if pos != len(toks):
        raise FormulaError(f"trailing input in set spec {text!r}")
    return spec


# ---------------------------------------------------------------------------
# Parser

_TOKEN = re.compile(r"\s*(?:(?P<ident>[A-Za-z0-9_]+)|(?P<sym>[()&|!.,]|[∃∀¬∧∨])|(?P<other>\S))")
_SYMBOL_ALIASES = {"∃": "E", "∀": "A", "¬": "!", "∧": "&", "∨": "|"}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            break
        start = m.start(m.lastgroup)
        val = m.group(m.lastgroup)
        if m.lastgroup == "other":
            raise FormulaError(f"unexpected character {val!r}", start)
        if val in _SYMBOL_ALIASES:
            val = _SYMBOL_ALIASES[val]
            kind = "ident" if val in "EA" else "sym"
        else:
            kind = m.lastgroup
        toks.append((kind, val, start))
        pos = m.end()
    toks.append(("eof", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, registry: PredRegistry, alphabet: Alphabet):
        self.toks = _tokenize(text)
        self.i = 0
        self.registry = registry
        self.alphabet = alphabet
        self.in_block = False

    def peek(self, offset: int = 0):
        return self.toks[min(self.i + offset, len(self.toks) - 1)]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, val: str):
        kind, got, pos = self.take()
        if got != val or kind == "eof":
            raise FormulaError(f"expected {val!r}, found {got or 'end of input'!r}", pos)

    def parse_or(self) -> Formula:
        parts = [self.parse_and()]
        while self.peek()[1] == "|" and self.peek()[0] == "sym":
            self.take()
            parts.append(self.parse_and())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def parse_and(self) -> Formula:
        parts = [self.parse_not()]
        while self.peek()[1] == "&" and self.peek()[0] == "sym":
            self.take()
            parts.append(self.parse_not())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def parse_not(self) -> Formula:
        kind, val, pos = self.peek()
        if kind == "sym" and val == "!":
            self.take()
            return Not(self.parse_not())
        if kind == "sym" and val == "(":
            self.take()
            inner = self.parse_or()
            self.expect(")")
            return inner
        if kind == "ident" and self.peek(1)[1] != "(":
            if val == "E":
                return self.parse_block()
            if val == "A":
                raise FormulaError(
                    "universal quantifiers are outside the fragment; only one block of "
                    "existential quantifiers (E x1 ... xk. matrix) is allowed",
                    pos,
                )
        if kind == "ident":
            return self.parse_atom()
        raise FormulaError(f"unexpected {val or 'end of input'!r}", pos)

    def parse_block(self) -> Formula:
        _, _, pos = self.take()
        if self.in_block:
            raise FormulaError("quantifier inside a block matrix; the matrix must be quantifier-free", pos)
        vars_: list[str] = []
        while self.peek()[0] == "ident":
            _, v, vpos = self.take()
            if v in vars_:
                raise FormulaError(f"variable {v} bound twice in one block", vpos)
            vars_.append(v)
        if not vars_:
            raise FormulaError("quantifier block binds no variables", pos)
        self.expect(".")
        self.in_block = True
        try:
            body = self.parse_or()
        finally:
            self.in_block = False
        return Exists(tuple(vars_), body)

    def parse_atom(self) -> Formula:
        _, name, pos = self.take()
        self.expect("(")
        args = []
        while True:
            kind, v, vpos = self.take()
            if kind != "ident":
                raise FormulaError(f"expected a variable, found {v or 'end of input'!r}", vpos)
            args.append(v)
            kind, sep, spos = self.take()
            if sep == ")":
                break
            if sep != ",":
                raise FormulaError(f"expected ',' or ')', found {sep or 'end of input'!r}", spos)
        if name in self.alphabet:
            if len(args) != 1:
                raise FormulaError(f"letter predicate {name} takes one variable", pos)
            return Letter(name, args[0])
        if name not in self.registry:
            raise FormulaError(f"unknown predicate {name}", pos)
        arity = self.registry[name].arity
        if len(args) != arity:
            raise FormulaError(f"predicate {name} has arity {arity}, given {len(args)}", pos)
        return Pred(name, tuple(args))


def parse(text: str, registry: PredRegistry | None = None, alphabet: Alphabet | None = None) -> Formula:
    """Parse a sentence; every variable must be bound by a quantifier block."""
    f = _parse_any(text, registry, alphabet)
    free = f.free_vars()
    if free:
        raise FormulaError(f"unbound variable {', '.join(sorted(free))}")
    return f


def parse_qf(text: str, registry: PredRegistry | None = None, alphabet: Alphabet | None = None) -> Formula:
    """Parse a quantifier-free formula; free variables are allowed."""
    f = _parse_any(text, registry, alphabet)
    if not is_quantifier_free(f):
        raise FormulaError("expected a quantifier-free formula")
    return f


def _parse_any(text, registry, alphabet) -> Formula:
    registry = registry if registry is not None else PredRegistry()
    alphabet = alphabet or registry.alphabet or Alphabet.of("ab")
    p = _Parser(text, registry, alphabet)
    f = p.parse_or()
    kind, val, pos = p.peek()
    if kind != "eof":
        raise FormulaError(f"unexpected {val!r}", pos)
    return f


def tree(f: Formula, indent: int = 0) -> str:
    """Indented rendering of the syntax tree."""
    pad = "  " * indent
    if isinstance(f, Not):
        return f"{pad}Not\n{tree(f.arg, indent + 1)}"
    if isinstance(f, (And, Or)):
        return f"{pad}{type(f).__name__}\n" + "\n".join(tree(a, indent + 1) for a in f.args)
    if isinstance(f, Exists):
        return f"{pad}Exists {' '.join(f.vars)}\n{tree(f.body, indent + 1)}"
    return f"{pad}{type(f).__name__} {f}"


# ---------------------------------------------------------------------------
# Semantics


class EvalError(ValueError):
    pass


def evaluate(
    f: Formula,
    w: str,
    registry: PredRegistry | None = None,
    assignment: Mapping[str, int] | None = None,
) -> bool:
    """Truth value of ``f`` on the finite word ``w`` under ``assignment``."""
    registry = registry if registry is not None else PredRegistry()
    env = dict(assignment or {})
    n = len(w)
    for v, i in env.items():
        if not 0 <= i < n:
            raise EvalError(f"position {i} for {v} is out of range for a word of length {n}")
    return _eval(f, w, registry, env)


def _pos(env: Mapping[str, int], v: str) -> int:
    try:
        return env[v]
    except KeyError:
        raise EvalError(f"variable {v} has no value") from None


def _eval(f: Formula, w: str, reg: PredRegistry, env: dict[str, int]) -> bool:
    if isinstance(f, Letter):
        return w[_pos(env, f.var)] == f.letter
    if isinstance(f, Pred):
        point = tuple(_pos(env, v) for v in f.args)
        return reg[f.name].spec.contains(point, len(w))
    if isinstance(f, Not):
        return not _eval(f.arg, w, reg, env)
    if isinstance(f, And):
        return all(_eval(a, w, reg, env) for a in f.args)
    if isinstance(f, Or):
        return any(_eval(a, w, reg, env) for a in f.args)
    if isinstance(f, Exists):
        inner = dict(env)
        for point in itertools.product(range(len(w)), repeat=len(f.vars)):
            inner.update(zip(f.vars, point))
            if _eval(f.body, w, reg, inner):
                return True
        return False
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Gen):
        return f.letters in content_on(w, f.cell, len(f.letters))
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# Quantifier-free normal form


@dataclass(frozen=True)
class NormalForm:
    """The disjunction over letter tuples ``t`` of ``t(x) & x in sets[t]``."""

    variables: tuple[str, ...]
    sets: Mapping[str, UPSet | TupleSet]

    @property
    def k(self) -> int:
        return len(self.variables)

    def holds(self, w: str, point: tuple[int, ...]) -> bool:
        letters = "".join(w[i] for i in point)
        cell = self.sets[letters]
        if isinstance(cell, UPSet):
            return point[0] in cell
        return cell.contains(point, len(w))

    def evaluate(self, w: str, assignment: Mapping[str, int]) -> bool:
        return self.holds(w, tuple(assignment[v] for v in self.variables))


def _default_vars(f: Formula, k: int) -> tuple[str, ...]:
    wanted = tuple(f"x{i + 1}" for i in range(k))
    free = f.free_vars()
    if free <= set(wanted):
        return wanted
    if len(free) <= k:
        ordered = sorted(free, key=lambda v: (len(v), v))
        return tuple(ordered) + tuple(v for v in wanted if v not in free)[: k - len(ordered)]
    raise FormulaError(f"formula has {len(free)} free variables, more than k={k}")


def normal_form(
    qf: Formula,
    k: int,
    alphabet: Alphabet,
    registry: PredRegistry | None = None,
    variables: Iterable[str] | None = None,
) -> NormalForm:
    """Rewrite a quantifier-free formula as one set of position tuples per letter tuple.

    For each letter tuple the letter atoms become truth constants and the
    numerical atoms become sets of k-tuples; the remaining Boolean
    combination of sets is simplified.  For k = 1 every set is reduced to an
    ultimately periodic subset of N.
    """
    if not is_quantifier_free(qf):
        raise FormulaError("normal_form needs a quantifier-free formula")
    registry = registry if registry is not None else PredRegistry()
    variables = tuple(variables) if variables is not None else _default_vars(qf, k)
    if len(variables) != k:
        raise FormulaError(f"expected {k} variables, got {variables}")
    unknown = qf.free_vars() - set(variables)
    if unknown:
        raise FormulaError(f"variables {sorted(unknown)} are not among {variables}")
    index = {v: i for i, v in enumerate(variables)}
    sets: dict[str, UPSet | TupleSet] = {}
    for letters in alphabet.tuples(k):
        reduced = _reduce(qf, letters, index, k, registry)
        if reduced is True:
            spec: TupleSet = Everything(k)
        elif reduced is False:
            spec = Nothing(k)
        else:
            spec = reduced
        sets[letters] = spec.on_diagonal() if k == 1 else spec
    return NormalForm(variables, sets)


def _reduce(f: Formula, letters: str, index: Mapping[str, int], k: int, reg: PredRegistry):
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Letter):
        return letters[index[f.var]] == f.letter
    if isinstance(f, Pred):
        spec = reg[f.name].spec
        if not spec.uniform:
            raise NonUniformError(f"predicate {f.name} is not uniform and cannot be normalised")
        return Pullback(spec, tuple(index[v] for v in f.args), k)
    if isinstance(f, Not):
        inner = _reduce(f.arg, letters, index, k, reg)
        return (not inner) if isinstance(inner, bool) else Complement(inner)
    if isinstance(f, (And, Or)):
        absorbing = isinstance(f, Or)
        parts = []
        for a in f.args:
            r = _reduce(a, letters, index, k, reg)
            if r is absorbing:
                return absorbing
            if not isinstance(r, bool):
                parts.append(r)
        if not parts:
            return not absorbing
        if len(parts) == 1:
            return parts[0]
        return Union(tuple(parts)) if absorbing else Intersection(tuple(parts))
    raise FormulaError(f"cannot normalise {f}")


def _cell_empty(cell: UPSet | TupleSet) -> bool:
    if isinstance(cell, UPSet):
        return cell.is_empty
    return isinstance(cell, Nothing)


def sentence_to_generators(phi: Formula, alphabet: Alphabet, registry: PredRegistry | None = None) -> Formula:
    """Replace every quantifier block by a union of generator languages.

    Existential quantification commutes with the disjunction in the normal
    form, so ``E x. OR_t (t(x) & x in Q_t)`` becomes ``OR_t Gen(t, Q_t)``.
    """
    if isinstance(phi, Exists):
        nf = normal_form(phi.body, len(phi.vars), alphabet, registry, phi.vars)
        gens = [Gen(t, cell) for t, cell in nf.sets.items() if not _cell_empty(cell)]
        if not gens:
            return Const(False)
        return gens[0] if len(gens) == 1 else Or(tuple(gens))
    if isinstance(phi, Not):
        return Not(sentence_to_generators(phi.arg, alphabet, registry))
    if isinstance(phi, (And, Or)):
        return type(phi)(tuple(sentence_to_generators(a, alphabet, registry) for a in phi.args))
    if isinstance(phi, (Const, Gen)):
        return phi
    raise FormulaError(f"{phi} is not a sentence")


def generators(expr: Formula) -> list[Gen]:
    """Generator leaves of an expression, in order of first appearance."""
    out: list[Gen] = []

    def walk(f):
        if isinstance(f, Gen):
            if f not in out:
                out.append(f)
        elif isinstance(f, Not):
            walk(f.arg)
        elif isinstance(f, (And, Or)):
            for a in f.args:
                walk(a)

    walk(expr)
    return out

