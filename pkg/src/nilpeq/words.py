"""Word and equation ASTs plus the textual DSL.

Grammar (whitespace-insensitive)::

    equation ::= word '=' word | word          (bare word means word = 1)
    word     ::= '1' | factor { '*' factor }
    factor   ::= atom [ '^' int ]
    atom     ::= gen | var | '1' | '(' word ')' | '[' word ',' word { ',' word } ']'
    gen      ::= ('a' | 'b' | 'd') posint | 'c'
    var      ::= letter { letter | digit }     (anything that is not a gen)

Commutators with more than two entries are left-normed:
``[u,v,w]`` is ``[[u,v],w]``.  The commutator convention is
``[u,v] = u^-1 v^-1 u v``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Union

MAX_NESTING = 200

_GEN_RE = re.compile(r"([abd])([1-9][0-9]*)|c")
_TOKEN_RE = re.compile(
    r"\s*(?:(?P<ident>[A-Za-z][A-Za-z0-9]*)|(?P<int>[0-9]+)|(?P<sym>[-*^()\[\],=]))"
)


class WordSyntaxError(ValueError):
    """Malformed word text; ``position`` is a 0-based character offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnknownGeneratorError(WordSyntaxError):
    pass


class UnknownVariableError(WordSyntaxError):
    pass


@dataclass(frozen=True)
class Generator:
    kind: str  # 'a', 'b', 'c' or 'd'
    index: int = 1
    exponent: int = 1


@dataclass(frozen=True)
class Variable:
    name: str
    exponent: int = 1


@dataclass(frozen=True)
class Commutator:
    left: Word
    right: Word
    exponent: int = 1


@dataclass(frozen=True)
class Grouped:
    inner: Word
    exponent: int = 1


Factor = Union[Generator, Variable, Commutator, Grouped]


@dataclass(frozen=True)
class Word:
    factors: tuple[Factor, ...] = ()

    def __iter__(self) -> Iterator[Factor]:
        return iter(self.factors)

    def __len__(self) -> int:
        return len(self.factors)

    def __mul__(self, other: Word) -> Word:
        return Word(self.factors + other.factors)

    def inverse(self) -> Word:
        return Word((Grouped(self, -1),)) if self.factors else self

    def variables(self) -> list[str]:
        """Variable names in order of first occurrence."""
        seen: dict[str, None] = {}
        for f in self.factors:
            if isinstance(f, Variable):
                seen.setdefault(f.name)
            elif isinstance(f, Commutator):
                for name in f.left.variables() + f.right.variables():
                    seen.setdefault(name)
            elif isinstance(f, Grouped):
                for name in f.inner.variables():
                    seen.setdefault(name)
        return list(seen)

    def __str__(self) -> str:
        return format_word(self)


IDENTITY = Word()


@dataclass(frozen=True)
class Equation:
    lhs: Word
    rhs: Word = IDENTITY

    def normalized(self) -> Word:
        """The single word ``lhs * rhs^-1`` whose triviality is the equation."""
        if not self.rhs.factors:
            return self.lhs
        return self.lhs * self.rhs.inverse()

    def variables(self) -> list[str]:
        out = self.lhs.variables()
        out += [v for v in self.rhs.variables() if v not in out]
        return out

    def __str__(self) -> str:
        return format_equation(self)


@dataclass(frozen=True)
class EquationSystem:
    equations: tuple[Equation, ...]
    variables: tuple[str, ...] = field(default=())

    def __post_init__(self):
        declared = set(self.variables)
        for eq in self.equations:
            missing = [v for v in eq.variables() if v not in declared]
            if missing:
                raise ValueError(f"undeclared variables {missing} in {eq}")

    @classmethod
    def of(cls, equations: Iterable[Equation]) -> EquationSystem:
        equations = tuple(equations)
        names: list[str] = []
        for eq in equations:
            names += [v for v in eq.variables() if v not in names]
        return cls(equations, tuple(names))


# ---------------------------------------------------------------------------
# helpers


def gen(kind: str, index: int = 1, exponent: int = 1) -> Word:
    return Word((Generator(kind, index, exponent),))


def var(name: str, exponent: int = 1) -> Word:
    return Word((Variable(name, exponent),))


def comm(*args: Word, exponent: int = 1) -> Word:
    """Left-normed commutator ``[w1, w2, ..., wk]`` as a one-factor word."""
    if len(args) < 2:
        raise ValueError("a commutator needs at least two entries")
    inner = Commutator(args[0], args[1])
    for w in args[2:]:
        inner = Commutator(Word((inner,)), w)
    if exponent != 1:
        inner = Commutator(inner.left, inner.right, exponent)
    return Word((inner,))


def power(w: Word, exponent: int) -> Word:
    if exponent == 1:
        return w
    return Word((Grouped(w, exponent),))


def strip_trivial(w: Word) -> Word:
    """Drop zero-exponent factors (recursively); the group value is unchanged."""
    out = []
    for f in w.factors:
        if f.exponent == 0:
            continue
        if isinstance(f, Commutator):
            f = Commutator(strip_trivial(f.left), strip_trivial(f.right), f.exponent)
        elif isinstance(f, Grouped):
            f = Grouped(strip_trivial(f.inner), f.exponent)
        out.append(f)
    return Word(tuple(out))


# ---------------------------------------------------------------------------
# formatting


def _fmt_exp(body: str, exponent: int) -> str:
    return body if exponent == 1 else f"{body}^{exponent}"


def format_factor(f: Factor) -> str:
    if isinstance(f, Generator):
        body = "c" if f.kind == "c" else f"{f.kind}{f.index}"
    elif isinstance(f, Variable):
        body = f.name
    elif isinstance(f, Commutator):
        body = f"[{format_word(f.left)},{format_word(f.right)}]"
    else:
        body = f"({format_word(f.inner)})"
    return _fmt_exp(body, f.exponent)


def format_word(w: Word) -> str:
    if not w.factors:
        return "1"
    return "*".join(format_factor(f) for f in w.factors)


def format_equation(eq: Equation) -> str:
    return f"{format_word(eq.lhs)} = {format_word(eq.rhs)}"


# ---------------------------------------------------------------------------
# parsing


def _generator_counts(presentation) -> dict[str, int] | None:
    if presentation is None:
        return None
    return presentation.generator_counts()


class _Parser:
    def __init__(self, text: str, presentation=None, variables=None):
        self.text = text
        self.tokens = list(self._tokenize(text))
        self.pos = 0
        self.counts = _generator_counts(presentation)
        self.variables = None if variables is None else set(variables)
        self.depth = 0

    @staticmethod
    def _tokenize(text: str):
        i = 0
        n = len(text)
        while i < n:
            m = _TOKEN_RE.match(text, i)
            if m is None or m.end() == i:
                j = i
                while j < n and text[j].isspace():
                    j += 1
                if j >= n:
                    return
                raise WordSyntaxError(f"unexpected character {text[j]!r}", j)
            kind = m.lastgroup
            yield kind, m.group(kind), m.start(kind)
            i = m.end()

    # token helpers
    def peek(self):
        if self.pos < len(self.tokens):
            return self.tokens[self.pos]
        return ("eof", "", len(self.text))

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expect(self, value: str):
        kind, val, at = self.take()
        if val != value or kind != "sym":
            found = "end of input" if kind == "eof" else repr(val)
            raise WordSyntaxError(f"expected {value!r}, found {found}", at)

    def at_sym(self, value: str) -> bool:
        kind, val, _ = self.peek()
        return kind == "sym" and val == value

    # grammar
    def equation(self) -> Equation:
        lhs = self.word()
        if self.at_sym("="):
            self.take()
            rhs = self.word()
        else:
            rhs = IDENTITY
        self.end()
        return Equation(lhs, rhs)

    def end(self):
        kind, val, at = self.peek()
        if kind != "eof":
            raise WordSyntaxError(f"unexpected {val!r}", at)

    def word(self) -> Word:
        self.depth += 1
        if self.depth > MAX_NESTING:
            raise WordSyntaxError("nesting too deep", self.peek()[2])
        factors = []
        f = self.factor()
        if f is not None:
            factors.append(f)
        while self.at_sym("*"):
            self.take()
            f = self.factor()
            if f is not None:
                factors.append(f)
        self.depth -= 1
        return Word(tuple(factors))

    def exponent(self) -> int:
        if not self.at_sym("^"):
            return 1
        self.take()
        sign = 1
        if self.at_sym("-"):
            self.take()
            sign = -1
        kind, val, at = self.take()
        if kind != "int":
            raise WordSyntaxError("expected integer exponent", at)
        return sign * int(val)

    def factor(self) -> Factor | None:
        kind, val, at = self.take()
        if kind == "int":
            if val != "1":
                raise WordSyntaxError(f"unexpected integer {val!r}", at)
            self.exponent()
            return None
        if kind == "ident":
            exp = self.exponent()
            m = _GEN_RE.fullmatch(val)
            if m is None:
                if self.variables is not None and val not in self.variables:
                    raise UnknownVariableError(f"unknown variable {val!r}", at)
                return Variable(val, exp)
            g = Generator("c", 1, exp) if val == "c" else Generator(m.group(1), int(m.group(2)), exp)
            if self.counts is not None and g.index > self.counts.get(g.kind, 0):
                raise UnknownGeneratorError(f"unknown generator {val!r}", at)
            return g
        if kind == "sym" and val == "(":
            inner = self.word()
            self.expect(")")
            return Grouped(inner, self.exponent())
        if kind == "sym" and val == "[":
            parts = [self.word()]
            self.expect(",")
            parts.append(self.word())
            while self.at_sym(","):
                self.take()
                parts.append(self.word())
            self.expect("]")
            exp = self.exponent()
            c = Commutator(parts[0], parts[1])
            for w in parts[2:]:
                c = Commutator(Word((c,)), w)
            return Commutator(c.left, c.right, exp)
        found = "end of input" if kind == "eof" else repr(val)
        raise WordSyntaxError(f"expected a factor, found {found}", at)


def parse_word(text: str, presentation=None, variables=None) -> Word:
    """Parse a word.

    ``presentation`` (anything with ``generator_counts()``) bounds generator
    indices; ``variables`` restricts the admissible variable names.
    """
    p = _Parser(text, presentation, variables)
    w = p.word()
    p.end()
    return w


def parse_equation(text: str, presentation=None, variables=None) -> Equation:
    return _Parser(text, presentation, variables).equation()


def parse_system(text: str, presentation=None, variables=None) -> EquationSystem:
    """One equation per non-blank line; ``#`` starts a comment.

    A line ``vars: x, y`` declares the variable order explicitly.
    """
    equations = []
    declared = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("vars:"):
            declared = [v.strip() for v in line[5:].split(",") if v.strip()]
            continue
        equations.append(parse_equation(line, presentation, variables))
    system = EquationSystem.of(equations)
    if declared is not None:
        system = EquationSystem(system.equations, tuple(declared))
    return system


def format_system(system: EquationSystem) -> str:
    lines = [f"vars: {', '.join(system.variables)}"]
    lines += [format_equation(eq) for eq in system.equations]
    return "\n".join(lines) + "\n"
