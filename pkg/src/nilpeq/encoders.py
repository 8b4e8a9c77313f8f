"""Quadratic Diophantine systems as equations in free nilpotent groups.

Two encodings, both with ``a = a1`` and ``b = a2``:

* two-step, over N(2, q): ``x_j`` becomes a pair ``y_j = a^x_j``,
  ``yp_j = b^x_j``.  Since ``[a^u, b^v] = [a, b]^(u v)``, every term of the
  polynomial is a power of the central ``[a, b]``.  Three auxiliary
  equations per variable force every solution to have that shape.
* higher-step, over N(p, q) with p >= 3: with ``R = [a, b, ..., b]`` of
  weight ``p - 2``, the weight-``p`` commutators ``[R, u, v]`` are
  bilinear in ``u, v``, so ``y_j = b^x_j`` turns the polynomial into a
  power of ``[R, b, b]``.  No auxiliary equations are needed.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Mapping, Sequence

from .oracles.magnus import FreeNilpotentSpec, TruncatedFreePoly, magnus_check_equation, magnus_eval_word
from .words import IDENTITY, Equation, EquationSystem, Word, comm, gen, var


class EncodingError(ValueError):
    pass


class DiophSyntaxError(ValueError):
    pass


@dataclass(frozen=True)
class DiophEquation:
    """``alpha + sum beta_j x_j + sum gamma_jk x_j x_k = 0``."""

    alpha: int
    beta: tuple[int, ...]
    gamma: tuple[tuple[int, ...], ...]

    def evaluate(self, x: Sequence[int]) -> int:
        n = len(self.beta)
        total = self.alpha + sum(b * xi for b, xi in zip(self.beta, x))
        for j in range(n):
            for k in range(n):
                if self.gamma[j][k]:
                    total += self.gamma[j][k] * x[j] * x[k]
        return total

    def __str__(self) -> str:
        terms = []
        n = len(self.beta)
        for j in range(n):
            for k in range(n):
                g = self.gamma[j][k]
                if g:
                    mono = f"x{j + 1}^2" if j == k else f"x{j + 1}*x{k + 1}"
                    terms.append((g, mono))
        terms += [(b, f"x{j + 1}") for j, b in enumerate(self.beta) if b]
        if self.alpha:
            terms.append((self.alpha, ""))
        if not terms:
            return "0"
        out = []
        for i, (c, mono) in enumerate(terms):
            sign = "-" if c < 0 else ("" if i == 0 else "+")
            mag = abs(c)
            body = str(mag) if not mono else (mono if mag == 1 else f"{mag}*{mono}")
            out.append(f"{sign}{body}" if i == 0 else f"{sign} {body}")
        return " ".join(out)


@dataclass(frozen=True)
class DiophSystem:
    n: int
    equations: tuple[DiophEquation, ...] = ()

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("a Diophantine system needs at least one variable")
        for eq in self.equations:
            if len(eq.beta) != self.n or len(eq.gamma) != self.n or any(len(r) != self.n for r in eq.gamma):
                raise ValueError(f"coefficient shapes do not match n = {self.n}")

    def evaluate(self, x: Sequence[int]) -> list[int]:
        return [eq.evaluate(x) for eq in self.equations]

    def is_solution(self, x: Sequence[int]) -> bool:
        return not any(self.evaluate(x))

    @classmethod
    def build(cls, n: int, equations: Sequence[tuple[int, Sequence[int], Sequence[Sequence[int]]]]) -> DiophSystem:
        return cls(n, tuple(DiophEquation(a, tuple(b), tuple(tuple(r) for r in g)) for a, b, g in equations))

    def to_json(self) -> dict:
        return {
            "variables": self.n,
            "equations": [
                {"alpha": eq.alpha, "beta": list(eq.beta), "gamma": [list(r) for r in eq.gamma]}
                for eq in self.equations
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> DiophSystem:
        try:
            n = int(data["variables"])
            eqs = [(int(e.get("alpha", 0)),
                    [int(v) for v in e.get("beta", [0] * n)],
                    [[int(v) for v in r] for r in e.get("gamma", [[0] * n for _ in range(n)])])
                   for e in data.get("equations", [])]
            return cls.build(n, eqs)
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise DiophSyntaxError(f"malformed Diophantine system: {exc}") from exc

    def __str__(self) -> str:
        return format_dioph(self)


# ---------------------------------------------------------------------------
# text form: one polynomial per line, "= 0" optional, "n = 3" fixes the count

_MONO = re.compile(r"x([1-9][0-9]*)(?:\^([0-9]+))?")


def _parse_terms(text: str, lineno: int) -> list[tuple[int, tuple[int, ...]]]:
    terms = []
    for raw in text.replace("-", "+-").split("+"):
        term = raw.strip()
        if not term:
            continue
        sign = 1
        if term.startswith("-"):
            sign, term = -1, term[1:].strip()
            if not term:
                raise DiophSyntaxError(f"line {lineno}: dangling '-'")
        coeff, idx = sign, []
        for part in term.split("*"):
            part = part.strip()
            if part.isdigit():
                coeff *= int(part)
                continue
            m = _MONO.fullmatch(part)
            if m is None:
                raise DiophSyntaxError(f"line {lineno}: cannot read {part!r}")
            idx += [int(m.group(1)) - 1] * int(m.group(2) or 1)
        if len(idx) > 2:
            raise DiophSyntaxError(f"line {lineno}: degree above 2 in {raw.strip()!r}")
        terms.append((coeff, tuple(idx)))
    return terms


def parse_dioph(text: str) -> DiophSystem:
    """JSON (``{"variables": n, "equations": [{alpha, beta, gamma}]}``) or polynomial lines."""
    if text.lstrip().startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DiophSyntaxError(f"invalid JSON: {exc}") from exc
        return DiophSystem.from_json(data)
    declared = None
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.fullmatch(r"n\s*=\s*([0-9]+)", line)
        if m:
            declared = int(m.group(1))
            continue
        sides = line.split("=")
        if len(sides) > 2:
            raise DiophSyntaxError(f"line {lineno}: more than one '='")
        lhs = _parse_terms(sides[0], lineno)
        rhs = _parse_terms(sides[1], lineno) if len(sides) == 2 else []
        rows.append(lhs + [(-c, idx) for c, idx in rhs])
    n = max([i + 1 for row in rows for _, idx in row for i in idx] + [declared or 1])
    if declared is not None and declared < n:
        raise DiophSyntaxError(f"n = {declared} but x{n} is used")
    eqs = []
    for row in rows:
        alpha, beta, gamma = 0, [0] * n, [[0] * n for _ in range(n)]
        for c, idx in row:
            if not idx:
                alpha += c
            elif len(idx) == 1:
                beta[idx[0]] += c
            else:
                gamma[idx[0]][idx[1]] += c
        eqs.append((alpha, beta, gamma))
    return DiophSystem.build(n, eqs)


def format_dioph(system: DiophSystem) -> str:
    lines = [f"n = {system.n}"] + [f"{eq} = 0" for eq in system.equations]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# encodings

A = gen("a", 1)
B = gen("a", 2)


def y_name(j: int) -> str:
    return f"y{j + 1}"


def yp_name(j: int) -> str:
    return f"yp{j + 1}"


def _product(parts: Sequence[Word]) -> Word:
    out = IDENTITY
    for w in parts:
        out = out * w
    return out


def _main_word(eq: DiophEquation, unit: Word, linear, quadratic) -> Word:
    n = len(eq.beta)
    parts = []
    if eq.alpha:
        parts.append(_pow(unit, eq.alpha))
    parts += [_pow(linear(j), b) for j, b in enumerate(eq.beta) if b]
    parts += [_pow(quadratic(j, k), eq.gamma[j][k]) for j in range(n) for k in range(n) if eq.gamma[j][k]]
    return _product(parts)


def _pow(w: Word, e: int) -> Word:
    """Raise a single-commutator word to ``e`` by adjusting its exponent."""
    (f,) = w.factors
    return Word((type(f)(f.left, f.right, f.exponent * e),))


def encode_two_step(system: DiophSystem, q: int = 2) -> EquationSystem:
    """Equations over N(2, q) whose solutions correspond to those of ``system``."""
    if q < 2:
        raise EncodingError("the two-step encoding needs rank q >= 2")
    y = [var(y_name(j)) for j in range(system.n)]
    yp = [var(yp_name(j)) for j in range(system.n)]
    equations = [
        Equation(_main_word(eq, comm(A, B), lambda j: comm(A, yp[j]), lambda j, k: comm(y[j], yp[k])))
        for eq in system.equations
    ]
    for j in range(system.n):
        equations += [
            Equation(comm(A, y[j])),
            Equation(comm(B, yp[j])),
            Equation(comm(B, y[j]), comm(yp[j], A)),
        ]
    names = tuple(name for j in range(system.n) for name in (y_name(j), yp_name(j)))
    return EquationSystem(tuple(equations), names)


def higher_step_base(p: int) -> Word:
    """``R = [a, b, ..., b]`` with ``p - 3`` copies of ``b`` (so ``R = a`` for p = 3)."""
    if p == 3:
        return A
    return comm(A, *([B] * (p - 3)))


def encode_higher_step(system: DiophSystem, spec: FreeNilpotentSpec) -> EquationSystem:
    """Equations over N(p, q), p >= 3, one per polynomial and no auxiliaries."""
    if spec.step < 3:
        raise EncodingError("the higher-step encoding needs step p >= 3")
    R = higher_step_base(spec.step)
    y = [var(y_name(j)) for j in range(system.n)]
    equations = [
        Equation(_main_word(eq, comm(R, B, B), lambda j: comm(R, B, y[j]), lambda j, k: comm(R, y[j], y[k])))
        for eq in system.equations
    ]
    return EquationSystem(tuple(equations), tuple(y_name(j) for j in range(system.n)))


def encode(system: DiophSystem, spec: FreeNilpotentSpec, target: str) -> EquationSystem:
    if target == "two-step":
        if spec.step != 2:
            raise EncodingError("the two-step encoding targets step 2")
        return encode_two_step(system, spec.rank)
    if target == "higher-step":
        return encode_higher_step(system, spec)
    raise EncodingError(f"unknown target {target!r}")


# ---------------------------------------------------------------------------
# solution translation


def lift_solution(x: Sequence[int], target: str = "two-step") -> dict[str, Word]:
    """Group assignment induced by an integer solution."""
    if target == "two-step":
        out = {}
        for j, xj in enumerate(x):
            out[y_name(j)] = gen("a", 1, xj) if xj else IDENTITY
            out[yp_name(j)] = gen("a", 2, xj) if xj else IDENTITY
        return out
    if target == "higher-step":
        return {y_name(j): gen("a", 2, xj) if xj else IDENTITY for j, xj in enumerate(x)}
    raise EncodingError(f"unknown target {target!r}")


def auxiliary_holds(assignment: Mapping[str, Word | TruncatedFreePoly], j: int, spec: FreeNilpotentSpec) -> bool:
    y, yp = var(y_name(j)), var(yp_name(j))
    checks = [Equation(comm(A, y)), Equation(comm(B, yp)), Equation(comm(B, y), comm(yp, A))]
    return all(magnus_check_equation(eq, assignment, spec) for eq in checks)


def project_solution(assignment: Mapping[str, Word | TruncatedFreePoly], system: DiophSystem,
                     q: int = 2) -> tuple[int, ...]:
    """Integer vector of a solution of the two-step encoding.

    ``x_j`` is the exponent of ``a`` in ``y_j``.  The auxiliary equations are
    checked first; they are what makes this read-off meaningful.
    """
    spec = FreeNilpotentSpec(2, q)
    for j in range(system.n):
        for name in (y_name(j), yp_name(j)):
            if name not in assignment:
                raise EncodingError(f"no value for {name}")
        if not auxiliary_holds(assignment, j, spec):
            raise EncodingError(f"auxiliary equations for x{j + 1} fail")
    out = []
    for j in range(system.n):
        val = assignment[y_name(j)]
        if isinstance(val, Word):
            val = magnus_eval_word(val, spec)
        out.append(int(val.levels[1][0]))
    return tuple(out)


def check_encoding(encoded: EquationSystem, assignment, spec: FreeNilpotentSpec) -> list[bool]:
    """Truth of every encoded equation under ``assignment``, in the Magnus oracle."""
    return [magnus_check_equation(eq, assignment, spec) for eq in encoded.equations]
