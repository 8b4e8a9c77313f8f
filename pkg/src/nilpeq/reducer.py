"""Collect one group equation into integer constraint branches.

Each variable ``x`` gets integer unknowns ``x.A1 .. x.An`` and ``x.C``; its
torsion coordinates (B and D) are enumerated.  Running the multiplication
law with these symbolic entries yields, for every torsion assignment,

* the a-coordinates: polynomials of degree <= 1 that must vanish,
* the b-coordinates: concrete residues (assignments where they are nonzero
  are dropped),
* the d-coordinates: polynomials that must vanish mod their order,
* the c-coordinate: a single polynomial of degree <= 2 that must vanish.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

from .malcev import MalcevCoord, raw_evaluate
from .polynomial import DegreeError, IntPolynomial
from .presentation import MalcevPresentation
from .words import Equation, Word


class BranchBudgetError(RuntimeError):
    def __init__(self, count: int, budget: int):
        super().__init__(f"{count} torsion branches exceed the budget of {budget}")
        self.count = count
        self.budget = budget


class CollectionError(RuntimeError):
    """Symbolic collection produced something a two-step law never should."""


def a_unknown(var: str, i: int) -> str:
    return f"{var}.A{i + 1}"


def c_unknown(var: str) -> str:
    return f"{var}.C"


def unknowns_for(variables, p: MalcevPresentation) -> tuple[str, ...]:
    out = []
    for v in variables:
        out += [a_unknown(v, i) for i in range(p.n)]
        out.append(c_unknown(v))
    return tuple(out)


@dataclass
class ConstraintBranch:
    assignment: dict[str, tuple[tuple[int, ...], tuple[int, ...]]]  # var -> (B, D)
    unknowns: tuple[str, ...]
    linear: list[IntPolynomial] = field(default_factory=list)
    congruences: list[tuple[IntPolynomial, int]] = field(default_factory=list)
    quadratic: IntPolynomial = field(default_factory=IntPolynomial)

    def coords(self, values: dict[str, int], p: MalcevPresentation) -> dict[str, MalcevCoord]:
        """Group assignment for integer values of the unknowns (missing ones are 0)."""
        out = {}
        for var, (B, D) in self.assignment.items():
            A = tuple(values.get(a_unknown(var, i), 0) for i in range(p.n))
            out[var] = MalcevCoord(A, B, values.get(c_unknown(var), 0), D)
        return out

    def holds(self, values: dict[str, int]) -> bool:
        if any(row.evaluate(values, default=0) != 0 for row in self.linear):
            return False
        if any(poly.evaluate(values, default=0) % m for poly, m in self.congruences):
            return False
        return self.quadratic.evaluate(values, default=0) == 0

    def to_json(self) -> dict:
        return {
            "assignment": {v: {"B": list(B), "D": list(D)} for v, (B, D) in self.assignment.items()},
            "unknowns": list(self.unknowns),
            "linear": [row.to_json() for row in self.linear],
            "congruences": [{"poly": poly.to_json(), "modulus": m} for poly, m in self.congruences],
            "quadratic": self.quadratic.to_json(),
        }

    def describe(self) -> str:
        parts = []
        for v, (B, D) in self.assignment.items():
            if B or D:
                parts.append(f"{v}: B={list(B)} D={list(D)}")
        lines = ["assignment: " + ("; ".join(parts) if parts else "(torsion-free)")]
        lines += [f"  linear:    {row} = 0" for row in self.linear]
        lines += [f"  congruent: {poly} = 0 (mod {m})" for poly, m in self.congruences]
        lines.append(f"  quadratic: {self.quadratic} = 0")
        return "\n".join(lines)


def symbolic_collect(eq: Equation | Word, assignment, p: MalcevPresentation,
                     variables=None) -> ConstraintBranch | None:
    """Collect ``eq`` for one torsion assignment.

    Returns None when the b-coordinates of the result are not all zero,
    i.e. the assignment cannot be extended to a solution.
    """
    word = eq.normalized() if isinstance(eq, Equation) else eq
    if variables is None:
        variables = word.variables()
    symbolic = {}
    for v in variables:
        B, D = assignment.get(v, ((0,) * p.r, (0,) * p.s))
        E = [IntPolynomial.var(a_unknown(v, i)) for i in range(p.n)] + list(B)
        symbolic[v] = (E, IntPolynomial.var(c_unknown(v)), list(D))
    try:
        E, C, D = raw_evaluate(p, word, symbolic)
    except DegreeError as exc:
        raise CollectionError(f"degree exceeded while collecting {word}") from exc
    if any(int(b) != 0 for b in E[p.n:]):
        return None
    linear = [IntPolynomial.lift(e) for e in E[: p.n]]
    quadratic = IntPolynomial.lift(C)
    if any(row.degree > 1 for row in linear):
        raise CollectionError("a-coordinate is not linear")
    congruences = []
    for d, kt in zip(D, p.k):
        poly = IntPolynomial.lift(d) % kt
        if not poly.is_zero():
            congruences.append((poly, kt))
    return ConstraintBranch(
        assignment={v: tuple(map(tuple, assignment.get(v, ((0,) * p.r, (0,) * p.s)))) for v in variables},
        unknowns=unknowns_for(variables, p),
        linear=[row for row in linear if not row.is_zero()],
        congruences=congruences,
        quadratic=quadratic,
    )


def torsion_choices(p: MalcevPresentation):
    """All (B, D) torsion coordinates of one variable, lexicographically."""
    ranges = [range(li) for li in p.l] + [range(kt) for kt in p.k]
    for combo in itertools.product(*ranges):
        yield tuple(combo[: p.r]), tuple(combo[p.r:])


def branch_count(variables, p: MalcevPresentation) -> int:
    per_var = math.prod(p.l) * math.prod(p.k)
    return per_var ** len(variables)


def reduce_equation(eq: Equation, p: MalcevPresentation, branch_budget: int = 10**6,
                    variables=None) -> list[ConstraintBranch]:
    """One branch per torsion assignment whose b-coordinates vanish.

    Assignments are enumerated lexicographically in (variable, coordinate);
    an equation with no surviving assignment yields an empty list.
    """
    if variables is None:
        variables = eq.variables()
    total = branch_count(variables, p)
    if total > branch_budget:
        raise BranchBudgetError(total, branch_budget)
    choices = list(torsion_choices(p))
    branches = []
    for combo in itertools.product(choices, repeat=len(variables)):
        assignment = dict(zip(variables, combo))
        branch = symbolic_collect(eq, assignment, p, variables)
        if branch is not None:
            branches.append(branch)
    return branches
