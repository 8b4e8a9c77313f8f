"""Linear rows + congruences + one quadratic, and the group-equation decider."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Sequence

from ..config import SolverConfig
from ..malcev import MalcevCoord, evaluate_equation
from ..polynomial import IntPolynomial
from ..presentation import MalcevPresentation
from ..reducer import BranchBudgetError, ConstraintBranch, reduce_equation
from ..words import Equation
from . import quadratic as quad
from .congruence import ResidueBudgetError, enumerate_congruence_classes
from .linear import (
    AffineLattice,
    NoSolution,
    check_farkas,
    restrict_to_class,
    rows_to_matrix,
    solve_linear_system,
)
from .results import Certificate, DecisionResult, Sat, Unknown, Unsat


@dataclass
class IntegerSystem:
    unknowns: tuple[str, ...]
    linear: list[IntPolynomial] = field(default_factory=list)
    congruences: list[tuple[IntPolynomial, int]] = field(default_factory=list)
    quadratic: IntPolynomial = field(default_factory=IntPolynomial)

    @classmethod
    def from_branch(cls, branch: ConstraintBranch) -> IntegerSystem:
        return cls(branch.unknowns, branch.linear, branch.congruences, branch.quadratic)

    def holds(self, values: dict[str, int]) -> bool:
        if any(row.evaluate(values, default=0) for row in self.linear):
            return False
        if any(poly.evaluate(values, default=0) % m for poly, m in self.congruences):
            return False
        return self.quadratic.evaluate(values, default=0) == 0


def substitute_lattice(L: AffineLattice, Q: IntPolynomial, unknowns: Sequence[str],
                       params: Sequence[str] | None = None) -> IntPolynomial:
    """Rewrite ``Q`` in the parameters of ``y = offset + sum t_i basis_i``."""
    if params is None:
        params = [f"t{i + 1}" for i in range(L.dimension)]
    mapping = {}
    for j, name in enumerate(unknowns):
        expr = IntPolynomial.const(L.offset[j])
        for t, v in zip(params, L.basis):
            if v[j]:
                expr = expr + IntPolynomial.var(t, v[j])
        mapping[name] = expr
    return Q.substitute(mapping)


class _Deadline:
    def __init__(self, seconds: float | None):
        self.at = None if seconds is None else time.monotonic() + seconds

    def passed(self) -> bool:
        return self.at is not None and time.monotonic() > self.at


def _param_names(d: int) -> list[str]:
    return [f"t{i + 1}" for i in range(d)]


def decide_system(system: IntegerSystem, cfg: SolverConfig | None = None,
                  deadline: float | None = None) -> DecisionResult:
    """Linear solve, congruence classes, per-class substitution, quadratic decision.

    Sat witnesses assign every unknown.  ``deadline`` is a ``time.monotonic``
    timestamp.
    """
    cfg = cfg or SolverConfig()
    unknowns = list(system.unknowns)
    lattice = solve_linear_system(system.linear, unknowns)
    if isinstance(lattice, NoSolution):
        return Unsat(lattice.certificate)
    try:
        classes = enumerate_congruence_classes(system.congruences, budget=cfg.residue_budget)
    except ResidueBudgetError as exc:
        return Unknown(0, str(exc))
    if classes.is_empty():
        return Unsat(Certificate("empty-congruence", {"modulus": classes.modulus}))
    coords = [unknowns.index(u) for u in classes.unknowns]

    parts = []
    best_unknown: Unknown | None = None
    for residue in classes.classes:
        if deadline is not None and time.monotonic() > deadline:
            return Unknown(best_unknown.bound if best_unknown else 0, "time budget exhausted")
        sub = restrict_to_class(lattice, coords, residue, classes.modulus) if coords else lattice
        tag = {"residue": list(residue), "modulus": classes.modulus}
        if isinstance(sub, NoSolution):
            parts.append(Certificate("class", tag, (sub.certificate,)))
            continue
        params = _param_names(sub.dimension)
        Qt = substitute_lattice(sub, system.quadratic, unknowns, params)
        result = quad.decide_quadratic(Qt, cfg, deadline)
        if isinstance(result, Sat):
            t = [result.witness.get(name, 0) for name in params]
            y = sub.at(t)
            values = dict(zip(unknowns, y))
            if not system.holds(values):  # pragma: no cover - soundness guard
                raise AssertionError(f"pipeline witness {values} fails the system")
            return Sat(values)
        if isinstance(result, Unknown):
            if best_unknown is None or result.bound < best_unknown.bound:
                best_unknown = result
            continue
        parts.append(Certificate("class", dict(tag, lattice=sub.to_json()), (result.certificate,)))
    if best_unknown is not None:
        return best_unknown
    return Unsat(Certificate("all-classes-unsat", {"modulus": classes.modulus}, tuple(parts)))


def check_system_certificate(system: IntegerSystem, cert: Certificate) -> bool:
    """Re-check an Unsat certificate of :func:`decide_system`.

    Leaf certificates are verified from their own data; the surrounding
    structure (which classes exist, which lattice each one is) is recomputed
    and compared.
    """
    unknowns = list(system.unknowns)
    if cert.kind == "gcd-failure":
        M, b = rows_to_matrix(system.linear, unknowns)
        return check_farkas(cert) and cert.data["matrix"] == M and cert.data["rhs"] == b
    lattice = solve_linear_system(system.linear, unknowns)
    if isinstance(lattice, NoSolution):
        return False
    classes = enumerate_congruence_classes(system.congruences, budget=10**9)
    if cert.kind == "empty-congruence":
        return classes.is_empty()
    if cert.kind != "all-classes-unsat" or len(cert.parts) != len(classes.classes):
        return False
    coords = [unknowns.index(u) for u in classes.unknowns]
    for residue, part in zip(classes.classes, cert.parts):
        if part.data.get("residue") != list(residue):
            return False
        sub = restrict_to_class(lattice, coords, residue, classes.modulus) if coords else lattice
        (leaf,) = part.parts
        if isinstance(sub, NoSolution):
            if not check_farkas(leaf):
                return False
            continue
        Qt = substitute_lattice(sub, system.quadratic, unknowns, _param_names(sub.dimension))
        if not quad.check_certificate(leaf, Qt):
            return False
    return True


# ---------------------------------------------------------------------------
# group equations


@dataclass(frozen=True)
class EquationWitness:
    coords: dict[str, MalcevCoord]
    values: dict[str, int]
    branch: int


def decide_equation(eq: Equation, p: MalcevPresentation, cfg: SolverConfig | None = None) -> DecisionResult:
    """Decide one equation over the group presented by ``p``.

    Sat witnesses map each variable to its Mal'cev coordinates and are
    re-verified with :func:`~nilpeq.malcev.evaluate_equation` before return.
    """
    cfg = cfg or SolverConfig()
    deadline = _Deadline(cfg.time_budget).at
    try:
        branches = reduce_equation(eq, p, cfg.branch_budget)
    except BranchBudgetError as exc:
        return Unknown(0, str(exc))
    parts = []
    best_unknown: Unknown | None = None
    for idx, branch in enumerate(branches):
        if deadline is not None and time.monotonic() > deadline:
            return Unknown(best_unknown.bound if best_unknown else 0, "time budget exhausted")
        result = decide_system(IntegerSystem.from_branch(branch), cfg, deadline)
        if isinstance(result, Sat):
            coords = branch.coords(result.witness, p)
            if not evaluate_equation(eq, coords, p).is_identity():  # pragma: no cover
                raise AssertionError(f"witness {coords} does not satisfy {eq}")
            return Sat(EquationWitness(coords, dict(result.witness), idx))
        if isinstance(result, Unknown):
            if best_unknown is None or result.bound < best_unknown.bound:
                best_unknown = result
            continue
        data = {"branch": idx, "assignment": {v: {"B": list(B), "D": list(D)} for v, (B, D) in branch.assignment.items()}}
        parts.append(Certificate("branch", data, (result.certificate,)))
    if best_unknown is not None:
        return best_unknown
    return Unsat(Certificate("all-branches-unsat", {"branches": len(branches)}, tuple(parts)))


def check_equation_certificate(eq: Equation, p: MalcevPresentation, cert: Certificate,
                               branch_budget: int = 10**6) -> bool:
    if cert.kind != "all-branches-unsat":
        return False
    branches = reduce_equation(eq, p, branch_budget)
    if len(branches) != len(cert.parts):
        return False
    for branch, part in zip(branches, cert.parts):
        (inner,) = part.parts
        if not check_system_certificate(IntegerSystem.from_branch(branch), inner):
            return False
    return True
