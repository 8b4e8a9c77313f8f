"""Integer constraint solving and the equation decision pipeline."""

from .congruence import ResidueBudgetError, ResidueClassSet, enumerate_congruence_classes
from .linear import AffineLattice, NoSolution, check_farkas, restrict_to_class, solve_linear_system
from .pipeline import (
    EquationWitness,
    IntegerSystem,
    check_equation_certificate,
    check_system_certificate,
    decide_equation,
    decide_system,
    substitute_lattice,
)
from .quadratic import check_certificate, decide_quadratic
from .results import Certificate, DecisionResult, Sat, Unknown, Unsat

__all__ = [
    "AffineLattice", "Certificate", "DecisionResult", "EquationWitness", "IntegerSystem",
    "NoSolution", "ResidueBudgetError", "ResidueClassSet", "Sat", "Unknown", "Unsat",
    "check_certificate", "check_equation_certificate", "check_farkas", "check_system_certificate",
    "decide_equation", "decide_quadratic", "decide_system", "enumerate_congruence_classes",
    "restrict_to_class", "solve_linear_system", "substitute_lattice",
]
