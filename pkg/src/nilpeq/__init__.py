"""Equations in finitely generated 2-step nilpotent groups with rank-one commutator.

The main entry points are :func:`decide_equation` (Sat / Unsat / Unknown
with witnesses and checkable certificates), the Mal'cev arithmetic in
:mod:`nilpeq.malcev`, the reductions from quadratic Diophantine systems in
:mod:`nilpeq.encoders`, and the two oracles in :mod:`nilpeq.oracles`.
"""

from .config import SolverConfig
from .diophantine import Certificate, Sat, Unknown, Unsat, decide_equation
from .malcev import MalcevCoord, evaluate_word, multiply, inverse, satisfies
from .presentation import MalcevPresentation, heisenberg, parse_presentation
from .words import Equation, EquationSystem, Word, parse_equation, parse_system, parse_word

__all__ = [
    "Certificate", "Equation", "EquationSystem", "MalcevCoord", "MalcevPresentation", "Sat",
    "SolverConfig", "Unknown", "Unsat", "Word", "decide_equation", "evaluate_word", "heisenberg",
    "inverse", "multiply", "parse_equation", "parse_presentation", "parse_system", "parse_word",
    "satisfies",
]
