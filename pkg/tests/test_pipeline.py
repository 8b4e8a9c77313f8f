import itertools
import random

import pytest

from nilpeq.config import SolverConfig
from nilpeq.diophantine import decide_equation
from nilpeq.diophantine.linear import AffineLattice
from nilpeq.diophantine.pipeline import (
    IntegerSystem,
    check_equation_certificate,
    check_system_certificate,
    decide_system,
    substitute_lattice,
)
from nilpeq.diophantine.results import Sat, Unknown, Unsat
from nilpeq.malcev import MalcevCoord, evaluate_equation
from nilpeq.oracles.search import bounded_search
from nilpeq.polynomial import IntPolynomial
from nilpeq.words import parse_equation

from helpers import H, TORSION_1, brute_force_integer, random_poly

y1, y2 = IntPolynomial.var("y1"), IntPolynomial.var("y2")


def test_substitute_line():
    L = AffineLattice((1, 1), ((1, -1),))
    Qt = substitute_lattice(L, y1 * y2 - 1, ["y1", "y2"])
    assert Qt == IntPolynomial({("t1", "t1"): -1})
    for t in range(-3, 4):
        assert Qt.evaluate({"t1": t}) == (1 + t) * (1 - t) - 1


def test_substitute_full_and_point():
    Q = y1 * y2 + y1 * 3 - 2
    assert substitute_lattice(AffineLattice.full(2), Q, ["y1", "y2"]) == Q.rename({"y1": "t1", "y2": "t2"})
    assert substitute_lattice(AffineLattice.point((3,)), y1 * y1 - 9, ["y1"]).is_zero()


def test_commutator_with_c():
    result = decide_equation(parse_equation("[a1,x] = c"), H)
    assert isinstance(result, Sat)
    assert result.witness.coords["x"] == MalcevCoord((0, 1), (), 0, ())


def test_square_is_a1():
    eq = parse_equation("x^2 = a1")
    result = decide_equation(eq, H)
    assert isinstance(result, Unsat)
    (leaf,) = list(result.certificate.leaves())
    assert leaf.kind == "gcd-failure"
    assert check_equation_certificate(eq, H, result.certificate)


def test_commutator_of_two_variables():
    eq = parse_equation("[x,y] = c")
    result = decide_equation(eq, H)
    assert isinstance(result, Sat)
    assert evaluate_equation(eq, result.witness.coords, H).is_identity()


def test_torsion_equations():
    for text in ["x^2 = b1", "[a1,x] = d1", "x^2 = c", "b1 = 1"]:
        eq = parse_equation(text)
        result = decide_equation(eq, TORSION_1)
        found = bounded_search(eq, TORSION_1, 3)
        if isinstance(result, Sat):
            assert evaluate_equation(eq, result.witness.coords, TORSION_1).is_identity()
        else:
            assert isinstance(result, Unsat) and found is None
            assert check_equation_certificate(eq, TORSION_1, result.certificate)


def test_branch_budget_is_unknown():
    result = decide_equation(parse_equation("x*y*z = b1"), TORSION_1, SolverConfig(branch_budget=5))
    assert isinstance(result, Unknown) and "budget" in result.reason


def test_certificate_rejects_other_equation():
    cert = decide_equation(parse_equation("x^2 = a1"), H).certificate
    assert not check_equation_certificate(parse_equation("x^2 = a1^3*a2"), H, cert)


def _random_system(rng):
    m = rng.randint(1, 4)
    names = [f"y{i + 1}" for i in range(m)]
    linear = [random_poly(rng, names, 1) for _ in range(rng.randint(0, 3))]
    congruences = [(random_poly(rng, names, 2), rng.randint(2, 4)) for _ in range(rng.randint(0, 2))]
    quadratic = random_poly(rng, names, 2)
    return IntegerSystem(tuple(names), linear, congruences, quadratic)


def test_pipeline_agrees_with_exhaustion():
    rng = random.Random(17)
    cfg = SolverConfig(box_budget=20_000)
    for _ in range(80):
        system = _random_system(rng)
        result = decide_system(system, cfg)
        if isinstance(result, Sat):
            assert system.holds(result.witness)
        elif isinstance(result, Unsat):
            assert brute_force_integer(system, 6) is None
            assert check_system_certificate(system, result.certificate)
