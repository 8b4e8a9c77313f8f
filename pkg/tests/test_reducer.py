import itertools
import random

import pytest

from helpers import H, LOOSE_TORSION, PRESENTATIONS, TORSION_1, random_coord, random_word
from nilpeq.malcev import MalcevCoord, evaluate_equation, evaluate_word, satisfies, to_word
from nilpeq.oracles.search import bounded_search
from nilpeq.polynomial import IntPolynomial
from nilpeq.reducer import BranchBudgetError, a_unknown, branch_count, c_unknown, reduce_equation
from nilpeq.words import Equation, Variable, Word, parse_equation

P, Q, R = a_unknown("x", 0), a_unknown("x", 1), c_unknown("x")


def poly(text_terms):
    return IntPolynomial(text_terms)


def _agrees_with_evaluation(eq, branch, p, span=2):
    """Branch polynomials equal the coordinates of lhs * rhs^-1 on a sample grid."""
    for A1, A2, C in itertools.product(range(-span, span + 1), repeat=3):
        values = {P: A1, Q: A2, R: C}
        coords = evaluate_equation(eq, {"x": MalcevCoord((A1, A2), (), C, ())}, p)
        rows = {row.evaluate(values, default=0) for row in branch.linear}
        assert rows <= set(coords.A) | {0} or not branch.linear
        assert branch.quadratic.evaluate(values, default=0) == coords.C


def test_commutator_with_constant():
    eq = parse_equation("[a1,x]*c^-1 = 1")
    (branch,) = reduce_equation(eq, H)
    assert branch.linear == []
    assert branch.quadratic == poly({(Q,): 1, (): -1})
    _agrees_with_evaluation(eq, branch, H)


def test_square_times_constant():
    eq = parse_equation("x^2*a1^-1 = 1")
    (branch,) = reduce_equation(eq, H)
    assert branch.linear == [poly({(P,): 2, (): -1}), poly({(Q,): 2})]
    # 2r - pq on the linear solution set q = 0; the full polynomial carries +2q
    assert branch.quadratic == poly({(R,): 2, (P, Q): -1, (Q,): 2})
    _agrees_with_evaluation(eq, branch, H)


def test_free_cancellation():
    (branch,) = reduce_equation(parse_equation("x*x^-1 = 1"), H)
    assert branch.linear == [] and branch.congruences == []
    assert branch.quadratic.is_zero()


def test_heisenberg_always_one_branch():
    rng = random.Random(1)
    for _ in range(50):
        eq = Equation(random_word(rng, ["x", "y"]), random_word(rng, ["x"]))
        assert len(reduce_equation(eq, H)) == 1


def test_loose_torsion_square():
    # the law run on an inconsistent presentation: both B-values survive
    eq = parse_equation("x^2 = a1^2*c")
    b0, b1 = reduce_equation(eq, LOOSE_TORSION)
    assert b0.assignment == {"x": ((0,), ())} and b1.assignment == {"x": ((1,), ())}
    assert b0.linear == [poly({(P,): 2, (): -2})]
    assert b0.quadratic == poly({(R,): 2, (): -1})
    assert b1.quadratic == poly({(R,): 2, (P,): -1, (): -1})
    x = {"x": MalcevCoord((1,), (1,), 1, ())}
    assert b1.holds({P: 1, R: 1}) and satisfies(eq, x, LOOSE_TORSION)
    assert bounded_search(eq, LOOSE_TORSION, 2) == x


def test_constant_torsion_equation_has_no_branch():
    # b1 != 1, so no torsion assignment clears the b-coordinate
    assert reduce_equation(parse_equation("b1 = 1"), TORSION_1) == []


def test_branch_budget():
    with pytest.raises(BranchBudgetError):
        reduce_equation(parse_equation("x*y*z = 1"), TORSION_1, branch_budget=10)
    assert branch_count(["x", "y"], TORSION_1) == 16


def test_congruences_use_d_orders():
    eq = parse_equation("[a1,x] = d1")
    branches = reduce_equation(eq, TORSION_1)
    assert branches
    for b in branches:
        assert all(m == 2 for _, m in b.congruences)


# -- properties -------------------------------------------------------------


def _equation_with_solution(rng, p, variables):
    """Random equation made solvable by choosing the right-hand side."""
    lhs = random_word(rng, variables, max_len=6, p=p)
    assignment = {v: random_coord(rng, p, 3) for v in variables}
    return Equation(lhs, to_word(evaluate_word(lhs, assignment, p))), assignment


@pytest.mark.parametrize("name", sorted(PRESENTATIONS))
def test_collection_is_sound_and_complete(name):
    p = PRESENTATIONS[name]
    rng = random.Random("reduce" + name)
    # torsion-2 has 72 torsion assignments per variable, so it gets one variable
    choices = [["x"]] if p.r + p.s > 2 else [["x"], ["x", "y"]]
    # 1050 (equation, assignment) pairs across the three presentations
    for _ in range(250 if p.r + p.s > 2 else 400):
        variables = rng.choice(choices)
        eq, assignment = _equation_with_solution(rng, p, variables)
        assert satisfies(eq, assignment, p)
        branches = reduce_equation(eq, p, variables=variables)
        key = {v: (g.B, g.D) for v, g in assignment.items()}
        matching = [b for b in branches if b.assignment == key]
        assert len(matching) == 1
        values = {}
        for v, g in assignment.items():
            values.update({a_unknown(v, i): a for i, a in enumerate(g.A)})
            values[c_unknown(v)] = g.C
        # completeness: the true solution satisfies its branch
        assert matching[0].holds(values)
        # soundness: integer points of any branch give solutions
        for b in rng.sample(branches, min(len(branches), 12)):
            for _ in range(5):
                pt = {u: rng.randint(-3, 3) for u in b.unknowns}
                if b.holds(pt):
                    assert satisfies(eq, b.coords(pt, p), p)


def test_branch_order_is_lexicographic():
    branches = reduce_equation(Equation(Word((Variable("x", 2), Variable("y", 2)))), TORSION_1)
    keys = [(b.assignment["x"], b.assignment["y"]) for b in branches]
    assert keys == sorted(keys)
