import itertools
import random

from hypothesis import given, settings, strategies as st

from nilpeq.diophantine.linear import (
    AffineLattice,
    NoSolution,
    check_farkas,
    column_hermite,
    restrict_to_class,
    solve_linear_system,
    solve_matrix,
    xgcd,
)
from nilpeq.polynomial import IntPolynomial

Y = ["y1", "y2", "y3"]


def v(name, c=1):
    return IntPolynomial.var(name, c)


def test_parity_failure():
    sol = solve_linear_system([v("y1", 2) - 1], ["y1"])
    assert isinstance(sol, NoSolution)
    assert sol.certificate.kind == "gcd-failure"
    assert check_farkas(sol.certificate)


def test_one_row_two_unknowns():
    sol = solve_linear_system([v("y1") + v("y2") - 2], ["y1", "y2"])
    assert isinstance(sol, AffineLattice) and sol.dimension == 1
    # any offset on the line and any primitive direction describe the same set
    assert (1, 1) in sol and sol.basis[0] in {(1, -1), (-1, 1)}
    for a, b in itertools.product(range(-5, 6), repeat=2):
        assert ((a, b) in sol) == (a + b == 2)


def test_empty_system_is_everything():
    assert solve_linear_system([], ["y1", "y2"]) == AffineLattice.full(2)


def test_rational_infeasibility_certificate():
    sol = solve_linear_system([v("y1") + v("y2") - 1, v("y1") + v("y2") - 2], ["y1", "y2"])
    assert isinstance(sol, NoSolution) and check_farkas(sol.certificate)


def test_xgcd():
    rng = random.Random(0)
    for _ in range(500):
        a, b = rng.randint(-99, 99), rng.randint(-99, 99)
        g, x, y = xgcd(a, b)
        assert g >= 0 and a * x + b * y == g
        assert g == __import__("math").gcd(a, b)


def test_hermite_shape():
    rng = random.Random(1)
    for _ in range(200):
        rows, cols = rng.randint(1, 3), rng.randint(1, 4)
        M = [[rng.randint(-5, 5) for _ in range(cols)] for _ in range(rows)]
        H, U, pivots = column_hermite(M, cols)
        MU = [[sum(M[i][k] * U[k][j] for k in range(cols)) for j in range(cols)] for i in range(rows)]
        assert MU == H
        for r, c in pivots:
            assert H[r][c] > 0 and all(H[r][j] == 0 for j in range(c + 1, cols))


def _brute(M, b, m, bound=6):
    return {y for y in itertools.product(range(-bound, bound + 1), repeat=m)
            if all(sum(r[j] * y[j] for j in range(m)) == bi for r, bi in zip(M, b))}


@settings(max_examples=150, deadline=None)
@given(st.data())
def test_lattice_membership_matches_brute_force(data):
    m = data.draw(st.integers(1, 3))
    rows = data.draw(st.integers(0, 3))
    M = [[data.draw(st.integers(-4, 4)) for _ in range(m)] for _ in range(rows)]
    b = [data.draw(st.integers(-6, 6)) for _ in range(rows)]
    sol = solve_matrix(M, b, m)
    truth = _brute(M, b, m)
    if isinstance(sol, NoSolution):
        assert not truth
        assert check_farkas(sol.certificate)
        return
    for y in itertools.product(range(-6, 7), repeat=m):
        assert (y in sol) == (y in truth)


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_restrict_to_class(data):
    m = data.draw(st.integers(1, 3))
    M = [[data.draw(st.integers(-3, 3)) for _ in range(m)]]
    b = [data.draw(st.integers(-3, 3))]
    L = solve_matrix(M, b, m)
    if isinstance(L, NoSolution):
        return
    modulus = data.draw(st.integers(2, 4))
    j = data.draw(st.integers(0, m - 1))
    t = data.draw(st.integers(0, modulus - 1))
    sub = restrict_to_class(L, [j], [t], modulus)
    for y in itertools.product(range(-5, 6), repeat=m):
        expected = y in L and y[j] % modulus == t
        got = not isinstance(sub, NoSolution) and y in sub
        assert got == expected
