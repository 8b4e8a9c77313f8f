"""Partial decision procedure for one integer quadratic equation ``Q = 0``.

Backends, tried in order:

1. constant polynomial;
2. elimination of unknowns that occur only linearly: with ``g`` the gcd of
   their coefficients, solvable iff the rest vanishes mod ``g`` somewhere;
3. one unknown: discriminant analysis;
4. definite quadratic part: the zero set is bounded, so enumerate it;
5. small box search, then modular obstructions mod prime powers, then the
   full box search.  Only step 5 can end in Unknown.

Every Unsat carries a certificate that :func:`check_certificate` re-derives
from the data stored in it.
"""

from __future__ import annotations

import math
import time
from fractions import Fraction
from typing import Sequence

import numpy as np

from ..config import SolverConfig
from ..polynomial import IntPolynomial
from .congruence import residue_grid
from .linear import AffineLattice, solve_matrix
from .results import Certificate, DecisionResult, Sat, Unknown, Unsat

QUICK_RADIUS = 6
BISECTION_STEPS = 30


def zigzag(radius: int):
    """0, 1, -1, 2, -2, ... up to +-radius."""
    yield 0
    for r in range(1, radius + 1):
        yield r
        yield -r


def zigzag_key(v: int) -> int:
    return 2 * abs(v) - (v > 0)


# ---------------------------------------------------------------------------
# helpers


def _ceil_sqrt(x: Fraction | int) -> int:
    """Smallest integer >= sqrt(x) for x >= 0."""
    u = math.ceil(x)
    s = math.isqrt(u)
    return s if s * s >= u else s + 1


def _solve_one_row(coeffs: dict[str, int], target: int) -> dict[str, int]:
    """Some integer solution of ``sum coeffs[v] v = target`` (gcd must divide)."""
    names = list(coeffs)
    sol = solve_matrix([[coeffs[v] for v in names]], [target], len(names))
    assert isinstance(sol, AffineLattice)
    return dict(zip(names, sol.offset))


def _symmetric_matrix(Q: IntPolynomial, names: Sequence[str]) -> list[list[Fraction]]:
    k = len(names)
    A = [[Fraction(0)] * k for _ in range(k)]
    for i, u in enumerate(names):
        for j, v in enumerate(names):
            if i == j:
                A[i][i] = Fraction(Q.coefficient(u, u))
            else:
                A[i][j] = Fraction(Q.coefficient(u, v), 2)
    return A


def is_positive_definite(A: list[list[Fraction]]) -> bool:
    """Exact test: all pivots of symmetric Gaussian elimination are positive."""
    M = [row[:] for row in A]
    k = len(M)
    for i in range(k):
        if M[i][i] <= 0:
            return False
        for r in range(i + 1, k):
            f = M[r][i] / M[i][i]
            if f:
                for c in range(i, k):
                    M[r][c] -= f * M[i][c]
    return True


def eigenvalue_lower_bound(A: list[list[Fraction]]) -> Fraction | None:
    """A rational ``lam > 0`` with ``A - lam I`` positive definite, by bisection."""
    k = len(A)
    lo, hi = Fraction(0), min(A[i][i] for i in range(k))
    for _ in range(BISECTION_STEPS):
        mid = (lo + hi) / 2
        shifted = [[A[i][j] - (mid if i == j else 0) for j in range(k)] for i in range(k)]
        if is_positive_definite(shifted):
            lo = mid
        else:
            hi = mid
    return lo if lo > 0 else None


def definite_radius(Q: IntPolynomial, names: Sequence[str], lam: Fraction) -> int:
    """Bound on the Euclidean norm of real zeros of ``Q``, or -1 if there are none.

    Uses ``Q(t) >= lam |t|^2 - |b| |t| + c`` with ``b`` the linear part.
    """
    lin = Q.linear_part()
    beta = _ceil_sqrt(sum(lin.get(v, 0) ** 2 for v in names))
    disc = beta * beta - 4 * lam * Q.constant
    if disc < 0:
        return -1
    return math.floor((beta + _ceil_sqrt(disc)) / (2 * lam))


def _eval_grid(Q: IntPolynomial, names: Sequence[str], grid: np.ndarray, exact: bool) -> np.ndarray:
    if exact:
        grid = grid.astype(object)
    values = {v: grid[j] for j, v in enumerate(names)}
    if not exact:
        return Q.evaluate_array(values, grid.shape[1:])
    total = np.zeros(grid.shape[1:], dtype=object)
    for mono, coeff in Q.terms.items():
        term = np.full(grid.shape[1:], coeff, dtype=object)
        for v in mono:
            term = term * values[v]
        total = total + term
    return total


def _needs_exact(Q: IntPolynomial, radius: int) -> bool:
    bound = sum(abs(c) * max(radius, 1) ** len(m) for m, c in Q.terms.items())
    return bound >= 2**62


# ---------------------------------------------------------------------------
# box search


def box_search(Q: IntPolynomial, names: Sequence[str], radius: int) -> tuple[int, ...] | None:
    """First zero in the cube ``|t_i| <= radius``.

    Order: increasing l-infinity norm, then lexicographic with values
    ordered 0, 1, -1, 2, -2, ...
    """
    k = len(names)
    if k == 0:
        return () if Q.constant == 0 else None
    exact = _needs_exact(Q, radius)
    side = 2 * radius + 1
    best = None
    for grid in residue_grid(k, side):
        pts = grid - radius
        vals = _eval_grid(Q, names, pts, exact)
        hits = np.nonzero(vals == 0)[0]
        if len(hits) == 0:
            continue
        sub = pts[:, hits]
        norms = np.abs(sub).max(axis=0)
        keys = 2 * np.abs(sub) - (sub > 0)
        order = np.lexsort(tuple(keys[j] for j in range(k - 1, -1, -1)) + (norms,))
        cand = tuple(int(x) for x in sub[:, order[0]])
        ckey = (max(abs(x) for x in cand), tuple(zigzag_key(x) for x in cand))
        if best is None or ckey < best[0]:
            best = (ckey, cand)
    return None if best is None else best[1]


def box_radius(k: int, cfg: SolverConfig) -> int:
    """Largest radius whose cube fits ``cfg.box_budget``, capped by ``search_bound``."""
    if k == 0:
        return 0
    r = int((cfg.box_budget ** (1.0 / k) - 1) // 2)
    while (2 * (r + 1) + 1) ** k <= cfg.box_budget:
        r += 1
    while r > 0 and (2 * r + 1) ** k > cfg.box_budget:
        r -= 1
    return max(0, min(r, cfg.search_bound))


# ---------------------------------------------------------------------------
# backends


def _constant(Q: IntPolynomial) -> DecisionResult:
    if Q.constant == 0:
        return Sat({})
    return Unsat(Certificate("constant-nonzero", {"polynomial": Q.to_json(), "value": Q.constant}))


def _eliminate_linear(Q: IntPolynomial, cfg: SolverConfig) -> DecisionResult | None:
    quad_vars = Q.quadratic_variables()
    lin = {v: c for v, c in Q.linear_part().items() if v not in quad_vars}
    if not lin:
        return None
    g = math.gcd(*lin.values())
    rest = Q - IntPolynomial({(v,): c for v, c in lin.items()})
    rest_names = list(rest.variables)
    values: dict[str, int] = {}
    if rest_names and g > 1:
        if g ** len(rest_names) > cfg.box_budget:
            return None
        reduced = rest % g
        hit = None
        for grid in residue_grid(len(rest_names), g):
            vals = reduced.evaluate_array({v: grid[j] for j, v in enumerate(rest_names)}, grid.shape[1:]) % g
            idx = np.nonzero(vals == 0)[0]
            if len(idx):
                hit = tuple(int(grid[j, idx[0]]) for j in range(len(rest_names)))
                break
        if hit is None:
            return Unsat(Certificate("modular-obstruction", {"polynomial": Q.to_json(), "modulus": g}))
        values = dict(zip(rest_names, hit))
    else:
        values = {v: 0 for v in rest_names}
    target = -rest.evaluate(values)
    if target % g:
        return Unsat(Certificate("gcd-failure", {
            "reason": "linear",
            "matrix": [[lin[v] for v in lin]],
            "rhs": [target],
            "multipliers": [str(Fraction(1, g))],
        }))
    values.update(_solve_one_row(lin, target))
    return Sat(values)


def _univariate(Q: IntPolynomial) -> DecisionResult:
    (v,) = Q.variables
    a, b, c = Q.coefficient(v, v), Q.coefficient(v), Q.constant
    roots = _integer_roots(a, b, c)
    if roots:
        return Sat({v: min(roots, key=zigzag_key)})
    return Unsat(Certificate("discriminant", {"polynomial": Q.to_json(), "a": a, "b": b, "c": c}))


def _integer_roots(a: int, b: int, c: int) -> list[int]:
    if a == 0:
        if b == 0:
            return [0] if c == 0 else []
        return [-c // b] if c % b == 0 else []
    disc = b * b - 4 * a * c
    if disc < 0:
        return []
    s = math.isqrt(disc)
    if s * s != disc:
        return []
    return sorted({num // (2 * a) for num in (-b + s, -b - s) if num % (2 * a) == 0})


def _definite(Q: IntPolynomial, cfg: SolverConfig, deadline: float | None) -> DecisionResult | None:
    names = list(Q.variables)
    if Q.quadratic_variables() != set(names):
        return None
    A = _symmetric_matrix(Q, names)
    sign = 1
    if not is_positive_definite(A):
        A = [[-x for x in row] for row in A]
        if not is_positive_definite(A):
            return None
        sign = -1
    P = Q if sign == 1 else -Q
    lam = eigenvalue_lower_bound(A)
    if lam is None:
        return None
    radius = definite_radius(P, names, lam)
    cert = Certificate("definite-exhaustion", {
        "polynomial": Q.to_json(), "sign": sign, "lambda": str(lam), "radius": radius})
    if radius < 0:
        return Unsat(cert)
    budget = [cfg.box_budget]
    found = _definite_enumerate(P, names, lam, budget, deadline)
    if found is None:
        return Unsat(cert)
    if found is False:
        return None
    return Sat(dict(zip(names, found)))


def _definite_enumerate(P: IntPolynomial, names: list[str], lam: Fraction, budget: list[int],
                        deadline: float | None):
    """First zero of a positive definite ``P`` in zigzag-lex order.

    Returns the point, None if there is none, or False if the node budget
    ran out.  Principal submatrices keep ``lam`` as an eigenvalue bound.
    """
    if len(names) == 1:
        v = names[0]
        roots = _integer_roots(P.coefficient(v, v), P.coefficient(v), P.constant)
        return (min(roots, key=zigzag_key),) if roots else None
    radius = definite_radius(P, names, lam)
    if radius < 0:
        return None
    head, tail = names[0], names[1:]
    for value in zigzag(radius):
        budget[0] -= 1
        if budget[0] < 0 or (deadline is not None and time.monotonic() > deadline):
            return False
        sub = P.substitute({head: value})
        found = _definite_enumerate(sub, tail, lam, budget, deadline)
        if found is False:
            return False
        if found is not None:
            return (value,) + found
    return None


def prime_powers(limit: int):
    for m in range(2, limit + 1):
        p = next(d for d in range(2, m + 1) if m % d == 0)
        q = m
        while q % p == 0:
            q //= p
        if q == 1:
            yield m


def has_root_mod(Q: IntPolynomial, m: int, budget: int) -> bool | None:
    """Whether ``Q = 0 (mod m)`` is solvable; None if enumeration is over budget."""
    R = Q % m
    names = list(R.variables)
    if m ** len(names) > budget:
        return None
    for grid in residue_grid(len(names), m):
        vals = R.evaluate_array({v: grid[j] for j, v in enumerate(names)}, grid.shape[1:]) % m
        if np.any(vals == 0):
            return True
    return False


def modular_obstruction(Q: IntPolynomial, cfg: SolverConfig) -> int | None:
    for m in prime_powers(cfg.modulus_limit):
        if has_root_mod(Q, m, cfg.box_budget) is False:
            return m
    return None


# ---------------------------------------------------------------------------
# entry point


def decide_quadratic(Q: IntPolynomial, cfg: SolverConfig | None = None,
                     deadline: float | None = None) -> DecisionResult:
    """Decide ``Q = 0`` over the integers.  Witnesses cover ``Q.variables``."""
    cfg = cfg or SolverConfig()
    if Q.degree > 2:
        raise ValueError("polynomial has degree > 2")
    names = list(Q.variables)
    if not names:
        return _constant(Q)
    result = _eliminate_linear(Q, cfg)
    if result is None and len(names) == 1:
        result = _univariate(Q)
    if result is None:
        result = _definite(Q, cfg, deadline)
    if result is not None:
        return _finish(Q, result)

    radius = box_radius(len(names), cfg)
    quick = min(radius, QUICK_RADIUS)
    hit = box_search(Q, names, quick)
    if hit is not None:
        return _finish(Q, Sat(dict(zip(names, hit))))
    m = modular_obstruction(Q, cfg)
    if m is not None:
        return Unsat(Certificate("modular-obstruction", {"polynomial": Q.to_json(), "modulus": m}))
    if deadline is not None and time.monotonic() > deadline:
        return Unknown(quick, "time budget exhausted")
    if radius > quick:
        hit = box_search(Q, names, radius)
        if hit is not None:
            return _finish(Q, Sat(dict(zip(names, hit))))
    return Unknown(radius, "indefinite quadratic: no witness in search box and no obstruction found")


def _finish(Q: IntPolynomial, result: DecisionResult) -> DecisionResult:
    if isinstance(result, Sat):
        witness = {v: int(result.witness.get(v, 0)) for v in Q.variables}
        if Q.evaluate(witness) != 0:  # pragma: no cover - guarded by tests
            raise AssertionError(f"witness {witness} does not satisfy {Q}")
        return Sat(witness)
    return result


# ---------------------------------------------------------------------------
# certificate checking


def check_certificate(cert: Certificate, Q: IntPolynomial | None = None) -> bool:
    """Independently re-derive a leaf Unsat certificate for ``Q = 0``.

    If ``Q`` is given it must match the polynomial recorded in the certificate.
    """
    from .linear import check_farkas

    if cert.kind == "gcd-failure":
        return check_farkas(cert)
    poly = IntPolynomial.from_json(cert.data["polynomial"])
    if Q is not None and poly != Q:
        return False
    if cert.kind == "constant-nonzero":
        return poly.is_constant() and poly.constant != 0
    if cert.kind == "modular-obstruction":
        m = int(cert.data["modulus"])
        return has_root_mod(poly, m, budget=10**8) is False
    if cert.kind == "discriminant":
        names = poly.variables
        if len(names) != 1:
            return False
        v = names[0]
        return not _integer_roots(poly.coefficient(v, v), poly.coefficient(v), poly.constant)
    if cert.kind == "definite-exhaustion":
        sign = int(cert.data["sign"])
        lam = Fraction(cert.data["lambda"])
        P = poly if sign == 1 else -poly
        names = list(P.variables)
        if lam <= 0 or P.quadratic_variables() != set(names):
            return False
        A = _symmetric_matrix(P, names)
        shifted = [[A[i][j] - (lam if i == j else 0) for j in range(len(names))] for i in range(len(names))]
        if not is_positive_definite(shifted):
            return False
        if definite_radius(P, names, lam) != int(cert.data["radius"]):
            return False
        return _definite_enumerate(P, names, lam, [10**9], None) is None
    return False
