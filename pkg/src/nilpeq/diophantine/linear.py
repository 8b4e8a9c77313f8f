"""Integer linear systems via a column Hermite form.

``M U = H`` with ``U`` unimodular and ``H`` in lower column-echelon form
turns ``M y = b`` into the triangular system ``H z = b`` with ``y = U z``.
The columns of ``U`` past the rank span the integer kernel.

Infeasibility is certified by a rational row vector ``lam`` with
``lam M`` integral and ``lam b`` not an integer: no integer ``y`` can then
satisfy ``M y = b``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ..polynomial import IntPolynomial
from .results import Certificate

Matrix = list[list[int]]


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """``(g, x, y)`` with ``a x + b y = g = gcd(a, b) >= 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


@dataclass(frozen=True)
class AffineLattice:
    offset: tuple[int, ...]
    basis: tuple[tuple[int, ...], ...]

    @property
    def ambient(self) -> int:
        return len(self.offset)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @classmethod
    def full(cls, m: int) -> AffineLattice:
        return cls((0,) * m, tuple(tuple(int(i == j) for j in range(m)) for i in range(m)))

    @classmethod
    def point(cls, y: Sequence[int]) -> AffineLattice:
        return cls(tuple(y), ())

    def at(self, params: Sequence[int]) -> tuple[int, ...]:
        out = list(self.offset)
        for c, v in zip(params, self.basis):
            if c:
                for i, vi in enumerate(v):
                    out[i] += c * vi
        return tuple(out)

    def __contains__(self, y: Sequence[int]) -> bool:
        diff = [yi - si for yi, si in zip(y, self.offset)]
        if not self.basis:
            return not any(diff)
        cols = [[v[i] for v in self.basis] for i in range(self.ambient)]
        return isinstance(solve_matrix(cols, diff), AffineLattice)

    def to_json(self) -> dict:
        return {"offset": list(self.offset), "basis": [list(v) for v in self.basis]}


@dataclass(frozen=True)
class NoSolution:
    certificate: Certificate


def column_hermite(M: Matrix, ncols: int | None = None):
    """Return ``(H, U, pivots)`` with ``M U = H``.

    ``pivots`` lists ``(row, col)`` positions; pivot ``c`` sits in column
    ``c``, is positive, and every entry right of it in its row is zero.
    """
    rows = len(M)
    cols = ncols if ncols is not None else (len(M[0]) if M else 0)
    H = [list(r) for r in M]
    U = [[int(i == j) for j in range(cols)] for i in range(cols)]

    def colop(c: int, j: int, x: int, y: int, u: int, v: int):
        # (col_c, col_j) <- (x col_c + y col_j, u col_c + v col_j)
        for mat in (H, U):
            for r in mat:
                a, b = r[c], r[j]
                r[c], r[j] = x * a + y * b, u * a + v * b

    pivots = []
    c = 0
    for i in range(rows):
        if c >= cols:
            break
        for j in range(c + 1, cols):
            b = H[i][j]
            if b == 0:
                continue
            a = H[i][c]
            g, x, y = xgcd(a, b)
            colop(c, j, x, y, -b // g, a // g)
        if H[i][c] == 0:
            # pivot entry vanished: look for any nonzero entry further right
            continue
        if H[i][c] < 0:
            for mat in (H, U):
                for r in mat:
                    r[c] = -r[c]
        pivots.append((i, c))
        c += 1
    return H, U, pivots


def _pivot_multipliers(H: Matrix, pivots, target: Sequence[Fraction]) -> list[Fraction]:
    """Solve ``mu^T H_P = target`` over the pivot rows (lower-triangular)."""
    k = len(target)
    mu = [Fraction(0)] * k
    for a in range(k - 1, -1, -1):
        acc = Fraction(target[a])
        for a2 in range(a + 1, k):
            acc -= H[pivots[a2][0]][a] * mu[a2]
        mu[a] = acc / H[pivots[a][0]][a]
    return mu


def solve_matrix(M: Matrix, b: Sequence[int], ncols: int | None = None) -> AffineLattice | NoSolution:
    """All integer ``y`` with ``M y = b``."""
    rows = len(M)
    cols = ncols if ncols is not None else (len(M[0]) if M else 0)
    H, U, pivots = column_hermite(M, cols)
    pivot_of_row = {r: c for r, c in pivots}
    z: list[int] = []
    for i in range(rows):
        residual = b[i] - sum(H[i][j] * z[j] for j in range(len(z)))
        if i in pivot_of_row:
            c = pivot_of_row[i]
            q, rem = divmod(residual, H[i][c])
            if rem:
                mu = _pivot_multipliers(H, pivots[: c + 1], [0] * c + [1])
                lam = [Fraction(0)] * rows
                for (r, _), m in zip(pivots, mu):
                    lam[r] = m
                return NoSolution(_farkas(lam, M, b, "gcd"))
            z.append(q)
        elif residual:
            c = len(z)
            mu = _pivot_multipliers(H, pivots[:c], H[i][:c])
            lam = [Fraction(0)] * rows
            lam[i] = Fraction(1)
            for (r, _), m in zip(pivots, mu):
                lam[r] -= m
            total = sum(l * bi for l, bi in zip(lam, b))
            lam = [l / (2 * total) for l in lam]
            return NoSolution(_farkas(lam, M, b, "rational"))
    rank = len(z)
    offset = tuple(sum(U[r][j] * z[j] for j in range(rank)) for r in range(cols))
    basis = tuple(tuple(U[r][j] for r in range(cols)) for j in range(rank, cols))
    return AffineLattice(offset, basis)


def _farkas(lam, M, b, reason: str) -> Certificate:
    return Certificate(
        "gcd-failure",
        {
            "reason": reason,
            "matrix": [list(r) for r in M],
            "rhs": list(b),
            "multipliers": [str(x) for x in lam],
        },
    )


def check_farkas(cert: Certificate) -> bool:
    """Re-verify a ``gcd-failure`` certificate from its own data."""
    M = cert.data["matrix"]
    b = cert.data["rhs"]
    lam = [Fraction(x) for x in cert.data["multipliers"]]
    cols = len(M[0]) if M else 0
    for j in range(cols):
        if (sum(l * r[j] for l, r in zip(lam, M))).denominator != 1:
            return False
    return (sum(l * bi for l, bi in zip(lam, b))).denominator != 1


def rows_to_matrix(rows: Sequence[IntPolynomial], unknowns: Sequence[str]) -> tuple[Matrix, list[int]]:
    index = {u: i for i, u in enumerate(unknowns)}
    M, b = [], []
    for row in rows:
        if row.degree > 1:
            raise ValueError(f"row {row} is not linear")
        vec = [0] * len(unknowns)
        for name, coeff in row.linear_part().items():
            vec[index[name]] = coeff
        M.append(vec)
        b.append(-row.constant)
    return M, b


def solve_linear_system(rows: Sequence[IntPolynomial], unknowns: Sequence[str]) -> AffineLattice | NoSolution:
    """Integer solutions of ``row = 0`` for every row, over ``unknowns``."""
    M, b = rows_to_matrix(rows, unknowns)
    return solve_matrix(M, b, len(unknowns))


def lattice_basis(generators: Sequence[Sequence[int]], dim: int) -> tuple[tuple[int, ...], ...]:
    """A basis of the lattice spanned by ``generators`` in Z^dim."""
    if not generators:
        return ()
    G = [[g[i] for g in generators] for i in range(dim)]
    H, _, pivots = column_hermite(G, len(generators))
    return tuple(tuple(H[i][c] for i in range(dim)) for _, c in pivots)


def restrict_to_class(L: AffineLattice, coords: Sequence[int], residue: Sequence[int],
                      modulus: int) -> AffineLattice | NoSolution:
    """Points of ``L`` whose ``coords`` entries are congruent to ``residue``.

    Solves ``V_J c + M w = t - s_J`` for the lattice parameters ``c`` and
    slack ``w``; the ``c``-projection of its solutions is the sub-lattice.
    """
    d = L.dimension
    J = list(coords)
    M, rhs = [], []
    for row_idx, (j, t) in enumerate(zip(J, residue)):
        row = [v[j] for v in L.basis] + [modulus if k == row_idx else 0 for k in range(len(J))]
        M.append(row)
        rhs.append(t - L.offset[j])
    sol = solve_matrix(M, rhs, d + len(J))
    if isinstance(sol, NoSolution):
        return sol
    c0 = sol.offset[:d]
    gens = [v[:d] for v in sol.basis if any(v[:d])]
    sub = lattice_basis(gens, d)
    offset = L.at(c0)
    basis = tuple(L.at(v) for v in sub)
    basis = tuple(tuple(bi - oi for bi, oi in zip(bv, L.offset)) for bv in basis)
    return AffineLattice(offset, basis)
