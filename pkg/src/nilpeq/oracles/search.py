"""Exhaustive search for solutions in a box of Mal'cev coordinates.

Every variable gets A and C coordinates in ``[-bound, bound]``; torsion
coordinates (B, D) always run over their full range.  Candidates are tried
in a fixed canonical order:

1. by the largest absolute value among the A/C coordinates (shells),
2. inside a shell, lexicographically over the A/C coordinates with values
   ranked ``0, 1, -1, 2, -2, ...`` (variables in order, A before C),
3. then by the torsion assignment, lexicographically.

The first hit in that order is returned, so results are deterministic.
Whole chunks of candidates are evaluated at once by running the generic
multiplication law on numpy arrays.
"""

from __future__ import annotations

import itertools
from typing import Iterator, Sequence

import numpy as np

from ..malcev import MalcevCoord, raw_evaluate
from ..presentation import MalcevPresentation
from ..words import Equation, EquationSystem

CHUNK = 1 << 16
DEFAULT_BUDGET = 10**9


class SearchBudgetError(RuntimeError):
    def __init__(self, size: int, budget: int):
        super().__init__(f"search space of {size} assignments exceeds the budget of {budget}")
        self.size = size
        self.budget = budget


def zigzag_values(radius: int) -> np.ndarray:
    """``0, 1, -1, 2, -2, ..., radius, -radius``."""
    out = [0]
    for v in range(1, radius + 1):
        out += [v, -v]
    return np.array(out, dtype=np.int64)


def search_space_size(variables: Sequence[str], p: MalcevPresentation, bound: int) -> int:
    free = (2 * bound + 1) ** ((p.n + 1) * len(variables))
    return free * _torsion_count(p) ** len(variables)


def _torsion_count(p: MalcevPresentation) -> int:
    count = 1
    for order in tuple(p.l) + tuple(p.k):
        count *= order
    return count


def _torsion_assignments(p: MalcevPresentation, variables: Sequence[str]):
    ranges = [range(order) for order in tuple(p.l) + tuple(p.k)]
    per_var = list(itertools.product(*ranges))
    for combo in itertools.product(per_var, repeat=len(variables)):
        yield {v: (t[: p.r], t[p.r:]) for v, t in zip(variables, combo)}


def shell_chunks(k: int, radius: int, chunk: int = CHUNK) -> Iterator[np.ndarray]:
    """Points of the ``radius`` shell of Z^k as ``(k, m)`` chunks, in canonical order."""
    if k == 0:
        if radius == 0:
            yield np.zeros((0, 1), dtype=np.int64)
        return
    values = zigzag_values(radius)
    base = len(values)
    weights = [base ** (k - 1 - j) for j in range(k)]
    total = base**k
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        pts = np.stack([values[(idx // w) % base] for w in weights])
        if radius:
            pts = pts[:, np.abs(pts).max(axis=0) == radius]
        if pts.shape[1]:
            yield pts


def _identity_mask(raw, m: int) -> np.ndarray:
    E, C, D = raw
    ok = np.ones(m, dtype=bool)
    for x in list(E) + [C] + list(D):
        ok &= np.broadcast_to(np.asarray(x) == 0, (m,))
    return ok


def bounded_search(
    system: EquationSystem | Equation,
    p: MalcevPresentation,
    bound: int,
    budget: int = DEFAULT_BUDGET,
) -> dict[str, MalcevCoord] | None:
    """First assignment (canonical order) solving every equation, or ``None``."""
    if isinstance(system, Equation):
        system = EquationSystem.of([system])
    if bound < 0:
        raise ValueError("bound must be non-negative")
    variables = list(system.variables)
    size = search_space_size(variables, p, bound)
    if size > budget:
        raise SearchBudgetError(size, budget)
    words = [eq.normalized() for eq in system.equations]
    k = (p.n + 1) * len(variables)
    torsion = list(_torsion_assignments(p, variables))

    for radius in range(bound + 1):
        for pts in shell_chunks(k, radius):
            m = pts.shape[1]
            best = None
            for t_idx, tors in enumerate(torsion):
                raw = {}
                for v_idx, v in enumerate(variables):
                    base = v_idx * (p.n + 1)
                    B, D = tors[v]
                    raw[v] = ([pts[base + i] for i in range(p.n)] + list(B), pts[base + p.n], list(D))
                ok = np.ones(m, dtype=bool)
                for w in words:
                    ok &= _identity_mask(raw_evaluate(p, w, raw), m)
                    if not ok.any():
                        break
                hits = np.nonzero(ok)[0]
                if hits.size and (best is None or int(hits[0]) < best[0]):
                    best = (int(hits[0]), t_idx)
            if best is not None:
                col, t_idx = best
                return _decode(pts[:, col], torsion[t_idx], variables, p)
    return None


def _decode(point, tors, variables, p: MalcevPresentation) -> dict[str, MalcevCoord]:
    out = {}
    for v_idx, v in enumerate(variables):
        base = v_idx * (p.n + 1)
        A = tuple(int(x) for x in point[base: base + p.n])
        B, D = tors[v]
        out[v] = MalcevCoord(A, tuple(B), int(point[base + p.n]), tuple(D))
    return out
