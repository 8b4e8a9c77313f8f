"""Residue-class solution sets of polynomial congruence systems."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from ..polynomial import IntPolynomial

CHUNK = 1 << 18


class ResidueBudgetError(RuntimeError):
    def __init__(self, size: int, budget: int):
        super().__init__(f"{size} residue vectors exceed the enumeration budget of {budget}")
        self.size = size
        self.budget = budget


@dataclass(frozen=True)
class ResidueClassSet:
    """Solutions mod ``modulus``; each class is a vector over ``unknowns``."""

    modulus: int
    classes: tuple[tuple[int, ...], ...]
    unknowns: tuple[str, ...] = ()

    def __len__(self) -> int:
        return len(self.classes)

    def is_empty(self) -> bool:
        return not self.classes

    def __contains__(self, y: Sequence[int]) -> bool:
        return tuple(v % self.modulus for v in y) in set(self.classes)


def residue_grid(k: int, modulus: int, chunk: int = CHUNK) -> Iterator[np.ndarray]:
    """All of (Z_modulus)^k in lexicographic order, as (k, n) int64 chunks."""
    total = modulus**k
    weights = [modulus ** (k - 1 - j) for j in range(k)]
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        yield np.stack([(idx // w) % modulus for w in weights]) if k else np.zeros((0, len(idx)), np.int64)


def congruence_unknowns(congruences) -> tuple[str, ...]:
    names: set[str] = set()
    for poly, _ in congruences:
        names.update(poly.variables)
    return tuple(sorted(names))


def enumerate_congruence_classes(
    congruences: Sequence[tuple[IntPolynomial, int]],
    unknowns: Sequence[str] | None = None,
    budget: int = 10**7,
) -> ResidueClassSet:
    """Exhaustively solve ``poly = 0 (mod m)`` for every pair, mod the lcm.

    By default only the unknowns that occur in some congruence are
    enumerated; the rest are unconstrained.
    """
    if unknowns is None:
        unknowns = congruence_unknowns(congruences)
    unknowns = tuple(unknowns)
    modulus = math.lcm(*(m for _, m in congruences)) if congruences else 1
    k = len(unknowns)
    size = modulus**k
    if size > budget:
        raise ResidueBudgetError(size, budget)
    found: list[tuple[int, ...]] = []
    for grid in residue_grid(k, modulus):
        values = {u: grid[j] for j, u in enumerate(unknowns)}
        ok = np.ones(grid.shape[1], dtype=bool)
        for poly, m in congruences:
            ok &= (poly.evaluate_array(values, grid.shape[1:]) % m) == 0
        for col in np.nonzero(ok)[0]:
            found.append(tuple(int(grid[j, col]) for j in range(k)))
    return ResidueClassSet(modulus, tuple(found), unknowns)
