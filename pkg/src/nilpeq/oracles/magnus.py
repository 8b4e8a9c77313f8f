"""Free nilpotent groups N(p, q) inside the truncated free associative ring.

Generator ``a_i`` maps to ``1 + X_i`` in Z<X_1..X_q> modulo words of length
> p.  Two words are equal in N(p, q) exactly when their images agree, so
equality testing is exact even though no normal form is computed.

Degree ``k`` coefficients are kept in a flat array of length ``q**k``;
the word ``X_{i1} ... X_{ik}`` sits at index ``i1 q^(k-1) + ... + ik``
(0-based letters).  Entries are Python ints, so nothing overflows.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from ..words import Commutator, Generator, Grouped, Variable, Word


class MagnusError(ValueError):
    pass


@dataclass(frozen=True)
class FreeNilpotentSpec:
    step: int
    rank: int

    def __post_init__(self):
        if self.step < 2 or self.rank < 2:
            raise ValueError("free nilpotent groups here need step >= 2 and rank >= 2")

    def generator_counts(self) -> dict[str, int]:
        return {"a": self.rank}

    def __str__(self) -> str:
        return f"N({self.step},{self.rank})"


class TruncatedFreePoly:
    __slots__ = ("q", "p", "levels")

    def __init__(self, q: int, p: int, levels=None):
        self.q = q
        self.p = p
        if levels is None:
            levels = [np.zeros(q**k, dtype=object) for k in range(p + 1)]
        self.levels = levels

    # -- constructors ---------------------------------------------------
    @classmethod
    def one(cls, q: int, p: int) -> TruncatedFreePoly:
        x = cls(q, p)
        x.levels[0][0] = 1
        return x

    @classmethod
    def generator(cls, i: int, q: int, p: int) -> TruncatedFreePoly:
        """Image of the 0-based generator ``i``: ``1 + X_i``."""
        x = cls.one(q, p)
        if p >= 1:
            x.levels[1][i] = 1
        return x

    @classmethod
    def from_dict(cls, coeffs: Mapping[tuple[int, ...], int], q: int, p: int) -> TruncatedFreePoly:
        x = cls(q, p)
        for word, c in coeffs.items():
            if len(word) <= p:
                x.levels[len(word)][_index(word, q)] += c
        return x

    # -- inspection -----------------------------------------------------
    def coefficients(self) -> dict[tuple[int, ...], int]:
        out = {}
        for k, level in enumerate(self.levels):
            for idx in np.nonzero(level)[0]:
                out[_word(int(idx), k, self.q)] = int(level[idx])
        return out

    def coefficient(self, word: tuple[int, ...]) -> int:
        if len(word) > self.p:
            return 0
        return int(self.levels[len(word)][_index(word, self.q)])

    def is_one(self) -> bool:
        return self.levels[0][0] == 1 and all(not np.any(level) for level in self.levels[1:])

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedFreePoly):
            return NotImplemented
        return (self.q, self.p) == (other.q, other.p) and all(
            np.array_equal(a, b) for a, b in zip(self.levels, other.levels)
        )

    def __repr__(self) -> str:
        terms = []
        for word, c in sorted(self.coefficients().items(), key=lambda wc: (len(wc[0]), wc[0])):
            mono = "".join(f"X{i + 1}" for i in word) or "1"
            terms.append(f"{c:+d}*{mono}" if word else str(c))
        return " ".join(terms) or "0"

    # -- ring operations ------------------------------------------------
    def __add__(self, other: TruncatedFreePoly) -> TruncatedFreePoly:
        return TruncatedFreePoly(self.q, self.p, [a + b for a, b in zip(self.levels, other.levels)])

    def __sub__(self, other: TruncatedFreePoly) -> TruncatedFreePoly:
        return TruncatedFreePoly(self.q, self.p, [a - b for a, b in zip(self.levels, other.levels)])

    def __neg__(self) -> TruncatedFreePoly:
        return TruncatedFreePoly(self.q, self.p, [-a for a in self.levels])

    def __mul__(self, other: TruncatedFreePoly) -> TruncatedFreePoly:
        if (self.q, self.p) != (other.q, other.p):
            raise MagnusError("mismatched truncated rings")
        out = []
        for k in range(self.p + 1):
            acc = np.zeros(self.q**k, dtype=object)
            for i in range(k + 1):
                a, b = self.levels[i], other.levels[k - i]
                if a.any() and b.any():
                    acc = acc + np.multiply.outer(a, b).ravel()
            out.append(acc)
        return TruncatedFreePoly(self.q, self.p, out)

    def inverse(self) -> TruncatedFreePoly:
        """``(1 + u)^-1 = sum_{k <= p} (-u)^k`` for group elements."""
        if self.levels[0][0] != 1:
            raise MagnusError("only elements with constant term 1 are invertible here")
        one = TruncatedFreePoly.one(self.q, self.p)
        neg_u = one - self
        result = one
        term = one
        for _ in range(self.p):
            term = term * neg_u
            result = result + term
        return result

    def __pow__(self, e: int) -> TruncatedFreePoly:
        base = self if e >= 0 else self.inverse()
        e = abs(e)
        result = TruncatedFreePoly.one(self.q, self.p)
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result


def _index(word: tuple[int, ...], q: int) -> int:
    idx = 0
    for letter in word:
        idx = idx * q + letter
    return idx


def _word(idx: int, k: int, q: int) -> tuple[int, ...]:
    out = []
    for _ in range(k):
        idx, r = divmod(idx, q)
        out.append(r)
    return tuple(reversed(out))


def commutator(x: TruncatedFreePoly, y: TruncatedFreePoly) -> TruncatedFreePoly:
    """``x^-1 y^-1 x y``, the convention used everywhere in this package."""
    return x.inverse() * y.inverse() * x * y


def commutator_xy(x: TruncatedFreePoly, y: TruncatedFreePoly) -> TruncatedFreePoly:
    """``x y x^-1 y^-1``; the expansion identities below are stated for it.

    With this convention, in every group:

        [x, yz] = [x, y] [y, [x, z]] [x, z]
        [xy, z] = [x, [y, z]] [y, z] [x, z]
    """
    return x * y * x.inverse() * y.inverse()


def nested_commutator(*args: TruncatedFreePoly) -> TruncatedFreePoly:
    """Left-normed ``[x1, x2, ..., xk]``."""
    out = commutator(args[0], args[1])
    for y in args[2:]:
        out = commutator(out, y)
    return out


def magnus_eval_word(w: Word, spec: FreeNilpotentSpec,
                     assignment: Mapping[str, TruncatedFreePoly | Word] | None = None) -> TruncatedFreePoly:
    """Image of ``w`` with generators ``a1..aq``; variables may be bound to words."""
    q, p = spec.rank, spec.step
    assignment = assignment or {}
    result = TruncatedFreePoly.one(q, p)
    for f in w.factors:
        if f.exponent == 0:
            continue
        if isinstance(f, Generator):
            if f.kind != "a" or not 1 <= f.index <= q:
                raise MagnusError(f"N({p},{q}) has no generator {f.kind}{f.index}")
            val = TruncatedFreePoly.generator(f.index - 1, q, p)
        elif isinstance(f, Variable):
            if f.name not in assignment:
                raise KeyError(f"unassigned variable {f.name!r}")
            val = assignment[f.name]
            if isinstance(val, Word):
                val = magnus_eval_word(val, spec)
        elif isinstance(f, Commutator):
            val = commutator(magnus_eval_word(f.left, spec, assignment),
                             magnus_eval_word(f.right, spec, assignment))
        elif isinstance(f, Grouped):
            val = magnus_eval_word(f.inner, spec, assignment)
        else:  # pragma: no cover
            raise TypeError(f)
        result = result * (val ** f.exponent)
    return result


def magnus_is_identity(w: Word, assignment=None, spec: FreeNilpotentSpec | None = None) -> bool:
    if spec is None:
        raise TypeError("a FreeNilpotentSpec is required")
    return magnus_eval_word(w, spec, assignment).is_one()


def magnus_check_equation(eq, assignment, spec: FreeNilpotentSpec) -> bool:
    return magnus_eval_word(eq.lhs, spec, assignment) == magnus_eval_word(eq.rhs, spec, assignment)


def abelian_exponents(x: TruncatedFreePoly) -> tuple[int, ...]:
    """Exponent sums of the generators (the degree-1 coefficients)."""
    return tuple(int(c) for c in x.levels[1])
