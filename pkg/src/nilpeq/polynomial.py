"""Sparse integer polynomials of degree at most two.

Monomials are sorted tuples of unknown names, so ``("x.A1", "x.A1")`` is
``x.A1**2`` and ``()`` is the constant term.  Arithmetic accepts plain ints
on either side, which lets the group law in :mod:`nilpeq.malcev` run on
symbolic coordinates without special-casing.
"""

from __future__ import annotations

from typing import Iterable, Mapping

import numpy as np

MAX_DEGREE = 2


class DegreeError(ArithmeticError):
    """A product would exceed the degree cap."""


def _canonical(monomial: Iterable[str]) -> tuple[str, ...]:
    return tuple(sorted(monomial))


class IntPolynomial:
    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple[str, ...], int] | None = None):
        clean: dict[tuple[str, ...], int] = {}
        for mono, coeff in (terms or {}).items():
            coeff = int(coeff)
            if coeff == 0:
                continue
            mono = _canonical(mono)
            if len(mono) > MAX_DEGREE:
                raise DegreeError(f"monomial {mono} has degree > {MAX_DEGREE}")
            clean[mono] = clean.get(mono, 0) + coeff
            if clean[mono] == 0:
                del clean[mono]
        self.terms = clean

    # -- constructors ---------------------------------------------------
    @classmethod
    def const(cls, value: int) -> IntPolynomial:
        return cls({(): value})

    @classmethod
    def var(cls, name: str, coeff: int = 1) -> IntPolynomial:
        return cls({(name,): coeff})

    @classmethod
    def lift(cls, value: int | IntPolynomial) -> IntPolynomial:
        if isinstance(value, IntPolynomial):
            return value
        return cls.const(int(value))

    # -- inspection -----------------------------------------------------
    @property
    def degree(self) -> int:
        return max((len(m) for m in self.terms), default=0)

    @property
    def variables(self) -> tuple[str, ...]:
        names = {v for mono in self.terms for v in mono}
        return tuple(sorted(names))

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(len(m) == 0 for m in self.terms)

    @property
    def constant(self) -> int:
        return self.terms.get((), 0)

    def coefficient(self, *names: str) -> int:
        return self.terms.get(_canonical(names), 0)

    def linear_part(self) -> dict[str, int]:
        return {m[0]: c for m, c in self.terms.items() if len(m) == 1}

    def quadratic_part(self) -> dict[tuple[str, str], int]:
        return {m: c for m, c in self.terms.items() if len(m) == 2}

    def quadratic_variables(self) -> set[str]:
        return {v for m in self.terms if len(m) == 2 for v in m}

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, (int, IntPolynomial)):
            return NotImplemented
        other = IntPolynomial.lift(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return IntPolynomial(out)

    __radd__ = __add__

    def __neg__(self) -> IntPolynomial:
        return IntPolynomial({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, (int, IntPolynomial)):
            return NotImplemented
        return self + (-IntPolynomial.lift(other))

    def __rsub__(self, other):
        if not isinstance(other, (int, IntPolynomial)):
            return NotImplemented
        return IntPolynomial.lift(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            return IntPolynomial({m: c * other for m, c in self.terms.items()})
        if not isinstance(other, IntPolynomial):
            return NotImplemented
        out: dict[tuple[str, ...], int] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                if len(m1) + len(m2) > MAX_DEGREE:
                    raise DegreeError("product would exceed degree 2")
                m = _canonical(m1 + m2)
                out[m] = out.get(m, 0) + c1 * c2
        return IntPolynomial(out)

    __rmul__ = __mul__

    def __mod__(self, modulus: int) -> IntPolynomial:
        """Reduce every coefficient into ``[0, modulus)``; preserves values mod ``modulus``."""
        return IntPolynomial({m: c % modulus for m, c in self.terms.items()})

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = IntPolynomial.const(other)
        if not isinstance(other, IntPolynomial):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    # -- evaluation -----------------------------------------------------
    def evaluate(self, values: Mapping[str, int], default: int | None = None) -> int:
        total = 0
        for mono, coeff in self.terms.items():
            term = coeff
            for v in mono:
                if v in values:
                    term *= values[v]
                elif default is not None:
                    term *= default
                else:
                    raise KeyError(v)
            total += term
        return total

    def evaluate_array(self, values: Mapping[str, np.ndarray], shape=()) -> np.ndarray:
        """Vectorised evaluation; unknowns absent from ``values`` are an error."""
        total = np.zeros(shape, dtype=np.int64)
        for mono, coeff in self.terms.items():
            term = np.full(shape, coeff, dtype=np.int64)
            for v in mono:
                term = term * values[v]
            total = total + term
        return total

    def substitute(self, mapping: Mapping[str, IntPolynomial | int]) -> IntPolynomial:
        """Replace unknowns by polynomials; unknowns not in ``mapping`` are kept."""
        out = IntPolynomial()
        for mono, coeff in self.terms.items():
            term = IntPolynomial.const(coeff)
            for v in mono:
                term = term * IntPolynomial.lift(mapping.get(v, IntPolynomial.var(v)))
            out = out + term
        return out

    def rename(self, mapping: Mapping[str, str]) -> IntPolynomial:
        return IntPolynomial({tuple(mapping.get(v, v) for v in m): c for m, c in self.terms.items()})

    # -- serialisation --------------------------------------------------
    def sorted_terms(self) -> list[tuple[tuple[str, ...], int]]:
        return sorted(self.terms.items(), key=lambda mc: (-len(mc[0]), mc[0]))

    def to_json(self) -> list:
        return [[list(m), c] for m, c in self.sorted_terms()]

    @classmethod
    def from_json(cls, data) -> IntPolynomial:
        return cls({tuple(m): c for m, c in data})

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mono, coeff in self.sorted_terms():
            body = "*".join(mono)
            if not body:
                text = str(abs(coeff))
            elif abs(coeff) == 1:
                text = body
            else:
                text = f"{abs(coeff)}*{body}"
            sign = "-" if coeff < 0 else "+"
            parts.append((sign, text))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, text in parts[1:]:
            out += f" {sign} {text}"
        return out

    def __repr__(self) -> str:
        return f"IntPolynomial({self})"
