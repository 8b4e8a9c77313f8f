"""Arithmetic in Mal'cev coordinates.

An element is ``a1^A1 ... an^An b1^B1 ... br^Br c^C d1^D1 ... ds^Ds``.
Internally the law works on a raw triple ``(E, C, D)`` where ``E = A + B``
is indexed like the combined generators of the presentation.  The law only
uses ``+``, ``-``, ``*`` and ``%`` on the A/C/D entries, so the same code
multiplies concrete ints, numpy arrays (vectorised search) and
:class:`~nilpeq.polynomial.IntPolynomial` (symbolic collection).  The B
entries must always be concrete ints because they decide the carries.

With ``[x, y] = x^-1 y^-1 x y``, moving ``x_j^u`` left past ``x_i^v``
(``j < i``) costs ``[x_j, x_i]^(-u v)``, which gives

    C'' = C + C' - sum_{i<j} comm_c(i, j) E'_i E_j + sum_{carries} pow_c

and the same shape for every d-coordinate, reduced mod its order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .presentation import MalcevPresentation
from .words import Commutator, Equation, Generator, Grouped, Variable, Word


class CoordinateError(ValueError):
    pass


class UnassignedVariableError(KeyError):
    pass


class RewritingBudgetError(RuntimeError):
    pass


@dataclass(frozen=True)
class MalcevCoord:
    A: tuple[int, ...]
    B: tuple[int, ...] = ()
    C: int = 0
    D: tuple[int, ...] = ()

    @classmethod
    def identity(cls, p: MalcevPresentation) -> MalcevCoord:
        return cls((0,) * p.n, (0,) * p.r, 0, (0,) * p.s)

    @classmethod
    def from_raw(cls, raw, p: MalcevPresentation) -> MalcevCoord:
        E, C, D = raw
        return cls(tuple(int(x) for x in E[: p.n]), tuple(int(x) for x in E[p.n:]), int(C), tuple(int(x) for x in D))

    def raw(self):
        return (list(self.A) + list(self.B), self.C, list(self.D))

    def is_identity(self) -> bool:
        return not any(self.A) and not any(self.B) and self.C == 0 and not any(self.D)

    def flat(self) -> tuple[int, ...]:
        return self.A + self.B + (self.C,) + self.D

    def check(self, p: MalcevPresentation) -> MalcevCoord:
        if len(self.A) != p.n or len(self.B) != p.r or len(self.D) != p.s:
            raise CoordinateError(f"coordinate shape does not match presentation: {self}")
        for b, li in zip(self.B, p.l):
            if not 0 <= b < li:
                raise CoordinateError(f"b-coordinate {b} not reduced mod {li}")
        for d, kt in zip(self.D, p.k):
            if not 0 <= d < kt:
                raise CoordinateError(f"d-coordinate {d} not reduced mod {kt}")
        return self

    def __str__(self) -> str:
        return "(" + ", ".join(str(x) for x in self.flat()) + ")"


def to_word(g: MalcevCoord) -> Word:
    """Normal-form word for ``g``."""
    factors = []
    for i, a in enumerate(g.A):
        if a:
            factors.append(Generator("a", i + 1, a))
    for i, b in enumerate(g.B):
        if b:
            factors.append(Generator("b", i + 1, b))
    if g.C:
        factors.append(Generator("c", 1, g.C))
    for t, d in enumerate(g.D):
        if d:
            factors.append(Generator("d", t + 1, d))
    return Word(tuple(factors))


# ---------------------------------------------------------------------------
# the generic law


def raw_identity(p: MalcevPresentation):
    return ([0] * p.m, 0, [0] * p.s)


def raw_multiply(p: MalcevPresentation, x, y):
    E, C, D = x
    E2, C2, D2 = y
    n = p.n
    out_E = [E[i] + E2[i] for i in range(n)]
    out_C = C + C2
    out_D = [D[t] + D2[t] for t in range(p.s)]
    for (i, j), gamma in p.comm_c.items():
        out_C = out_C - gamma * (E2[i] * E[j])
    for (i, j), dvec in p.comm_d.items():
        prod = E2[i] * E[j]
        for t, e in enumerate(dvec):
            if e:
                out_D[t] = out_D[t] - e * prod
    for i, li in enumerate(p.l):
        b = E[n + i] + E2[n + i]
        if b >= li:
            b -= li
            out_C = out_C + p.pow_c[i]
            for t, e in enumerate(p.pow_d[i]):
                if e:
                    out_D[t] = out_D[t] + e
        out_E.append(b)
    out_D = [d % kt for d, kt in zip(out_D, p.k)]
    return out_E, out_C, out_D


def raw_inverse(p: MalcevPresentation, x):
    E, _, _ = x
    n = p.n
    neg = [-e for e in E[:n]] + [(-E[n + i]) % li for i, li in enumerate(p.l)]
    # x * (neg, 0, 0) is central; cancel its c/d part
    _, C0, D0 = raw_multiply(p, x, (neg, 0, [0] * p.s))
    return neg, -C0, [(-d) % kt for d, kt in zip(D0, p.k)]


def raw_power(p: MalcevPresentation, x, e: int):
    if e < 0:
        x = raw_inverse(p, x)
        e = -e
    result = raw_identity(p)
    base = x
    while e:
        if e & 1:
            result = raw_multiply(p, result, base)
        e >>= 1
        if e:
            base = raw_multiply(p, base, base)
    return result


def raw_commutator(p: MalcevPresentation, x, y):
    xi, yi = raw_inverse(p, x), raw_inverse(p, y)
    return raw_multiply(p, raw_multiply(p, xi, yi), raw_multiply(p, x, y))


def raw_generator(p: MalcevPresentation, g: Generator):
    E, C, D = raw_identity(p)
    if g.kind == "a":
        if not 1 <= g.index <= p.n:
            raise CoordinateError(f"no generator a{g.index}")
        E[g.index - 1] = 1
    elif g.kind == "b":
        if not 1 <= g.index <= p.r:
            raise CoordinateError(f"no generator b{g.index}")
        if p.l[g.index - 1] == 1:  # order-1 torsion: b_i equals its power relation
            return E, p.pow_c[g.index - 1], [e % kt for e, kt in zip(p.pow_d[g.index - 1], p.k)]
        E[p.n + g.index - 1] = 1
    elif g.kind == "c":
        C = 1
    elif g.kind == "d":
        if not 1 <= g.index <= p.s:
            raise CoordinateError(f"no generator d{g.index}")
        D[g.index - 1] = 1 % p.k[g.index - 1]
    else:
        raise CoordinateError(f"unknown generator kind {g.kind!r}")
    return E, C, D


def raw_evaluate(p: MalcevPresentation, w: Word, assignment: Mapping[str, object]):
    """Evaluate ``w`` with variables bound to raw triples."""
    result = raw_identity(p)
    for f in w.factors:
        if f.exponent == 0:
            continue
        if isinstance(f, Generator):
            val = raw_generator(p, f)
        elif isinstance(f, Variable):
            if f.name not in assignment:
                raise UnassignedVariableError(f.name)
            val = assignment[f.name]
        elif isinstance(f, Commutator):
            val = raw_commutator(p, raw_evaluate(p, f.left, assignment), raw_evaluate(p, f.right, assignment))
        elif isinstance(f, Grouped):
            val = raw_evaluate(p, f.inner, assignment)
        else:  # pragma: no cover
            raise TypeError(f)
        result = raw_multiply(p, result, raw_power(p, val, f.exponent))
    return result


# ---------------------------------------------------------------------------
# public, concrete API


def multiply(g: MalcevCoord, h: MalcevCoord, p: MalcevPresentation) -> MalcevCoord:
    g.check(p)
    h.check(p)
    return MalcevCoord.from_raw(raw_multiply(p, g.raw(), h.raw()), p)


def inverse(g: MalcevCoord, p: MalcevPresentation) -> MalcevCoord:
    g.check(p)
    return MalcevCoord.from_raw(raw_inverse(p, g.raw()), p)


def power(g: MalcevCoord, e: int, p: MalcevPresentation) -> MalcevCoord:
    g.check(p)
    return MalcevCoord.from_raw(raw_power(p, g.raw(), e), p)


def commutator(g: MalcevCoord, h: MalcevCoord, p: MalcevPresentation) -> MalcevCoord:
    return MalcevCoord.from_raw(raw_commutator(p, g.check(p).raw(), h.check(p).raw()), p)


def evaluate_word(w: Word, assignment: Mapping[str, MalcevCoord], p: MalcevPresentation) -> MalcevCoord:
    """Coordinates of the value of ``w``; commutators expand as ``u^-1 v^-1 u v``."""
    raw = {name: g.check(p).raw() for name, g in assignment.items()}
    return MalcevCoord.from_raw(raw_evaluate(p, w, raw), p)


def evaluate_equation(eq: Equation, assignment: Mapping[str, MalcevCoord], p: MalcevPresentation) -> MalcevCoord:
    """Coordinates of ``lhs * rhs^-1``."""
    return evaluate_word(eq.normalized(), assignment, p)


def satisfies(eq: Equation, assignment: Mapping[str, MalcevCoord], p: MalcevPresentation) -> bool:
    return evaluate_equation(eq, assignment, p).is_identity()


# ---------------------------------------------------------------------------
# rewriting oracle


Letter = tuple  # (kind, index, sign) with kind in {'a', 'b', 'c', 'd'}, 1-based index, sign +-1


def _invert_letters(letters: list[Letter]) -> list[Letter]:
    return [(k, i, -s) for k, i, s in reversed(letters)]


def flatten_letters(w: Word) -> list[Letter]:
    """Expand a variable-free word into +-1 letters (commutators as u^-1 v^-1 u v)."""
    out: list[Letter] = []
    for f in w.factors:
        if isinstance(f, Generator):
            sign = 1 if f.exponent > 0 else -1
            out += [(f.kind, f.index, sign)] * abs(f.exponent)
        elif isinstance(f, Grouped):
            inner = flatten_letters(f.inner)
            if f.exponent < 0:
                inner = _invert_letters(inner)
            out += inner * abs(f.exponent)
        elif isinstance(f, Commutator):
            u, v = flatten_letters(f.left), flatten_letters(f.right)
            inner = _invert_letters(u) + _invert_letters(v) + u + v
            if f.exponent < 0:
                inner = _invert_letters(inner)
            out += inner * abs(f.exponent)
        else:
            raise ValueError("collection works on generator words only, not variables")
    return out


def collection_oracle_nf(
    letters: Sequence[Letter] | Word | str,
    p: MalcevPresentation,
    max_steps: int = 1_000_000,
) -> MalcevCoord:
    """Normal form of a letter word by plain term rewriting.

    Rules, applied leftmost-first until none applies: central letters are
    moved into a central tally; ``x x^-1 -> 1``; an out-of-order pair
    ``x_i^e x_j^f`` (``i > j``) becomes ``x_j^f x_i^e`` times
    ``[x_j, x_i]^(-e f)``; ``b_i^-1 -> b_i^(l_i - 1) (b_i^l_i)^-1``; and
    ``l_i`` adjacent ``b_i`` letters are replaced by the power relation.
    This never touches the coordinate formulas, so it certifies them.
    """
    if isinstance(letters, str):
        from .words import parse_word

        letters = parse_word(letters, p) if letters.strip() else Word()
    if isinstance(letters, Word):
        letters = flatten_letters(letters)

    n = p.n
    central_c = 0
    central_d = [0] * p.s
    word: list[tuple[int, int]] = []  # (combined index, sign)

    def emit(c_exp: int, d_vec, times: int):
        nonlocal central_c
        central_c += times * c_exp
        for t, e in enumerate(d_vec):
            central_d[t] += times * e

    for kind, index, sign in letters:
        if kind == "c":
            central_c += sign
        elif kind == "d":
            central_d[index - 1] += sign
        elif kind == "a":
            if not 1 <= index <= n:
                raise CoordinateError(f"no generator a{index}")
            word.append((index - 1, sign))
        elif kind == "b":
            if not 1 <= index <= p.r:
                raise CoordinateError(f"no generator b{index}")
            i = n + index - 1
            li = p.l[index - 1]
            if sign > 0:
                word.append((i, 1))
            else:
                word += [(i, 1)] * (li - 1)
                emit(p.pow_c[index - 1], p.pow_d[index - 1], -1)
        else:
            raise CoordinateError(f"unknown letter kind {kind!r}")

    steps = 0
    while True:
        steps += 1
        if steps > max_steps:
            raise RewritingBudgetError(f"collection did not finish in {max_steps} steps")
        changed = False
        for pos in range(len(word) - 1):
            (i, e), (j, f) = word[pos], word[pos + 1]
            if i == j and e == -f:
                del word[pos: pos + 2]
                changed = True
                break
            if i > j:
                word[pos], word[pos + 1] = word[pos + 1], word[pos]
                emit(p.cc(j, i), p.cd(j, i), -e * f)
                changed = True
                break
        if changed:
            continue
        # sorted; reduce torsion runs
        for i, li in enumerate(p.l):
            gi = n + i
            run = [pos for pos, (g, _) in enumerate(word) if g == gi]
            if len(run) >= li:
                start = run[0]
                del word[start: start + li]
                emit(p.pow_c[i], p.pow_d[i], 1)
                changed = True
                break
        if not changed:
            break

    E = [0] * p.m
    for g, sign in word:
        E[g] += sign
    D = [d % kt for d, kt in zip(central_d, p.k)]
    return MalcevCoord.from_raw((E, central_c, D), p)
