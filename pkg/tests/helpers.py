"""Shared fixtures-as-functions: presentations, random words, brute force."""

from __future__ import annotations

import itertools
import random

import numpy as np

from nilpeq.malcev import MalcevCoord
from nilpeq.polynomial import IntPolynomial
from nilpeq.presentation import MalcevPresentation, heisenberg
from nilpeq.words import Commutator, Generator, Grouped, Variable, Word

H = heisenberg()

# a1, a2 free mod centre, b1 of order 2, d1 of order 2 with [a1, b1] = d1, b1^2 = c
TORSION_1 = MalcevPresentation(
    n=2, l=(2,), k=(2,), comm_c={(0, 1): 1}, comm_d={(0, 2): (1,)}, pow_c=(1,), pow_d=((0,),)
)

# one a-generator, b's of order 2 and 3, d's of order 6 and 2; c only through powers
TORSION_2 = MalcevPresentation(
    n=1, l=(2, 3), k=(6, 2), comm_d={(0, 1): (3, 1), (0, 2): (2, 0)}, pow_c=(1, 2), pow_d=((1, 0), (0, 1))
)

# the law applied to a presentation that fails the consistency check
LOOSE_TORSION = MalcevPresentation(n=1, l=(2,), comm_c={(0, 1): 1})

PRESENTATIONS = {"heisenberg": H, "torsion-1": TORSION_1, "torsion-2": TORSION_2}


def alphabet(p: MalcevPresentation) -> list[tuple[str, int]]:
    return [(kind, i) for kind, count in p.generator_counts().items() for i in range(1, count + 1)]


def random_letters(rng: random.Random, p: MalcevPresentation, max_len: int = 8):
    alph = alphabet(p)
    return [(*rng.choice(alph), rng.choice((1, -1))) for _ in range(rng.randint(0, max_len))]


def random_coord(rng: random.Random, p: MalcevPresentation, span: int = 6) -> MalcevCoord:
    return MalcevCoord(
        tuple(rng.randint(-span, span) for _ in range(p.n)),
        tuple(rng.randrange(order) for order in p.l),
        rng.randint(-span, span),
        tuple(rng.randrange(order) for order in p.k),
    )


HEISENBERG_LETTERS = [("a", 1), ("a", 2), ("c", 1)]


def random_factor(rng: random.Random, variables, max_exp: int = 3, depth: int = 0, letters=None):
    """A random factor over ``letters`` (default a1, a2, c) and ``variables``."""
    letters = letters or HEISENBERG_LETTERS
    roll = rng.random()
    exp = rng.choice([e for e in range(-max_exp, max_exp + 1) if e])
    if variables and roll < 0.4:
        return Variable(rng.choice(variables), rng.choice([-2, -1, 1, 1, 2]))
    if roll < 0.8 or depth > 0:
        kind, idx = rng.choice(letters)
        return Generator(kind, idx, exp)
    left = Word((random_factor(rng, variables, max_exp, depth + 1, letters),))
    right = Word((random_factor(rng, variables, max_exp, depth + 1, letters),))
    if roll < 0.9:
        return Commutator(left, right, rng.choice([-1, 1]))
    return Grouped(left * right, rng.choice([-1, 2]))


def random_word(rng: random.Random, variables=(), max_len: int = 8, max_exp: int = 3, p=None) -> Word:
    letters = alphabet(p) if p is not None else None
    return Word(tuple(random_factor(rng, list(variables), max_exp, 0, letters)
                      for _ in range(rng.randint(1, max_len))))


def brute_force_integer(system, bound: int) -> dict[str, int] | None:
    """First point of ``[-bound, bound]^m`` satisfying an IntegerSystem, vectorised."""
    names = list(system.unknowns)
    m = len(names)
    if m == 0:
        return {} if system.holds({}) else None
    axis = np.arange(-bound, bound + 1, dtype=np.int64)
    grid = np.stack([g.ravel() for g in np.meshgrid(*([axis] * m), indexing="ij")])
    values = {u: grid[j] for j, u in enumerate(names)}
    shape = grid.shape[1:]
    ok = np.ones(grid.shape[1], dtype=bool)
    for row in system.linear:
        ok &= row.evaluate_array(values, shape) == 0
    for poly, mod in system.congruences:
        ok &= poly.evaluate_array(values, shape) % mod == 0
    ok &= system.quadratic.evaluate_array(values, shape) == 0
    hits = np.nonzero(ok)[0]
    if not hits.size:
        return None
    return {u: int(grid[j, hits[0]]) for j, u in enumerate(names)}


def random_poly(rng: random.Random, names, degree: int, span: int = 4, density: float = 0.6) -> IntPolynomial:
    poly = IntPolynomial.const(rng.randint(-span, span))
    for name in names:
        if rng.random() < density:
            poly = poly + IntPolynomial.var(name, rng.randint(-span, span))
    if degree == 2:
        for a, b in itertools.combinations_with_replacement(names, 2):
            if rng.random() < density / 2:
                poly = poly + IntPolynomial({(a, b): rng.randint(-span, span)})
    return poly


def random_magnus(rng: random.Random, spec, max_len: int = 6):
    """Random element of N(p, q): a product of generators and their inverses."""
    from nilpeq.oracles.magnus import TruncatedFreePoly

    x = TruncatedFreePoly.one(spec.rank, spec.step)
    for _ in range(rng.randint(0, max_len)):
        g = TruncatedFreePoly.generator(rng.randrange(spec.rank), spec.rank, spec.step)
        x = x * (g if rng.random() < 0.5 else g.inverse())
    return x


def random_free_word(rng: random.Random, rank: int, max_len: int = 8) -> Word:
    """Random word in a1..a_rank and their inverses (no variables)."""
    return Word(tuple(Generator("a", rng.randint(1, rank), rng.choice((-2, -1, 1, 2)))
                      for _ in range(rng.randint(0, max_len))))


def heisenberg_test_word(rng: random.Random, max_len: int = 8) -> Word:
    """Word over a1, a2 and [a1, a2]; about half are forced to be trivial.

    A trivial word is built as ``u`` times the inverse of the normal form of
    ``u``, then an occasional single-letter perturbation is appended.
    """
    from nilpeq.malcev import evaluate_word, to_word
    from nilpeq.words import parse_word

    c = Commutator(Word((Generator("a", 1, 1),)), Word((Generator("a", 2, 1),)), 1)
    letters = [Generator("a", 1, 1), Generator("a", 2, 1), c]

    def pick():
        f = rng.choice(letters)
        e = rng.choice([-3, -2, -1, 1, 2, 3])
        return Commutator(f.left, f.right, e) if isinstance(f, Commutator) else Generator(f.kind, f.index, e)

    u = Word(tuple(pick() for _ in range(rng.randint(1, max_len))))
    if rng.random() < 0.5:
        return u
    nf = parse_word(str(to_word(evaluate_word(u, {}, H))).replace("c", "[a1,a2]"))
    w = Word(u.factors + (Grouped(nf, -1),))
    if rng.random() < 0.2:
        w = Word(w.factors + (pick(),))
    return w
