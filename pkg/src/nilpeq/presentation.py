"""Mal'cev presentations of two-step nilpotent groups with rank-one commutator.

Generators come in four families: ``a1..an`` of infinite order, torsion
``b1..br`` of orders ``l``, the central ``c`` of infinite order, and
central torsion ``d1..ds`` of orders ``k``.  The a- and b-generators share
one combined index (``a_i`` is ``i-1``, ``b_j`` is ``n+j-1``); structure
constants are keyed by combined index pairs ``(i, j)`` with ``i < j``.

Two serialisations are read and written.  The text form::

    # Heisenberg group
    n = 2
    l = []
    k = []
    [a1, a2] -> 1            # [a1,a2] = c^1
    [a1, b1] -> (0, [1])     # [a1,b1] = c^0 d1^1
    b1^2 -> (3, [0])         # b1^2    = c^3 d1^0

and the JSON form::

    {"n": 2, "l": [], "k": [],
     "commutators": [{"left": "a1", "right": "a2", "c": 1, "d": []}],
     "powers": [{"generator": "b1", "c": 3, "d": [0]}]}

Missing commutator or power entries mean the identity.
"""

from __future__ import annotations

import ast
import json
import re
from dataclasses import dataclass, field


class PresentationSchemaError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class MalcevPresentation:
    n: int
    l: tuple[int, ...] = ()
    k: tuple[int, ...] = ()
    comm_c: dict[tuple[int, int], int] = field(default_factory=dict)
    comm_d: dict[tuple[int, int], tuple[int, ...]] = field(default_factory=dict)
    pow_c: tuple[int, ...] = ()
    pow_d: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        r, s = len(self.l), len(self.k)
        object.__setattr__(self, "l", tuple(self.l))
        object.__setattr__(self, "k", tuple(self.k))
        pc = tuple(self.pow_c) or (0,) * r
        pd = tuple(tuple(v) for v in self.pow_d) or ((0,) * s,) * r
        object.__setattr__(self, "pow_c", pc)
        object.__setattr__(self, "pow_d", pd)
        # drop explicit zeros so equality is structural
        cc = {key: v for key, v in self.comm_c.items() if v}
        cd = {key: tuple(v) for key, v in self.comm_d.items() if any(v)}
        object.__setattr__(self, "comm_c", cc)
        object.__setattr__(self, "comm_d", cd)

    # -- shape ----------------------------------------------------------
    @property
    def r(self) -> int:
        return len(self.l)

    @property
    def s(self) -> int:
        return len(self.k)

    @property
    def m(self) -> int:
        """Number of non-central generators (a's then b's)."""
        return self.n + len(self.l)

    def generator_counts(self) -> dict[str, int]:
        return {"a": self.n, "b": self.r, "c": 1, "d": self.s}

    def is_torsion_free(self) -> bool:
        return not self.l and not self.k

    def modulus(self, i: int) -> int | None:
        """Order of combined generator ``i`` (None for a-generators)."""
        return None if i < self.n else self.l[i - self.n]

    def name(self, i: int) -> str:
        return f"a{i + 1}" if i < self.n else f"b{i - self.n + 1}"

    def cc(self, i: int, j: int) -> int:
        return self.comm_c.get((i, j), 0)

    def cd(self, i: int, j: int) -> tuple[int, ...]:
        return self.comm_d.get((i, j), (0,) * self.s)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MalcevPresentation):
            return NotImplemented
        return (self.n, self.l, self.k, self.comm_c, self.comm_d, self.pow_c, self.pow_d) == (
            other.n, other.l, other.k, other.comm_c, other.comm_d, other.pow_c, other.pow_d)


def heisenberg() -> MalcevPresentation:
    """H(Z) with a1, a2 and c = [a1, a2]."""
    return MalcevPresentation(n=2, comm_c={(0, 1): 1})


def higher_heisenberg(m: int) -> MalcevPresentation:
    """H_{2m+1}(Z): pairs (a_{2i-1}, a_{2i}) with [a_{2i-1}, a_{2i}] = c."""
    return MalcevPresentation(n=2 * m, comm_c={(2 * i, 2 * i + 1): 1 for i in range(m)})


# ---------------------------------------------------------------------------
# validation


@dataclass
class ValidationReport:
    problems: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.problems

    def __bool__(self) -> bool:
        return self.ok


def validate_presentation(p: MalcevPresentation) -> ValidationReport:
    """Check that the structure constants define a group of the declared shape.

    Besides range checks this enforces, for every torsion generator ``b_i``
    and every other generator ``g``, ``l_i * [b_i, g] = 1`` in the centre:
    the c-part must vanish in Z and each d-part must vanish mod its order.
    """
    report = ValidationReport()
    bad = report.problems
    if p.n < 0:
        bad.append("n must be non-negative")
    for i, li in enumerate(p.l):
        if li < 2:
            bad.append(f"torsion order of b{i + 1} is {li}, must be >= 2")
    for t, kt in enumerate(p.k):
        if kt < 2:
            bad.append(f"torsion order of d{t + 1} is {kt}, must be >= 2")
    if len(p.pow_c) != p.r or len(p.pow_d) != p.r:
        bad.append("power table length differs from the number of b-generators")
    for i, vec in enumerate(p.pow_d):
        if len(vec) != p.s:
            bad.append(f"power entry of b{i + 1} has {len(vec)} d-exponents, expected {p.s}")
        elif any(not 0 <= e < kt for e, kt in zip(vec, p.k) if kt >= 1):
            bad.append(f"power entry of b{i + 1} is not reduced mod k")
    for key in set(p.comm_c) | set(p.comm_d):
        i, j = key
        if not (0 <= i < j < p.m):
            bad.append(f"commutator key {key} out of range")
            continue
        dvec = p.cd(i, j)
        if len(dvec) != p.s:
            bad.append(f"[{p.name(i)},{p.name(j)}] has {len(dvec)} d-exponents, expected {p.s}")
            continue
        if any(not 0 <= e < kt for e, kt in zip(dvec, p.k) if kt >= 1):
            bad.append(f"[{p.name(i)},{p.name(j)}] d-exponents not reduced mod k")
        for g in (i, j):
            order = p.modulus(g)
            if order is None or order < 2:
                continue
            if order * p.cc(i, j) != 0:
                bad.append(
                    f"[{p.name(i)},{p.name(j)}] has c-exponent {p.cc(i, j)} but "
                    f"{p.name(g)} has order {order}: {order}*{p.cc(i, j)} != 0"
                )
            for t, (e, kt) in enumerate(zip(dvec, p.k)):
                if kt >= 1 and (order * e) % kt:
                    bad.append(
                        f"[{p.name(i)},{p.name(j)}] has d{t + 1}-exponent {e} but "
                        f"{order}*{e} != 0 mod {kt}"
                    )
    return report


# ---------------------------------------------------------------------------
# parsing


_GEN_NAME = re.compile(r"\s*([ab])([1-9][0-9]*)\s*")
_ASSIGN = re.compile(r"^\s*([nlk])\s*[=:]\s*(.+?)\s*$")
_COMM = re.compile(r"^\s*\[\s*([^,\]]+?)\s*,\s*([^\]]+?)\s*\]\s*(?:->|=)\s*(.+?)\s*$")
_POW = re.compile(r"^\s*(b[1-9][0-9]*)\s*\^\s*([0-9]+)\s*(?:->|=)\s*(.+?)\s*$")


class _Builder:
    def __init__(self):
        self.n = None
        self.l = None
        self.k = None
        self.comm: dict[tuple[str, str], tuple[int, list[int]]] = {}
        self.pow: dict[str, tuple[int, int | None, list[int]]] = {}

    def set_field(self, name, value):
        if getattr(self, name) is not None:
            raise PresentationSchemaError(f"field {name!r} given twice")
        if name == "n":
            if not isinstance(value, int) or isinstance(value, bool) or value < 0:
                raise PresentationSchemaError("n must be a non-negative integer")
        else:
            if not isinstance(value, (list, tuple)) or not all(
                isinstance(v, int) and not isinstance(v, bool) for v in value
            ):
                raise PresentationSchemaError(f"{name} must be a list of integers")
            for v in value:
                if v < 1:
                    raise PresentationSchemaError(f"torsion order {v} in {name} is < 1")
            value = list(value)
        setattr(self, name, value)

    def add_comm(self, left, right, c_exp, d_exps):
        key = (left.strip(), right.strip())
        norm = tuple(sorted(key))
        if norm in {tuple(sorted(k)) for k in self.comm}:
            raise PresentationSchemaError(f"duplicate commutator entry [{key[0]},{key[1]}]")
        self.comm[key] = (c_exp, list(d_exps))

    def add_pow(self, name, exponent, c_exp, d_exps):
        name = name.strip()
        if name in self.pow:
            raise PresentationSchemaError(f"duplicate power entry for {name}")
        self.pow[name] = (c_exp, exponent, list(d_exps))

    def build(self) -> MalcevPresentation:
        if self.n is None:
            raise PresentationSchemaError("missing field 'n'")
        n = self.n
        l = self.l or []
        k = self.k or []
        s = len(k)

        def index(name: str) -> int:
            m = _GEN_NAME.fullmatch(name)
            if m is None:
                raise PresentationSchemaError(f"{name!r} is not an a- or b-generator")
            kind, idx = m.group(1), int(m.group(2))
            bound = n if kind == "a" else len(l)
            if idx > bound:
                raise PresentationSchemaError(f"generator {name!r} not declared")
            return idx - 1 if kind == "a" else n + idx - 1

        def dvec(vals, where):
            if not vals:
                return (0,) * s
            if len(vals) != s:
                raise PresentationSchemaError(f"{where}: expected {s} d-exponents, got {len(vals)}")
            return tuple(v % kt for v, kt in zip(vals, k))

        comm_c: dict[tuple[int, int], int] = {}
        comm_d: dict[tuple[int, int], tuple[int, ...]] = {}
        for (left, right), (c_exp, d_exps) in self.comm.items():
            i, j = index(left), index(right)
            if i == j:
                raise PresentationSchemaError(f"commutator [{left},{right}] of a generator with itself")
            d = dvec(d_exps, f"[{left},{right}]")
            if i > j:  # [g,h] = [h,g]^-1
                i, j = j, i
                c_exp = -c_exp
                d = tuple((-v) % kt for v, kt in zip(d, k))
            comm_c[(i, j)] = c_exp
            comm_d[(i, j)] = d

        pow_c = [0] * len(l)
        pow_d = [(0,) * s] * len(l)
        for name, (c_exp, exponent, d_exps) in self.pow.items():
            i = index(name) - n
            if i < 0:
                raise PresentationSchemaError(f"power entry for non-torsion generator {name}")
            if exponent is not None and exponent != l[i]:
                raise PresentationSchemaError(f"power entry {name}^{exponent} does not match order {l[i]}")
            pow_c[i] = c_exp
            pow_d[i] = dvec(d_exps, f"{name}^{l[i]}")

        return MalcevPresentation(n, tuple(l), tuple(k), comm_c, comm_d, tuple(pow_c), tuple(pow_d))


def _central_value(text: str, where: str) -> tuple[int, list[int]]:
    try:
        value = ast.literal_eval(text)
    except (ValueError, SyntaxError) as exc:
        raise PresentationSchemaError(f"{where}: cannot read {text!r}") from exc
    if isinstance(value, int) and not isinstance(value, bool):
        return value, []
    if (
        isinstance(value, (tuple, list))
        and len(value) == 2
        and isinstance(value[0], int)
        and isinstance(value[1], (list, tuple))
        and all(isinstance(v, int) for v in value[1])
    ):
        return value[0], list(value[1])
    raise PresentationSchemaError(f"{where}: expected c_exp or (c_exp, [d_exps]), got {text!r}")


def _parse_text(text: str) -> MalcevPresentation:
    b = _Builder()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        where = f"line {lineno}"
        if m := _ASSIGN.match(line):
            try:
                value = ast.literal_eval(m.group(2))
            except (ValueError, SyntaxError) as exc:
                raise PresentationSchemaError(f"{where}: cannot read {m.group(2)!r}") from exc
            b.set_field(m.group(1), value)
        elif m := _COMM.match(line):
            c_exp, d_exps = _central_value(m.group(3), where)
            b.add_comm(m.group(1), m.group(2), c_exp, d_exps)
        elif m := _POW.match(line):
            c_exp, d_exps = _central_value(m.group(3), where)
            b.add_pow(m.group(1), int(m.group(2)), c_exp, d_exps)
        else:
            raise PresentationSchemaError(f"{where}: unrecognised line {line!r}")
    return b.build()


def _parse_json(text: str) -> MalcevPresentation:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PresentationSchemaError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise PresentationSchemaError("top-level JSON value must be an object")
    unknown = set(doc) - {"n", "l", "k", "commutators", "powers", "name", "comment"}
    if unknown:
        raise PresentationSchemaError(f"unknown fields {sorted(unknown)}")
    b = _Builder()
    for name in ("n", "l", "k"):
        if name in doc:
            b.set_field(name, doc[name])
    try:
        for entry in doc.get("commutators", []):
            b.add_comm(entry["left"], entry["right"], int(entry.get("c", 0)), entry.get("d", []))
        for entry in doc.get("powers", []):
            b.add_pow(entry["generator"], entry.get("exponent"), int(entry.get("c", 0)), entry.get("d", []))
    except (KeyError, TypeError) as exc:
        raise PresentationSchemaError(f"malformed table entry: {exc}") from exc
    return b.build()


def parse_presentation(text: str) -> MalcevPresentation:
    """Read either serialisation; JSON is recognised by a leading ``{``.

    Consistency is not checked here, see :func:`validate_presentation`.
    """
    if text.lstrip().startswith("{"):
        return _parse_json(text)
    return _parse_text(text)


def format_presentation(p: MalcevPresentation, as_json: bool = False) -> str:
    entries = []
    for key in sorted(set(p.comm_c) | set(p.comm_d)):
        i, j = key
        entries.append((p.name(i), p.name(j), p.cc(i, j), list(p.cd(i, j))))
    powers = [(p.name(p.n + i), li, p.pow_c[i], list(p.pow_d[i])) for i, li in enumerate(p.l)]
    if as_json:
        doc = {
            "n": p.n,
            "l": list(p.l),
            "k": list(p.k),
            "commutators": [{"left": g, "right": h, "c": c, "d": d} for g, h, c, d in entries],
            "powers": [{"generator": g, "c": c, "d": d} for g, _, c, d in powers if c or any(d)],
        }
        return json.dumps(doc, indent=2) + "\n"
    lines = [f"n = {p.n}", f"l = {list(p.l)}", f"k = {list(p.k)}"]
    for g, h, c, d in entries:
        lines.append(f"[{g}, {h}] -> ({c}, {d})" if p.s else f"[{g}, {h}] -> {c}")
    for g, li, c, d in powers:
        if c or any(d):
            lines.append(f"{g}^{li} -> ({c}, {d})" if p.s else f"{g}^{li} -> {c}")
    return "\n".join(lines) + "\n"
