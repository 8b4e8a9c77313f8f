"""Three-valued decision results and Unsat certificates."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Union


@dataclass(frozen=True)
class Certificate:
    """Why a problem has no solution.

    ``kind`` is one of ``constant-nonzero``, ``gcd-failure``,
    ``empty-congruence``, ``modular-obstruction``, ``discriminant``,
    ``definite-exhaustion``, ``all-classes-unsat`` or ``all-branches-unsat``;
    the aggregate kinds keep their sub-certificates in ``parts``.
    """

    kind: str
    data: dict[str, Any] = field(default_factory=dict)
    parts: tuple[Certificate, ...] = ()

    def to_json(self) -> dict:
        out: dict[str, Any] = {"kind": self.kind}
        if self.data:
            out["data"] = self.data
        if self.parts:
            out["parts"] = [p.to_json() for p in self.parts]
        return out

    def leaves(self):
        if not self.parts:
            yield self
        for part in self.parts:
            yield from part.leaves()


@dataclass(frozen=True)
class Sat:
    witness: dict
    verdict = "sat"
    exit_code = 0


@dataclass(frozen=True)
class Unsat:
    certificate: Certificate
    verdict = "unsat"
    exit_code = 1


@dataclass(frozen=True)
class Unknown:
    bound: int
    reason: str = ""
    verdict = "unknown"
    exit_code = 2


DecisionResult = Union[Sat, Unsat, Unknown]
