"""Solver limits, with environment-variable overrides."""

from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace

ENV_NAMES = {
    "search_bound": "NEQ_SEARCH_BOUND",
    "modulus_limit": "NEQ_MODULUS_LIMIT",
    "branch_budget": "NEQ_BRANCH_BUDGET",
    "residue_budget": "NEQ_RESIDUE_BUDGET",
    "time_budget": "NEQ_TIME_BUDGET",
    "box_budget": "NEQ_BOX_BUDGET",
}


@dataclass(frozen=True)
class SolverConfig:
    search_bound: int = 64       # largest |t| tried by box search
    modulus_limit: int = 64      # largest modulus tried for obstructions
    branch_budget: int = 10**6   # torsion branches per equation
    residue_budget: int = 10**7  # residue vectors enumerated per congruence system
    time_budget: int = 60        # seconds per decide call
    box_budget: int = 200_000    # lattice points evaluated per box search / obstruction test

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not isinstance(value, int) or value <= 0:
                raise ValueError(f"{f.name} must be a positive integer, got {value!r}")

    @classmethod
    def from_env(cls, environ=None, **overrides) -> SolverConfig:
        environ = os.environ if environ is None else environ
        values = {}
        for name, env in ENV_NAMES.items():
            if env in environ:
                try:
                    values[name] = int(environ[env])
                except ValueError as exc:
                    raise ValueError(f"{env} must be an integer") from exc
        values.update({k: v for k, v in overrides.items() if v is not None})
        return replace(cls(), **values)
