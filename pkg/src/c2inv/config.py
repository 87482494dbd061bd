from __future__ import annotations

import os
from dataclasses import asdict, dataclass, fields, replace

from .coeff import DEFAULT_STATE_BUDGET
from .counting import DEFAULT_BUDGET

ENV_PREFIX = "C2INV_"
DEFAULT_SEED = 20240917

_ENV_NAMES = {
    "budget_evaluations": "BUDGET_EVALS",
    "budget_states": "BUDGET_STATES",
    "seed": "SEED",
    "output_path": "OUTPUT",
    "format": "FORMAT",
    "worker_count": "WORKERS",
}


@dataclass(frozen=True)
class RunConfig:
    budget_evaluations: int = DEFAULT_BUDGET
    budget_states: int = DEFAULT_STATE_BUDGET
    seed: int = DEFAULT_SEED
    output_path: str | None = None
    format: str = "table"
    worker_count: int = 1

    def __post_init__(self):
        if self.budget_evaluations <= 0 or self.budget_states <= 0:
            raise ValueError("budgets must be positive")
        if self.format not in ("json", "table"):
            raise ValueError(f"format must be json or table, got {self.format!r}")
        if self.worker_count < 1:
            raise ValueError("worker_count must be at least 1")

    @classmethod
    def from_env(cls, environ=None, **overrides) -> RunConfig:
        """Defaults, then ``C2INV_*`` variables, then non-None overrides."""
        environ = os.environ if environ is None else environ
        values = {}
        for f in fields(cls):
            raw = environ.get(ENV_PREFIX + _ENV_NAMES[f.name])
            if raw is not None:
                values[f.name] = raw if f.name in ("output_path", "format") else int(raw)
        values.update({k: v for k, v in overrides.items() if v is not None})
        return replace(cls(), **values)

    def as_dict(self) -> dict:
        return asdict(self)
