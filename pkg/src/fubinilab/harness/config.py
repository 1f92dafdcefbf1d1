"""Suite configuration and seed handling."""
from __future__ import annotations

import os
from dataclasses import asdict, dataclass
from dataclasses import field as dc_field

from ..convspace import AXIOMS, DEFAULT_ENUMERATION_BOUND
from ..errors import ConfigError, FubiniLabError
from ..scalars import DEFAULT_FIELD_BOUND, field_new

SUITES = (
    "cartesian",
    "free",
    "monoidal",
    "monads",
    "adjunctions",
    "identification",
    "retraction",
    "fubini",
    "chain",
    "kock",
    "oracle",
    "factorization",
    "completion",
)
DEFAULT_SEED = 20240917
SEED_ENV = "FUBINILAB_SEED"


def resolve_seed(explicit: int | None = None) -> int:
    """Explicit seed, else ``$FUBINILAB_SEED``, else the default."""
    if explicit is not None:
        return explicit
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw == "":
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


@dataclass(frozen=True)
class SuiteConfig:
    field: int = 2
    max_size: int = 2
    axioms: str = "limit"
    carrier_bound: int = 64
    budget: int = 8
    suites: tuple = ("all",)
    jobs: int = 1
    out: str | None = None
    seed: int = dc_field(default_factory=resolve_seed)
    oracle_instances: int = 100
    vect_points: int = 4

    def __post_init__(self):
        object.__setattr__(self, "suites", tuple(self.suites))
        self.validate()

    def validate(self) -> None:
        try:
            field_new(self.field, DEFAULT_FIELD_BOUND)
        except FubiniLabError as exc:
            raise ConfigError(f"field: {exc}") from None
        if self.axioms not in AXIOMS:
            raise ConfigError(f"axioms must be one of {AXIOMS}")
        if not 0 <= self.max_size <= DEFAULT_ENUMERATION_BOUND:
            raise ConfigError(f"max_size must lie in 0..{DEFAULT_ENUMERATION_BOUND}")
        for name in ("carrier_bound", "budget", "jobs", "vect_points"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive")
        if self.vect_points > 4:
            raise ConfigError("vect_points is limited to 4")
        if self.oracle_instances < 0:
            raise ConfigError("oracle_instances must be non-negative")
        unknown = [s for s in self.suites if s != "all" and s not in SUITES]
        if unknown or not self.suites:
            raise ConfigError(f"unknown suites {unknown}; choose from all, {', '.join(SUITES)}")

    @property
    def selected(self) -> tuple:
        if "all" in self.suites:
            return SUITES
        return tuple(s for s in SUITES if s in self.suites)

    def echo(self) -> dict:
        """Everything that determines the report; ``jobs`` and ``out`` are left out."""
        d = asdict(self)
        d.pop("jobs")
        d.pop("out")
        d["suites"] = list(self.selected)
        return d
