"""Instance enumeration, the suite runner, the rational oracle and reports."""
from .config import DEFAULT_SEED, SEED_ENV, SUITES, SuiteConfig, resolve_seed
from .oracle import oracle_discrete_fubini
from .report import FubiniReport
from .suite import explain_instance, run_suite

__all__ = [
    "DEFAULT_SEED",
    "SEED_ENV",
    "SUITES",
    "FubiniReport",
    "SuiteConfig",
    "explain_instance",
    "oracle_discrete_fubini",
    "resolve_seed",
    "run_suite",
]
