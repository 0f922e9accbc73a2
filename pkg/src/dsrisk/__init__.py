"""Double-spend catch-up risk for proof-of-work confirmations."""

from dsrisk.errors import ConvergenceError, DataError, DomainError, StructureError
from dsrisk.risk import (
    HashrateShare,
    Timing,
    catchup_time_free,
    catchup_timed,
    min_confirmations,
    table_probability,
    timing_from,
)

__all__ = [
    "ConvergenceError",
    "DataError",
    "DomainError",
    "StructureError",
    "HashrateShare",
    "Timing",
    "catchup_time_free",
    "catchup_timed",
    "min_confirmations",
    "table_probability",
    "timing_from",
]
