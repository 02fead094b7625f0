"""Forest orientation with dancing walks, and the cuckoo table built on it."""

from ._core import (
    ConfigError,
    CuckooTable,
    FailureError,
    Orienter,
    StructuralError,
    ViabilityViolation,
    attempt_cap,
    check_viability,
    generate_script,
    generate_workload,
    walk_length,
)

__all__ = [
    "ConfigError",
    "CuckooTable",
    "FailureError",
    "Orienter",
    "StructuralError",
    "ViabilityViolation",
    "attempt_cap",
    "check_viability",
    "generate_script",
    "generate_workload",
    "walk_length",
]
