"""Split-chip partitioning workbench.

Models an SoC split between a trusted legacy-node IC and an untrusted
advanced-node IC, characterizes modules from gate-level netlists, applies
logic-locking transforms, and searches for the minimum-vulnerability
partition under frequency, power, bandwidth, latency, and area bounds.
"""

__version__ = "0.1.0"

from .model import (
    ALL_CONFIGURATIONS,
    Configuration,
    ConstraintSet,
    SystemConfiguration,
    SystemSpec,
    load_constraints,
    load_system,
    save_system,
    validate_system,
)

__all__ = [
    "__version__",
    "ALL_CONFIGURATIONS",
    "Configuration",
    "ConstraintSet",
    "SystemConfiguration",
    "SystemSpec",
    "load_constraints",
    "load_system",
    "save_system",
    "validate_system",
]
