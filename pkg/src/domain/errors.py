"""Error codes and exception types for the simulator.

All error codes are defined as string constants following the pattern E_CATEGORY_DESCRIPTION.
Every raised message ends with "Error code: <code>" so logs and CLI diagnostics can be grepped.
"""

from typing import Any

# Power model errors
E_NON_POSITIVE_POWER = "E_NON_POSITIVE_POWER"
E_INFEASIBLE_RATE = "E_INFEASIBLE_RATE"
E_INVALID_POWER_MODEL = "E_INVALID_POWER_MODEL"

# Platform errors
E_INVALID_LADDER = "E_INVALID_LADDER"
E_INVALID_DVFS_STEP = "E_INVALID_DVFS_STEP"
E_INVALID_CAP_SCHEDULE = "E_INVALID_CAP_SCHEDULE"
E_INVALID_PLATFORM = "E_INVALID_PLATFORM"

# Workload errors
E_INVALID_DISTRIBUTION = "E_INVALID_DISTRIBUTION"
E_INVALID_PROFILE = "E_INVALID_PROFILE"
E_WORKLOAD_FORMAT = "E_WORKLOAD_FORMAT"

# Trace ingestion errors
E_INGEST_COVERAGE_GAP = "E_INGEST_COVERAGE_GAP"
E_INGEST_NODE_CONFLICT = "E_INGEST_NODE_CONFLICT"
E_INGEST_FORMAT = "E_INGEST_FORMAT"

# Simulation invariant errors
E_INVALID_JOB_TRANSITION = "E_INVALID_JOB_TRANSITION"
E_CAP_VIOLATION = "E_CAP_VIOLATION"
E_NODE_CONFLICT = "E_NODE_CONFLICT"
E_ENERGY_LEDGER = "E_ENERGY_LEDGER"

# Configuration errors
E_CONFIG_PARSE = "E_CONFIG_PARSE"
E_CONFIG_INVALID = "E_CONFIG_INVALID"
E_CONFIG_MISSING_FILE = "E_CONFIG_MISSING_FILE"

# Sweep errors
E_RUN_FAILED = "E_RUN_FAILED"


def with_code(message: str, code: str) -> str:
    """Append the error code suffix used throughout the package."""
    return f"{message}. Error code: {code}"


class EcoSimError(Exception):
    """Base class for all simulator errors.

    Attributes:
        code: Error code string (E_* pattern)
    """

    code: str = E_RUN_FAILED

    def __init__(self, message: str, code: str | None = None) -> None:
        if code is not None:
            self.code = code
        super().__init__(with_code(message, self.code))


class PowerModelError(EcoSimError, ValueError):
    """Raised for power values outside a resource model's domain."""

    code = E_NON_POSITIVE_POWER


class WorkloadError(EcoSimError, ValueError):
    """Raised for invalid generator parameters, profiles or workload files."""

    code = E_WORKLOAD_FORMAT


class IngestionError(EcoSimError):
    """Raised when job-table and power-series inputs cannot be joined.

    Attributes:
        problems: Every individual gap or conflict found, one string each
    """

    code = E_INGEST_FORMAT

    def __init__(self, message: str, code: str | None = None, problems: list[str] | None = None):
        self.problems = problems or []
        detail = message
        if self.problems:
            detail = f"{message}: " + "; ".join(self.problems)
        super().__init__(detail, code)


class ConfigError(EcoSimError):
    """Raised when a run configuration cannot be parsed or validated.

    Attributes:
        diagnostics: (location, message) pairs, location being "line:col" or a dotted field path
    """

    code = E_CONFIG_INVALID

    def __init__(
        self,
        message: str,
        code: str | None = None,
        diagnostics: list[tuple[str, str]] | None = None,
    ) -> None:
        self.diagnostics = diagnostics or []
        super().__init__(message, code)


class SimulationInvariantError(EcoSimError):
    """Raised when the engine detects an impossible state.

    Attributes:
        state_dump: JSON-serialisable snapshot of the run state at detection time
    """

    code = E_INVALID_JOB_TRANSITION

    def __init__(
        self, message: str, code: str | None = None, state_dump: dict[str, Any] | None = None
    ) -> None:
        self.state_dump = state_dump or {}
        super().__init__(message, code)
