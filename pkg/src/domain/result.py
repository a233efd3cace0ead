"""Result wrapper for sweep cells.

This module contains RunResult, the generic success/failure envelope a sweep worker
returns for one (scheduler, eco_percent, cap_fraction, seed) cell.
"""

from typing import Any, Generic, TypeVar

from pydantic import BaseModel, Field, ValidationInfo, field_validator

from src.domain.errors import E_RUN_FAILED, with_code

T = TypeVar("T")

MAX_ERROR_MESSAGE_LENGTH = 2000


class RunResult(BaseModel, Generic[T]):
    """Generic wrapper for one simulation run.

    Attributes:
        success: Boolean indicating if the run finished
        data: Typed payload (required if success=True)
        error_code: Error code (E_* pattern, set when success=False)
        error_message: Error message string (required if success=False)
        execution_time_ms: Wall-clock execution time in milliseconds (>= 0.0)
        metadata: Optional metadata dictionary (max 50 keys)
    """

    success: bool = Field(..., description="Whether the run finished")
    data: T | None = Field(default=None, description="Payload (required if success=True)")
    error_code: str | None = Field(default=None, description="Error code (E_* pattern)")
    error_message: str | None = Field(
        default=None, max_length=MAX_ERROR_MESSAGE_LENGTH, description="Error message (required if success=False)"
    )
    execution_time_ms: float = Field(..., ge=0.0, description="Execution time in milliseconds")
    metadata: dict[str, Any] | None = Field(default=None, description="Optional metadata")

    @field_validator("execution_time_ms")
    @classmethod
    def round_execution_time(cls, v: float) -> float:
        """Round execution time to 2 decimal places."""
        return round(v, 2)

    @field_validator("data")
    @classmethod
    def validate_data_when_success(cls, v: T | None, info: ValidationInfo) -> T | None:
        """Require a payload on success."""
        if info.data.get("success") is True and v is None:
            raise ValueError(with_code("data is required when success=True", E_RUN_FAILED))
        return v

    @field_validator("error_message")
    @classmethod
    def validate_error_message_when_failure(
        cls, v: str | None, info: ValidationInfo
    ) -> str | None:
        """Require an error message on failure."""
        if info.data.get("success") is False and (v is None or not v.strip()):
            raise ValueError(
                with_code("error_message is required when success=False", E_RUN_FAILED)
            )
        return v

    @field_validator("metadata")
    @classmethod
    def validate_metadata(cls, v: dict[str, Any] | None) -> dict[str, Any] | None:
        """Limit metadata to 50 keys."""
        if v is not None and len(v) > 50:
            raise ValueError(f"metadata must have at most 50 keys, got {len(v)}")
        return v

    @classmethod
    def succeeded(
        cls, data: T, execution_time_ms: float, metadata: dict[str, Any] | None = None
    ) -> "RunResult[T]":
        """Create a successful RunResult."""
        return cls(
            success=True,
            data=data,
            execution_time_ms=execution_time_ms,
            metadata=metadata,
        )

    @classmethod
    def failed(
        cls,
        error_message: str,
        execution_time_ms: float,
        error_code: str | None = None,
        metadata: dict[str, Any] | None = None,
    ) -> "RunResult[T]":
        """Create a failed RunResult; the message is cut to MAX_ERROR_MESSAGE_LENGTH."""
        return cls(
            success=False,
            data=None,
            error_code=error_code or E_RUN_FAILED,
            error_message=error_message[:MAX_ERROR_MESSAGE_LENGTH],
            execution_time_ms=execution_time_ms,
            metadata=metadata,
        )
