"""Log-law power/compute conversion for CPU and GPU resources.

A resource delivers `max(coeff_a + coeff_b * ln(P), 0)` compute units per second when
drawing P watts. The zero crossing `p_idle = exp(-coeff_a / coeff_b)` is the idle floor.
DVFS is modelled as a cap on the power a resource may draw: `power_fraction * p_max`.
"""

import math
from functools import partial
from typing import Final

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, Field, model_validator

from src.domain.errors import (
    E_INFEASIBLE_RATE,
    E_INVALID_POWER_MODEL,
    E_NON_POSITIVE_POWER,
    PowerModelError,
    with_code,
)

FloatArray = npt.NDArray[np.float64]

# Relative slack allowed when checking a rate against the rate at p_max.
RATE_TOLERANCE: Final = 1e-12


class ResourcePowerModel(BaseModel):
    """Power model of one CPU or GPU resource.

    Attributes:
        coeff_a: Dimensionless offset of the log law
        coeff_b: Dimensionless scale of the log law (> 0)
        p_max: Maximum operating power in watts

    Raises:
        ValueError: If p_max does not exceed the derived idle power (error code: E_INVALID_POWER_MODEL)
    """

    coeff_a: float = Field(..., description="Log-law offset")
    coeff_b: float = Field(..., gt=0.0, description="Log-law scale (> 0)")
    p_max: float = Field(..., gt=0.0, description="Maximum power of one resource in watts")

    model_config = {"frozen": True}

    @property
    def p_idle(self) -> float:
        """Power at zero compute, in watts."""
        return math.exp(-self.coeff_a / self.coeff_b)

    @property
    def max_rate(self) -> float:
        """Compute rate at p_max."""
        return self.coeff_a + self.coeff_b * math.log(self.p_max)

    @model_validator(mode="after")
    def validate_power_range(self) -> "ResourcePowerModel":
        """Validate p_max > p_idle > 0."""
        if not self.p_max > self.p_idle:
            raise ValueError(
                with_code(
                    f"p_max ({self.p_max} W) must exceed idle power ({self.p_idle:.4f} W)",
                    E_INVALID_POWER_MODEL,
                )
            )
        return self


CPU_MODEL: Final = ResourcePowerModel(coeff_a=-602.0, coeff_b=134.0, p_max=300.0)
GPU_MODEL: Final = ResourcePowerModel(coeff_a=-27.1, coeff_b=7.3, p_max=300.0)


class DvfsState(BaseModel):
    """Node operating point, stored as an index into the platform's DVFS ladder.

    Attributes:
        step: Ladder index (0 = slowest)
        power_fraction: Fraction of maximum power allowed at this step, in [0.5, 1.0]
    """

    step: int = Field(..., ge=0, description="Ladder index")
    power_fraction: float = Field(..., ge=0.5, le=1.0, description="Fraction of p_max")

    model_config = {"frozen": True}


def compute_rate(model: ResourcePowerModel, power: float) -> float:
    """Compute rate delivered when drawing `power` watts.

    Args:
        model: Resource power model
        power: Power draw in watts (> 0)

    Returns:
        max(coeff_a + coeff_b * ln(power), 0)

    Raises:
        PowerModelError: If power is not positive (error code: E_NON_POSITIVE_POWER)
    """
    if not power > 0.0:
        raise PowerModelError(f"power must be > 0 W, got {power}", E_NON_POSITIVE_POWER)
    return max(model.coeff_a + model.coeff_b * math.log(power), 0.0)


def power_for_rate(model: ResourcePowerModel, rate: float) -> float:
    """Power needed to deliver `rate` compute units per second (inverse of compute_rate).

    Args:
        model: Resource power model
        rate: Delivered compute rate, 0 <= rate <= rate at p_max

    Returns:
        p_idle for rate 0, exp((rate - coeff_a) / coeff_b) otherwise

    Raises:
        PowerModelError: If rate is negative or above the rate at p_max (error code: E_INFEASIBLE_RATE)
    """
    if rate < 0.0 or rate > model.max_rate * (1.0 + RATE_TOLERANCE):
        raise PowerModelError(
            f"rate {rate} outside [0, {model.max_rate}]", E_INFEASIBLE_RATE
        )
    if rate == 0.0:
        return model.p_idle
    return min(math.exp((rate - model.coeff_a) / model.coeff_b), model.p_max)


def rate_at_dvfs(model: ResourcePowerModel, state: DvfsState) -> float:
    """Compute-rate ceiling of a resource running at a DVFS operating point."""
    return compute_rate(model, state.power_fraction * model.p_max)


def compute_rate_array(model: ResourcePowerModel, power: FloatArray) -> FloatArray:
    """Vectorised compute_rate.

    Raises:
        PowerModelError: If any power is not positive (error code: E_NON_POSITIVE_POWER)
    """
    if power.size and not bool(np.all(power > 0.0)):
        raise PowerModelError("power samples must be > 0 W", E_NON_POSITIVE_POWER)
    rates: FloatArray = np.maximum(model.coeff_a + model.coeff_b * np.log(power), 0.0)
    return rates


def capped_power_array(
    model: ResourcePowerModel, rate: FloatArray, power_fraction: float | FloatArray
) -> FloatArray:
    """Power drawn by streams delivering `rate` under a DVFS ceiling.

    Streams at or above the ceiling draw exactly `power_fraction * p_max`; the rest draw
    the inverse-law power of their rate (p_idle at rate 0). `power_fraction` broadcasts
    against `rate`, so one call can cover every ladder step.
    """
    cap_power = np.asarray(power_fraction, dtype=np.float64) * model.p_max
    # Same rounding as rate_at_dvfs, so saturated streams land exactly on cap_power.
    ceiling = np.vectorize(partial(compute_rate, model), otypes=[np.float64])(cap_power)
    below = np.exp((np.minimum(rate, ceiling) - model.coeff_a) / model.coeff_b)
    power: FloatArray = np.where(rate >= ceiling, cap_power, np.minimum(below, cap_power))
    return power
