"""Base-station power/capacity mapping and the carbon-efficiency metric."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BelowCircuitPower, UndefinedMetric

__all__ = [
    "BaseStationParams",
    "CapacityDemand",
    "CarbonModel",
    "capacity",
    "min_power",
    "total_demand",
    "greenness",
]


@dataclass(frozen=True)
class BaseStationParams:
    """Electrical and radio parameters of one base station.

    ``p_c`` is the constant circuit power (cooling, processing); power above
    it is transmit power. ``h2`` is the worst-user channel power gain and
    ``sigma2`` the noise power at that user.
    """

    bus: int
    p_c: float
    p_min: float
    p_max: float
    h2: float
    sigma2: float

    def __post_init__(self):
        if not 0 <= self.p_min <= self.p_max:
            raise ValueError(f"need 0 <= p_min <= p_max, got [{self.p_min}, {self.p_max}]")
        if self.p_c < 0:
            raise ValueError(f"p_c must be >= 0, got {self.p_c}")
        if self.h2 <= 0 or self.sigma2 <= 0:
            raise ValueError("h2 and sigma2 must be positive")

    @property
    def snr_per_watt(self) -> float:
        """Received SNR per unit of transmit power."""
        return self.h2 / self.sigma2


@dataclass(frozen=True)
class CapacityDemand:
    """Network capacity floor plus optional per-station floors, bits/s/Hz."""

    c0: float
    per_bs_floor: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.c0 < 0:
            raise ValueError(f"c0 must be >= 0, got {self.c0}")
        if self.per_bs_floor is not None:
            floors = tuple(float(f) for f in self.per_bs_floor)
            if any(f < 0 for f in floors):
                raise ValueError("per-station floors must be >= 0")
            object.__setattr__(self, "per_bs_floor", floors)

    def floor_for(self, idx: int) -> float:
        if self.per_bs_floor is None:
            return 0.0
        return self.per_bs_floor[idx]


@dataclass(frozen=True)
class CarbonModel:
    """Emission factor of imported brown energy, tons CO2 per kWh."""

    eta: float = 5e-4

    def __post_init__(self):
        if self.eta <= 0:
            raise ValueError(f"eta must be positive, got {self.eta}")


def capacity(p_n: float, bs: BaseStationParams) -> float:
    """Downlink spectral efficiency at total station power ``p_n``.

    log2(1 + (p_n - p_c) * h2 / sigma2); raises
    :class:`BelowCircuitPower` when ``p_n`` cannot cover the circuit power.
    """
    if p_n < bs.p_c:
        raise BelowCircuitPower(f"p_n = {p_n} < circuit power {bs.p_c}")
    return float(np.log2(1.0 + (p_n - bs.p_c) * bs.snr_per_watt))


def min_power(c_n: float, bs: BaseStationParams) -> float:
    """Least station power delivering spectral efficiency ``c_n``.

    Inverse of :func:`capacity`: (2**c_n - 1) * sigma2 / h2 + p_c.
    """
    if c_n < 0:
        raise ValueError(f"capacity must be >= 0, got {c_n}")
    return float((2.0**c_n - 1.0) / bs.snr_per_watt + bs.p_c)


def total_demand(users, r_user: float) -> CapacityDemand:
    """Per-station floors from active-user counts at ``r_user`` bits/s/Hz each."""
    counts = np.asarray(users, dtype=float)
    if np.any(counts < 0):
        raise ValueError("user counts must be >= 0")
    if r_user <= 0:
        raise ValueError(f"r_user must be positive, got {r_user}")
    floors = tuple(float(c * r_user) for c in counts)
    return CapacityDemand(c0=float(sum(floors)), per_bs_floor=floors)


def greenness(total_capacity: float, e0_kwh: float, carbon: CarbonModel) -> float:
    """Spectral efficiency per ton of CO2 emitted, bits/tonCO2/Hz.

    Undefined when no brown energy was imported (``e0_kwh <= 0``); that case
    is reported as :class:`UndefinedMetric` rather than a number.
    """
    if e0_kwh <= 0:
        raise UndefinedMetric(f"no brown import (e0 = {e0_kwh} kWh); greenness undefined")
    return float(total_capacity / (carbon.eta * e0_kwh))
