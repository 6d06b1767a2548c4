"""Time-varying transport delay: sinusoidal delay law plus ring-buffer line."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, SimulationFault


@dataclass(frozen=True)
class DelayProfile:
    """Sinusoidal delay law d(t) = offset + amplitude * sin(frequency * t)."""

    offset: float
    amplitude: float
    frequency: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.offset, self.amplitude, self.frequency)):
            raise ConfigurationError("delay profile parameters must be finite")
        if self.offset - abs(self.amplitude) < 0.0:
            raise ConfigurationError(
                f"delay profile (offset={self.offset}, amplitude={self.amplitude}) "
                "goes negative; offset - |amplitude| must be >= 0"
            )

    def delay_at(self, t: float) -> float:
        return self.offset + self.amplitude * math.sin(self.frequency * t)

    @property
    def max_delay(self) -> float:
        return self.offset + abs(self.amplitude)

    def halved(self) -> "DelayProfile":
        """One leg of a round trip split 50/50."""
        return DelayProfile(self.offset / 2.0, self.amplitude / 2.0, self.frequency)


class DelayLine:
    """Ring buffer read with nearest-sample indexing.

    Samples are pushed once per period; the read index for a requested delay
    d is the stored sample whose timestamp is nearest to t_now - d (ties
    round toward the more recent sample).  Before t_now - d reaches zero the
    line returns the cold-start value 0.
    """

    def __init__(self, max_delay: float, dt: float):
        if dt <= 0.0:
            raise ConfigurationError("sample period must be positive")
        if max_delay < 0.0:
            raise ConfigurationError("maximum delay must be nonnegative")
        self.dt = dt
        self.capacity = int(math.ceil(max_delay / dt)) + 2
        self._buf = np.zeros(self.capacity)
        self._n = 0  # index of the next push

    def push_and_sample(self, sample: float, t_now: float, d: float) -> float:
        if not math.isfinite(sample) or not math.isfinite(d):
            raise SimulationFault("non-finite delay-line input")
        if d < 0.0:
            raise ConfigurationError("requested delay must be nonnegative")
        n = self._n
        self._buf[n % self.capacity] = sample
        self._n = n + 1
        if t_now - d < 0.0:
            return 0.0
        k = int(math.floor((n - d / self.dt) + 0.5))
        if k < 0:
            return 0.0
        if n - k >= self.capacity:
            raise ConfigurationError(
                f"requested delay {d} exceeds the line capacity "
                f"({self.capacity} samples at dt={self.dt})"
            )
        return float(self._buf[k % self.capacity])
