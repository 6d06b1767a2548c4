"""Centralized passivity observer: cumulative network energy bookkeeping.

The ledger maintains the raw interconnection energy E (hub passivity credit
plus per-port feedback flux), the dissipation energy D injected by the
stabilizer, the observable energy E_obs = E + D (injections through the
previous step only), and the controlled energy E_hat = E + D after the
current step's injection is recorded.
"""

from __future__ import annotations

import numpy as np

from .errors import SimulationFault


class EnergyLedger:
    def __init__(self, dt: float, xi: float, num_ports: int):
        if dt <= 0.0:
            raise SimulationFault("sample period must be positive")
        if xi < 0.0:
            raise SimulationFault("hub passivity index must be nonnegative")
        if num_ports < 1:
            raise SimulationFault("ledger needs at least one port")
        self.dt = dt
        self.xi = xi
        self.num_ports = num_ports
        self.raw_energy = 0.0         # E
        self.injected_energy = 0.0    # D
        self.observable_energy = 0.0  # E_obs at the last ingest
        self.controlled_energy = 0.0  # E_hat
        self.step_count = 0

    def _as_ports(self, values, name: str) -> np.ndarray:
        arr = np.asarray(values, dtype=float)
        if arr.ndim == 0:
            arr = np.full(self.num_ports, float(arr))
        if arr.shape != (self.num_ports,):
            raise SimulationFault(
                f"{name} has shape {arr.shape}, expected ({self.num_ports},)"
            )
        if not np.all(np.isfinite(arr)):
            raise SimulationFault(f"non-finite {name}: {arr!r}")
        return arr

    def ingest_step(self, y, u) -> float:
        """Accumulate one step of raw energy and return the observable energy.

        ``y`` is the per-port hub output (the broadcast hub velocity on every
        port, so a scalar is accepted), ``u`` the per-port raw feedback.  The
        hub credit xi*y^2 enters once, not per port; injections recorded so
        far (through step n-1) are included via D.
        """
        y = self._as_ports(y, "port output vector")
        u = self._as_ports(u, "port feedback vector")
        hub_output = float(y[0])
        self.raw_energy += self.dt * (
            self.xi * hub_output * hub_output + float(np.dot(u, y))
        )
        self.observable_energy = self.raw_energy + self.injected_energy
        self.step_count += 1
        return self.observable_energy

    def record_injection(self, gains, squared_outputs) -> None:
        """Add this step's stabilizer dissipation dt * A.S to D and refresh E_hat."""
        gains = self._as_ports(gains, "gain vector")
        squared = self._as_ports(squared_outputs, "squared-output vector")
        if np.any(squared < 0.0):
            raise SimulationFault("squared-output vector has a negative entry")
        self.injected_energy += self.dt * float(np.dot(gains, squared))
        self.controlled_energy = self.raw_energy + self.injected_energy
