"""Fault types shared across the package."""


class ConfigurationError(ValueError):
    """A configuration value violates an invariant (bad weights, delays, schema...)."""


class SimulationFault(RuntimeError):
    """A runtime signal is unusable (non-finite input, mismatched port count...)."""
