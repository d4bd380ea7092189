"""
Errors Module

Exception hierarchy shared by every meshsim sub-package.
"""


class MeshSimError(Exception):
    """Base class for all meshsim errors."""


class SimulationError(MeshSimError):
    """Fatal engine error, e.g. an event scheduled in the past."""


class ConfigError(MeshSimError):
    """Invalid scenario, batch or protocol configuration."""


class ProtocolError(MeshSimError):
    """A protocol operation was invoked in a state that does not allow it."""


class FriendshipError(ProtocolError):
    """Friend/LPN operation without an established friendship."""


class PayloadTooLargeError(ProtocolError):
    """Payload does not fit a single unsegmented advertisement."""


class NoRouteError(ProtocolError):
    """Interest has neither a FIB route nor a content store hit."""


class MetricsError(MeshSimError):
    """Metric cannot be computed from the given records."""


__all__ = [
    'MeshSimError',
    'SimulationError',
    'ConfigError',
    'ProtocolError',
    'FriendshipError',
    'PayloadTooLargeError',
    'NoRouteError',
    'MetricsError',
]
