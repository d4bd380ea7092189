"""
Duty-cycled low-power nodes: sleep schedules and long-lived Interests.
"""

from dataclasses import dataclass

from ..errors import ConfigError
from ..ndn import Name
from ..sim_core import MS, SECOND, SimTime

DEFAULT_SLEEP_CYCLE_US = 10 * SECOND
DEFAULT_AWAKE_WINDOW_US = 500 * MS
DEFAULT_LONG_LIVED_LIFETIME_US = 30 * SECOND


@dataclass(frozen=True)
class SleepSchedule:
    """
    Periodic awake window: awake during [phase + k*cycle, phase + k*cycle + awake).
    """

    cycle_us: SimTime = DEFAULT_SLEEP_CYCLE_US
    awake_us: SimTime = DEFAULT_AWAKE_WINDOW_US
    phase_us: SimTime = 0

    def __post_init__(self):
        if self.awake_us <= 0:
            raise ConfigError("awake window must be positive")
        if self.awake_us >= self.cycle_us:
            raise ConfigError(
                f"awake window {self.awake_us} us must be shorter than the cycle {self.cycle_us} us")
        if self.phase_us < 0:
            raise ConfigError("sleep phase must not be negative")

    def _offset(self, t: SimTime) -> SimTime:
        return (t - self.phase_us) % self.cycle_us

    def is_awake(self, t: SimTime) -> bool:
        return self._offset(t) < self.awake_us

    def next_wake(self, t: SimTime) -> SimTime:
        """t itself when awake, else the start of the next awake window."""
        offset = self._offset(t)
        if offset < self.awake_us:
            return t
        return t + self.cycle_us - offset

    def window_end(self, t: SimTime) -> SimTime:
        """End of the awake window containing t, or of the next one."""
        wake = self.next_wake(t)
        return wake - self._offset(wake) + self.awake_us

    def remaining_awake(self, t: SimTime) -> SimTime:
        if not self.is_awake(t):
            return 0
        return self.window_end(t) - t


@dataclass(frozen=True)
class LongLivedInterest:
    """An Interest whose lifetime spans at least one full sleep cycle of its target."""

    name: Name
    lifetime_us: SimTime

    def check(self, schedule: SleepSchedule) -> 'LongLivedInterest':
        if self.lifetime_us <= schedule.cycle_us:
            raise ConfigError(
                f"long-lived lifetime {self.lifetime_us} us must exceed the sleep cycle "
                f"{schedule.cycle_us} us")
        return self
