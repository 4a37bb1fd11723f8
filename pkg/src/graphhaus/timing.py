"""Cooperative deadlines shared by every long-running computation.

All exponential solvers poll a :class:`Deadline` between node batches instead
of relying on forced termination. Deadlines carry their own clock so tests
and the scheduler can drive them with a virtual clock.
"""

from __future__ import annotations

import time
from typing import Callable, Optional

Clock = Callable[[], float]


class DeadlineExceeded(Exception):
    """Raised by solvers when their cooperative deadline has fired."""


class Deadline:
    """A point in time after which cooperative computations must stop.

    ``seconds=None`` means unlimited. ``clock`` defaults to the monotonic
    wall clock; pass a callable to run against virtual time.
    """

    __slots__ = ("_expires_at", "_clock")

    def __init__(self, seconds: Optional[float] = None, clock: Clock = time.monotonic):
        self._clock = clock
        self._expires_at = None if seconds is None else clock() + seconds

    @classmethod
    def unlimited(cls) -> "Deadline":
        return cls(None)

    def expired(self) -> bool:
        return self._expires_at is not None and self._clock() >= self._expires_at

    def check(self) -> None:
        """Raise :class:`DeadlineExceeded` if the deadline has fired."""
        if self.expired():
            raise DeadlineExceeded()

    def remaining(self) -> Optional[float]:
        """Seconds left, or None when unlimited. Never negative."""
        if self._expires_at is None:
            return None
        return max(0.0, self._expires_at - self._clock())


def as_deadline(value, clock: Clock = time.monotonic) -> Deadline:
    """Accept a Deadline, a number of seconds, or None (unlimited)."""
    if isinstance(value, Deadline):
        return value
    return Deadline(value, clock=clock)
