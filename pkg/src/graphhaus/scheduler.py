"""Multilevel-feedback-queue scheduler for invariant computations.

Jobs enter the highest-priority queue and are demoted one level each time
they exhaust that level's time budget; a job that exhausts the final budget
is recorded TimedOut. Workers always drain the lowest-index non-empty queue
first, so a few long computations never block the short ones. Preemption is
cooperative: a demoted job restarts from scratch at the next level.
"""

from __future__ import annotations

import os
import threading
import time
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, List, Optional, Tuple

from .invariants import InvariantValue, Status
from .timing import Clock, Deadline, DeadlineExceeded

DEFAULT_LEVELS = (1.0, 30.0, 300.0)


class ShuttingDown(Exception):
    pass


class SubmitResult(str, Enum):
    ACCEPTED = "accepted"
    DUPLICATE = "duplicate"


@dataclass(frozen=True)
class Job:
    graph_id: int
    invariant_id: str


@dataclass
class SchedulerConfig:
    levels: Tuple[float, ...] = DEFAULT_LEVELS
    worker_count: Optional[int] = None  # default: cores minus reserved
    reserved_cores: int = 1

    def __post_init__(self):
        if not self.levels:
            raise ValueError("at least one level budget is required")
        if any(b <= 0 for b in self.levels):
            raise ValueError("level budgets must be positive")
        if list(self.levels) != sorted(set(self.levels)):
            raise ValueError("level budgets must be strictly increasing")
        if self.worker_count is None:
            cores = os.cpu_count() or 1
            self.worker_count = max(1, cores - self.reserved_cores)
        if self.worker_count < 1:
            raise ValueError("worker_count must be positive")


ComputeFn = Callable[[int, str, Deadline], InvariantValue]
SinkFn = Callable[[int, str, InvariantValue], None]
ObserverFn = Callable[[str, Job, int, float], None]  # event, job, level, clock time


class MlfqScheduler:
    """In-process MLFQ over a bounded worker pool.

    ``step()`` executes one job slice synchronously and is the unit both the
    worker threads and deterministic virtual-clock tests are built from.
    """

    def __init__(
        self,
        config: SchedulerConfig,
        compute: ComputeFn,
        sink: SinkFn,
        clock: Clock = time.monotonic,
        observer: Optional[ObserverFn] = None,
    ):
        self.config = config
        self._compute = compute
        self._sink = sink
        self._clock = clock
        self._observer = observer
        self._queues: List[deque] = [deque() for _ in config.levels]
        self._live: set = set()  # (graph_id, invariant_id) queued or running
        self._running = 0
        self._shutting_down = False
        self._cond = threading.Condition()
        self._threads: List[threading.Thread] = []

    def _emit(self, event: str, job: Job, level: int) -> None:
        if self._observer is not None:
            self._observer(event, job, level, self._clock())

    # -- submission ----------------------------------------------------------

    def submit(self, job: Job) -> SubmitResult:
        key = (job.graph_id, job.invariant_id)
        with self._cond:
            if self._shutting_down:
                raise ShuttingDown()
            if key in self._live:
                return SubmitResult.DUPLICATE
            self._live.add(key)
            self._queues[0].append(job)
            self._emit("enqueued", job, 0)
            self._cond.notify()
        return SubmitResult.ACCEPTED

    # -- execution -----------------------------------------------------------

    def _pick(self) -> Optional[Tuple[Job, int]]:
        for level, queue in enumerate(self._queues):
            if queue:
                self._running += 1
                return queue.popleft(), level
        return None

    def step(self) -> bool:
        """Run one job slice; returns False when every queue is empty."""
        with self._cond:
            picked = self._pick()
        if picked is None:
            return False
        job, level = picked
        self._run_slice(job, level)
        return True

    def _run_slice(self, job: Job, level: int) -> None:
        budget = self.config.levels[level]
        last_level = level == len(self.config.levels) - 1
        self._emit("started", job, level)
        deadline = Deadline(budget, clock=self._clock)
        try:
            result = self._compute(job.graph_id, job.invariant_id, deadline)
            timed_out = result.status is Status.TIMED_OUT
        except DeadlineExceeded:
            timed_out = True
            result = InvariantValue.timed_out()
        except Exception:
            # a crash is isolated to its job; the worker carries on
            result = InvariantValue.failed()
            timed_out = False
        with self._cond:
            self._running -= 1
            if timed_out and not last_level:
                self._queues[level + 1].append(job)
                self._emit("demoted", job, level + 1)
            else:
                self._live.discard((job.graph_id, job.invariant_id))
                self._emit("finished", job, level)
                self._sink(job.graph_id, job.invariant_id, result)
            self._cond.notify_all()

    def run_until_idle(self) -> int:
        """Synchronously drain every queue; returns the number of slices run."""
        slices = 0
        while self.step():
            slices += 1
        return slices

    # -- worker pool -----------------------------------------------------------

    def _worker(self) -> None:
        while True:
            with self._cond:
                while not self._shutting_down and not any(self._queues):
                    self._cond.wait()
                if self._shutting_down and not any(self._queues):
                    return
                picked = self._pick()
            if picked is not None:
                self._run_slice(*picked)

    def start(self) -> None:
        for i in range(self.config.worker_count):
            t = threading.Thread(target=self._worker, name=f"mlfq-worker-{i}", daemon=True)
            t.start()
            self._threads.append(t)

    def wait_idle(self, timeout: Optional[float] = None) -> bool:
        with self._cond:
            return self._cond.wait_for(
                lambda: not self._live and self._running == 0, timeout=timeout
            )

    def shutdown(self, wait: bool = True) -> None:
        """Refuse new work; running slices finish within their level budgets."""
        with self._cond:
            self._shutting_down = True
            self._cond.notify_all()
        if wait:
            for t in self._threads:
                t.join()
            self._threads.clear()

    def run_loop(self) -> None:
        """Serve with the worker pool until shutdown() is called elsewhere."""
        self.start()
        for t in list(self._threads):
            t.join()
