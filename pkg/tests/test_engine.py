"""Event queue and clock-advance behavior of the simulation engine."""

import pytest

from memsim.engine import DEADLOCK, DONE, TIMEOUT, Engine, SimulationError


class Ticker:
    """Component stub that reports busy for a fixed number of cycles."""

    def __init__(self, busy_for=0):
        self.busy_for = busy_for
        self.ticks = []

    def tick(self, now):
        self.ticks.append(now)
        return now < self.busy_for


def test_events_fire_in_time_order():
    eng = Engine()
    log = []
    eng.schedule(5, lambda now: log.append(("b", now)))
    eng.schedule(2, lambda now: log.append(("a", now)))
    eng.schedule(9, lambda now: log.append(("c", now)))
    cycle, status = eng.run_until(lambda: len(log) == 3)
    assert status == DONE
    assert log == [("a", 2), ("b", 5), ("c", 9)]
    assert cycle == 9


def test_same_cycle_events_fire_in_scheduling_order():
    eng = Engine()
    log = []
    for tag in "xyz":
        eng.schedule(4, lambda now, t=tag: log.append(t))
    eng.run_until(lambda: len(log) == 3)
    assert log == ["x", "y", "z"]


def test_scheduling_in_the_past_is_fatal():
    eng = Engine()
    eng.schedule(3, lambda now: None)
    eng.run_until(lambda: eng.now >= 3)
    with pytest.raises(SimulationError):
        eng.schedule(1, lambda now: None)


def test_clock_skips_idle_gaps_to_next_event():
    eng = Engine()
    fired = []
    eng.schedule(1000, lambda now: fired.append(now))
    cycle, status = eng.run_until(lambda: bool(fired))
    assert status == DONE
    assert cycle == 1000
    assert fired == [1000]


def test_busy_component_forces_cycle_by_cycle_advance():
    eng = Engine()
    t = Ticker(busy_for=5)
    eng.components = [t]
    eng.schedule(100, lambda now: None)
    eng.run_until(lambda: eng.now >= 5)
    # every cycle before the stop condition was ticked, no skipping while busy
    assert t.ticks == [0, 1, 2, 3, 4]


def test_deadlock_when_nothing_can_progress():
    eng = Engine()
    eng.components = [Ticker(busy_for=0)]
    cycle, status = eng.run_until(lambda: False)
    assert status == DEADLOCK


def test_timeout_at_cycle_limit():
    eng = Engine(cycle_limit=50)
    eng.components = [Ticker(busy_for=10 ** 9)]
    cycle, status = eng.run_until(lambda: False)
    assert status == TIMEOUT
    assert cycle == 50


def test_events_scheduled_during_tick_fire_same_cycle():
    eng = Engine()
    log = []

    class Scheduler:
        def tick(self, now):
            if now == 2:
                eng.schedule(2, lambda n: log.append(n))
            return now < 4

    eng.components = [Scheduler()]
    eng.run_until(lambda: eng.now >= 4)
    assert log == [2]
