"""Bandwidth regulator: budget conversion, arming, throttling, period reset,
and overshoot debt carryover."""

import pytest

from memsim.engine import Engine
from memsim.regulator import Regulator, RegulatorConfig, budget_lines


class FakeCore:
    def __init__(self):
        self.throttled = False
        self.transitions = []

    def apply_throttle(self, on):
        self.throttled = on
        self.transitions.append(on)


def make(read=None, write=None, period=1000):
    cores = [FakeCore() for _ in range(4)]
    cfg = RegulatorConfig(period, [read] * 4, [write] * 4)
    eng = Engine()
    return Regulator(cfg, cores, eng), cores, eng


# ---- budget conversion oracle ----

def test_budget_lines_oracle_values():
    # 100 MB/s over a 1 ms period at 64 B/line: 100e6 * 1e-3 / 64 = 1562.5
    assert budget_lines(100.0, 1_500_000, 1.5e9, 64) == 1562
    assert budget_lines(500.0, 1_500_000, 1.5e9, 64) == 7812
    # 10 us period at 1.5 GHz = 15000 cycles
    assert budget_lines(500.0, 15_000, 1.5e9, 64) == 78
    assert budget_lines(100.0, 15_000, 1.5e9, 64) == 15
    assert budget_lines(50.0, 15_000, 1.5e9, 64) == 7


def test_budget_lines_rejects_unusable_inputs():
    with pytest.raises(ValueError):
        budget_lines(0.0, 1000, 1.5e9, 64)
    with pytest.raises(ValueError):
        budget_lines(0.001, 100, 1.5e9, 64)   # rounds to zero lines


# ---- arming ----

def test_unarmed_regulator_counts_nothing():
    reg, cores, eng = make(read=2)
    for _ in range(10):
        reg.on_miss(1, 0)
    assert reg.read_count[1] == 0
    assert not cores[1].throttled


def test_arming_resets_counters_and_schedules_boundary():
    reg, cores, eng = make(read=2, period=100)
    reg.start()
    reg.on_miss(1, 5)
    reg.on_miss(1, 6)
    assert cores[1].throttled
    eng.run_until(lambda: reg.period_index >= 1)
    assert eng.now == 100
    assert not cores[1].throttled
    assert reg.read_count[1] == 0


# ---- throttling rules ----

def test_read_budget_throttles_at_threshold():
    reg, cores, eng = make(read=3)
    reg.start()
    reg.on_miss(0, 1)
    reg.on_miss(0, 2)
    assert not cores[0].throttled
    reg.on_miss(0, 3)
    assert cores[0].throttled
    assert reg.throttle_events == 1


def test_write_budget_throttles_independently():
    reg, cores, eng = make(read=100, write=2)
    reg.start()
    reg.on_writeback(2, 1)
    reg.on_writeback(2, 2)
    assert cores[2].throttled
    assert reg.read_count[2] == 0


def test_unregulated_core_never_throttled():
    reg, cores, eng = make(read=None, write=None)
    reg.start()
    for i in range(1000):
        reg.on_miss(3, i)
        reg.on_writeback(3, i)
    assert not cores[3].throttled


def test_per_core_isolation():
    reg, cores, eng = make(read=2)
    reg.start()
    reg.on_miss(0, 1)
    reg.on_miss(0, 2)
    assert cores[0].throttled
    assert not any(c.throttled for c in cores[1:])


# ---- debt carryover ----

def test_overshoot_carries_into_next_period():
    reg, cores, eng = make(write=5, period=100)
    reg.start()
    for i in range(9):                 # 4 over budget (in-flight stragglers)
        reg.on_writeback(0, i)
    assert cores[0].throttled
    eng.run_until(lambda: reg.period_index >= 1)
    assert reg.write_count[0] == 4     # debt, not a clean slate
    assert not cores[0].throttled      # 4 < 5: may run again
    reg.on_writeback(0, 101)
    assert cores[0].throttled          # debt plus one hits the budget


def test_debt_at_or_above_budget_keeps_core_throttled():
    reg, cores, eng = make(read=3, period=100)
    reg.start()
    for i in range(8):
        reg.on_miss(1, i)
    eng.run_until(lambda: reg.period_index >= 1)
    assert reg.read_count[1] == 5
    assert cores[1].throttled          # still owes more than a full period
    eng.run_until(lambda: reg.period_index >= 2)
    assert reg.read_count[1] == 2
    assert not cores[1].throttled
