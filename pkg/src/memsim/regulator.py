"""Per-core dual read/write memory-bandwidth regulator.

Counts shared-cache fill requests (read side) and shared-cache writeback
drains (write side) per core per regulation period.  When either counter
reaches its budget the core is throttled -- it stops issuing new requests but
in-flight misses complete -- until all counters and throttles reset at the
next period boundary.
"""


def budget_lines(mbps, period_cycles, clock_hz, line_bytes):
    """Convert an MB/s threshold into a lines-per-period budget (floored)."""
    if mbps <= 0 or period_cycles <= 0 or clock_hz <= 0 or line_bytes <= 0:
        raise ValueError("budgets, period and clock must be positive")
    lines = int(mbps * 1e6 / line_bytes * (period_cycles / clock_hz))
    if lines == 0:
        raise ValueError(
            "budget of %s MB/s yields zero lines per period; unusable" % mbps)
    return lines


class RegulatorConfig:
    __slots__ = ("period_cycles", "read_budgets", "write_budgets", "line_bytes")

    def __init__(self, period_cycles, read_budgets, write_budgets, line_bytes=64):
        """Budgets are per-core lines/period; None means unregulated."""
        if period_cycles <= 0:
            raise ValueError("period must be positive")
        self.period_cycles = period_cycles
        self.read_budgets = list(read_budgets)
        self.write_budgets = list(write_budgets)
        self.line_bytes = line_bytes


class Regulator:
    def __init__(self, config, cores, engine):
        self.cfg = config
        self.cores = cores
        self.engine = engine
        n = len(cores)
        self.read_count = [0] * n
        self.write_count = [0] * n
        self.period_index = 0
        self.throttle_events = 0
        self.armed = False

    def start(self):
        """Arm the regulator: counting and throttling begin now and the first
        period boundary is one full period away."""
        self.armed = True
        self.read_count = [0] * len(self.cores)
        self.write_count = [0] * len(self.cores)
        self.engine.schedule(self.engine.now + self.cfg.period_cycles,
                             self.period_boundary)

    def _check(self, core_id):
        rb = self.cfg.read_budgets[core_id]
        wb = self.cfg.write_budgets[core_id]
        if ((rb is not None and self.read_count[core_id] >= rb)
                or (wb is not None and self.write_count[core_id] >= wb)):
            core = self.cores[core_id]
            if not core.throttled:
                core.apply_throttle(True)
                self.throttle_events += 1

    def on_miss(self, core_id, now):
        """Shared-cache fill request issued on behalf of core_id (demand or
        prefetch)."""
        if not self.armed:
            return
        self.read_count[core_id] += 1
        self._check(core_id)

    def on_writeback(self, core_id, now):
        """Shared-cache writeback drained to DRAM, charged to the core that
        dirtied the line."""
        if not self.armed:
            return
        self.write_count[core_id] += 1
        self._check(core_id)

    def period_boundary(self, now):
        # overshoot past a budget (from requests already in flight when the
        # throttle engaged) is carried into the next period as debt, so the
        # long-run average rate converges to the budget
        for i in range(len(self.cores)):
            rb = self.cfg.read_budgets[i]
            wb = self.cfg.write_budgets[i]
            self.read_count[i] = max(0, self.read_count[i] - rb) if rb else 0
            self.write_count[i] = max(0, self.write_count[i] - wb) if wb else 0
            over = ((rb is not None and self.read_count[i] >= rb)
                    or (wb is not None and self.write_count[i] >= wb))
            if self.cores[i].throttled and not over:
                self.cores[i].apply_throttle(False)
            elif over and not self.cores[i].throttled:
                self.cores[i].apply_throttle(True)
                self.throttle_events += 1
        self.period_index += 1
        self.engine.schedule(now + self.cfg.period_cycles, self.period_boundary)
