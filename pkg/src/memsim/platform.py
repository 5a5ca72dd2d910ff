"""Wires one complete platform instance: four in-order cores with private
L1D caches and stride prefetchers, a shared L2 with its own prefetcher, a
DRAM controller, and an optional bandwidth regulator.  Runs a scenario with
a warmup phase followed by a measured phase and reports raw counters.
"""

from . import cache as _c
from . import engine as _e
from .cache import Cache
from .config import NUM_CORES
from .core import Core
from .dram import DramConfig, DramController
from .prefetch import PrefetcherConfig, StridePrefetcher
from .regulator import Regulator, RegulatorConfig, budget_lines
from .workload import (ATTACKER, VICTIM, WorkloadSpec, WorkloadState,
                       disjoint_layout)


class _L1Group:
    """Ticks the private L1Ds in rotating order so no core holds permanent
    first claim on the shared L2's access port."""

    def __init__(self, l1s):
        self.l1s = l1s

    def tick(self, now):
        n = len(self.l1s)
        start = now % n
        for i in range(n):
            self.l1s[(start + i) % n].tick(now)


class _L1Downstream:
    """L1D's view of the shared L2 (fill requests and dirty writebacks)."""

    def __init__(self, l1, l2, l2_pf, engine):
        self.l1 = l1
        self.l2 = l2
        self.l2_pf = l2_pf
        self.engine = engine

    def request_fill(self, line_addr, core, prefetch, now):
        l1 = self.l1

        def fill_done(at):
            l1.fill_complete(line_addr, at)

        # the L1 has already committed an MSHR to this fill, so even an
        # L1-prefetch request is a hard request at the L2 (soft=False)
        outcome, ready = self.l2.access(line_addr, False, core, now,
                                        prefetch=prefetch, waiter=fill_done,
                                        soft=False)
        if outcome == _c.BLOCKED:
            return False
        if self.l2_pf is not None:
            # the L2 prefetcher trains on every CPU-side access, whether the
            # L1 issued it for demand or for its own prefetcher
            self.l2_pf.observe(core, line_addr, now)
        if outcome == _c.HIT:
            self.engine.schedule(ready, fill_done)
        return True

    def accept_writeback(self, line_addr, owner, now):
        return self.l2.wb_insert(line_addr, owner, now)


class _DramDownstream:
    """L2's view of the DRAM controller."""

    def __init__(self, l2, dram, regulator=None):
        self.l2 = l2
        self.dram = dram
        self.regulator = regulator
        self.write_lines_by_core = [0] * NUM_CORES

    def request_fill(self, line_addr, core, prefetch, now):
        l2 = self.l2

        def read_done(addr, at):
            l2.fill_complete(addr, at)

        return self.dram.enqueue_read(line_addr, read_done, now)

    def accept_writeback(self, line_addr, owner, now):
        if not self.dram.enqueue_write(line_addr):
            return False
        self.write_lines_by_core[owner] += 1
        if self.regulator is not None:
            self.regulator.on_writeback(owner, now)
        return True


class RunResult:
    __slots__ = ("status", "measure_start", "end_cycle", "victim_cycles",
                 "read_lines_by_core", "write_lines_by_core",
                 "victim_l2_accesses", "victim_l2_hits",
                 "l2_blocked_cycles", "l2_onsets_mshr", "l2_onsets_wb",
                 "l2_fills", "l2_prefetch_fills", "throttle_events",
                 "clock_hz", "line_bytes")

    @property
    def victim_l2_miss_rate(self):
        acc = self.victim_l2_accesses
        if acc == 0:
            return 0.0
        return (acc - self.victim_l2_hits) / acc

    @property
    def prefetch_fill_fraction(self):
        if self.l2_fills == 0:
            return 0.0
        return self.l2_prefetch_fills / self.l2_fills

    def bandwidth_mbps(self, lines):
        cycles = self.victim_cycles
        if cycles <= 0:
            return 0.0
        seconds = cycles / self.clock_hz
        return lines * self.line_bytes / seconds / 1e6

    def read_mbps(self, core):
        return self.bandwidth_mbps(self.read_lines_by_core[core])

    def write_mbps(self, core):
        return self.bandwidth_mbps(self.write_lines_by_core[core])


class System:
    """One isolated simulation instance built from a ScenarioConfig."""

    def __init__(self, config):
        self.config = config
        v = config.values
        line = v["line.bytes"]
        self.clock_hz = v["clock.hz"]
        self.line_bytes = line
        self.engine = _e.Engine(cycle_limit=v["scenario.cycle_limit"])

        self.l2 = Cache("L2", v["l2.size_kb"] * 1024, v["l2.ways"], line,
                        v["l2.hit_latency"], v["l2.mshrs"], v["l2.wb"],
                        ports=v["l2.ports"])
        self.l1s = [Cache("L1D%d" % n, v["l1d.size_kb"] * 1024, v["l1d.ways"],
                          line, v["l1d.hit_latency"], v["l1d.mshrs"],
                          v["l1d.wb"]) for n in range(NUM_CORES)]

        if v["partition.enabled"]:
            per = v["l2.ways"] // NUM_CORES
            self.l2.set_partition(
                [range(n * per, (n + 1) * per) for n in range(NUM_CORES)])

        dram_cfg = DramConfig(
            read_queue_size=v["dram.read_queue"],
            write_queue_size=v["dram.write_queue"],
            banks=v["dram.banks"],
            t_row_hit=v["dram.t_row_hit"],
            t_row_conflict=v["dram.t_row_conflict"],
            t_bus=v["dram.t_bus"],
            drain_high=v["dram.drain_high"],
            drain_low=v["dram.drain_low"],
            lines_per_row=v["dram.lines_per_row"])
        self.dram = DramController(dram_cfg, self.engine, line_bytes=line)

        # workloads and cores
        self.specs = []
        for n in range(NUM_CORES):
            kind = v["core%d.workload" % n]
            if kind == "none":
                self.specs.append(None)
                continue
            role = VICTIM if n == 0 else ATTACKER
            self.specs.append(WorkloadSpec(
                kind, v["core%d.wset_kb" % n] * 1024,
                stride_bytes=v["core%d.stride" % n],
                iterations=v["core0.iterations"] if n == 0 else None,
                role=role))
        disjoint_layout([s for s in self.specs if s is not None])

        self.cores = [Core(n, self.engine, self.l1s[n],
                           store_miss_limit=v["core.store_miss_limit"])
                      for n in range(NUM_CORES)]

        # regulator (event-driven; hooks installed below)
        self.regulator = None
        if v["regulator.enabled"]:
            period_cycles = max(1, round(v["regulator.period_us"] * 1e-6
                                         * self.clock_hz))
            rb, wb = [], []
            for n in range(NUM_CORES):
                rm = v["core%d.read_mbps" % n]
                wm = v["core%d.write_mbps" % n]
                rb.append(budget_lines(rm, period_cycles, self.clock_hz, line)
                          if rm > 0 else None)
                wb.append(budget_lines(wm, period_cycles, self.clock_hz, line)
                          if wm > 0 else None)
            self.regulator = Regulator(
                RegulatorConfig(period_cycles, rb, wb, line), self.cores,
                self.engine)
            self.l2.on_miss = lambda core, prefetch, now: \
                self.regulator.on_miss(core, now)

        # prefetchers
        self.l2_pf = None
        if v["l2_pf.enabled"]:
            self.l2_pf = StridePrefetcher(
                PrefetcherConfig(v["l2_pf.degree"], v["l2_pf.queue"],
                                 min_free=0),
                self.l2, cores=self.cores)
        self.l1_pfs = []
        for n in range(NUM_CORES):
            pf = None
            if v["l1d_pf.enabled"]:
                pf = StridePrefetcher(
                    PrefetcherConfig(v["l1d_pf.degree"], v["l1d_pf.queue"],
                                     min_free=0),
                    self.l1s[n], cores=self.cores)
            self.l1_pfs.append(pf)
            self.cores[n].prefetcher = pf

        # downstream wiring
        self.dram_adapter = _DramDownstream(self.l2, self.dram, self.regulator)
        self.l2.downstream = self.dram_adapter
        for n in range(NUM_CORES):
            self.l1s[n].downstream = _L1Downstream(
                self.l1s[n], self.l2, self.l2_pf, self.engine)

        # attach workloads (the victim's stop target is set per phase in run())
        for n in range(NUM_CORES):
            spec = self.specs[n]
            if spec is None:
                continue
            self.cores[n].attach(WorkloadState(spec), None)

        # fixed same-cycle order: cores, prefetchers, caches, DRAM
        comps = list(self.cores)
        comps.extend(pf for pf in self.l1_pfs if pf is not None)
        if self.l2_pf is not None:
            comps.append(self.l2_pf)
        comps.append(_L1Group(self.l1s))
        comps.append(self.l2)
        comps.append(self.dram)
        self.engine.components = comps

    def _snapshot(self):
        l2 = self.l2
        return {
            "reads": list(l2.fills_by_core),
            "writes": list(self.dram_adapter.write_lines_by_core),
            "v_acc": l2.demand_accesses[0],
            "v_hit": l2.demand_hits[0],
            "blocked": l2.blocked_cycles_at(self.engine.now),
            "onsets_mshr": l2.onsets_mshr,
            "onsets_wb": l2.onsets_wb,
            "fills": l2.fills,
            "pf_fills": l2.prefetch_fills,
        }

    def run(self):
        """Warmup then measured phase.  Returns a RunResult; status other
        than 'done' carries partial metrics."""
        v = self.config.values
        eng = self.engine
        victim = self.cores[0]

        if v["stop.mode"] == "iterations":
            # warm up for at least one victim pass AND a minimum cycle count,
            # so contention effects reach steady state before measuring; the
            # measured phase then covers `iterations` further victim passes
            per_pass = self.specs[0].accesses_per_pass
            min_warm = v["stop.min_warmup_cycles"]
            stop1 = lambda: (victim.retired_accesses >= per_pass
                             and eng.now >= min_warm)
            goal = [0]
            stop2 = lambda: victim.retired_accesses >= goal[0]
        else:
            warm_at = v["stop.warmup_cycles"]
            end_at = warm_at + v["stop.measure_cycles"]
            stop1 = lambda: eng.now >= warm_at
            stop2 = lambda: eng.now >= end_at

        _, status = eng.run_until(stop1)
        start = eng.now
        if self.regulator is not None:
            # regulation is armed at the start of the measured phase; warmup
            # runs unregulated so the shared cache reaches its contended
            # steady state (full tags, writeback flow) before budgets apply
            self.regulator.start()
        if v["stop.mode"] == "iterations":
            goal[0] = victim.retired_accesses + per_pass * self.specs[0].iterations
        snap = self._snapshot()
        if status == _e.DONE:
            _, status = eng.run_until(stop2)
        end = eng.now

        r = RunResult()
        r.status = status
        r.measure_start = start
        r.end_cycle = end
        r.victim_cycles = end - start
        endsnap = self._snapshot()
        r.read_lines_by_core = [b - a for a, b in
                                zip(snap["reads"], endsnap["reads"])]
        r.write_lines_by_core = [b - a for a, b in
                                 zip(snap["writes"], endsnap["writes"])]
        r.victim_l2_accesses = endsnap["v_acc"] - snap["v_acc"]
        r.victim_l2_hits = endsnap["v_hit"] - snap["v_hit"]
        r.l2_blocked_cycles = endsnap["blocked"] - snap["blocked"]
        r.l2_onsets_mshr = endsnap["onsets_mshr"] - snap["onsets_mshr"]
        r.l2_onsets_wb = endsnap["onsets_wb"] - snap["onsets_wb"]
        r.l2_fills = endsnap["fills"] - snap["fills"]
        r.l2_prefetch_fills = endsnap["pf_fills"] - snap["pf_fills"]
        r.throttle_events = (self.regulator.throttle_events
                             if self.regulator else 0)
        r.clock_hz = self.clock_hz
        r.line_bytes = self.line_bytes
        return r


def run_single(config):
    """Build an isolated instance for `config` and run it."""
    return System(config).run()
