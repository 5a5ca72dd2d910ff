"""Discrete-event core: global cycle clock, event queue, component ticking.

One Engine owns one simulation instance and is strictly single-threaded.
Components are ticked once per simulated cycle in a fixed order (cores in
ascending id, then prefetchers, then caches, then DRAM); everything else is
driven by scheduled events.  Events due on the same cycle fire in scheduling
order (FIFO tie-break by sequence number).
"""

import heapq

DEFAULT_CYCLE_LIMIT = 2_000_000_000

DONE = "done"
TIMEOUT = "timeout"
DEADLOCK = "deadlock"


class SimulationError(Exception):
    """Fatal contract violation inside the simulator."""


class Engine:
    def __init__(self, cycle_limit=DEFAULT_CYCLE_LIMIT):
        self.now = 0
        self.cycle_limit = cycle_limit
        self._heap = []
        self._seq = 0
        # ticked in list order every cycle; populated by the platform builder
        self.components = []

    def schedule(self, due, fn):
        """Queue fn (called as fn(cycle)) to fire at cycle `due`.

        Scheduling in the past is a fatal contract violation.
        """
        if due < self.now:
            raise SimulationError(
                "event scheduled in the past: due=%d now=%d" % (due, self.now))
        heapq.heappush(self._heap, (due, self._seq, fn))
        self._seq += 1

    def _fire_due(self):
        heap = self._heap
        now = self.now
        while heap and heap[0][0] == now:
            _, _, fn = heapq.heappop(heap)
            fn(now)

    def run_until(self, stop_fn):
        """Advance the clock until stop_fn() holds.

        Returns (cycle, status) with status one of DONE, TIMEOUT, DEADLOCK.
        TIMEOUT means the cycle limit was exhausted; DEADLOCK means no
        component had work and no events were pending.
        """
        heap = self._heap
        comps = self.components
        limit = self.cycle_limit
        while True:
            self._fire_due()
            if stop_fn():
                return self.now, DONE
            if self.now >= limit:
                return self.now, TIMEOUT
            busy = False
            for c in comps:
                if c.tick(self.now):
                    busy = True
            # events scheduled for the current cycle during the tick phase
            # still belong to this cycle
            if heap and heap[0][0] == self.now:
                self._fire_due()
                if stop_fn():
                    return self.now, DONE
            if busy:
                self.now += 1
            elif heap:
                # nothing can make progress until the next event
                self.now = max(self.now + 1, heap[0][0])
            else:
                return self.now, DEADLOCK
