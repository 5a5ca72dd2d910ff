"""In-order CPU core: one access issued per cycle at most, one outstanding
demand load, stores retired into the L1D miss machinery.  The number of
concurrently outstanding store misses is bounded by `store_miss_limit`
(modeling a shallow store buffer); a store arriving with the budget
exhausted stalls the core until a store fill returns, so extra store-miss
concurrency beyond the budget comes only from the prefetcher.  A throttled
core completes in-flight misses but issues nothing new until the regulator
clears the flag.
"""

from . import cache as _c

RUNNING = "running"
STALLED_ON_LOAD = "stalled_on_load"
STALLED_CACHE_BLOCKED = "stalled_cache_blocked"
STALLED_ON_STORE = "stalled_on_store"


class Core:
    def __init__(self, core_id, engine, l1d, prefetcher=None,
                 store_miss_limit=1):
        self.core_id = core_id
        self.store_miss_limit = store_miss_limit
        self.engine = engine
        self.l1d = l1d
        self.prefetcher = prefetcher
        self.state = None            # WorkloadState, set by attach()
        self.target_accesses = None  # None = unbounded (attacker)
        self.status = RUNNING
        self.throttled = False
        self.outstanding_stores = 0
        self.issued_accesses = 0
        self.retired_accesses = 0
        self._pending = None         # (addr, store) rejected by a blocked cache

    def attach(self, workload_state, target_accesses=None):
        self.state = workload_state
        self.target_accesses = target_accesses

    def apply_throttle(self, on):
        self.throttled = on

    @property
    def done(self):
        return (self.target_accesses is not None
                and self.retired_accesses >= self.target_accesses)

    def _retire(self):
        self.retired_accesses += 1

    def _load_done(self, now):
        self.status = RUNNING
        self._retire()

    def _store_done(self, now):
        self.outstanding_stores -= 1

    def tick(self, now):
        if self.status == STALLED_ON_LOAD or self.throttled:
            return False
        if self.state is None:
            return False
        if self._pending is not None:
            addr, store = self._pending
            if store and self.outstanding_stores >= self.store_miss_limit:
                self.status = STALLED_ON_STORE
                return True  # wait for a store fill to free the budget
        else:
            if (self.target_accesses is not None
                    and self.issued_accesses >= self.target_accesses):
                return False
            addr, store = self.state.next_access()
            self.issued_accesses += 1
        if store and self.outstanding_stores >= self.store_miss_limit:
            # a store may hit, but peeking is not free on real hardware:
            # conservatively hold it until the budget frees
            self.status = STALLED_ON_STORE
            self._pending = (addr, store)
            return True
        outcome, ready = self.l1d.access(
            addr, store, self.core_id, now,
            waiter=self._store_done if store else self._load_done)
        if outcome == _c.BLOCKED:
            self.status = STALLED_CACHE_BLOCKED
            self._pending = (addr, store)
            return True  # retry every cycle until the cache unblocks
        self._pending = None
        self.status = RUNNING
        if self.prefetcher is not None:
            self.prefetcher.observe(self.core_id, addr, now)
        if store:
            # hit: dirty bit set by the cache; miss/merged: retired into the
            # miss machinery and the core keeps going
            if outcome != _c.HIT:
                self.outstanding_stores += 1
            self._retire()
        else:
            self.status = STALLED_ON_LOAD
            if outcome == _c.HIT:
                self.engine.schedule(ready, self._load_done)
        return True
