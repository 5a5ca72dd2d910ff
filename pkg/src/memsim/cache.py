"""Non-blocking set-associative writeback cache with MSHRs and a writeback buffer.

Whole-cache blocking semantics: when a miss needs an MSHR and none is free,
or no writeback-buffer slot can be reserved for its eventual fill, the cache
transitions to blocked and rejects every request -- including would-be hits
-- until both structures have a free entry again.  Every miss allocation
conservatively reserves one writeback-buffer slot so the fill can always
install (a dirty victim is guaranteed space); the reservation is released at
install time, either consumed by the dirty victim entering the buffer or
freed outright.  Outstanding misses are therefore bounded by both the MSHR
count and the writeback buffer size.

Only tags, dirty bits, owner ids and LRU state are stored; no data.
Way-partitioning restricts both victim selection and free-way allocation to
the requesting core's way mask.
"""

from collections import deque

from .engine import SimulationError

# access outcomes
HIT = 0
MISS = 1       # allocated a new MSHR, fill forwarded down-hierarchy
MERGED = 2     # appended to a pending MSHR for the same line
BLOCKED = 3    # rejected; requester retries (one retry per cycle)

_NO_READY = -1


class MshrEntry:
    __slots__ = ("core", "prefetch", "dirty_on_fill", "waiters", "alloc_cycle")

    def __init__(self, core, prefetch, dirty_on_fill, alloc_cycle):
        self.core = core
        self.prefetch = prefetch
        self.dirty_on_fill = dirty_on_fill
        self.waiters = []
        self.alloc_cycle = alloc_cycle


class Cache:
    def __init__(self, name, size_bytes, ways, line_bytes, hit_latency,
                 mshrs, wb_size, num_cores=4, ports=0):
        if size_bytes % (ways * line_bytes) != 0:
            raise ValueError("%s: size not divisible by ways*line_bytes" % name)
        sets = size_bytes // (ways * line_bytes)
        if sets & (sets - 1) != 0 or sets == 0:
            raise ValueError("%s: set count %d is not a power of two" % (name, sets))
        if line_bytes & (line_bytes - 1) != 0:
            raise ValueError("line size must be a power of two")
        self.name = name
        self.ways = ways
        self.sets = sets
        self.line_bytes = line_bytes
        self.line_shift = line_bytes.bit_length() - 1
        self.set_mask = sets - 1
        self.hit_latency = hit_latency
        self.mshrs = mshrs
        self.wb_size = wb_size
        self.num_cores = num_cores
        self.ports = ports                 # CPU-side lookups per cycle; 0 = unlimited
        self._port_cycle = -1
        self._port_used = 0

        n = sets * ways
        self.tag_slot = {}                 # line_addr -> flat slot index
        self.slot_tag = [None] * n
        self.slot_dirty = bytearray(n)
        self.slot_owner = bytearray(n)
        self.slot_stamp = [0] * n
        self._clock = 0

        self.mshr = {}                     # line_addr -> MshrEntry
        # lines awaiting a downstream fill request; demand has priority over
        # prefetch so a rejected prefetch cannot starve demand behind it
        self.send_q = deque()
        self.send_q_pf = deque()
        self.wb_q = deque()                # (line_addr, owner, enqueue_cycle)
        self.wb_reserved = 0               # slots reserved by outstanding misses
        self.deferred = deque()            # fills waiting for a WB slot

        self.blocked = False
        self.blocked_since = 0
        self.blocked_cycles = 0
        self.onsets_mshr = 0
        self.onsets_wb = 0

        all_ways = tuple(range(ways))
        self.masks = [all_ways] * num_cores
        self.partitioned = False

        self.downstream = None
        self.on_miss = None                # fn(core, prefetch, now); L2 regulator hook

        # counters
        self.demand_accesses = [0] * num_cores
        self.demand_hits = [0] * num_cores
        self.fills = 0
        self.prefetch_fills = 0
        self.fills_by_core = [0] * num_cores
        self.dirty_evictions = 0
        self.miss_allocations = 0

    # ---- partitioning ----

    def set_partition(self, masks):
        """Install per-core way masks (iterables of way indices).

        Masks must be non-empty, pairwise disjoint, and cover all ways.
        """
        if len(masks) != self.num_cores:
            raise ValueError("need one mask per core")
        seen = set()
        for m in masks:
            ws = tuple(sorted(m))
            if not ws:
                raise ValueError("empty partition mask")
            for w in ws:
                if w < 0 or w >= self.ways:
                    raise ValueError("way %d out of range" % w)
                if w in seen:
                    raise ValueError("overlapping partition masks")
                seen.add(w)
        if len(seen) != self.ways:
            raise ValueError("partition masks must cover all ways")
        self.masks = [tuple(sorted(m)) for m in masks]
        self.partitioned = True

    def clear_partition(self):
        all_ways = tuple(range(self.ways))
        self.masks = [all_ways] * self.num_cores
        self.partitioned = False

    # ---- internal helpers ----

    def _wb_free(self):
        return self.wb_size - len(self.wb_q) - self.wb_reserved

    def wb_free(self):
        return self.wb_size - len(self.wb_q) - self.wb_reserved

    def mshr_free(self):
        return self.mshrs - len(self.mshr)

    def _pick(self, set_base, mask):
        """Return (free_slot, victim_slot); free_slot -1 when the partition
        ways are all occupied, victim is LRU among the allowed ways."""
        tags = self.slot_tag
        stamps = self.slot_stamp
        victim = -1
        best = None
        for w in mask:
            s = set_base + w
            if tags[s] is None:
                return s, -1
            st = stamps[s]
            if best is None or st < best:
                best = st
                victim = s
        return -1, victim

    def _block(self, cause, now):
        if not self.blocked:
            self.blocked = True
            self.blocked_since = now
            if cause == "mshr":
                self.onsets_mshr += 1
            else:
                self.onsets_wb += 1

    def _maybe_unblock(self, now):
        if (self.blocked and len(self.mshr) < self.mshrs
                and self._wb_free() > 0 and not self.deferred):
            self.blocked = False
            self.blocked_cycles += now - self.blocked_since

    def is_blocked(self):
        return self.blocked

    def blocked_cycles_at(self, now):
        if self.blocked:
            return self.blocked_cycles + (now - self.blocked_since)
        return self.blocked_cycles

    def contains(self, line_addr):
        return line_addr in self.tag_slot

    # ---- main operations ----

    def access(self, line_addr, store, core, now, prefetch=False, waiter=None,
               soft=None, use_port=True):
        """Look up one line.  Returns (outcome, ready_cycle).

        ready_cycle is meaningful only for HIT.  `waiter` (fn(cycle)) is
        registered on the MSHR for MISS/MERGED and called when the fill lands.
        `prefetch` marks the request for attribution (fill statistics,
        regulator charging).  `soft` requests that find the MSHRs or the
        writeback buffer exhausted are rejected without transitioning the
        cache to blocked (this cache's own prefetcher holds the candidate
        instead); a hard request in the same situation blocks the whole
        cache.  By default prefetches are soft.

        With `ports` set, at most that many CPU-side lookups are accepted
        per cycle; excess requesters are turned away this cycle and retry.
        The cache's own prefetcher bypasses the port (use_port=False).
        """
        if soft is None:
            soft = prefetch
        if self.blocked:
            return BLOCKED, _NO_READY
        if use_port and self.ports:
            if now != self._port_cycle:
                self._port_cycle = now
                self._port_used = 0
            if self._port_used >= self.ports:
                return BLOCKED, _NO_READY  # port contention; caller retries
            self._port_used += 1
        slot = self.tag_slot.get(line_addr, -1)
        if slot >= 0:
            if not prefetch:
                # prefetch hits do not promote replacement state: a line kept
                # alive only by prefetch probes ages out under insertion
                # pressure (standard anti-pollution policy)
                self._clock += 1
                self.slot_stamp[slot] = self._clock
            if store:
                self.slot_dirty[slot] = 1
                self.slot_owner[slot] = core
            if not prefetch:
                self.demand_accesses[core] += 1
                self.demand_hits[core] += 1
            return HIT, now + self.hit_latency
        entry = self.mshr.get(line_addr)
        if entry is not None:
            if waiter is not None:
                entry.waiters.append(waiter)
            if store:
                entry.dirty_on_fill = True
            if not prefetch:
                self.demand_accesses[core] += 1
            return MERGED, _NO_READY
        if len(self.mshr) >= self.mshrs:
            if not soft:
                self._block("mshr", now)
            return BLOCKED, _NO_READY
        if self._wb_free() <= 0:
            if not soft:
                self._block("wb", now)
            return BLOCKED, _NO_READY
        self.wb_reserved += 1
        entry = MshrEntry(core, prefetch, store, now)
        if waiter is not None:
            entry.waiters.append(waiter)
        self.mshr[line_addr] = entry
        if prefetch:
            self.send_q_pf.append(line_addr)
        else:
            self.send_q.append(line_addr)
        self.miss_allocations += 1
        if not prefetch:
            self.demand_accesses[core] += 1
        if self.on_miss is not None:
            self.on_miss(core, prefetch, now)
        return MISS, _NO_READY

    def fill_complete(self, line_addr, now):
        """A fill for a pending MSHR line arrived from down-hierarchy."""
        entry = self.mshr.get(line_addr)
        if entry is None:
            raise SimulationError(
                "%s: fill for unknown line 0x%x" % (self.name, line_addr))
        if line_addr in self.deferred:
            return  # already queued for retry
        if not self._try_install(line_addr, entry, now):
            self.deferred.append(line_addr)
            self._block("wb", now)

    def _try_install(self, line_addr, entry, now):
        set_base = ((line_addr >> self.line_shift) & self.set_mask) * self.ways
        free, victim = self._pick(set_base, self.masks[entry.core])
        # the reservation made at allocation guarantees buffer space for a
        # dirty victim, so installs never fail in practice
        self.wb_reserved -= 1
        if free < 0:
            vaddr = self.slot_tag[victim]
            if self.slot_dirty[victim]:
                if len(self.wb_q) >= self.wb_size:
                    self.wb_reserved += 1
                    return False
                self.wb_q.append((vaddr, self.slot_owner[victim], now))
                self.dirty_evictions += 1
            del self.tag_slot[vaddr]
            slot = victim
        else:
            slot = free
        self.tag_slot[line_addr] = slot
        self.slot_tag[slot] = line_addr
        self.slot_dirty[slot] = 1 if entry.dirty_on_fill else 0
        self.slot_owner[slot] = entry.core
        self._clock += 1
        self.slot_stamp[slot] = self._clock
        del self.mshr[line_addr]
        self.fills += 1
        self.fills_by_core[entry.core] += 1
        if entry.prefetch:
            self.prefetch_fills += 1
        for w in entry.waiters:
            w(now)
        self._maybe_unblock(now)
        return True

    def wb_insert(self, line_addr, owner, now):
        """Accept a dirty writeback from the level above.  Returns False when
        no space can be made this cycle (caller retries).

        Accepted independent of the blocked flag: blocking gates CPU-side
        requests, not writeback arrivals.
        """
        slot = self.tag_slot.get(line_addr, -1)
        if slot >= 0:
            self.slot_dirty[slot] = 1
            self.slot_owner[slot] = owner
            self._clock += 1
            self.slot_stamp[slot] = self._clock
            return True
        entry = self.mshr.get(line_addr)
        if entry is not None:
            entry.dirty_on_fill = True
            return True
        set_base = ((line_addr >> self.line_shift) & self.set_mask) * self.ways
        free, victim = self._pick(set_base, self.masks[owner])
        if free < 0:
            vaddr = self.slot_tag[victim]
            if self.slot_dirty[victim]:
                if self._wb_free() <= 0:
                    return False
                self.wb_q.append((vaddr, self.slot_owner[victim], now))
                self.dirty_evictions += 1
            del self.tag_slot[vaddr]
            slot = victim
        else:
            slot = free
        self.tag_slot[line_addr] = slot
        self.slot_tag[slot] = line_addr
        self.slot_dirty[slot] = 1
        self.slot_owner[slot] = owner
        self._clock += 1
        self.slot_stamp[slot] = self._clock
        return True

    # ---- per-cycle work ----

    def tick(self, now):
        busy = False
        if self.deferred:
            busy = True
            line = self.deferred[0]
            if self._try_install(line, self.mshr[line], now):
                self.deferred.popleft()
        if self.send_q:
            busy = True
            line = self.send_q[0]
            e = self.mshr[line]
            if self.downstream.request_fill(line, e.core, e.prefetch, now):
                self.send_q.popleft()
        elif self.send_q_pf:
            busy = True
            line = self.send_q_pf[0]
            e = self.mshr[line]
            if self.downstream.request_fill(line, e.core, e.prefetch, now):
                self.send_q_pf.popleft()
        if self.wb_q:
            busy = True
            addr, owner, _ = self.wb_q[0]
            if self.downstream.accept_writeback(addr, owner, now):
                self.wb_q.popleft()
                self._maybe_unblock(now)
        return busy
