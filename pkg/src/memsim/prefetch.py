"""Stride prefetcher with a bounded internal queue.

Tracks one stream per requester.  Two consecutive accesses with the same
non-zero stride arm the detector; each further confirming access enqueues up
to `degree` line-aligned candidates ahead of the stream.  Candidates are
deduplicated against the queue, the attached cache's tags, and its pending
MSHRs.  Queue overflow drops the newest candidates.  At most one prefetch is
issued to the cache per cycle; a blocked cache keeps the candidate queued.
"""

from collections import deque

from . import cache as _c

CONFIDENCE_THRESHOLD = 2


class PrefetcherConfig:
    __slots__ = ("degree", "queue_size", "enabled", "min_free")

    def __init__(self, degree, queue_size, enabled=True, min_free=1):
        if degree < 1:
            raise ValueError("degree must be >= 1")
        if min_free < 0:
            raise ValueError("min_free must be >= 0")
        self.degree = degree
        self.queue_size = queue_size
        self.enabled = enabled
        # how many free MSHRs/writeback slots must remain after issuing a
        # prefetch; >1 reserves headroom for demand at a shared cache
        self.min_free = min_free


class StridePrefetcher:
    def __init__(self, config, target_cache, cores=None):
        self.cfg = config
        self.cache = target_cache
        # cores: list of core objects for throttle gating (may be None)
        self.cores = cores
        self.streams = {}          # requester -> [last_addr, last_stride, confidence]
        self.queue = deque()       # (line_addr, requester)
        self.queued = set()
        self.issued = 0
        self.filtered = 0

    def observe(self, requester, addr, now):
        if not self.cfg.enabled:
            return
        st = self.streams.get(requester)
        if st is None:
            self.streams[requester] = [addr, 0, 0]
            return
        stride = addr - st[0]
        if stride != 0 and stride == st[1]:
            if st[2] < CONFIDENCE_THRESHOLD:
                st[2] += 1
        else:
            st[1] = stride
            st[2] = 0
        st[0] = addr
        if st[2] >= CONFIDENCE_THRESHOLD:
            self._enqueue(addr, st[1], requester)

    def _enqueue(self, addr, stride, requester):
        line = ~(self.cache.line_bytes - 1)
        c = self.cache
        for i in range(1, self.cfg.degree + 1):
            cand = (addr + i * stride) & line
            if cand < 0:
                break
            if cand in self.queued or cand in c.tag_slot or cand in c.mshr:
                continue
            if len(self.queue) >= self.cfg.queue_size:
                break  # drop-newest overflow policy
            self.queue.append((cand, requester))
            self.queued.add(cand)

    def tick(self, now):
        if not self.queue:
            return False
        cand, requester = self.queue[0]
        if self.cores is not None and self.cores[requester].throttled:
            return True  # gated: throttled cores add no new traffic
        c = self.cache
        if cand in c.tag_slot or cand in c.mshr:
            # already present or pending; consumed with no traffic
            self.queue.popleft()
            self.queued.discard(cand)
            self.filtered += 1
            return True
        reserve = self.cfg.min_free
        if c.mshr_free() <= reserve or c.wb_free() <= reserve:
            # demand priority: keep `min_free` MSHRs and writeback slots
            # available for demand; hold the candidate until pressure eases
            return True
        outcome, _ = c.access(cand, False, requester, now, prefetch=True,
                              soft=True, use_port=False)
        if outcome == _c.BLOCKED:
            return True  # retry next cycle
        self.queue.popleft()
        self.queued.discard(cand)
        self.issued += 1
        return True
