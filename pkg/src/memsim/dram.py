"""Simplified DRAM controller: bounded read/write queues, per-bank open-row
timing, read-priority scheduling with watermark-based write draining.

Open-adaptive page policy is approximated as open-page: a bank's row stays
open and the next access to it is a row hit or a row conflict accordingly.
Queues are FIFO; the scheduler issues at most one request per cycle, picking
the oldest request in the active queue whose bank is idle.  Banks overlap,
so completions arrive in bursts when several banks finish close together.
"""

from collections import deque


class DramConfig:
    __slots__ = ("read_queue_size", "write_queue_size", "banks",
                 "t_row_hit", "t_row_conflict", "t_bus",
                 "drain_high", "drain_low", "lines_per_row")

    def __init__(self, read_queue_size=64, write_queue_size=64, banks=8,
                 t_row_hit=30, t_row_conflict=90, t_bus=8,
                 drain_high=48, drain_low=16, lines_per_row=1024):
        if not (0 < drain_low < drain_high <= write_queue_size):
            raise ValueError("require 0 < drain_low < drain_high <= write_queue_size")
        self.read_queue_size = read_queue_size
        self.write_queue_size = write_queue_size
        self.banks = banks
        self.t_row_hit = t_row_hit
        self.t_row_conflict = t_row_conflict
        self.t_bus = t_bus
        self.drain_high = drain_high
        self.drain_low = drain_low
        self.lines_per_row = lines_per_row


class DramController:
    def __init__(self, config, engine, line_bytes=64):
        self.cfg = config
        self.engine = engine
        self.line_shift = line_bytes.bit_length() - 1
        self.read_q = deque()    # (line_addr, on_complete, enqueue_cycle)
        self.write_q = deque()   # line_addr
        self.bank_busy = [0] * config.banks
        self.bank_row = [-1] * config.banks
        self.drain_mode = False
        self.completed_reads = 0
        self.completed_writes = 0
        self.reads_in_flight = 0
        self.read_wait_cycles = 0   # enqueue-to-issue queueing delay, summed
        self.read_rejects = 0       # enqueue attempts that found the queue full
        self.write_rejects = 0

    def enqueue_read(self, line_addr, on_complete, now=0):
        if len(self.read_q) >= self.cfg.read_queue_size:
            self.read_rejects += 1
            return False
        self.read_q.append((line_addr, on_complete, now))
        return True

    def enqueue_write(self, line_addr):
        if len(self.write_q) >= self.cfg.write_queue_size:
            self.write_rejects += 1
            return False
        self.write_q.append(line_addr)
        return True

    def _bank_row_of(self, line_addr):
        li = line_addr >> self.line_shift
        return li % self.cfg.banks, li // self.cfg.lines_per_row

    def tick(self, now):
        if not self.read_q and not self.write_q:
            return False
        cfg = self.cfg
        wq = len(self.write_q)
        if self.drain_mode and wq <= cfg.drain_low:
            self.drain_mode = False
        if not self.drain_mode and (wq >= cfg.drain_high
                                    or (not self.read_q and wq > 0)):
            # hysteresis: a drain burst runs from the high watermark down to
            # the low one; otherwise writes are serviced only when no read
            # is waiting
            self.drain_mode = True
        if self.drain_mode:
            self._issue_write(now)
        else:
            self._issue_read(now)
        return True

    def _issue_read(self, now):
        busy = self.bank_busy
        for i, (addr, cb, enq) in enumerate(self.read_q):
            bank, row = self._bank_row_of(addr)
            if busy[bank] <= now:
                svc = self.cfg.t_row_hit if self.bank_row[bank] == row \
                    else self.cfg.t_row_conflict
                done = now + svc + self.cfg.t_bus
                busy[bank] = done
                self.bank_row[bank] = row
                del self.read_q[i]
                self.read_wait_cycles += now - enq
                self.reads_in_flight += 1
                self.engine.schedule(done, self._make_read_done(addr, cb))
                return
        return

    def _make_read_done(self, addr, cb):
        def fire(now):
            self.reads_in_flight -= 1
            self.completed_reads += 1
            cb(addr, now)
        return fire

    def _issue_write(self, now):
        busy = self.bank_busy
        for i, addr in enumerate(self.write_q):
            bank, row = self._bank_row_of(addr)
            if busy[bank] <= now:
                svc = self.cfg.t_row_hit if self.bank_row[bank] == row \
                    else self.cfg.t_row_conflict
                done = now + svc + self.cfg.t_bus
                busy[bank] = done
                self.bank_row[bank] = row
                del self.write_q[i]
                self.completed_writes += 1
                return
        return

    def idle(self):
        return not self.read_q and not self.write_q and self.reads_in_flight == 0
