"""Synthetic access-stream kernels: sequential line-stride read and write
loops over a fixed working set, the attack/victim building blocks.
"""

BW_READ = "bwread"
BW_WRITE = "bwwrite"

VICTIM = "victim"
ATTACKER = "attacker"

LLC_FIT = "llc-fit"
DRAM_SIZED = "dram-sized"
UNCLASSIFIED = "unclassified"


class WorkloadSpec:
    __slots__ = ("kind", "working_set_bytes", "stride_bytes", "base_addr",
                 "iterations", "role")

    def __init__(self, kind, working_set_bytes, stride_bytes=64, base_addr=0,
                 iterations=None, role=ATTACKER):
        if kind not in (BW_READ, BW_WRITE):
            raise ValueError("unknown workload kind %r" % kind)
        if working_set_bytes % stride_bytes != 0:
            raise ValueError("working set must be a multiple of the stride")
        if role == VICTIM and not iterations:
            raise ValueError("victim needs a finite iteration count")
        self.kind = kind
        self.working_set_bytes = working_set_bytes
        self.stride_bytes = stride_bytes
        self.base_addr = base_addr
        self.iterations = iterations
        self.role = role

    @property
    def is_store(self):
        return self.kind == BW_WRITE

    @property
    def accesses_per_pass(self):
        return self.working_set_bytes // self.stride_bytes


class WorkloadState:
    """Cursor over a spec's sequential, wrapping address stream."""

    __slots__ = ("spec", "offset")

    def __init__(self, spec):
        self.spec = spec
        self.offset = 0

    def next_access(self):
        spec = self.spec
        addr = spec.base_addr + self.offset
        off = self.offset + spec.stride_bytes
        if off >= spec.working_set_bytes:
            off = 0
        self.offset = off
        return addr, spec.is_store


def classify_working_set(spec, l1_size_bytes, llc_size_bytes):
    """LLC-fit: misses L1 but fits comfortably (<= 1/4) in the shared cache.
    DRAM-sized: exceeds the shared cache.  Anything in between (or below L1)
    is flagged unclassified but still runnable."""
    ws = spec.working_set_bytes
    if l1_size_bytes < ws <= llc_size_bytes // 4:
        return LLC_FIT
    if ws > llc_size_bytes:
        return DRAM_SIZED
    return UNCLASSIFIED


def check_disjoint(specs):
    """Reject explicitly-placed workloads whose regions share any line."""
    spans = sorted((s.base_addr, s.base_addr + s.working_set_bytes) for s in specs)
    for (a0, a1), (b0, _) in zip(spans, spans[1:]):
        if b0 < a1:
            raise ValueError("workload regions overlap: victim and attackers "
                             "must not share lines")


def disjoint_layout(specs, origin=0, align=1 << 20):
    """Assign non-overlapping base addresses (victim and attackers never
    share lines).  Returns the list of base addresses in spec order."""
    bases = []
    addr = origin
    for spec in specs:
        spec.base_addr = addr
        bases.append(addr)
        size = spec.working_set_bytes
        addr += ((size + align - 1) // align) * align
        if addr >= 1 << 48:
            raise ValueError("address space exhausted laying out workloads")
    return bases
