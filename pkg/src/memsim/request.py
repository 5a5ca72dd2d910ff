"""Request kinds shared across the hierarchy."""

DEMAND_READ = "read"
DEMAND_WRITE = "write"
PREFETCH = "prefetch"
WRITEBACK = "writeback"


class MemRequest:
    """One memory transaction flowing between hierarchy levels."""

    __slots__ = ("line_addr", "kind", "core", "on_complete")

    def __init__(self, line_addr, kind, core, on_complete=None):
        self.line_addr = line_addr
        self.kind = kind
        self.core = core
        self.on_complete = on_complete

    def __repr__(self):
        return "MemRequest(0x%x, %s, core%d)" % (self.line_addr, self.kind, self.core)
