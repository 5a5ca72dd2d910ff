"""Deterministic quad-core memory hierarchy simulator.

Models in-order cores, non-blocking L1D/L2 caches with explicit MSHRs and
writeback buffers, stride prefetchers, a simplified DRAM controller, and a
per-core read/write memory-bandwidth regulator.
"""

from .engine import Engine, SimulationError

__all__ = ["Engine", "SimulationError"]
