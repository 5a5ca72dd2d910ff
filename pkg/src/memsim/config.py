"""Scenario configuration: flat key=value files with dotted section prefixes.

Example::

    scenario.id = wb_sweep_8
    l2.wb = 8
    core1.workload = bwwrite

Unknown keys are rejected with line-level diagnostics; missing keys take the
documented defaults (baseline platform parameters).
"""


class ConfigError(Exception):
    pass


def _bool(s):
    v = str(s).strip().lower()
    if v in ("1", "true", "on", "yes"):
        return True
    if v in ("0", "false", "off", "no"):
        return False
    raise ValueError("expected a boolean, got %r" % s)


def _choice(*opts):
    def parse(s):
        v = str(s).strip().lower()
        if v not in opts:
            raise ValueError("expected one of %s, got %r" % ("/".join(opts), s))
        return v
    return parse


NUM_CORES = 4

SCHEMA = {
    "scenario.id": (str, "run"),
    "scenario.seed": (int, 0),
    "scenario.cycle_limit": (int, 2_000_000_000),
    "clock.hz": (float, 1.5e9),
    "line.bytes": (int, 64),

    "l1d.size_kb": (int, 32),
    "l1d.ways": (int, 4),
    "l1d.mshrs": (int, 3),
    "l1d.wb": (int, 3),
    "l1d.hit_latency": (int, 2),

    "l1d_pf.enabled": (_bool, True),
    "l1d_pf.degree": (int, 5),
    "l1d_pf.queue": (int, 5),

    "l2.size_kb": (int, 512),
    "l2.ways": (int, 16),
    "l2.mshrs": (int, 24),
    "l2.ports": (int, 1),
    "l2.wb": (int, 8),
    "l2.hit_latency": (int, 12),

    "l2_pf.enabled": (_bool, True),
    "l2_pf.degree": (int, 8),
    "l2_pf.queue": (int, 8),

    "dram.read_queue": (int, 64),
    "dram.write_queue": (int, 64),
    "dram.banks": (int, 8),
    "dram.t_row_hit": (int, 30),
    "dram.t_row_conflict": (int, 90),
    "dram.t_bus": (int, 8),
    "dram.drain_high": (int, 48),
    "dram.drain_low": (int, 16),
    "dram.lines_per_row": (int, 1024),

    "partition.enabled": (_bool, False),

    "regulator.enabled": (_bool, False),
    "regulator.period_us": (float, 10.0),

    "stop.mode": (_choice("iterations", "cycles"), "iterations"),
    "stop.min_warmup_cycles": (int, 250_000),
    "stop.warmup_cycles": (int, 0),
    "stop.measure_cycles": (int, 0),

    # out-of-order structure sizes: recorded for documentation, unused by the
    # in-order core model
    "core.store_miss_limit": (int, 1),
    "core.iq": (int, 96),
    "core.rob": (int, 128),
    "core.lsq": (int, 48),
}

_WORKLOAD = _choice("bwread", "bwwrite", "none")
for _n in range(NUM_CORES):
    SCHEMA["core%d.workload" % _n] = (_WORKLOAD, "bwread" if _n == 0 else "none")
    SCHEMA["core%d.wset_kb" % _n] = (int, 96 if _n == 0 else 2048)
    SCHEMA["core%d.stride" % _n] = (int, 64)
    SCHEMA["core%d.read_mbps" % _n] = (float, 0.0)   # 0 = unregulated
    SCHEMA["core%d.write_mbps" % _n] = (float, 0.0)
SCHEMA["core0.iterations"] = (int, 4)


class ScenarioConfig:
    """Validated, fully-defaulted scenario description."""

    def __init__(self, values):
        self.values = values

    def __getitem__(self, key):
        return self.values[key]

    def get(self, key, default=None):
        return self.values.get(key, default)

    @property
    def sid(self):
        return self.values["scenario.id"]

    def attacker_ids(self):
        return [n for n in range(1, NUM_CORES)
                if self.values["core%d.workload" % n] != "none"]

    def copy(self, **kv):
        v = dict(self.values)
        v.update(kv)
        return validate(v)


def parse_file(path):
    """Parse a key=value file.  Returns {key: raw string}; raises ConfigError
    with line numbers on malformed lines or unknown keys."""
    raw = {}
    with open(path) as fh:
        for ln, line in enumerate(fh, 1):
            s = line.split("#", 1)[0].strip()
            if not s:
                continue
            if "=" not in s:
                raise ConfigError("%s:%d: expected key = value" % (path, ln))
            key, val = (p.strip() for p in s.split("=", 1))
            if key not in SCHEMA:
                raise ConfigError("%s:%d: unknown key %r" % (path, ln, key))
            raw[key] = (val, ln)
    return raw


def validate(values):
    """Check cross-key invariants and return a ScenarioConfig."""
    v = values
    if v["core0.workload"] == "none":
        raise ConfigError("the victim runs on core 0 (core0.workload != none)")
    if v["stop.mode"] == "iterations" and v["core0.iterations"] <= 0:
        raise ConfigError("core0.iterations must be positive")
    if v["stop.mode"] == "cycles" and v["stop.measure_cycles"] <= 0:
        raise ConfigError("stop.measure_cycles must be positive in cycles mode")
    if not (1 <= v["core.store_miss_limit"] <= v["l1d.mshrs"]):
        raise ConfigError("core.store_miss_limit must be in 1..l1d.mshrs")
    for key in ("l1d", "l2"):
        if v["%s.mshrs" % key] < 1 or v["%s.wb" % key] < 1:
            raise ConfigError("%s MSHR and writeback buffer sizes must be >= 1" % key)
    if not (0 < v["dram.drain_low"] < v["dram.drain_high"] <= v["dram.write_queue"]):
        raise ConfigError("require 0 < dram.drain_low < dram.drain_high "
                          "<= dram.write_queue")
    if v["partition.enabled"] and v["l2.ways"] % NUM_CORES != 0:
        raise ConfigError("equal way-partitioning needs l2.ways divisible by %d"
                          % NUM_CORES)
    for n in range(NUM_CORES):
        ws = v["core%d.wset_kb" % n] * 1024
        if ws % v["core%d.stride" % n] != 0:
            raise ConfigError("core%d working set must be a multiple of its stride" % n)
    if v["regulator.enabled"]:
        for n in range(NUM_CORES):
            for side in ("read", "write"):
                mbps = v["core%d.%s_mbps" % (n, side)]
                if mbps < 0:
                    raise ConfigError("negative bandwidth budget on core%d" % n)
    return ScenarioConfig(dict(v))


def load_config(path=None, overrides=None):
    """Build a config from defaults, an optional file, and typed overrides."""
    values = {k: d for k, (_, d) in SCHEMA.items()}
    if path is not None:
        for key, (raw, ln) in parse_file(path).items():
            parse, _ = SCHEMA[key]
            try:
                values[key] = parse(raw)
            except ValueError as e:
                raise ConfigError("%s:%d: %s: %s" % (path, ln, key, e))
    if overrides:
        for key, val in overrides.items():
            if key not in SCHEMA:
                raise ConfigError("unknown key %r" % key)
            parse, _ = SCHEMA[key]
            values[key] = parse(val) if isinstance(val, str) else val
    return validate(values)
