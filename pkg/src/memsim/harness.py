"""Experiment front-end: runs scenarios (solo baseline + co-run), collects
metrics, expands experiment matrices, and emits deterministic CSV.
"""

import csv
import sys

from .config import NUM_CORES
from .platform import run_single

CSV_VERSION = 1

CSV_COLUMNS = [
    "scenario", "seed", "status",
    "attackers", "prefetchers", "l2_wb_size", "partition",
    "regulate_read_mbps", "regulate_write_mbps",
    "solo_cycles", "victim_cycles", "slowdown",
    "l2_miss_rate", "l2_blocked_cycles",
    "blocked_onsets_mshr", "blocked_onsets_wb",
    "prefetch_fill_fraction",
    "core0_read_mbps", "core1_read_mbps", "core2_read_mbps", "core3_read_mbps",
    "core0_write_mbps", "core1_write_mbps", "core2_write_mbps", "core3_write_mbps",
    "throttle_events",
]

_FLOAT_COLS = {
    "slowdown", "l2_miss_rate", "prefetch_fill_fraction",
    "regulate_read_mbps", "regulate_write_mbps",
    "core0_read_mbps", "core1_read_mbps", "core2_read_mbps", "core3_read_mbps",
    "core0_write_mbps", "core1_write_mbps", "core2_write_mbps", "core3_write_mbps",
}


class RunMetrics:
    """One CSV row worth of results for a scenario run."""

    def __init__(self, **kv):
        for col in CSV_COLUMNS:
            setattr(self, col, kv.get(col, 0))

    def row(self):
        out = []
        for col in CSV_COLUMNS:
            v = getattr(self, col)
            if col in _FLOAT_COLS:
                out.append("%.6f" % float(v))
            else:
                out.append(str(v))
        return out


def _prefetch_label(cfg):
    l1 = cfg["l1d_pf.enabled"]
    l2 = cfg["l2_pf.enabled"]
    if l1 and l2:
        return "l1d+l2"
    if l1:
        return "l1d"
    if l2:
        return "l2"
    return "none"


def run_scenario(config, log=None):
    """Run the solo baseline then the configured co-run; slowdown is the
    ratio of measured victim cycles.  In cycle-count stop mode (bandwidth
    measurement runs) no baseline is run and slowdown is reported as 1."""
    v = config.values
    log = log or (lambda msg: print(msg, file=sys.stderr))
    iterations_mode = v["stop.mode"] == "iterations"

    solo_cycles = 0
    if iterations_mode:
        solo_overrides = {"core%d.workload" % n: "none"
                          for n in range(1, NUM_CORES)}
        solo_cfg = config.copy(**solo_overrides)
        log("run %s: solo baseline" % config.sid)
        solo = run_single(solo_cfg)
        solo_cycles = solo.victim_cycles
        if solo.status != "done":
            log("run %s: solo baseline %s" % (config.sid, solo.status))

    log("run %s: co-run (%d attackers)" % (config.sid, len(config.attacker_ids())))
    co = run_single(config)

    slowdown = 1.0
    if iterations_mode and solo_cycles > 0:
        slowdown = co.victim_cycles / solo_cycles

    attackers = config.attacker_ids()
    reg_read = v["core1.read_mbps"] if v["regulator.enabled"] else 0.0
    reg_write = v["core1.write_mbps"] if v["regulator.enabled"] else 0.0
    return RunMetrics(
        scenario=config.sid,
        seed=v["scenario.seed"],
        status=co.status,
        attackers=len(attackers),
        prefetchers=_prefetch_label(config),
        l2_wb_size=v["l2.wb"],
        partition="on" if v["partition.enabled"] else "off",
        regulate_read_mbps=reg_read,
        regulate_write_mbps=reg_write,
        solo_cycles=solo_cycles if iterations_mode else co.victim_cycles,
        victim_cycles=co.victim_cycles,
        slowdown=slowdown,
        l2_miss_rate=co.victim_l2_miss_rate,
        l2_blocked_cycles=co.l2_blocked_cycles,
        blocked_onsets_mshr=co.l2_onsets_mshr,
        blocked_onsets_wb=co.l2_onsets_wb,
        prefetch_fill_fraction=co.prefetch_fill_fraction,
        throttle_events=co.throttle_events,
        **{"core%d_read_mbps" % n: co.read_mbps(n) for n in range(NUM_CORES)},
        **{"core%d_write_mbps" % n: co.write_mbps(n) for n in range(NUM_CORES)},
    )


def emit_csv(metrics_list, path):
    """Write one header row plus one row per run with fixed column order and
    fixed decimal formatting, so identical runs produce byte-identical files."""
    if not metrics_list:
        raise ValueError("no metrics to emit")
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for m in metrics_list:
            w.writerow(m.row())


# ---- experiment matrices ----

PREFETCH_SETTINGS = [
    ("none", False, False),
    ("l1d", True, False),
    ("l2", False, True),
    ("l1d+l2", True, True),
]


def prefetch_matrix(base_config, log=None):
    """Victim + attackers under the four prefetcher on/off combinations."""
    out = []
    for label, l1, l2 in PREFETCH_SETTINGS:
        cfg = base_config.copy(**{
            "scenario.id": "%s_pf_%s" % (base_config.sid, label),
            "l1d_pf.enabled": l1,
            "l2_pf.enabled": l2,
        })
        out.append(run_scenario(cfg, log=log))
    return out


def wb_size_matrix(base_config, sizes=(4, 8, 16, 32, 64), log=None):
    """Sweep over the shared-cache writeback buffer size."""
    out = []
    for size in sizes:
        cfg = base_config.copy(**{
            "scenario.id": "%s_wb_%d" % (base_config.sid, size),
            "l2.wb": size,
        })
        out.append(run_scenario(cfg, log=log))
    return out


BANDWIDTH_SETTINGS = [
    # (label, measured-core workload, read budget MB/s, write budget MB/s)
    ("bwread_rw", "bwread", 500.0, 100.0),
    ("bwwrite_rw", "bwwrite", 500.0, 100.0),
    ("bwread_legacy", "bwread", 100.0, 0.0),
    ("bwwrite_legacy", "bwwrite", 100.0, 0.0),
]


def bandwidth_matrix(base_config, warmup_cycles=150_000, measure_cycles=900_000,
                     log=None):
    """Measured bandwidth of a single regulated core (core 1) under dual
    read/write budgets and under legacy read-only budgets.  Runs in
    fixed-cycle mode; the core-1 read/write MB/s columns carry the result."""
    out = []
    for label, kind, read_mbps, write_mbps in BANDWIDTH_SETTINGS:
        cfg = base_config.copy(**{
            "scenario.id": "%s_bw_%s" % (base_config.sid, label),
            "stop.mode": "cycles",
            "stop.warmup_cycles": warmup_cycles,
            "stop.measure_cycles": measure_cycles,
            "regulator.enabled": True,
            "core1.workload": kind,
            "core1.read_mbps": read_mbps,
            "core1.write_mbps": write_mbps,
            "core2.workload": "none",
            "core3.workload": "none",
        })
        out.append(run_scenario(cfg, log=log))
    return out


def regulation_matrix(base_config, write_budgets=(50.0, 100.0), read_mbps=500.0,
                      log=None):
    """Sweep over attacker write-bandwidth budgets with a fixed read budget."""
    out = []
    for wb in write_budgets:
        overrides = {
            "scenario.id": "%s_reg_%dw" % (base_config.sid, int(wb)),
            "regulator.enabled": True,
        }
        for n in range(1, NUM_CORES):
            overrides["core%d.read_mbps" % n] = read_mbps
            overrides["core%d.write_mbps" % n] = wb
        out.append(run_scenario(base_config.copy(**overrides), log=log))
    return out
