"""`simulate` command line front-end.

Flags override config keys.  Exit codes: 0 success, 1 config error,
2 timeout/deadlock, 3 I/O error.
"""

import argparse
import sys

from .config import NUM_CORES, ConfigError, load_config
from .harness import emit_csv, run_scenario


def _parse_prefetch(value):
    parts = [p for p in value.lower().split(",") if p]
    if parts == ["none"]:
        return False, False
    allowed = {"l1d", "l2"}
    if not parts or not set(parts) <= allowed:
        raise argparse.ArgumentTypeError(
            "expected 'none' or a comma list of l1d,l2")
    return "l1d" in parts, "l2" in parts


def _parse_regulate(value):
    try:
        read_s, write_s = value.split("/")
        return float(read_s), float(write_s)
    except ValueError:
        raise argparse.ArgumentTypeError("expected READ_MBPS/WRITE_MBPS")


def build_parser():
    p = argparse.ArgumentParser(
        prog="simulate",
        description="Run one memory-hierarchy contention scenario and append "
                    "its metrics to a CSV file.")
    p.add_argument("--config", metavar="FILE",
                   help="scenario config file (flat key=value); defaults apply "
                        "when omitted")
    p.add_argument("--attackers", type=int, choices=range(0, NUM_CORES),
                   metavar="N", help="number of attacker cores (cores 1..N)")
    p.add_argument("--wb-size", type=int, metavar="K",
                   help="L2 writeback buffer size")
    p.add_argument("--prefetch", type=_parse_prefetch, metavar="l1d,l2|none",
                   help="which prefetchers are enabled")
    p.add_argument("--partition", choices=["on", "off"],
                   help="equal L2 way-partitioning")
    p.add_argument("--regulate", type=_parse_regulate, metavar="READ/WRITE",
                   help="regulate attacker cores at READ/WRITE MB/s")
    p.add_argument("--seed", type=int, metavar="S")
    p.add_argument("--out", default="results.csv", metavar="FILE",
                   help="output CSV path (default results.csv)")
    return p


def apply_flags(args):
    overrides = {}
    if args.attackers is not None:
        for n in range(1, NUM_CORES):
            overrides["core%d.workload" % n] = \
                "bwwrite" if n <= args.attackers else "none"
    if args.wb_size is not None:
        overrides["l2.wb"] = args.wb_size
    if args.prefetch is not None:
        overrides["l1d_pf.enabled"], overrides["l2_pf.enabled"] = args.prefetch
    if args.partition is not None:
        overrides["partition.enabled"] = args.partition == "on"
    if args.regulate is not None:
        read_mbps, write_mbps = args.regulate
        overrides["regulator.enabled"] = True
        for n in range(1, NUM_CORES):
            overrides["core%d.read_mbps" % n] = read_mbps
            overrides["core%d.write_mbps" % n] = write_mbps
    if args.seed is not None:
        overrides["scenario.seed"] = args.seed
    return overrides


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, apply_flags(args))
    except (ConfigError, OSError) as e:
        print("config error: %s" % e, file=sys.stderr)
        return 1
    metrics = run_scenario(cfg)
    try:
        emit_csv([metrics], args.out)
    except OSError as e:
        print("I/O error writing %s: %s" % (args.out, e), file=sys.stderr)
        return 3
    if metrics.status != "done":
        print("run ended with status %s" % metrics.status, file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
