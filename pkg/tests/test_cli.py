"""`simulate` CLI: flag mapping and exit codes."""

import csv

import pytest

from memsim.cli import apply_flags, build_parser, main


def parse(argv):
    return build_parser().parse_args(argv)


def test_attacker_flag_expands_to_core_workloads():
    ov = apply_flags(parse(["--attackers", "2"]))
    assert ov["core1.workload"] == "bwwrite"
    assert ov["core2.workload"] == "bwwrite"
    assert ov["core3.workload"] == "none"


def test_prefetch_flag_variants():
    assert apply_flags(parse(["--prefetch", "none"]))["l1d_pf.enabled"] is False
    ov = apply_flags(parse(["--prefetch", "l1d,l2"]))
    assert ov["l1d_pf.enabled"] and ov["l2_pf.enabled"]
    ov = apply_flags(parse(["--prefetch", "l2"]))
    assert not ov["l1d_pf.enabled"] and ov["l2_pf.enabled"]
    with pytest.raises(SystemExit):
        parse(["--prefetch", "l3"])


def test_regulate_flag_sets_budgets_on_attacker_cores():
    ov = apply_flags(parse(["--regulate", "500/100"]))
    assert ov["regulator.enabled"] is True
    assert ov["core1.read_mbps"] == 500.0
    assert ov["core3.write_mbps"] == 100.0
    with pytest.raises(SystemExit):
        parse(["--regulate", "500"])


def test_partition_and_wb_flags():
    ov = apply_flags(parse(["--partition", "on", "--wb-size", "64"]))
    assert ov["partition.enabled"] is True
    assert ov["l2.wb"] == 64


def test_exit_code_1_on_config_error(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("no.such.key = 1\n")
    assert main(["--config", str(bad)]) == 1


def test_end_to_end_run_writes_csv(tmp_path, monkeypatch):
    cfg = tmp_path / "s.cfg"
    cfg.write_text("core0.wset_kb = 8\n"
                   "core0.iterations = 1\n"
                   "stop.min_warmup_cycles = 1000\n")
    out = tmp_path / "r.csv"
    monkeypatch.setattr("sys.stderr", open(str(tmp_path / "log"), "w"))
    assert main(["--config", str(cfg), "--attackers", "1",
                 "--out", str(out)]) == 0
    with open(out) as fh:
        rows = list(csv.reader(fh))
    assert len(rows) == 2
    assert rows[1][rows[0].index("status")] == "done"
