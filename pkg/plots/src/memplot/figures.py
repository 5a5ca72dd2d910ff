"""Figure definitions over the simulator's results CSV.

Each figure id maps to the columns it needs and a draw function.  Rows are
taken from the CSV as-is; nothing is recomputed from simulation state.

Figure ids:

- ``prefetch-effect``: victim slowdown per attacker-prefetcher configuration
  (grouped bars, one per ``prefetchers`` value).
- ``wb-size``: victim slowdown vs shared-cache writeback-buffer size (line).
- ``wb-blocked``: shared-cache blocked cycles vs writeback-buffer size (line).
- ``regulation-bandwidth``: measured read/write bandwidth of the regulated
  core vs its configured budgets (grouped bars per scenario row).
- ``regulation-slowdown``: victim slowdown per regulation setting (bars).
"""

import csv

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)


class FigureError(Exception):
    pass


def read_rows(path, required):
    """Load CSV rows, checking that every required column is present and
    that at least one data row exists."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [c for c in required if c not in header]
        if missing:
            raise FigureError(
                "%s: missing required column(s): %s" % (path, ", ".join(missing)))
        rows = list(reader)
    if not rows:
        raise FigureError("%s: no data rows" % path)
    return rows


def _save(fig, out_path):
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)


def _prefetch_effect(rows, out_path):
    labels = [r["prefetchers"] for r in rows]
    slowdowns = [float(r["slowdown"]) for r in rows]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(range(len(rows)), slowdowns, color="#a03030")
    ax.set_xticks(range(len(rows)), labels)
    ax.set_xlabel("attacker prefetchers enabled")
    ax.set_ylabel("normalized execution time")
    ax.set_title("Victim slowdown vs attacker prefetcher configuration")
    _save(fig, out_path)


def _wb_line(rows, out_path, ycol, ylabel, title):
    pts = sorted((int(r["l2_wb_size"]), float(r[ycol])) for r in rows)
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(xs, ys, marker="o", color="#303080")
    ax.set_xscale("log", base=2)
    ax.set_xticks(xs, [str(x) for x in xs])
    ax.set_xlabel("shared-cache writeback buffer entries")
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    _save(fig, out_path)


def _wb_size(rows, out_path):
    _wb_line(rows, out_path, "slowdown", "normalized execution time",
             "Victim slowdown vs writeback buffer size")


def _wb_blocked(rows, out_path):
    _wb_line(rows, out_path, "l2_blocked_cycles", "blocked cycles",
             "Shared-cache blocked cycles vs writeback buffer size")


def _regulation_bandwidth(rows, out_path):
    labels = [r["scenario"] for r in rows]
    reads = [float(r["core1_read_mbps"]) for r in rows]
    writes = [float(r["core1_write_mbps"]) for r in rows]
    read_budget = [float(r["regulate_read_mbps"]) for r in rows]
    write_budget = [float(r["regulate_write_mbps"]) for r in rows]
    n = len(rows)
    w = 0.35
    xs = range(n)
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.bar([x - w / 2 for x in xs], reads, w, label="read MB/s", color="#303080")
    ax.bar([x + w / 2 for x in xs], writes, w, label="write MB/s", color="#a03030")
    for x, rb, wb in zip(xs, read_budget, write_budget):
        if rb > 0:
            ax.hlines(rb, x - w, x, colors="#303080", linestyles="dashed")
        if wb > 0:
            ax.hlines(wb, x, x + w, colors="#a03030", linestyles="dashed")
    ax.set_xticks(list(xs), labels, rotation=20, ha="right")
    ax.set_ylabel("measured bandwidth (MB/s)")
    ax.set_title("Regulated core bandwidth vs budgets (dashed)")
    ax.legend()
    _save(fig, out_path)


def _regulation_slowdown(rows, out_path):
    labels = ["%s\n(w=%g MB/s)" % (r["scenario"], float(r["regulate_write_mbps"]))
              for r in rows]
    slowdowns = [float(r["slowdown"]) for r in rows]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(range(len(rows)), slowdowns, color="#308030")
    ax.set_xticks(range(len(rows)), labels)
    ax.set_ylabel("normalized execution time")
    ax.set_title("Victim slowdown under write-bandwidth regulation")
    _save(fig, out_path)


FIGURES = {
    "prefetch-effect": (["prefetchers", "slowdown"], _prefetch_effect),
    "wb-size": (["l2_wb_size", "slowdown"], _wb_size),
    "wb-blocked": (["l2_wb_size", "l2_blocked_cycles"], _wb_blocked),
    "regulation-bandwidth": (
        ["scenario", "core1_read_mbps", "core1_write_mbps",
         "regulate_read_mbps", "regulate_write_mbps"],
        _regulation_bandwidth),
    "regulation-slowdown": (
        ["scenario", "regulate_write_mbps", "slowdown"], _regulation_slowdown),
}

FIGURE_IDS = sorted(FIGURES)


def render(figure_id, in_path, out_path):
    """Render one figure from a results CSV to an image file."""
    if figure_id not in FIGURES:
        raise FigureError("unknown figure id %r (choose from %s)"
                          % (figure_id, ", ".join(FIGURE_IDS)))
    required, draw = FIGURES[figure_id]
    rows = read_rows(in_path, required)
    draw(rows, out_path)
