"""Sweep reports: a CSV of every certificate, a per-group summary and a figure.

Records are streamed, so a full sweep never holds every certificate in memory.
"""

from __future__ import annotations

import csv
import os
from collections import Counter

CSV_FIELDS = ("group", "n1_order", "n2_order", "family", "coker_g", "sha_E",
              "sha_L1_order", "sha_L2_order", "intersection_order", "verdict", "failed")


def fmt_group(factors):
    return "x".join(str(d) for d in factors) or "1"


def _order(factors):
    n = 1
    for d in factors:
        n *= d
    return n


class ReportWriter:
    """Collects sweep records into ``directory``.

    Use :meth:`add` as the sweep's ``on_record`` callback and call
    :meth:`close` at the end; it returns the paths written.
    """

    def __init__(self, directory):
        os.makedirs(directory, exist_ok=True)
        self.paths = {
            "records": os.path.join(directory, "sweep.csv"),
            "summary": os.path.join(directory, "summary.csv"),
            "figure": os.path.join(directory, "sweep.png"),
        }
        self._fh = open(self.paths["records"], "w", newline="", encoding="utf-8")
        self._csv = csv.writer(self._fh)
        self._csv.writerow(CSV_FIELDS)
        self.summary = {}

    def add(self, r):
        self._csv.writerow([fmt_group(r.group), r.n1_order, r.n2_order, r.family,
                            fmt_group(r.coker_g), fmt_group(r.sha_E), r.sha_L1, r.sha_L2,
                            r.intersection_order, int(r.verdict), ";".join(r.failed)])
        row = self.summary.setdefault(
            r.group, {"certificates": 0, "failures": 0, "orders": Counter()})
        row["certificates"] += 1
        row["failures"] += (not r.verdict) or (not r.exact_sequence_ok())
        row["orders"][_order(r.coker_g)] += 1

    def close(self):
        self._fh.close()
        groups = sorted(self.summary, key=lambda g: (_order(g), g))
        with open(self.paths["summary"], "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(("group", "certificates", "failures", "coker_g_order_histogram"))
            for g in groups:
                row = self.summary[g]
                hist = " ".join(f"{o}:{c}" for o, c in sorted(row["orders"].items()))
                w.writerow((fmt_group(g), row["certificates"], row["failures"], hist))
        plot_summary(self.summary, self.paths["figure"])
        return self.paths


def plot_summary(summary, path):
    """Stacked bars: certificates per group, split by the order of ``coker(g)``."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    groups = sorted(summary, key=lambda g: (_order(g), g))
    orders = sorted({o for row in summary.values() for o in row["orders"]})
    fig, ax = plt.subplots(figsize=(max(6.0, 0.3 * len(groups) + 2), 4.5))
    xs = list(range(len(groups)))
    bottom = [0] * len(groups)
    for o in orders:
        heights = [summary[g]["orders"].get(o, 0) for g in groups]
        ax.bar(xs, heights, bottom=bottom, label=f"|coker g| = {o}")
        bottom = [b + h for b, h in zip(bottom, heights)]
    ax.set_xticks(xs)
    ax.set_xticklabels([fmt_group(g) for g in groups], rotation=90, fontsize=7)
    if any(bottom):
        ax.set_yscale("log")
    ax.set_ylabel("certificates")
    ax.set_xlabel("G by invariant factors")
    total = sum(row["certificates"] for row in summary.values())
    fails = sum(row["failures"] for row in summary.values())
    ax.set_title(f"{total} certificates, {fails} failures")
    if orders:
        ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
