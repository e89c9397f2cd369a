"""Figures and delimited tables for scan reports."""

from __future__ import annotations

import csv
from pathlib import Path

from .oracle import VerificationReport

COLUMNS = ("n", "cells", "weakly_connected", "passed", "out_of_scope", "failed")


def census_rows(report: VerificationReport) -> list[dict[str, int]]:
    rows = []
    for n, c in sorted(report.params.get("per_n", {}).items(), key=lambda kv: int(kv[0])):
        wc = c.get("weakly_connected", 0)
        passed = c.get("passed", 0)
        rows.append({
            "n": int(n),
            "cells": c.get("cells", 0),
            "weakly_connected": wc,
            "passed": passed,
            "out_of_scope": c.get("out_of_scope", 0),
            "failed": wc - passed,
        })
    return rows


def write_csv(rows: list[dict[str, int]], path: Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=COLUMNS, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)


def plot_census(rows: list[dict[str, int]], path: Path) -> None:
    """Stacked bars per n (passed / failed / out of scope) on a log axis."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    ns = [r["n"] for r in rows]
    passed = [r["passed"] for r in rows]
    failed = [r["failed"] for r in rows]
    scope = [r["out_of_scope"] for r in rows]
    fig, (ax, ax2) = plt.subplots(1, 2, figsize=(9, 3.6))
    ax.bar(ns, passed, color="#4c72b0", label="weakly connected, verified")
    ax.bar(ns, failed, bottom=passed, color="#c44e52", label="weakly connected, failed")
    ax.bar(ns, scope, bottom=[p + f for p, f in zip(passed, failed)], color="#bbbbbb", label="out of scope")
    ax.set_yscale("log")
    ax.set_xlabel("n")
    ax.set_ylabel("cells")
    ax.set_xticks(ns)
    ax.legend(frameon=False, fontsize=8)
    share = [r["weakly_connected"] / r["cells"] if r["cells"] else 0 for r in rows]
    ax2.plot(ns, share, marker="o", color="#4c72b0")
    ax2.set_ylim(0, 1.05)
    ax2.set_xlabel("n")
    ax2.set_ylabel("weakly connected share")
    ax2.set_xticks(ns)
    for a in (ax, ax2):
        a.spines["top"].set_visible(False)
        a.spines["right"].set_visible(False)
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)


def write_scan_outputs(report: VerificationReport, out: Path, timing: bool = False) -> list[Path]:
    out.mkdir(parents=True, exist_ok=True)
    rows = census_rows(report)
    paths = [out / "report.json", out / "census.csv", out / "census.png"]
    paths[0].write_text(report.dumps(timing) + "\n")
    write_csv(rows, paths[1])
    plot_census(rows, paths[2])
    return paths
