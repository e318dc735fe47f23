"""Deterministic report writers: CSV, versioned JSON, and PNG figures.

Byte-identical output for identical inputs is a hard requirement (golden-file
tests diff the artifacts), so JSON keys are sorted, CSV uses fixed headers and
'\n' newlines, and PNG metadata that would embed timestamps or tool versions
is stripped.
"""

from __future__ import annotations

import csv
import json
import io

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

SCHEMA_VERSION = 1


def render_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def write_csv(path, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(render_csv(rows))


def render_json(obj) -> str:
    return json.dumps({"schema": SCHEMA_VERSION, **obj}, sort_keys=True, indent=2) + "\n"


def write_json(path, obj) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(render_json(obj))


def save_figure(fig, path) -> None:
    """Save a PNG with creation-time/software metadata stripped for reproducibility."""
    fig.savefig(path, format="png", dpi=100,
                metadata={"Software": None, "Creation Time": None})
    plt.close(fig)


def histogram_figure(labels, counts, title, ylabel):
    fig, ax = plt.subplots(figsize=(max(4.0, 0.9 * len(labels)), 3.2))
    ax.bar(range(len(labels)), counts, color="#4878cf")
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=30, ha="right", fontsize=8)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    fig.tight_layout()
    return fig


def ratio_figure(P_values, ratios, title):
    fig, ax = plt.subplots(figsize=(4.5, 3.2))
    ax.plot(P_values, ratios, marker="o", color="#4878cf")
    ax.axhline(1.0, color="#888888", linestyle="--", linewidth=1)
    ax.set_xscale("log", base=2)
    ax.set_xlabel("P")
    ax.set_ylabel("count / prediction")
    ax.set_title(title)
    fig.tight_layout()
    return fig
