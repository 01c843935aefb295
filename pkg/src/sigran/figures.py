"""Figure rendering for the CLI report path.

Only the CLI imports this module; the library itself stays free of any
graphics dependency so CSV remains the stable interface. Figures are
rendered headless (Agg) to PNG files next to the delimited output.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .costs import ComparisonTable


def save_compare_figure(table: ComparisonTable, path) -> None:
    procedures = [r.procedure for r in table.rows]
    baseline = [r.baseline_ms for r in table.rows]
    proposed = [r.proposed_ms for r in table.rows]
    x = range(len(procedures))
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar([i - 0.18 for i in x], baseline, width=0.36, label="standard RAN")
    ax.bar([i + 0.18 for i in x], proposed, width=0.36, label="centralized RAN")
    ax.set_xticks(list(x))
    ax.set_xticklabels(procedures)
    ax.set_ylabel("signaling time (ms)")
    ax.set_title(
        f"alpha={table.params.alpha} ms/bit, beta={table.params.beta} ms, m={table.params.m} bits"
    )
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def save_attach_figure(means_ms: dict[str, float], path) -> None:
    labels = list(means_ms)
    values = [means_ms[k] for k in labels]
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.bar(labels, values, width=0.5)
    ax.set_ylabel("mean attach time (ms)")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def save_mobility_figure(series: dict[str, tuple[list[float], list[float]]], path) -> None:
    """series maps a label to (time_s, system_throughput_mbps)."""
    fig, ax = plt.subplots(figsize=(7, 4))
    for label, (t, tp) in series.items():
        ax.plot(t, tp, label=label)
    ax.set_xlabel("time (s)")
    ax.set_ylabel("system throughput (Mbps)")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def save_sweep_figure(handovers: list[int], gains_mbps: list[float], path) -> None:
    order = sorted(range(len(handovers)), key=lambda i: (handovers[i], gains_mbps[i]))
    hs = [handovers[i] for i in order]
    gs = [gains_mbps[i] for i in order]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(hs, gs, marker="o")
    ax.set_xlabel("handovers per run")
    ax.set_ylabel("throughput gain, centralized - distributed (Mbps)")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
