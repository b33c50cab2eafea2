"""Figure rendering for count and degree reports.

Plots go to files next to the delimited output; nothing is ever shown
interactively, so the Agg backend is forced before pyplot loads.
"""

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def render_count_figure(report, path) -> str:
    """Step plot of N(T) per stratum on log-log axes, slope annotated."""
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    series = [
        ("no vanishing subsum", report.counts_nosubsum, "o-"),
        ("vanishing subsum", report.counts_subsum, "s--"),
    ]
    plotted = False
    for label, counts, style in series:
        pts = [(t, c) for t, c in zip(report.grid, counts) if c > 0]
        if not pts:
            continue
        ax.loglog([p[0] for p in pts], [p[1] for p in pts], style, label=label)
        plotted = True
    if not plotted:
        ax.text(0.5, 0.5, "no counted points", ha="center", va="center",
                transform=ax.transAxes)
        ax.set_xscale("log")
    ax.set_xlabel("T")
    ax.set_ylabel("N(T)")
    title = "rational points of the logarithm set"
    if report.slope is not None:
        title += "  (fitted slope %.3f)" % report.slope
    ax.set_title(title)
    if plotted:
        ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return str(path)


def render_degree_figure(degree_report: dict, path) -> str:
    """Certified degrees against T with the calibrated T^(1/6) reference."""
    rows = degree_report["rows"]
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    if rows:
        ts = [r["T"] for r in rows]
        degs = [r["degree"] for r in rows]
        ax.plot(ts, degs, "o", label="certificates")
        c4 = degree_report.get("c4_empirical")
        if c4 is not None and max(ts) > 1:
            xs = [1 + i * (max(ts) - 1) / 200 for i in range(201)]
            ax.plot(xs, [c4 * x ** (1 / 6) for x in xs], "-",
                    label="%.3f * T^(1/6)" % c4, alpha=0.7)
        ax.legend()
    else:
        ax.text(0.5, 0.5, "no certificates", ha="center", va="center",
                transform=ax.transAxes)
    ax.set_xlabel("T = lcm(curve order, tuple order)")
    ax.set_ylabel("[Q(P, eps) : Q]")
    ax.set_title("certified degrees vs torsion order")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return str(path)
