"""Matplotlib renderings written next to the delimited outputs."""

import matplotlib

matplotlib.use("Agg")

import numpy as np
import matplotlib.pyplot as plt

_PNG_META = {"Software": "clocklab"}


def _save(fig, path):
    fig.savefig(path, dpi=120, bbox_inches="tight", metadata=_PNG_META)
    plt.close(fig)


def chain_trace(report, path):
    """Energy and ordered-bond fraction along one chain."""
    fig, (ax1, ax2) = plt.subplots(2, 1, sharex=True, figsize=(7, 5))
    ax1.plot(report.sweeps, report.energy, lw=0.8, color="tab:blue")
    ax1.set_ylabel("energy")
    ax2.plot(report.sweeps, report.ordered_fraction, lw=0.8, color="tab:orange")
    ax2.set_ylabel("ordered fraction")
    ax2.set_xlabel("sweep")
    ax2.set_ylim(0, 1)
    ax1.set_title(f"chain trace (seed {report.seed})")
    _save(fig, path)


def heightmap(heights, path):
    """Interface height field; -1 marks columns without a finite height."""
    fig, ax = plt.subplots(figsize=(5, 4.2))
    masked = np.ma.masked_where(np.asarray(heights) < 0, heights)
    im = ax.imshow(masked.T, origin="lower", cmap="viridis", interpolation="nearest")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    fig.colorbar(im, ax=ax, label="h(M)")
    ax.set_title("interface height field")
    _save(fig, path)


def exceedance(scan, path):
    """log exceedance of w(B) with the fitted slope."""
    table = scan["table"]
    ws = [t["w"] for t in table if t["count"] > 0]
    fs = [t["frequency"] for t in table if t["count"] > 0]
    fig, ax = plt.subplots(figsize=(5.5, 4))
    ax.semilogy(ws, fs, "o-", label="empirical P(w(B) >= w)")
    if scan.get("log_slope") is not None and len(ws) >= 2:
        xs = np.asarray(ws, dtype=float)
        fit = np.exp(scan["log_slope"] * xs) * fs[0]
        ax.semilogy(xs, fit, "--", label=f"slope {scan['log_slope']:.3f}")
    if scan.get("log_a") is not None:
        xs = np.asarray(ws, dtype=float)
        ax.semilogy(xs, np.exp(scan["log_a"] * xs), ":", label="a(q)^w reference")
    ax.set_xlabel("w")
    ax.set_ylabel("frequency")
    ax.legend()
    ax.set_title("interface weight exceedance")
    _save(fig, path)


def rigidity_curves(rows, path):
    """Mean rigidity fraction against beta, one curve per (n, l, q)."""
    series = {}
    for r in rows:
        if r["observable"] != "rigidity_fraction":
            continue
        key = (r["n"], r["l"], r["q"])
        series.setdefault(key, {}).setdefault(r["beta"], []).append(r["value"])
    if not series:
        return
    fig, ax = plt.subplots(figsize=(6, 4))
    for key in sorted(series):
        betas = sorted(series[key])
        means = [float(np.mean(series[key][b])) for b in betas]
        ax.plot(betas, means, "o-", label=f"N={key[0]} L={key[1]} q={key[2]}")
    ax.set_xlabel("beta")
    ax.set_ylabel("mean |R| / N^2")
    ax.set_ylim(0, 1.02)
    ax.legend(fontsize=8)
    ax.set_title("interface rigidity across the temperature grid")
    _save(fig, path)
