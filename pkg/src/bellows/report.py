"""Report rendering for traced flex families: delimited samples plus figures.

Writes a CSV of per-sample quantities next to matplotlib renderings of the
volume track, the edge-length deviation, and the diagonal lengths.
"""

from __future__ import annotations

import csv
import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from bellows.flex import FlexFamily, edge_key
from bellows.geometry import oriented_volume


def _sq(a, b) -> float:
    return float(sum((x - y) ** 2 for x, y in zip(a, b)))


def family_samples(fam: FlexFamily) -> tuple[list[str], list[list[float]]]:
    """Per-sample rows: t, volume, worst relative edge deviation, diagonals."""
    diagonals = fam.diagonals()
    header = ["t", "volume", "max_edge_dev"] + [f"diag_{u}-{v}" for u, v in diagonals]
    rows = []
    edges = fam.edges()
    for i, coords in enumerate(fam.samples):
        vol = float(oriented_volume(fam.polyhedron(i)))
        dev = 0.0
        for (u, v) in edges:
            target = fam.targets[edge_key(u, v)]
            dev = max(dev, abs(_sq(coords[u], coords[v]) - target) / max(abs(target), 1e-30))
        row = [fam.ts[i], vol, dev]
        row.extend(_sq(coords[u], coords[v]) ** 0.5 for u, v in diagonals)
        rows.append(row)
    return header, rows


def render_flex_report(fam: FlexFamily, out_dir: str) -> dict[str, str]:
    """Write samples.csv plus volume/edge/diagonal figures; returns paths."""
    os.makedirs(out_dir, exist_ok=True)
    header, rows = family_samples(fam)
    paths = {"samples": os.path.join(out_dir, "samples.csv")}
    with open(paths["samples"], "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)

    ts = [r[0] for r in rows]
    vols = [r[1] for r in rows]
    devs = [r[2] for r in rows]

    fig, ax = plt.subplots(figsize=(6.0, 3.6))
    ax.plot(ts, vols, lw=1.2)
    ax.set_xlabel("t")
    ax.set_ylabel("oriented volume")
    ax.set_title("volume along the flex")
    fig.tight_layout()
    paths["volume"] = os.path.join(out_dir, "volume.png")
    fig.savefig(paths["volume"], dpi=150)
    plt.close(fig)

    fig, ax = plt.subplots(figsize=(6.0, 3.6))
    ax.semilogy(ts, [max(d, 1e-18) for d in devs], lw=1.2)
    ax.set_xlabel("t")
    ax.set_ylabel("max relative edge deviation")
    ax.set_title("edge gate along the flex")
    fig.tight_layout()
    paths["edges"] = os.path.join(out_dir, "edge_deviation.png")
    fig.savefig(paths["edges"], dpi=150)
    plt.close(fig)

    fig, ax = plt.subplots(figsize=(6.0, 3.6))
    for j, name in enumerate(header[3:]):
        ax.plot(ts, [r[3 + j] for r in rows], lw=1.2, label=name)
    if header[3:]:
        ax.legend(fontsize=8)
    ax.set_xlabel("t")
    ax.set_ylabel("diagonal length")
    ax.set_title("diagonals along the flex")
    fig.tight_layout()
    paths["diagonals"] = os.path.join(out_dir, "diagonals.png")
    fig.savefig(paths["diagonals"], dpi=150)
    plt.close(fig)
    return paths
