#!/usr/bin/env python3
"""Render the CSVs produced by run_figures.py as PNGs (needs matplotlib)."""

import argparse
import csv
import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def read_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header = rows[0]
    cols = {name: [] for name in header}
    for row in rows[1:]:
        for name, tok in zip(header, row):
            cols[name].append(math.inf if tok == "inf" else float(tok))
    return cols


def plot_fig1(cols, out):
    fig, ax = plt.subplots(figsize=(6, 4.2))
    ax.plot(cols["alpha"], cols["beta_exact"], "k-", lw=2, label="exact")
    for name, ys in cols.items():
        if name.startswith("beta_theorem1_s="):
            ax.plot(cols["alpha"], ys, lw=0.8,
                    label=name.replace("beta_theorem1_", ""))
    ax.set_xlabel("type-I error")
    ax.set_ylabel("type-II error")
    ax.legend(fontsize=7, ncol=2)
    fig.savefig(out, dpi=150, bbox_inches="tight")


def plot_fig2(cols, out):
    fig, ax = plt.subplots(figsize=(6, 4.2))
    labels = ["dh_exact/n", "theorem1_envelope/n", "ns_symmetric/n",
              "fidelity/n", "info_spectrum/n"]
    for name in labels:
        if name in cols:
            ax.plot(cols["epsilon"], cols[name], label=name)
    ax.set_ylim(0, 6)
    ax.set_xlabel("type-I budget")
    ax.set_ylabel("bits per copy")
    ax.legend(fontsize=8)
    fig.savefig(out, dpi=150, bbox_inches="tight")


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--indir", default="out")
    args = parser.parse_args()
    indir = Path(args.indir)
    plot_fig1(read_csv(indir / "fig1_tradeoff.csv"), indir / "fig1.png")
    plot_fig2(read_csv(indir / "fig2_bounds.csv"), indir / "fig2.png")
    print(f"wrote {indir}/fig1.png and {indir}/fig2.png")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
