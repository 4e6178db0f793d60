#!/usr/bin/env python3
"""Plots the output of `fbd simulate` and `fbd decompose`.

    python3 scripts/plot_run.py OUT_DIR

Writes snapshots.png (u and p on [-1, 1] at each snapshot, interface marked)
and, when decomposition files are present, decomposition.png. Needs numpy
and matplotlib; the simulator itself does not.
"""

import glob
import json
import os
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np


def read_csv(path):
    with open(path) as fh:
        lines = [l for l in fh if not l.startswith("#")]
    names = lines[0].strip().split(",")
    data = np.loadtxt(lines[1:], delimiter=",", ndmin=2)
    return {n: data[:, i] for i, n in enumerate(names)}


def snapshots(out):
    files = sorted(glob.glob(os.path.join(out, "snapshot_*.csv")))
    if not files:
        return
    fig, axes = plt.subplots(2, 3, figsize=(12, 6), sharex=True, sharey=True)
    for ax, path in zip(axes.flat, files):
        side = json.load(open(path[:-4] + ".json"))
        tab = read_csv(path)
        keep = (tab["x"] >= -1) & (tab["x"] <= 1)
        x = tab["x"][keep]
        ax.axhspan(-2, 2, color="0.9")
        ax.plot(x, tab["u"][keep], "k", lw=1, label="u")
        ax.plot(x, tab["p"][keep], "b", lw=1, label="p")
        ax.axvline(0.0, color="0.5", ls=":")
        ax.axvline(side["jump_pos"], color="r", ls="--")
        ax.set_title("t = %.3g" % side["t"])
    axes.flat[0].legend()
    fig.tight_layout()
    fig.savefig(os.path.join(out, "snapshots.png"), dpi=120)


def decomposition(out):
    files = sorted(glob.glob(os.path.join(out, "decomposition_*.csv")))
    if not files:
        return
    fig, axes = plt.subplots(1, len(files), figsize=(4 * len(files), 3.5), sharey=True)
    for ax, path in zip(np.atleast_1d(axes), files):
        tab = read_csv(path)
        head = open(path).readline().strip("# \n")
        for col in ("f", "f_ess4", "f_neg_total"):
            ax.plot(tab["x"], tab[col], lw=1, label=col)
        ax.set_xlim(-1, 1)
        ax.set_title(head, fontsize=8)
    np.atleast_1d(axes)[0].legend()
    fig.tight_layout()
    fig.savefig(os.path.join(out, "decomposition.png"), dpi=120)


if __name__ == "__main__":
    if len(sys.argv) != 2:
        sys.exit(__doc__)
    snapshots(sys.argv[1])
    decomposition(sys.argv[1])
