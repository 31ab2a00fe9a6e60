#!/usr/bin/env python3
"""Renders a qmeas CSV table to PNG.

  plot.py IN.csv OUT.png --map X Y Z [--contour V] [--scale S]
  plot.py IN.csv OUT.png --lines X SERIES COL [COL ...]
  plot.py IN.csv OUT.png --panels SERIES X Y Z [--contour V]
"""

import argparse
import csv
import math
from collections import OrderedDict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def load(path):
    with open(path, newline="") as f:
        rows = list(csv.DictReader(f))
    return rows


def num(v):
    try:
        return float(v)
    except ValueError:
        return math.nan


def grid(rows, x, y, z, scale=1.0):
    xs = sorted({num(r[x]) for r in rows})
    ys = sorted({num(r[y]) for r in rows})
    xi = {v: i for i, v in enumerate(xs)}
    yi = {v: i for i, v in enumerate(ys)}
    zz = [[math.nan] * len(xs) for _ in ys]
    for r in rows:
        zz[yi[num(r[y])]][xi[num(r[x])]] = num(r[z]) * scale
    return xs, ys, zz


def draw_map(ax, rows, x, y, z, contour, scale):
    xs, ys, zz = grid(rows, x, y, z, scale)
    m = ax.pcolormesh(xs, ys, zz, shading="auto", cmap="viridis")
    if contour is not None:
        ax.contour(xs, ys, zz, levels=[contour * scale], colors="white", linewidths=1.0)
    ax.set_xlabel(x)
    ax.set_ylabel(y)
    return m


def by_series(rows, key):
    groups = OrderedDict()
    for r in rows:
        groups.setdefault(r[key], []).append(r)
    return groups


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("csv")
    ap.add_argument("png")
    mode = ap.add_mutually_exclusive_group(required=True)
    mode.add_argument("--map", nargs=3, metavar=("X", "Y", "Z"))
    mode.add_argument("--lines", nargs="+", metavar="COL")
    mode.add_argument("--panels", nargs=4, metavar=("SERIES", "X", "Y", "Z"))
    ap.add_argument("--contour", type=float)
    ap.add_argument("--scale", type=float, default=1.0)
    a = ap.parse_args()
    rows = load(a.csv)

    if a.map:
        fig, ax = plt.subplots(figsize=(6, 4.5))
        m = draw_map(ax, rows, *a.map, a.contour, a.scale)
        fig.colorbar(m, ax=ax, label=a.map[2])
    elif a.lines:
        if len(a.lines) < 3:
            ap.error("--lines needs X SERIES COL [COL ...]")
        x, series, cols = a.lines[0], a.lines[1], a.lines[2:]
        fig, axes = plt.subplots(1, len(cols), figsize=(5 * len(cols), 4), squeeze=False)
        for ax, col in zip(axes[0], cols):
            for label, grp in by_series(rows, series).items():
                ax.plot([num(r[x]) for r in grp], [num(r[col]) for r in grp], label=f"{series}={num(label):g}")
            ax.set_xlabel(x)
            ax.set_ylabel(col)
            ax.legend()
    else:
        series, x, y, z = a.panels
        groups = by_series(rows, series)
        fig, axes = plt.subplots(1, len(groups), figsize=(2.8 * len(groups), 3.2), squeeze=False)
        for ax, (label, grp) in zip(axes[0], groups.items()):
            draw_map(ax, grp, x, y, z, a.contour, a.scale)
            ax.set_title(f"{series}={num(label):g}")
    fig.tight_layout()
    fig.savefig(a.png, dpi=120)


if __name__ == "__main__":
    main()
