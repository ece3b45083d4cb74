#!/usr/bin/env python3
"""Render RE curves from ``msrss ... --plot-data`` files.

Usage:
    msrss simulate --figures --seed 1 --plot-data figures.csv -o sweep.csv
    python3 scripts/plot_figures.py figures.csv --out figures/

One PNG per figure id. Simulation figures plot RE against p with one line per
(r, lambda); dataset figures plot RE against r with one line per (covariate, m).
Error bars are 2 MC standard errors.
"""

import argparse
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import pandas as pd  # noqa: E402


def plot_figure(name, frame, out_dir):
    fig, ax = plt.subplots(figsize=(6, 4))
    if name == "re_dataset":
        x, groups, label = "r", ["covariate", "m"], "{covariate}, m={m}"
    else:
        x, groups, label = "p", ["r", "lambda"], "r={r}, lambda={lambda}"
    for key, part in frame.groupby(groups, dropna=False):
        part = part.sort_values(x)
        ax.errorbar(part[x], part["re"], yerr=2 * part["stderr"], marker="o", capsize=2,
                    label=label.format(**dict(zip(groups, key))))
    ax.axhline(1.0, color="grey", linewidth=0.8, linestyle="--")
    ax.set_xlabel(x)
    ax.set_ylabel("RE")
    ax.set_title(name)
    ax.legend(fontsize=7)
    fig.tight_layout()
    path = out_dir / f"{name}.png"
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("plot_data", type=Path)
    parser.add_argument("--out", type=Path, default=Path("figures"))
    args = parser.parse_args()

    frame = pd.read_csv(args.plot_data, comment="#")
    args.out.mkdir(parents=True, exist_ok=True)
    for name, part in frame.groupby("figure"):
        print(plot_figure(name, part, args.out))


if __name__ == "__main__":
    main()
