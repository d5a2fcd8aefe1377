#!/usr/bin/env python3
"""Plot a summary.csv produced by `hybridbeam run`.

Usage: python scripts/plot_sweep.py out/fig3/summary.csv [--metric ee_mean]
Draws metric-vs-SNR curves, one line per scheme, with standard-error bars.
"""

import argparse
import csv
from collections import defaultdict

import matplotlib.pyplot as plt


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("summary", help="summary.csv path")
    ap.add_argument("--metric", default="ee_mean",
                    choices=["ee_mean", "se_mean", "p_tx_mean", "p_rx_mean",
                             "bits_tx_mean", "bits_rx_mean"])
    args = ap.parse_args()

    curves = defaultdict(list)
    with open(args.summary) as fh:
        for row in csv.DictReader(fh):
            err_col = args.metric.replace("_mean", "_stderr")
            curves[row["scheme"]].append((
                float(row["snr_db"]), float(row[args.metric]),
                float(row.get(err_col, 0.0) or 0.0),
            ))

    for scheme, points in sorted(curves.items()):
        points.sort()
        x = [p[0] for p in points]
        y = [p[1] for p in points]
        e = [p[2] for p in points]
        plt.errorbar(x, y, yerr=e, marker="o", capsize=3, label=scheme)

    plt.xlabel("SNR [dB]")
    plt.ylabel(args.metric)
    plt.grid(True)
    plt.legend()
    plt.tight_layout()
    plt.show()


if __name__ == "__main__":
    main()
