#!/usr/bin/env python3
"""Plot per-episode mean rate from one or more iab-sapa metrics CSV files."""

import argparse

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("csv", nargs="+", help="metrics files written by 'iab-sapa run --out'")
    parser.add_argument("--out", default="metrics.png", help="output image")
    parser.add_argument("--smooth", type=int, default=5, help="rolling mean window in episodes")
    args = parser.parse_args()

    fig, ax = plt.subplots(figsize=(7, 4))
    for path in args.csv:
        df = pd.read_csv(path)
        rate = df["mean_rate_bps_hz"].rolling(args.smooth, min_periods=1).mean()
        ax.plot(df["episode"], rate, label=path)
    ax.set_xlabel("episode")
    ax.set_ylabel("mean user rate (bit/s/Hz)")
    ax.grid(alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(args.out, dpi=150)


if __name__ == "__main__":
    main()
