#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
#
# Plot template for nearswipt campaign outputs. Reads the records.csv /
# summary.csv written by `nearswipt run` and produces one figure per
# experiment. Requires matplotlib and pandas; the simulator itself never
# links a graphics stack.

import argparse
import pathlib
import sys

import pandas as pd

try:
    import matplotlib.pyplot as plt
except ImportError:
    sys.exit("matplotlib is required: pip install matplotlib pandas")


def sweep_columns(frame: pd.DataFrame) -> pd.DataFrame:
    """Split 'key=value;key=value' sweep tags into real columns."""
    parts = frame["sweep_point"].str.split(";", expand=False)
    keys = {kv.split("=", 1)[0] for row in parts for kv in row}
    for key in sorted(keys):
        frame[key] = [
            dict(kv.split("=", 1) for kv in row).get(key) for row in parts
        ]
    return frame


def explode_lists(frame: pd.DataFrame, column: str) -> pd.Series:
    """Flatten a semicolon-joined per-user list column to one value per row."""
    values = frame[column].fillna("")
    exploded = values.str.split(";").explode()
    return pd.to_numeric(exploded[exploded != ""], errors="coerce").dropna()


def plot_band_sweep(summary: pd.DataFrame, out: pathlib.Path) -> None:
    fig, ax = plt.subplots()
    for band, group in summary.groupby("fc_ghz"):
        group = group.assign(num_id=group["num_id"].astype(int)).sort_values("num_id")
        label = f"{band} GHz ({group['array'].iloc[0]})"
        ax.plot(group["num_id"], 1e3 * group["mean_net_w"], marker="o", label=label)
    ax.set_xlabel("ID users")
    ax.set_ylabel("mean net harvested power [mW]")
    ax.legend()
    fig.savefig(out, dpi=150, bbox_inches="tight")


def plot_near_vs_far(summary: pd.DataFrame, out: pathlib.Path) -> None:
    fig, ax = plt.subplots()
    for (band, field), group in summary.groupby(["fc_ghz", "field"]):
        group = group.assign(num_id=group["num_id"].astype(int)).sort_values("num_id")
        style = "-" if field == "near" else "--"
        ax.semilogy(group["num_id"], group["mean_dc_w"], style, marker="o",
                    label=f"{band} GHz {field}")
    ax.set_xlabel("ID users")
    ax.set_ylabel("mean harvested DC power [W]")
    ax.legend()
    fig.savefig(out, dpi=150, bbox_inches="tight")


def plot_estimator_cdf(records: pd.DataFrame, out: pathlib.Path) -> None:
    fig, ax = plt.subplots()
    for estimator, group in records.groupby("estimator"):
        nets = explode_lists(group[group["feasible"] == 1], "net_w").sort_values()
        cdf = [(i + 1) / len(nets) for i in range(len(nets))]
        ax.plot(1e3 * nets, cdf, label=estimator)
    ax.set_xlabel("net harvested power [mW]")
    ax.set_ylabel("empirical CDF")
    ax.legend()
    fig.savefig(out, dpi=150, bbox_inches="tight")


def plot_tradeoff(summary: pd.DataFrame, out: pathlib.Path) -> None:
    fig, axes = plt.subplots(1, 2, figsize=(11, 4))
    for (field, channel, n_ant), group in summary.groupby(
            ["field", "channel", "id_antennas"]):
        group = group.assign(rho=group["rho"].astype(float)).sort_values("rho")
        label = f"{field}/{channel}/N={n_ant}"
        axes[0].plot(group["mean_sum_se"], 1e3 * group["mean_dc_w"], marker=".",
                     label=label)
        axes[1].plot(group["rho"], group["mean_sum_se"], marker=".", label=label)
    axes[0].set_xlabel("sum SE [bit/s/Hz]")
    axes[0].set_ylabel("mean harvested DC power [mW]")
    axes[1].set_xlabel("power split toward data")
    axes[1].set_ylabel("sum SE [bit/s/Hz]")
    axes[0].legend(fontsize=6)
    fig.savefig(out, dpi=150, bbox_inches="tight")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("run_dir", type=pathlib.Path,
                        help="output directory of a `nearswipt run`")
    parser.add_argument("--out", type=pathlib.Path, default=None,
                        help="figure path (default: <run_dir>/figure.png)")
    args = parser.parse_args()

    summary = sweep_columns(pd.read_csv(args.run_dir / "summary.csv"))
    records = sweep_columns(pd.read_csv(args.run_dir / "records.csv"))
    experiment = records["experiment"].iloc[0]
    out = args.out or args.run_dir / "figure.png"

    if experiment == "band_sweep":
        plot_band_sweep(summary, out)
    elif experiment == "near_vs_far":
        plot_near_vs_far(summary, out)
    elif experiment == "estimator_cdf":
        plot_estimator_cdf(records, out)
    elif experiment == "tradeoff":
        plot_tradeoff(summary, out)
    else:
        sys.exit(f"unknown experiment tag: {experiment}")
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
