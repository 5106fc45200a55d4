#!/usr/bin/env python3
"""Plot energy traces and field snapshots produced by the sincmbe CLI.

Out of contract: the solver only emits data; this renders it.

Usage:
  plot_energy.py RUN_DIR [--output FIG.png] [--log]

RUN_DIR is an output directory from `sincmbe simulate` (contains energy.csv
and optional snapshot_*.bin files). The figure gets the energy trace on the
left and the final snapshot, when present, on the right.
"""

import argparse
import csv
import glob
import os
import struct
import sys


def read_energy_csv(path):
    rows = {"step": [], "time": [], "energy": [], "modified_energy": []}
    with open(path, newline="") as f:
        for row in csv.DictReader(f):
            rows["step"].append(int(row["step"]))
            rows["time"].append(float(row["time"]))
            rows["energy"].append(float(row["energy"]))
            m = row.get("modified_energy", "")
            rows["modified_energy"].append(float(m) if m else None)
    return rows


def read_snapshot(path):
    import numpy as np

    with open(path, "rb") as f:
        magic = f.read(4)
        if magic != b"MBEF":
            raise ValueError(f"{path}: not a field snapshot")
        version, nx, ny = struct.unpack("<III", f.read(12))
        if version != 1:
            raise ValueError(f"{path}: unsupported version {version}")
        time, step = struct.unpack("<dq", f.read(16))
        data = np.frombuffer(f.read(8 * nx * ny), dtype="<f8")
    return data.reshape(nx, ny), step, time


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("run_dir", help="output directory of a simulate run")
    parser.add_argument("--output", default=None, help="figure path (default: RUN_DIR/energy.png)")
    parser.add_argument("--log", action="store_true", help="log scale for the energy axis")
    args = parser.parse_args()

    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    csv_path = os.path.join(args.run_dir, "energy.csv")
    if not os.path.exists(csv_path):
        sys.exit(f"{csv_path}: not found")
    data = read_energy_csv(csv_path)

    snapshots = sorted(glob.glob(os.path.join(args.run_dir, "snapshot_*.bin")))
    ncols = 2 if snapshots else 1
    fig, axes = plt.subplots(1, ncols, figsize=(6 * ncols, 4.5))
    ax = axes[0] if snapshots else axes

    ax.plot(data["time"], data["energy"], label="energy")
    if any(m is not None for m in data["modified_energy"]):
        times = [t for t, m in zip(data["time"], data["modified_energy"]) if m is not None]
        mods = [m for m in data["modified_energy"] if m is not None]
        ax.plot(times, mods, "--", label="modified energy")
    if args.log:
        ax.set_yscale("log")
    ax.set_xlabel("t")
    ax.set_ylabel("E")
    ax.legend()
    ax.set_title(os.path.basename(os.path.normpath(args.run_dir)))

    if snapshots:
        field, step, time = read_snapshot(snapshots[-1])
        im = axes[1].imshow(field.T, origin="lower", cmap="viridis",
                            extent=[-3.14159, 3.14159, -3.14159, 3.14159])
        axes[1].set_title(f"h at t = {time:g} (step {step})")
        fig.colorbar(im, ax=axes[1])

    out = args.output or os.path.join(args.run_dir, "energy.png")
    fig.tight_layout()
    fig.savefig(out, dpi=130)
    print(out)


if __name__ == "__main__":
    main()
