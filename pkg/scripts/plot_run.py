#!/usr/bin/env python3
"""Plot an observer run CSV: trajectories, error norms, observer coordinates.

Usage:
    python scripts/plot_run.py results/run.csv [out.png]
"""

import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

if __name__ == "__main__":
    if len(sys.argv) < 2:
        sys.exit(__doc__)
    data = np.genfromtxt(sys.argv[1], delimiter=",", names=True)
    out = sys.argv[2] if len(sys.argv) > 2 else "run.png"

    fig, axes = plt.subplots(1, 3, figsize=(15, 4))

    ax = axes[0]
    ax.plot(data["t"], data["x1"], label="x1")
    ax.plot(data["t"], data["x2"], label="x2")
    ax.plot(data["t"], data["xhat1"], "--", label="x1 estimate")
    ax.plot(data["t"], data["xhat2"], "--", label="x2 estimate")
    ax.set_xlabel("t")
    ax.set_title("states and estimates")
    ax.legend(fontsize=8)

    ax = axes[1]
    ax.semilogy(data["t"], np.maximum(data["err_state"], 1e-16), label="state error")
    ax.semilogy(data["t"], np.maximum(data["err_z"], 1e-16), label="observer-coordinate error")
    ax.set_xlabel("t")
    ax.set_title("l2 error norms")
    ax.legend(fontsize=8)

    ax = axes[2]
    ax.plot(data["t"], data["z1"], label="z1")
    ax.plot(data["t"], data["z2"], label="z2")
    ax.plot(data["t"], data["Tx1"], "--", label="T1(x)")
    ax.plot(data["t"], data["Tx2"], "--", label="T2(x)")
    ax.set_xlabel("t")
    ax.set_title("observer vs transformed true state")
    ax.legend(fontsize=8)

    fig.tight_layout()
    fig.savefig(out, dpi=150)
    print(f"wrote {out}")
