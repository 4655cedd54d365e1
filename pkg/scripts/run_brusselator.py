#!/usr/bin/env python3
"""Run the reference Brusselator experiment end to end.

Generates the training data, fits the observer model, runs the estimation
experiment, and leaves pairs.csv / scatter.csv / model.json / run.csv /
summary.txt in the output directory (default: results/).

Usage:
    python scripts/run_brusselator.py [out_dir] [seed]
"""

import sys
from pathlib import Path

from kkl_observer.cli import main

if __name__ == "__main__":
    out_dir = sys.argv[1] if len(sys.argv) > 1 else "results"
    config = Path(__file__).resolve().parents[1] / "configs" / "brusselator.yaml"
    argv = ["pipeline", "--config", str(config), "--out-dir", out_dir]
    if len(sys.argv) > 2:
        argv += ["--seed", sys.argv[2]]
    sys.exit(main(argv))
