"""Command-line interface: generate / fit / observe / pipeline.

Exit codes: 0 success, 2 configuration, 3 sampling, 4 numeric,
5 filesystem, 6 data format.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .artifact import load_artifact, save_artifact
from .config import PipelineConfig, load_config
from .dataset import load_pairs, load_scatter, save_pairs, save_scatter
from .errors import ConfigError, DataFormatError, NumericError, SamplingError
from .observer import error_report, save_run
from .pipeline import stage_fit, stage_generate, stage_observe

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SAMPLING = 3
EXIT_NUMERIC = 4
EXIT_FILESYSTEM = 5
EXIT_DATA = 6

PAIRS_CSV = "pairs.csv"
SCATTER_CSV = "scatter.csv"
MODEL_JSON = "model.json"
RUN_CSV = "run.csv"
SUMMARY_TXT = "summary.txt"


def _parse_args(argv):
    parser = argparse.ArgumentParser(
        prog="kkl-observer",
        description="Synthesize and run a KKL observer for a planar limit-cycle system.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", type=Path, default=None, help="YAML config file")
        p.add_argument("--out-dir", type=Path, default=Path("out"), help="output directory")
        p.add_argument("--seed", type=int, default=None, help="override the config seed")

    p_gen = sub.add_parser("generate", help="write the training datasets as CSV")
    add_common(p_gen)

    p_fit = sub.add_parser("fit", help="fit the model from generated datasets")
    add_common(p_fit)
    p_fit.add_argument("--pairs", type=Path, default=None, help="pairs CSV (default: out-dir)")
    p_fit.add_argument("--scatter", type=Path, default=None, help="scatter CSV (default: out-dir)")

    p_obs = sub.add_parser("observe", help="run the observer from a saved model")
    add_common(p_obs)
    p_obs.add_argument("--artifact", type=Path, default=None, help="model JSON (default: out-dir)")

    p_pipe = sub.add_parser("pipeline", help="generate, fit, and observe in sequence")
    add_common(p_pipe)
    p_pipe.add_argument(
        "--dry-run", action="store_true", help="validate the config, print it, write nothing"
    )
    return parser.parse_args(argv)


def _load_config(args) -> PipelineConfig:
    config = load_config(args.config)
    if args.seed is not None:
        if not 0 <= args.seed < 2**64:
            raise ConfigError(f"--seed must fit in an unsigned 64-bit integer, got {args.seed}")
        config = PipelineConfig(
            system=config.system,
            output_coord=config.output_coord,
            sampling=config.sampling,
            basis_degree=config.basis_degree,
            lattice=config.lattice,
            lambdas=config.lambdas,
            krr=config.krr,
            observer=config.observer,
            substep=config.substep,
            seed=args.seed,
        )
    return config


def cmd_generate(config: PipelineConfig, out_dir: Path) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    pairs, scatter = stage_generate(config)
    save_pairs(pairs, out_dir / PAIRS_CSV)
    save_scatter(scatter, out_dir / SCATTER_CSV)
    print(f"wrote {out_dir / PAIRS_CSV}: {pairs.d} snapshot pairs")
    print(f"wrote {out_dir / SCATTER_CSV}: {scatter.points.shape[0]} scatter points")


def cmd_fit(config: PipelineConfig, out_dir: Path, pairs_path, scatter_path) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    pairs = load_pairs(pairs_path or out_dir / PAIRS_CSV)
    scatter = load_scatter(scatter_path or out_dir / SCATTER_CSV)
    result = stage_fit(config, pairs, scatter)

    inj = result.injection
    print(f"period: {result.period:.6g}  lattice nodes: {inj.lattice.size}")
    print("factor defects (real axis):",
          " ".join(f"{f.defect:.3e}" for f in inj.real_factors))
    print("factor defects (imag axis):",
          " ".join(f"{f.defect:.3e}" for f in inj.imag_factors))
    for j, lam in enumerate(inj.lambdas):
        print(f"injection component {j + 1} (rate {lam:g}): fit rmse {inj.fit_rmse[j]:.6e}")
    print(f"inverse-map training rmse: {result.krr_train_rmse:.6e}")

    save_artifact(out_dir / MODEL_JSON, inj, result.krr, config.hash(), config.seed)
    print(f"wrote {out_dir / MODEL_JSON}")


def cmd_observe(config: PipelineConfig, out_dir: Path, artifact_path) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    injection, krr, _ = load_artifact(artifact_path or out_dir / MODEL_JSON)
    run = stage_observe(config, injection, krr)
    save_run(run, out_dir / RUN_CSV)
    report = error_report(run)
    summary = (
        f"samples: {len(run.t)}  duration: {run.t[-1]:g}\n"
        f"window [{report.window_start:g}, {run.t[-1]:g}]:\n"
        f"  err_state max:  {report.err_state_max:.6e}\n"
        f"  err_state mean: {report.err_state_mean:.6e}\n"
        f"full series:\n"
        f"  err_z max:      {report.err_z_max:.6e}\n"
        f"  hull_dist max:  {report.hull_dist_max:.6e}\n"
    )
    (out_dir / SUMMARY_TXT).write_text(summary, encoding="utf-8")
    print(f"wrote {out_dir / RUN_CSV}")
    print(summary, end="")


def cmd_pipeline(config: PipelineConfig, out_dir: Path, dry_run: bool) -> None:
    if dry_run:
        print(json.dumps(config.as_dict(), indent=2))
        return
    cmd_generate(config, out_dir)
    cmd_fit(config, out_dir, None, None)
    cmd_observe(config, out_dir, None)


def main(argv=None) -> int:
    args = _parse_args(argv)
    try:
        config = _load_config(args)
        if args.command == "generate":
            cmd_generate(config, args.out_dir)
        elif args.command == "fit":
            cmd_fit(config, args.out_dir, args.pairs, args.scatter)
        elif args.command == "observe":
            cmd_observe(config, args.out_dir, args.artifact)
        elif args.command == "pipeline":
            cmd_pipeline(config, args.out_dir, args.dry_run)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SamplingError as exc:
        print(f"sampling error: {exc}", file=sys.stderr)
        return EXIT_SAMPLING
    except NumericError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except DataFormatError as exc:
        print(f"data format error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"filesystem error: {exc}", file=sys.stderr)
        return EXIT_FILESYSTEM
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
