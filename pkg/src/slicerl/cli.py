"""Command-line entry point.

Subcommands: train, eval, plot, sweep, write-config.  Exit codes: 0 on
success, 1 for configuration errors, 2 for runtime failures.

Environment variables: SLICERL_OUT overrides the default output directory,
SLICERL_LOG sets the log level.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from . import harness, plotting
from .config import ConfigError, load_config, load_profile, profile_text

log = logging.getLogger("slicerl")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="slicerl",
        description="Network-slicing RL testbed: train and compare "
                    "TDSAC/TD3/SAC/DDPG on the sliced C-RAN environment.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_train = sub.add_parser("train", help="run one training run")
    p_train.add_argument("--config", help="INI config file (default: desk profile)")
    p_train.add_argument("--profile", default="desk", choices=("desk", "paper"))
    p_train.add_argument("--algorithm", choices=("tdsac", "sac", "td3", "ddpg"))
    p_train.add_argument("--seed", type=int)
    p_train.add_argument("--out", help="run directory")
    p_train.add_argument("--resume", help="checkpoint to resume from")

    p_eval = sub.add_parser("eval", help="score a saved checkpoint")
    p_eval.add_argument("--checkpoint", required=True)
    p_eval.add_argument("--episodes", type=int, default=5)
    p_eval.add_argument("--best", type=int, default=3)
    p_eval.add_argument("--seed", type=int, default=0)

    p_plot = sub.add_parser("plot", help="render comparison figures")
    p_plot.add_argument("--kind", required=True, choices=plotting.KINDS)
    p_plot.add_argument("--runs", nargs="+", required=True)
    p_plot.add_argument("--out", required=True)
    p_plot.add_argument("--window", type=int, default=1, help="moving-average window")

    p_sweep = sub.add_parser("sweep", help="run several seeds of one config")
    p_sweep.add_argument("--config")
    p_sweep.add_argument("--profile", default="desk", choices=("desk", "paper"))
    p_sweep.add_argument("--algorithm", choices=("tdsac", "sac", "td3", "ddpg"))
    p_sweep.add_argument("--seeds", required=True, help="comma-separated list")
    p_sweep.add_argument("--out")

    p_cfg = sub.add_parser("write-config", help="dump a bundled profile to a file")
    p_cfg.add_argument("--profile", default="desk", choices=("desk", "paper"))
    p_cfg.add_argument("--out", required=True)
    return parser


def _resolve_config(args):
    if getattr(args, "config", None):
        cfg = load_config(args.config)
        if getattr(args, "algorithm", None) and args.algorithm != cfg.algorithm:
            from dataclasses import replace

            cfg = replace(cfg, algorithm=args.algorithm, agent=None)
        return cfg
    return load_profile(args.profile, algorithm=getattr(args, "algorithm", None))


def _default_out(args, suffix: str) -> Path:
    base = getattr(args, "out", None) or os.environ.get("SLICERL_OUT") or "runs"
    return Path(base) / suffix


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=os.environ.get("SLICERL_LOG", "INFO").upper(),
        format="%(asctime)s %(name)s %(levelname)s %(message)s",
    )
    try:
        if args.command == "train":
            cfg = _resolve_config(args)
            seed = args.seed if args.seed is not None else cfg.seed
            out = (Path(args.out) if args.out
                   else _default_out(args, f"{cfg.algorithm}_seed{seed}"))
            run_dir = harness.train(cfg, out, seed=seed, resume=args.resume)
            print(f"run complete: {run_dir}")
        elif args.command == "eval":
            score = harness.evaluate_checkpoint(
                args.checkpoint, episodes=args.episodes, best=args.best,
                base_seed=args.seed)
            print(f"score (best {args.best} of {args.episodes}): {score:.6f}")
        elif args.command == "plot":
            out = plotting.plot(args.runs, args.kind, args.out, window=args.window)
            print(f"wrote {out}")
        elif args.command == "sweep":
            cfg = _resolve_config(args)
            seeds = [int(s) for s in args.seeds.split(",") if s.strip()]
            if not seeds:
                raise ConfigError("no seeds given")
            out_root = Path(args.out) if args.out else _default_out(args, "sweep")
            dirs = harness.sweep(cfg, seeds, out_root)
            for d in dirs:
                print(f"run complete: {d}")
        elif args.command == "write-config":
            Path(args.out).write_text(profile_text(args.profile))
            print(f"wrote {args.out}")
    except ConfigError as exc:
        log.error("configuration error: %s", exc)
        return 1
    except Exception as exc:  # runtime failure
        log.error("runtime failure: %s", exc, exc_info=True)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
