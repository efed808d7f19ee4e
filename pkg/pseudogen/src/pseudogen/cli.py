"""Command-line surface: train a pseudo-measurement model, run inference."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import __version__
from .data import REGIME_ACTIVATIONS, ManifestError, load_manifest, split_entries
from .inference import CheckpointError, infer
from .model import UNetConfig
from .tensorio import TensorFormatError
from .training import TrainConfig, train

log = logging.getLogger("pseudogen")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INPUT = 3


def cmd_train(args) -> int:
    manifest = load_manifest(args.dataset)
    activation = args.final_activation
    if activation == "auto":
        activation = REGIME_ACTIVATIONS[manifest["regime"]]
    unet_cfg = UNetConfig(base_channels=args.base_channels,
                          final_activation=activation)
    train_cfg = TrainConfig(learning_rate=args.lr, epochs=args.epochs,
                            alpha=args.alpha, batch_size=args.batch_size,
                            seed=args.seed)
    report = train(args.dataset, unet_cfg, train_cfg, args.output_dir)
    last = report["epochs"][-1]
    log.info("final epoch: val ssim %.4f, checkpoint hash %s",
             last["val_ssim"], report["checkpoint_hash"][:12])
    return EXIT_OK


def cmd_infer(args) -> int:
    if bool(args.y1) == bool(args.dataset):
        raise ManifestError("pass either --y1 files or --dataset "
                            "with --split")
    if args.y1:
        paths = [Path(p) for p in args.y1]
    else:
        manifest = load_manifest(args.dataset)
        entries = split_entries(manifest, args.split)
        if not entries:
            raise ManifestError(f"no entries in split {args.split!r}")
        paths = [Path(args.dataset) / e["y1_path"] for e in entries]
    missing = [p for p in paths if not p.is_file()]
    if missing:
        raise TensorFormatError(f"missing input files: "
                                f"{', '.join(map(str, missing))}")
    written = infer(args.checkpoint, paths, args.output_dir)
    log.info("wrote %d tensors under %s", len(written), args.output_dir)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pseudogen",
        description="UNet pseudo-measurement generator for two-shot "
                    "phase-diverse datasets")
    parser.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output-dir", default=".")
    common.add_argument("--log-level", default="INFO",
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("train", parents=[common],
                       help="train on a generated dataset's manifest")
    p.add_argument("--dataset", required=True,
                   help="dataset directory containing manifest.json")
    p.add_argument("--epochs", type=int, default=50)
    p.add_argument("--lr", type=float, default=0.001)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--batch-size", type=int, default=8)
    p.add_argument("--base-channels", type=int, default=64)
    p.add_argument("--final-activation", default="auto",
                   choices=["auto", "sigmoid", "relu"])
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("infer", parents=[common],
                       help="emit y2p tensors for y1 inputs")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--y1", nargs="*", default=[],
                   help="explicit y1 tensor files")
    p.add_argument("--dataset", help="dataset directory; emits for every "
                                     "entry of --split")
    p.add_argument("--split", default="val",
                   choices=["train", "val", "test"])
    p.set_defaults(func=cmd_infer)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    if not getattr(args, "command", None):
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=args.log_level,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ManifestError, TensorFormatError, CheckpointError,
            FileNotFoundError, ValueError) as exc:
        log.error("input error: %s", exc)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
