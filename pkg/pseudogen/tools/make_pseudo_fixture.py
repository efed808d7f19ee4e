"""Build the engine's committed pseudo-data acceptance fixture.

Renders a small corpus, asks the engine for an incoherent dataset,
trains a compact model, emits pseudo-data for the val split, and copies
the median-quality val pair into the fixture directory together with a
declared SSIM tolerance:

    y1.pdt        first shot (open aperture), as generated by the engine
    y2.pdt        real second shot (vortex aperture)
    y2p.pdt       second shot predicted from y1 by the trained model
    tolerance.json  {"min_ssim": ..., "measured_ssim": ..., ...}

Run from anywhere; both console scripts must be installed:

    python tools/make_pseudo_fixture.py --out ../tests/fixtures/pseudo
"""

import argparse
import json
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

import numpy as np
from PIL import Image


def smooth_image(rng, size: int) -> np.ndarray:
    spectrum = np.zeros((size, size), dtype=complex)
    k = max(2, size // 8)
    spectrum[:k, :k] = rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))
    img = np.abs(np.fft.ifft2(spectrum))
    img -= img.min()
    return (img / img.max()).astype(np.float32)


def run(*argv):
    print("+", " ".join(argv))
    subprocess.run(list(argv), check=True)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", required=True,
                        help="fixture directory to (over)write")
    parser.add_argument("--work", help="working directory (default: temp)")
    parser.add_argument("--count", type=int, default=60)
    parser.add_argument("--epochs", type=int, default=50)
    parser.add_argument("--base-channels", type=int, default=8)
    parser.add_argument("--min-ssim", type=float, default=0.95,
                        help="tolerance to declare; must be met")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    work = Path(args.work) if args.work else Path(tempfile.mkdtemp())
    work.mkdir(parents=True, exist_ok=True)
    corpus = work / "corpus"
    if not corpus.exists():
        corpus.mkdir()
        rng = np.random.default_rng(args.seed + 77)
        for idx in range(args.count):
            img = smooth_image(rng, 100)
            u8 = np.round(img * 255.0).astype(np.uint8)
            Image.fromarray(u8, mode="L").save(corpus / f"src_{idx:04d}.png")

    run("phasediverse", "gen-dataset", "--regime", "incoherent",
        "--src", str(corpus), "--out", "ds", "--output-dir", str(work),
        "--seed", str(args.seed), "--log-level", "WARNING")
    ds = work / "ds"

    run("pseudogen", "train", "--dataset", str(ds),
        "--epochs", str(args.epochs),
        "--base-channels", str(args.base_channels),
        "--seed", str(args.seed),
        "--output-dir", str(work / "run"), "--log-level", "INFO")
    report = json.loads((work / "run" / "report.json").read_text())

    run("pseudogen", "infer", "--checkpoint", str(work / "run" / "checkpoint.pt"),
        "--dataset", str(ds), "--split", "val",
        "--output-dir", str(work / "pseudo"), "--log-level", "WARNING")

    run("phasediverse", "evaluate", "--pred", str(work / "pseudo"),
        "--ref", str(ds / "val" / "y2"),
        "--output-dir", str(work / "eval"), "--log-level", "WARNING")
    evaluation = json.loads((work / "eval" / "evaluation.json").read_text())
    pairs = sorted(evaluation["pairs"], key=lambda r: r["ssim"])
    for row in pairs:
        print(f"  val {row['name']}: ssim {row['ssim']:.4f}")
    chosen = pairs[len(pairs) // 2]
    print(f"median val pair: {chosen['name']} ssim {chosen['ssim']:.4f}")
    if chosen["ssim"] < args.min_ssim:
        print(f"median ssim {chosen['ssim']:.4f} is below the declared "
              f"tolerance {args.min_ssim}; not writing the fixture",
              file=sys.stderr)
        return 1

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    name = chosen["name"]
    shutil.copy(ds / "val" / "y1" / name, out / "y1.pdt")
    shutil.copy(ds / "val" / "y2" / name, out / "y2.pdt")
    shutil.copy(work / "pseudo" / name, out / "y2p.pdt")
    (out / "tolerance.json").write_text(json.dumps({
        "min_ssim": args.min_ssim,
        "measured_ssim": chosen["ssim"],
        "regime": "incoherent",
        "source_entry": name,
        "checkpoint_hash": report["checkpoint_hash"],
        "val_ssim_mean": evaluation["aggregate"]["ssim"]["mean"],
        "val_ssim_sd": evaluation["aggregate"]["ssim"]["sd"],
    }, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    print(f"fixture written to {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
