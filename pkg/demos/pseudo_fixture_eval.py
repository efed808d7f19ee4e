"""Validate the shipped network-generated pseudo-measurement fixture.

The repository ships one frozen incoherent pair (y1, y2) together with
a pseudo second shot y2p produced by the trained companion network and
a declared quality tolerance. This script ingests y2p through the same
validation path the reconstruction pipeline uses, reports the pair's
similarity with the `evaluate` subcommand, and checks the result
against the declared tolerance, so the fixture can be re-verified
without the network installed.
"""

import argparse
import json
from pathlib import Path

from phasediverse import ssim
from phasediverse.cli import main as cli
from phasediverse.datasets import ingest_pseudo, read_tensor

FIXTURE_DIR = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "pseudo"


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--fixture-dir", default=str(FIXTURE_DIR))
    parser.add_argument("--output-dir", default="demo_out/pseudo_fixture")
    args = parser.parse_args()
    fixture = Path(args.fixture_dir)
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)

    declared = json.loads((fixture / "tolerance.json").read_text())
    print(f"fixture {fixture}")
    print(f"declared minimum SSIM(y2, y2p): {declared['min_ssim']}")

    pair = ingest_pseudo(fixture / "y1.pdt", fixture / "y2p.pdt")
    print(f"ingest accepted y2p, provenance {pair.provenance!r}")

    s = ssim(read_tensor(fixture / "y2p.pdt"),
             read_tensor(fixture / "y2.pdt"))
    print(f"direct SSIM(y2, y2p) = {s:.4f}")

    code = cli(["evaluate", "--pred", str(fixture / "y2p.pdt"),
                "--ref", str(fixture / "y2.pdt"),
                "--output-dir", str(out)])
    if code != 0:
        raise SystemExit(f"evaluate failed with exit code {code}")
    report = json.loads((out / "evaluation.json").read_text())
    mean_ssim = report["aggregate"]["ssim"]["mean"]
    print(f"evaluate report mean SSIM: {mean_ssim:.4f}")

    if mean_ssim >= declared["min_ssim"]:
        print("fixture is within its declared tolerance")
    else:
        raise SystemExit(
            f"fixture violates its declared tolerance: "
            f"{mean_ssim:.4f} < {declared['min_ssim']}")


if __name__ == "__main__":
    main()
