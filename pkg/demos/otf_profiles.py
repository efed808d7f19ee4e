"""Walk through the two aperture OTFs and where each one loses contrast.

Builds radius-50 open and vortex pupils on a 256-pixel grid, converts
them to PSFs and OTFs, and prints the central-row profile facts that
matter for two-shot deconvolution: the open aperture decays smoothly to
its cutoff, while the vortex aperture dips near zero in the middle of
the band but stays strong where the open aperture is weak. The profiles
are also written as CSV for external plotting.
"""

import argparse
import csv
from pathlib import Path

import numpy as np

from phasediverse import (
    make_grid,
    open_aperture,
    otf_from_psf,
    psf_from_pupil,
    spiral_aperture,
)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--output-dir", default="demo_out/otf_profiles")
    parser.add_argument("--radius", type=float, default=50.0)
    args = parser.parse_args()
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)

    grid = make_grid(256)
    center = grid.n // 2
    rows = {}
    for name, pupil in (("open", open_aperture(grid, args.radius)),
                        ("vortex", spiral_aperture(grid, args.radius))):
        otf = otf_from_psf(psf_from_pupil(pupil))
        rows[name] = np.abs(otf)[center]

    print(f"radius-{args.radius:g} apertures on a {grid.n}^2 grid")
    print(f"both OTFs are 1 at zero frequency: "
          f"open {rows['open'][center]:.6f}, vortex {rows['vortex'][center]:.6f}")

    half = rows["vortex"][center:]
    above = np.flatnonzero(half[1:] > 0.1) + 1
    dip_slice = half[above[0]:above[-1] + 1]
    dip_radius = int(above[0] + np.argmin(dip_slice))
    print(f"vortex dip: |OTF| = {half[dip_radius]:.4f} at radius "
          f"{dip_radius}, flanked by > 0.1 response on both sides")
    print(f"open |OTF| at the same radius: "
          f"{rows['open'][center + dip_radius]:.4f}")
    print("the two shots cover each other's weak frequencies, which is "
          "what the generalized Wiener combination exploits")

    cutoff = int(2 * args.radius)
    print(f"beyond the cutoff (radius {cutoff}) both profiles vanish: "
          f"open {rows['open'][center + cutoff + 2:].max():.1e}, "
          f"vortex {rows['vortex'][center + cutoff + 2:].max():.1e}")

    for name, row in rows.items():
        path = out / f"otf_{name}_row.csv"
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["index", "value"])
            for i, v in enumerate(row):
                writer.writerow([i, f"{v:.9g}"])
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
