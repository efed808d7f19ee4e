"""Compare Wiener, generalized-Wiener, and cascaded deconvolution.

Simulates the two-shot incoherent system (open + vortex apertures) on a
fine bar target with 1% Gaussian noise, reconstructs with each method,
and prints the central-row contrast each one achieves. The cascaded
variant re-weights each shot with its own Wiener filter before the
joint combination, which buys back mid-band contrast that the plain
combination leaves on the table.
"""

import argparse
from pathlib import Path

import numpy as np

from phasediverse import (
    NoiseSpec,
    RegSpec,
    add_noise,
    apply_filters,
    blur,
    cascaded_gw,
    contrast,
    gw_filters,
    line_profile,
    make_grid,
    open_aperture,
    otf_from_psf,
    psf_from_pupil,
    spiral_aperture,
    wiener_filter,
)
from phasediverse.datasets import write_tensor


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--output-dir", default="demo_out/deconvolution")
    parser.add_argument("--noise", type=float, default=0.01)
    args = parser.parse_args()
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)

    grid = make_grid(256)
    bar = np.tile(((np.arange(grid.n) // 2) % 2).astype(float), (grid.n, 1))
    pupils = (open_aperture(grid, 50.0), spiral_aperture(grid, 50.0))
    psfs = [psf_from_pupil(p) for p in pupils]
    otfs = [otf_from_psf(p) for p in psfs]
    shots = [add_noise(blur(bar, p), NoiseSpec(args.noise, seed=100 + k))
             for k, p in enumerate(psfs)]
    print(f"bar target with period 4 px, {args.noise:.0%} noise, "
          f"two shots (open + vortex)")

    reg = RegSpec(kappa=1e-2, kappa_w=1e-3)
    recons = {
        "wiener-open-only": apply_filters(
            shots[:1], [wiener_filter(otfs[0], reg.kappa)]),
        "gw": apply_filters(shots, gw_filters(otfs, reg.kappa)),
        "cascaded": cascaded_gw(shots, otfs, reg),
    }

    print(f"{'method':18s} central-row contrast")
    print(f"{'(target)':18s} {contrast(line_profile(bar)):.3f}")
    for name, recon in recons.items():
        c = contrast(line_profile(recon))
        print(f"{name:18s} {c:.3f}")
        write_tensor(out / f"recon_{name}.pdt",
                     recon.astype(np.float32), meta={"method": name})
    print("the single-shot Wiener cannot see past the open aperture's "
          "decay; the cascaded combination recovers the strongest bars")
    print(f"tensors written to {out}")


if __name__ == "__main__":
    main()
