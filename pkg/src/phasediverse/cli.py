"""Command-line surface for dataset generation, deconvolution, phase
retrieval, evaluation, and PSF/OTF inspection.

Exit codes: 0 success, 2 usage error, 3 input or format error,
4 numerical failure. Non-convergence of an iterative solver is not a
failure; it is reported in the metrics output. Every run logs its fully
resolved configuration as a single JSON line for reproducibility, and
all outputs land under --output-dir.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from . import coherent, datasets, deconv, incoherent, metrics, retrieval
from .datasets import FormatError
from .grids import make_grid, open_aperture, spiral_aperture

log = logging.getLogger("phasediverse.cli")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_NUMERICAL = 4


class UsageError(Exception):
    pass


class NumericalError(Exception):
    pass


def _json_value(x):
    """JSON-safe scalar: non-finite floats become the string 'inf'/'nan'."""
    if isinstance(x, float):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        if math.isnan(x):
            return "nan"
    return x


def _write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, sort_keys=True, indent=2) + "\n",
                    encoding="utf-8")


def _check_finite(name: str, arr: np.ndarray) -> np.ndarray:
    if not np.isfinite(arr).all():
        raise NumericalError(f"{name} contains non-finite values")
    return arr


def _read_image_tensor(path: str) -> np.ndarray:
    arr = datasets.read_tensor(path)
    if arr.ndim != 2:
        raise FormatError(f"{path}: expected a 2D tensor, got shape {arr.shape}")
    return arr


def _second_input(args) -> tuple[str, bool]:
    """Resolve the --y2/--y2-pseudo pair; exactly one must be present."""
    if args.y2 and args.y2_pseudo:
        raise UsageError("pass either --y2 or --y2-pseudo, not both")
    if args.y2:
        return args.y2, False
    if args.y2_pseudo:
        return args.y2_pseudo, True
    raise UsageError(f"method {args.method!r} requires --y2 or --y2-pseudo")


def _load_second(args, y1_path: str) -> np.ndarray:
    path, pseudo = _second_input(args)
    if pseudo:
        pair = datasets.ingest_pseudo(y1_path, path)
        log.info("ingested pseudo-data from %s (provenance %r)",
                 path, pair.provenance)
        return pair.y2p
    return _read_image_tensor(path)


def _png_export(path: Path, arr: np.ndarray) -> None:
    from PIL import Image

    lo, hi = float(arr.min()), float(arr.max())
    span = hi - lo if hi > lo else 1.0
    u8 = np.round((arr - lo) / span * 255.0).astype(np.uint8)
    Image.fromarray(u8, mode="L").save(path)
    _write_json(path.with_suffix(".png.json"), {"min": lo, "max": hi})


def _echo_config(args, extra: dict | None = None) -> None:
    cfg = {k: v for k, v in vars(args).items() if k != "func"}
    cfg.update(extra or {})
    log.info("resolved config %s", json.dumps(cfg, sort_keys=True, default=str))


# ---------------------------------------------------------------- gen-dataset

def cmd_gen_dataset(args) -> int:
    _echo_config(args)
    out = Path(args.output_dir) / args.out
    if args.regime == "incoherent":
        params = datasets.IncoherentParams(
            grid_n=args.grid_n, aperture_radius_px=args.radius,
            noise_fraction=args.noise, seed=args.seed,
            train_fraction=args.train_fraction)
        manifest = datasets.gen_incoherent_pairs(args.src, out, params,
                                                 split=args.split)
    else:
        params = datasets.CoherentParams(
            grid_n=args.grid_n, support_size=args.support,
            phi_max=args.phi_max, gamma=args.gamma, seed=args.seed,
            train_fraction=args.train_fraction)
        manifest = datasets.gen_coherent_pairs(args.src, out, params,
                                               split=args.split)
    log.info("wrote %d entries under %s", len(manifest["entries"]), out)
    return EXIT_OK


# ----------------------------------------------------------------- deconvolve

def cmd_deconvolve(args) -> int:
    _echo_config(args)
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    y1 = _check_finite("y1", _read_image_tensor(args.y1))
    grid = make_grid(y1.shape[0])
    otf_open = incoherent.otf_from_psf(
        incoherent.psf_from_pupil(open_aperture(grid, args.otf_radius)))
    reg = deconv.RegSpec(kappa=args.kappa, kappa_w=args.kappa_w)
    contrasts = {}
    if args.method == "wiener":
        if args.y2 or args.y2_pseudo:
            raise UsageError("method 'wiener' is single-shot; drop --y2/--y2-pseudo")
        filt = deconv.wiener_filter(otf_open, args.kappa)
        recon, imag_resid = deconv.apply_filters([y1], [filt],
                                                 return_imag_residual=True)
    else:
        y2 = _check_finite("y2", _load_second(args, args.y1))
        if y2.shape != y1.shape:
            raise FormatError(f"y2 shape {y2.shape} != y1 shape {y1.shape}")
        otf_vortex = incoherent.otf_from_psf(
            incoherent.psf_from_pupil(spiral_aperture(grid, args.otf_radius)))
        otfs = [otf_open, otf_vortex]
        gw = deconv.gw_filters(otfs, args.kappa)
        gw_recon, imag_resid = deconv.apply_filters([y1, y2], gw,
                                                    return_imag_residual=True)
        if args.method == "gw":
            recon = gw_recon
        else:
            recon = deconv.cascaded_gw([y1, y2], otfs, reg)
            contrasts["gw"] = metrics.contrast(metrics.line_profile(gw_recon))
    if args.tv_steps > 0:
        recon = deconv.tv_reduce(recon, args.tv_steps, args.tv_step_size)
    _check_finite("reconstruction", recon)
    contrasts[args.method] = metrics.contrast(metrics.line_profile(recon))
    log.info("imaginary residual %.3g, central-row contrast %s",
             imag_resid, contrasts)
    recon_path = out / "recon.pdt"
    datasets.write_tensor(recon_path, recon, {
        "kind": "reconstruction", "method": args.method,
        "kappa": args.kappa, "kappa_w": args.kappa_w,
        "otf_radius": args.otf_radius, "tv_steps": args.tv_steps})
    if args.png:
        _png_export(out / "recon.png", recon)
    if args.truth:
        truth = _read_image_tensor(args.truth)
        report = {
            "mse": metrics.mse(recon, truth),
            "psnr_db": _json_value(metrics.psnr(recon, truth)),
            "ssim": metrics.ssim(recon, truth),
            "hybrid_loss": metrics.hybrid_loss(recon, truth, args.alpha),
            "contrast": contrasts,
            "imag_residual": imag_resid,
        }
        _write_json(out / "metrics.json", report)
    log.info("wrote %s", recon_path)
    return EXIT_OK


# ------------------------------------------------------------------- retrieve

def cmd_retrieve(args) -> int:
    _echo_config(args)
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    g = coherent.GammaScale(args.gamma) if args.gamma != 1.0 else None
    y1 = _check_finite("y1", _read_image_tensor(args.y1))
    y1_amp = coherent.gamma_unscale(y1, g) if g else y1
    n = y1_amp.shape[0]
    support = np.zeros((n, n), dtype=bool)
    if not 0 < args.support <= n:
        raise UsageError(f"--support must lie in (0, {n}]")
    i0 = n // 2 - args.support // 2
    support[i0:i0 + args.support, i0:i0 + args.support] = True
    cfg = retrieval.RetrievalConfig(
        total_iters=args.iters, final_plain_iters=args.final_plain,
        beta=args.beta, seed=args.seed, constraint=args.constraint)
    if args.method == "diversity":
        y2 = _check_finite("y2", _load_second(args, args.y1))
        if y2.shape != y1.shape:
            raise FormatError(f"y2 shape {y2.shape} != y1 shape {y1.shape}")
        y2_amp = coherent.gamma_unscale(y2, g) if g else y2
        result = retrieval.diversity_retrieve(y1_amp, y2_amp, support, cfg)
    else:
        if args.y2 or args.y2_pseudo:
            raise UsageError("method 'hio' is single-shot; drop --y2/--y2-pseudo")
        result = retrieval.hio(y1_amp, support, cfg)
    _check_finite("estimate", result.field.view(np.float64))
    field_path = out / "field.pdt"
    stacked = np.stack([result.field.real, result.field.imag])
    datasets.write_tensor(field_path, stacked, {
        "kind": "complex-field", "method": args.method,
        "layout": "real-imag", "iters": args.iters,
        "final_plain": args.final_plain, "seed": args.seed})
    lines = ["iteration,residual"]
    lines += [f"{i + 1},{r:.17g}" for i, r in enumerate(result.residual_history)]
    (out / "residuals.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    final_residual = (result.residual_history[-1]
                      if result.residual_history else math.nan)
    log.info("final amplitude residual %.4g after %d iterations",
             final_residual, result.iterations_run)
    if args.truth:
        truth_phase = _read_image_tensor(args.truth)
        score = metrics.aligned_phase_ssim(result.field, truth_phase,
                                           support, args.phi_max)
        report = {
            "aligned_phase_ssim": score,
            "final_residual": _json_value(float(final_residual)),
            "iterations_run": result.iterations_run,
            "converged": bool(final_residual < 0.05),
        }
        _write_json(out / "metrics.json", report)
    return EXIT_OK


# ------------------------------------------------------------------- evaluate

def _collect_pairs(pred: Path, ref: Path) -> list[tuple[str, Path, Path]]:
    if pred.is_dir() != ref.is_dir():
        raise UsageError("--pred and --ref must both be files or both be dirs")
    if pred.is_dir():
        pred_files = {p.name: p for p in sorted(pred.glob("*.pdt"))}
        ref_files = {p.name: p for p in sorted(ref.glob("*.pdt"))}
        names = sorted(set(pred_files) & set(ref_files))
        if not names:
            raise FormatError(f"no matching .pdt names between {pred} and {ref}")
        return [(n, pred_files[n], ref_files[n]) for n in names]
    return [(pred.name, pred, ref)]


def cmd_evaluate(args) -> int:
    _echo_config(args)
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    pairs = _collect_pairs(Path(args.pred), Path(args.ref))
    rows = []
    for name, ppath, rpath in pairs:
        a = _read_image_tensor(str(ppath))
        b = _read_image_tensor(str(rpath))
        if a.shape != b.shape:
            raise FormatError(f"{name}: pred {a.shape} vs ref {b.shape}")
        rows.append({
            "name": name,
            "mse": metrics.mse(a, b),
            "psnr_db": _json_value(metrics.psnr(a, b)),
            "ssim": metrics.ssim(a, b),
            "hybrid_loss": metrics.hybrid_loss(a, b, args.alpha),
        })
    agg = {}
    for key in ("mse", "ssim", "hybrid_loss"):
        vals = np.array([r[key] for r in rows], dtype=np.float64)
        agg[key] = {"mean": float(vals.mean()),
                    "sd": float(vals.std(ddof=1)) if len(vals) > 1 else 0.0}
    finite_psnr = [r["psnr_db"] for r in rows if isinstance(r["psnr_db"], float)]
    agg["psnr_db"] = {
        "mean": float(np.mean(finite_psnr)) if finite_psnr else "inf",
        "sd": (float(np.std(finite_psnr, ddof=1))
               if len(finite_psnr) > 1 else 0.0),
        "non_finite_count": len(rows) - len(finite_psnr),
    }
    report = {"pairs": rows, "aggregate": agg, "alpha": args.alpha}
    _write_json(out / "evaluation.json", report)
    print(json.dumps(report, sort_keys=True, indent=2))
    return EXIT_OK


# -------------------------------------------------------------- profile / psf

def cmd_profile(args) -> int:
    _echo_config(args)
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    arr = _read_image_tensor(args.input)
    prof = metrics.line_profile(arr, args.row)
    lines = ["index,value"]
    lines += [f"{i},{v:.17g}" for i, v in enumerate(prof)]
    (out / "profile.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    log.info("profile contrast %.4g", metrics.contrast(prof))
    return EXIT_OK


def cmd_psf(args) -> int:
    _echo_config(args)
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    grid = make_grid(args.grid_n)
    if args.aperture == "open":
        pupil = open_aperture(grid, args.radius)
    else:
        pupil = spiral_aperture(grid, args.radius)
    psf = incoherent.psf_from_pupil(pupil)
    otf = incoherent.otf_from_psf(psf)
    meta = {"aperture": args.aperture, "radius": args.radius,
            "grid_n": args.grid_n}
    datasets.write_tensor(out / "psf.pdt", psf, {**meta, "kind": "psf"})
    datasets.write_tensor(out / "otf.pdt", np.stack([otf.real, otf.imag]),
                          {**meta, "kind": "otf", "layout": "real-imag"})
    datasets.write_tensor(out / "otf_mag.pdt", np.abs(otf),
                          {**meta, "kind": "otf-magnitude"})
    log.info("wrote psf.pdt, otf.pdt, otf_mag.pdt under %s", out)
    return EXIT_OK


# ---------------------------------------------------------------------- wiring

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="phasediverse",
        description="Vortex phase-diverse imaging: simulation, "
                    "deconvolution, phase retrieval, and datasets.")
    parser.add_argument("--version", action="version", version=__version__)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=1,
                        help="reserved; results are thread-count independent")
    common.add_argument("--output-dir", default=".")
    common.add_argument("--log-level", default="INFO",
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"])

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-dataset", parents=[common],
                       help="generate a paired (y1, y2, truth) dataset")
    p.add_argument("--regime", required=True, choices=["incoherent", "coherent"])
    p.add_argument("--src", required=True, help="directory of source images")
    p.add_argument("--out", required=True, help="dataset directory "
                   "(resolved under --output-dir)")
    p.add_argument("--grid-n", type=int, default=256)
    p.add_argument("--radius", type=float, default=50.0,
                   help="aperture radius in pixels (incoherent)")
    p.add_argument("--noise", type=float, default=0.01,
                   help="noise sigma as a fraction of peak (incoherent)")
    p.add_argument("--support", type=int, default=100,
                   help="support box size in pixels (coherent)")
    p.add_argument("--phi-max", type=float, default=2.0 * math.pi / 3.0)
    p.add_argument("--gamma", type=float, default=0.1)
    p.add_argument("--train-fraction", type=float, default=0.85)
    p.add_argument("--split", default="trainval", choices=["trainval", "test"])
    p.set_defaults(func=cmd_gen_dataset)

    p = sub.add_parser("deconvolve", parents=[common],
                       help="Wiener / GW / cascaded GW reconstruction")
    p.add_argument("--method", required=True,
                   choices=["wiener", "gw", "cascaded"])
    p.add_argument("--y1", required=True)
    p.add_argument("--y2")
    p.add_argument("--y2-pseudo")
    p.add_argument("--otf-radius", type=float, default=50.0)
    p.add_argument("--kappa", type=float, default=1e-2)
    p.add_argument("--kappa-w", type=float, default=1e-2)
    p.add_argument("--tv-steps", type=int, default=0)
    p.add_argument("--tv-step-size", type=float, default=0.1)
    p.add_argument("--truth")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--png", action="store_true")
    p.set_defaults(func=cmd_deconvolve)

    p = sub.add_parser("retrieve", parents=[common],
                       help="Fourier phase retrieval (HIO or diversity)")
    p.add_argument("--method", required=True, choices=["hio", "diversity"])
    p.add_argument("--y1", required=True)
    p.add_argument("--y2")
    p.add_argument("--y2-pseudo")
    p.add_argument("--support", type=int, required=True,
                   help="centered square support size in pixels")
    p.add_argument("--iters", type=int, default=500)
    p.add_argument("--final-plain", type=int, default=25)
    p.add_argument("--beta", type=float, default=0.9)
    p.add_argument("--gamma", type=float, default=0.1,
                   help="stored data is amplitude^gamma; 1.0 means raw")
    p.add_argument("--constraint", default=retrieval.SUPPORT_ONLY,
                   choices=[retrieval.SUPPORT_ONLY,
                            retrieval.SUPPORT_UNIT_MODULUS])
    p.add_argument("--truth", help="truth phase-map tensor for metrics")
    p.add_argument("--phi-max", type=float, default=2.0 * math.pi / 3.0)
    p.set_defaults(func=cmd_retrieve)

    p = sub.add_parser("evaluate", parents=[common],
                       help="per-pair and aggregate image metrics")
    p.add_argument("--pred", required=True)
    p.add_argument("--ref", required=True)
    p.add_argument("--alpha", type=float, default=1.0)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("profile", parents=[common],
                       help="export one image row as CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--row", type=int, default=None)
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("psf", parents=[common],
                       help="write PSF/OTF tensors for an aperture")
    p.add_argument("--aperture", required=True, choices=["open", "vortex"])
    p.add_argument("--radius", type=float, default=50.0)
    p.add_argument("--grid-n", type=int, default=256)
    p.set_defaults(func=cmd_psf)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage problems and 0 on --help/--version
        return int(exc.code or 0)
    logging.basicConfig(
        level=getattr(logging, args.log_level),
        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except UsageError as exc:
        log.error("usage error: %s", exc)
        return EXIT_USAGE
    except (FormatError, FileNotFoundError, ValueError) as exc:
        log.error("input error: %s", exc)
        return EXIT_INPUT
    except (NumericalError, FloatingPointError) as exc:
        log.error("numerical failure: %s", exc)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
