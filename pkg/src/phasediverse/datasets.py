"""Paired-dataset generation and the on-disk tensor format.

TensorFile layout: one UTF-8 JSON header line terminated by a newline,
then raw little-endian float32 values in row-major order. The header is
{"magic": "PDT1", "dtype": "f32", "shape": [...], "byte_order": "LE",
"layout": "row-major", "meta": {...}}. Readers reject unknown magic or
dtype and verify the payload byte count.

A dataset directory holds out_dir/{train,val,test}/{y1,y2,truth}/NNNN.pdt
plus a manifest.json describing every entry with paths relative to the
manifest. Generation is deterministic: entries keep source order after a
seeded shuffle, and each noise realization draws from a PCG64 generator
seeded by SeedSequence((master_seed, entry_index, shot_index)).
"""

from __future__ import annotations

import json
import logging
import math
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from PIL import Image

from . import coherent, incoherent
from .grids import make_grid, open_aperture, spiral_aperture

__all__ = [
    "FormatError",
    "TensorError",
    "IncoherentParams",
    "CoherentParams",
    "PseudoPair",
    "write_tensor",
    "read_tensor",
    "read_header",
    "gen_incoherent_pairs",
    "gen_coherent_pairs",
    "ingest_pseudo",
    "manifest_check",
    "load_manifest",
]

log = logging.getLogger(__name__)

MAGIC = "PDT1"
_IMAGE_EXTS = {".png", ".jpg", ".jpeg", ".bmp", ".tif", ".tiff"}
_LUMA = np.array([0.299, 0.587, 0.114])


class FormatError(Exception):
    """A file failed structural validation (bad header, truncation, ...)."""


# kept as an alias so callers can catch either name
TensorError = FormatError


def write_tensor(path: str | Path, array: np.ndarray,
                 meta: dict | None = None) -> None:
    """Write a float32 tensor with a self-describing JSON header line.

    The write is atomic (temp file + rename) so readers never observe a
    partial payload.
    """
    path = Path(path)
    arr = np.ascontiguousarray(array, dtype="<f4")
    header = {
        "magic": MAGIC,
        "dtype": "f32",
        "shape": list(arr.shape),
        "byte_order": "LE",
        "layout": "row-major",
        "meta": meta or {},
    }
    blob = json.dumps(header, sort_keys=True, separators=(",", ":")).encode() + b"\n"
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "wb") as fh:
        fh.write(blob)
        fh.write(arr.tobytes())
    os.replace(tmp, path)


def read_header(path: str | Path) -> dict:
    """Parse and validate the header line only."""
    with open(path, "rb") as fh:
        line = fh.readline(1 << 16)
    if not line.endswith(b"\n"):
        raise FormatError(f"{path}: header line missing or unterminated")
    try:
        header = json.loads(line.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise FormatError(f"{path}: header is not valid JSON: {exc}") from exc
    if not isinstance(header, dict) or header.get("magic") != MAGIC:
        raise FormatError(f"{path}: bad magic {header.get('magic')!r}, "
                          f"expected {MAGIC!r}")
    if header.get("dtype") != "f32":
        raise FormatError(f"{path}: unsupported dtype {header.get('dtype')!r}")
    if header.get("byte_order") != "LE":
        raise FormatError(f"{path}: unsupported byte order "
                          f"{header.get('byte_order')!r}")
    shape = header.get("shape")
    if (not isinstance(shape, list) or not shape
            or not all(isinstance(s, int) and 0 < s <= 1 << 20 for s in shape)):
        raise FormatError(f"{path}: invalid shape {shape!r}")
    if math.prod(shape) > (1 << 28):
        raise FormatError(f"{path}: shape {shape} overflows the size limit")
    return header


def read_tensor(path: str | Path) -> np.ndarray:
    """Read a tensor written by write_tensor; verifies the byte count."""
    header = read_header(path)
    shape = tuple(header["shape"])
    expected = 4 * math.prod(shape)
    with open(path, "rb") as fh:
        fh.readline(1 << 16)
        payload = fh.read()
    if len(payload) != expected:
        raise FormatError(f"{path}: expected {expected} payload bytes, "
                          f"found {len(payload)} (truncated or oversized)")
    return np.frombuffer(payload, dtype="<f4").reshape(shape).astype(np.float64)


@dataclass(frozen=True)
class IncoherentParams:
    grid_n: int = 256
    aperture_radius_px: float = 50.0
    noise_fraction: float = 0.01
    seed: int = 0
    train_fraction: float = 0.85

    def manifest_params(self) -> dict:
        return {
            "grid_n": self.grid_n,
            "aperture_radius_px": self.aperture_radius_px,
            "noise_fraction": self.noise_fraction,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class CoherentParams:
    grid_n: int = 256
    support_size: int = 100
    phi_max: float = 2.0 * math.pi / 3.0
    gamma: float = 0.1
    seed: int = 0
    train_fraction: float = 0.85

    def manifest_params(self) -> dict:
        return {
            "grid_n": self.grid_n,
            "support_size": self.support_size,
            "phi_max": self.phi_max,
            "gamma": self.gamma,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class PseudoPair:
    y1: np.ndarray
    y2p: np.ndarray
    provenance: str = ""


def _list_images(src_dir: str | Path) -> list[Path]:
    src = Path(src_dir)
    if not src.is_dir():
        raise FormatError(f"source directory {src} does not exist")
    files = sorted(p for p in src.iterdir()
                   if p.suffix.lower() in _IMAGE_EXTS and p.is_file())
    if not files:
        raise FormatError(f"no decodable images found under {src}")
    failures = []
    for p in files:
        try:
            with Image.open(p) as im:
                im.verify()
        except Exception as exc:
            failures.append(f"{p.name} ({exc})")
    if failures:
        raise FormatError(
            f"{len(failures)} source image(s) failed to decode: "
            + "; ".join(failures))
    return files


def _load_grayscale(path: Path) -> np.ndarray:
    """Decode to float grayscale via 0.299/0.587/0.114 luminance weights.

    The weighting runs in float to avoid the 8-bit quantization that
    PIL's own "L" conversion would introduce.
    """
    try:
        with Image.open(path) as im:
            im = im.convert("RGB")
            arr = np.asarray(im, dtype=np.float64)
    except Exception as exc:
        raise FormatError(f"cannot decode image {path}: {exc}") from exc
    return arr @ _LUMA


def _normalize01(img: np.ndarray) -> np.ndarray:
    lo, hi = float(img.min()), float(img.max())
    if hi == lo:
        return np.zeros_like(img)
    return (img - lo) / (hi - lo)


def _shot_seed(master_seed: int, entry_index: int, shot_index: int) -> int:
    ss = np.random.SeedSequence(entropy=(master_seed, entry_index, shot_index))
    return int(ss.generate_state(1, np.uint64)[0])


def _split_indices(count: int, train_fraction: float, seed: int,
                   split: str) -> list[tuple[int, str]]:
    """Assign a subset label to every source index.

    split "trainval" shuffles deterministically and cuts at
    train_fraction; split "test" labels everything test (the test set is
    generated from its own source directory).
    """
    if split == "test":
        return [(i, "test") for i in range(count)]
    # fixed tag keeps the split stream independent of the shot streams
    order = np.random.default_rng(np.random.SeedSequence(
        entropy=(seed, 0x5B117))).permutation(count)
    n_train = int(round(train_fraction * count))
    labels = {}
    for rank, idx in enumerate(order):
        labels[int(idx)] = "train" if rank < n_train else "val"
    return [(i, labels[i]) for i in range(count)]


def _write_manifest(out_dir: Path, regime: str, params: dict,
                    train_fraction: float, entries: list[dict]) -> dict:
    manifest = {
        "regime": regime,
        "params": params,
        "split": {"train_fraction": train_fraction,
                  "val_fraction": round(1.0 - train_fraction, 10)},
        "entries": entries,
    }
    blob = json.dumps(manifest, sort_keys=True, indent=2) + "\n"
    tmp = out_dir / "manifest.json.tmp"
    tmp.write_text(blob, encoding="utf-8")
    os.replace(tmp, out_dir / "manifest.json")
    return manifest


def _entry_paths(out_dir: Path, subset: str, idx: int) -> dict[str, Path]:
    name = f"{idx:04d}.pdt"
    paths = {}
    for kind in ("y1", "y2", "truth"):
        d = out_dir / subset / kind
        d.mkdir(parents=True, exist_ok=True)
        paths[kind] = d / name
    return paths


def gen_incoherent_pairs(src_dir: str | Path, out_dir: str | Path,
                         params: IncoherentParams | None = None,
                         split: str = "trainval") -> dict:
    """Blur every source image through both apertures and add per-shot noise.

    y1 uses the open aperture, y2 the vortex aperture; noise draws are
    independent per shot. Returns the manifest dict (also written to
    out_dir/manifest.json).
    """
    params = params or IncoherentParams()
    files = _list_images(src_dir)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    grid = make_grid(params.grid_n)
    psf_open = incoherent.psf_from_pupil(
        open_aperture(grid, params.aperture_radius_px))
    psf_vortex = incoherent.psf_from_pupil(
        spiral_aperture(grid, params.aperture_radius_px))
    entries = []
    for idx, subset in _split_indices(len(files), params.train_fraction,
                                      params.seed, split):
        img = _normalize01(coherent.resize_bilinear(
            _load_grayscale(files[idx]), params.grid_n))
        shots = []
        for shot, psf in enumerate((psf_open, psf_vortex)):
            spec = incoherent.NoiseSpec(
                fraction=params.noise_fraction,
                seed=_shot_seed(params.seed, idx, shot))
            shots.append(incoherent.add_noise(incoherent.blur(img, psf), spec))
        paths = _entry_paths(out, subset, idx)
        meta = {"source": files[idx].name, "regime": "incoherent",
                "entry_index": idx}
        write_tensor(paths["y1"], shots[0], {**meta, "kind": "y1"})
        write_tensor(paths["y2"], shots[1], {**meta, "kind": "y2"})
        write_tensor(paths["truth"], img, {**meta, "kind": "truth"})
        entries.append({
            "id": f"{idx:04d}",
            "split": subset,
            "y1_path": str(paths["y1"].relative_to(out)),
            "y2_path": str(paths["y2"].relative_to(out)),
            "truth_path": str(paths["truth"].relative_to(out)),
            "meta": meta,
        })
    return _write_manifest(out, "incoherent", params.manifest_params(),
                           params.train_fraction, entries)


def gen_coherent_pairs(src_dir: str | Path, out_dir: str | Path,
                       params: CoherentParams | None = None,
                       split: str = "trainval") -> dict:
    """Embed sources as pure phase objects and store gamma-scaled
    Fourier amplitudes for plane-wave (y1) and vortex (y2) illumination.

    The truth tensor is the full-window phase map in radians.
    """
    params = params or CoherentParams()
    files = _list_images(src_dir)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    grid = make_grid(params.grid_n)
    g = coherent.GammaScale(params.gamma)
    entries = []
    for idx, subset in _split_indices(len(files), params.train_fraction,
                                      params.seed, split):
        img = _load_grayscale(files[idx])
        obj = coherent.embed_phase_object(img, grid, params.support_size,
                                          params.phi_max)
        y1 = coherent.gamma_scale(coherent.fourier_amplitude(obj, "plane"), g)
        y2 = coherent.gamma_scale(coherent.fourier_amplitude(obj, "vortex"), g)
        paths = _entry_paths(out, subset, idx)
        meta = {"source": files[idx].name, "regime": "coherent",
                "entry_index": idx, "gamma": params.gamma,
                "phi_max": params.phi_max,
                "support_size": params.support_size}
        write_tensor(paths["y1"], y1, {**meta, "kind": "y1"})
        write_tensor(paths["y2"], y2, {**meta, "kind": "y2"})
        write_tensor(paths["truth"], obj.phase_map(), {**meta, "kind": "truth"})
        entries.append({
            "id": f"{idx:04d}",
            "split": subset,
            "y1_path": str(paths["y1"].relative_to(out)),
            "y2_path": str(paths["y2"].relative_to(out)),
            "truth_path": str(paths["truth"].relative_to(out)),
            "meta": meta,
        })
    return _write_manifest(out, "coherent", params.manifest_params(),
                           params.train_fraction, entries)


def ingest_pseudo(y1_path: str | Path, y2p_path: str | Path) -> PseudoPair:
    """Validate externally generated pseudo-data against its y1 partner.

    Rejects shape mismatches and non-finite or negative values; logs a
    warning when the pseudo-data's scale is far from y1's, which usually
    means a gamma mismatch.
    """
    y1 = read_tensor(y1_path)
    header = read_header(y2p_path)
    y2p = read_tensor(y2p_path)
    if y1.shape != y2p.shape:
        raise FormatError(
            f"pseudo-data shape {y2p.shape} does not match y1 {y1.shape}")
    if not np.isfinite(y2p).all():
        raise FormatError("pseudo-data contains non-finite values")
    if (y2p < 0).any():
        raise FormatError("pseudo-data contains negative values")
    peak1, peak2 = float(y1.max()), float(y2p.max())
    if peak1 > 0 and not 0.2 <= peak2 / peak1 <= 5.0:
        log.warning("pseudo-data peak %.3g is far from y1 peak %.3g; "
                    "check gamma scaling", peak2, peak1)
    provenance = str(header.get("meta", {}).get("provenance", ""))
    return PseudoPair(y1=y1, y2p=y2p, provenance=provenance)


def load_manifest(path: str | Path) -> dict:
    path = Path(path)
    if path.is_dir():
        path = path / "manifest.json"
    try:
        manifest = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise FormatError(f"manifest {path} does not exist") from None
    except json.JSONDecodeError as exc:
        raise FormatError(f"manifest {path} is not valid JSON: {exc}") from exc
    for key in ("regime", "params", "entries"):
        if key not in manifest:
            raise FormatError(f"manifest {path} missing key {key!r}")
    return manifest


def manifest_check(path: str | Path) -> int:
    """Validate that every referenced tensor exists and parses with a
    consistent shape. Returns the number of entries checked."""
    path = Path(path)
    if path.is_dir():
        path = path / "manifest.json"
    manifest = load_manifest(path)
    base = path.parent
    grid_n = manifest["params"].get("grid_n")
    for entry in manifest["entries"]:
        for key in ("y1_path", "y2_path", "truth_path"):
            rel = entry.get(key)
            if rel is None:
                raise FormatError(f"entry {entry.get('id')} missing {key}")
            arr = read_tensor(base / rel)
            if grid_n and arr.shape[-2:] != (grid_n, grid_n):
                raise FormatError(
                    f"{rel}: shape {arr.shape} does not match grid_n {grid_n}")
    return len(manifest["entries"])
