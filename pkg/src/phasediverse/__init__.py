"""Vortex phase-diverse computational imaging.

Simulates incoherent and coherent optical measurements through open and
charge-1 vortex apertures, reconstructs images with Wiener-family
deconvolution and spiral-phase-diversity Fourier phase retrieval, and
generates paired (y1, y2) datasets so a learned generator can synthesize
the second, phase-diverse shot from the first.
"""

__version__ = "0.1.0"

from .grids import (
    Grid,
    make_grid,
    fft_centered,
    ifft_centered,
    open_aperture,
    spiral_phase,
    spiral_aperture,
)
from .incoherent import NoiseSpec, psf_from_pupil, otf_from_psf, blur, add_noise
from .deconv import (
    RegSpec,
    wiener_filter,
    gw_filters,
    apply_filters,
    cascaded_gw,
    filter_response,
    inband_mask,
    tv_reduce,
)
from .coherent import (
    PhaseObject,
    GammaScale,
    embed_phase_object,
    fourier_amplitude,
    gamma_scale,
    gamma_unscale,
    resize_bilinear,
)
from .retrieval import (
    RetrievalConfig,
    RetrievalResult,
    hio,
    diversity_retrieve,
    align_global_phase,
    twin,
)
from .metrics import (
    SsimParams,
    mse,
    psnr,
    ssim,
    hybrid_loss,
    line_profile,
    contrast,
    aligned_phase_ssim,
)
from .datasets import (
    FormatError,
    IncoherentParams,
    CoherentParams,
    PseudoPair,
    write_tensor,
    read_tensor,
    read_header,
    gen_incoherent_pairs,
    gen_coherent_pairs,
    ingest_pseudo,
    manifest_check,
    load_manifest,
)

__all__ = [
    "Grid", "make_grid", "fft_centered", "ifft_centered",
    "open_aperture", "spiral_phase", "spiral_aperture",
    "NoiseSpec", "psf_from_pupil", "otf_from_psf", "blur", "add_noise",
    "RegSpec", "wiener_filter", "gw_filters", "apply_filters",
    "cascaded_gw", "filter_response", "inband_mask", "tv_reduce",
    "PhaseObject", "GammaScale", "embed_phase_object", "fourier_amplitude",
    "gamma_scale", "gamma_unscale",
    "resize_bilinear",
    "RetrievalConfig", "RetrievalResult", "hio", "diversity_retrieve",
    "align_global_phase", "twin",
    "SsimParams", "mse", "psnr", "ssim", "hybrid_loss", "line_profile",
    "contrast", "aligned_phase_ssim",
    "FormatError", "IncoherentParams", "CoherentParams", "PseudoPair",
    "write_tensor", "read_tensor", "read_header",
    "gen_incoherent_pairs", "gen_coherent_pairs", "ingest_pseudo",
    "manifest_check", "load_manifest",
]
