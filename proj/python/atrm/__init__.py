"""Residual-CNN atmospheric turbulence restoration (C++ core bindings)."""

try:
    # wheel layout: extension installed inside the package
    from ._atrm import (
        AtrmError,
        Model,
        NetworkConfig,
        desk_network,
        frame_average,
        generate_psf_bank,
        paper_network,
        psnr,
        receptive_field,
        simulate_sequence,
        ssim,
        train_on_pairs,
    )
except ImportError:  # in-tree build: extension on sys.path
    from _atrm import (
        AtrmError,
        Model,
        NetworkConfig,
        desk_network,
        frame_average,
        generate_psf_bank,
        paper_network,
        psnr,
        receptive_field,
        simulate_sequence,
        ssim,
        train_on_pairs,
    )

__all__ = [
    "AtrmError",
    "Model",
    "NetworkConfig",
    "desk_network",
    "frame_average",
    "generate_psf_bank",
    "paper_network",
    "psnr",
    "receptive_field",
    "simulate_sequence",
    "ssim",
    "train_on_pairs",
]
