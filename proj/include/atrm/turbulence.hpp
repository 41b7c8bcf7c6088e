#pragma once

#include <cstdint>

#include "atrm/image.hpp"
#include "atrm/psf.hpp"

namespace atrm {

// Forward degradation model: spatially-variant PSF blur over a feathered
// tile grid, then additive Gaussian noise.
struct DistortionConfig {
    std::vector<Psf> psf_bank;
    int tile_rows = 3;
    int tile_cols = 3;
    double scale_min = 0.5;
    double scale_max = 1.5;
    double noise_sigma = 0.01;
    int blend_margin = 8;
    std::uint64_t seed = 0;

    void validate() const;

    // 9 generated kernels of size 15 plus the default knobs above.
    static DistortionConfig defaults(std::uint64_t seed);
};

// Partitions the image into tile_rows x tile_cols tiles; each tile is
// convolved with a randomly drawn, randomly rescaled PSF from the bank
// (reflective padding at image borders) and tiles are blended with linear
// feathering over blend_margin pixels. Deterministic per (config.seed,
// frame_seed).
ImageFrame spatially_variant_blur(const ImageFrame& x, const DistortionConfig& config,
                                  std::uint64_t frame_seed);

// i.i.d. zero-mean Gaussian per pixel; values are not clamped.
ImageFrame add_noise(const ImageFrame& img, double sigma, std::uint64_t seed);

// `frames` independent draws of blur + noise from the same ground truth.
// Per-frame seeds derive from (config.seed, frame index).
FrameSequence simulate_sequence(const ImageFrame& clean, int frames,
                                const DistortionConfig& config);

// Arithmetic pixel mean of frames [t-window+1, t].
ImageFrame frame_average(const FrameSequence& seq, int window, int t);

// Plain convolution with reflective padding; the single-tile building block,
// also used directly by tests.
ImageFrame convolve_reflect(const ImageFrame& img, const Psf& psf);

}  // namespace atrm
