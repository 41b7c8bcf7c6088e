#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "atrm/error.hpp"

namespace atrm {

// Blur kernel: square, odd-sized, non-negative, entries summing to 1.
// Stored in double so normalization holds to 1e-9.
struct Psf {
    int size = 0;
    std::vector<double> weights;  // size*size, row-major

    double at(int y, int x) const { return weights[static_cast<std::size_t>(y) * size + x]; }
    double& at(int y, int x) { return weights[static_cast<std::size_t>(y) * size + x]; }

    double sum() const;
    void normalize();       // throws ValueError on non-positive or non-finite mass
    void validate() const;  // non-negative, unit sum within 1e-9
};

// Identity kernel: 1 at the center.
Psf delta_psf(int size);

// `count` distinct normalized kernels built from 2-4 anisotropic Gaussian
// lobes with randomized centers, covariances and weights. Deterministic per
// seed. Stand-ins for measured turbulence PSFs; real kernels can be loaded
// from files instead.
std::vector<Psf> generate_psf_bank(int count, int size, std::uint64_t seed);

// Bilinear rescale to round(size*scale) forced odd, then renormalized.
// scale must lie in (0, 4].
Psf resize_psf(const Psf& psf, double scale);

// Plain-text format: header "PSF <size>", then size^2 whitespace-separated
// reals. Kernels are normalized on load.
Psf load_psf(const std::filesystem::path& path);
void save_psf(const Psf& psf, const std::filesystem::path& path);

}  // namespace atrm
