#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "atrm/tensor.hpp"

namespace atrm {

// One (distorted, clean) training pair in CHW layout.
struct TrainingExample {
    Tensor<float> y;
    Tensor<float> x;
};

// Bilinear rescale of a CHW tensor by `scale` (center-aligned sampling).
Tensor<float> bilinear_resize(const Tensor<float>& chw, double scale);

// Rescales both frames of a pair by the same factor.
TrainingExample augment_resize(const TrainingExample& pair, double scale);

// Draws aligned random patches: the same crop window is applied to y and x.
class PatchSampler {
public:
    // resize_range, when set, rescales the chosen pair by a uniform random
    // factor from the range before cropping (moving-object augmentation).
    PatchSampler(const std::vector<TrainingExample>& pairs, int patch, std::uint64_t seed,
                 std::optional<std::pair<double, double>> resize_range = std::nullopt);

    // y_batch/x_batch: [count, C, patch, patch]
    void sample(int count, Tensor<float>& y_batch, Tensor<float>& x_batch);

    // Rough count of distinct patches in the data (half-patch stride tiling);
    // the epoch-sizing estimate. At least 1.
    std::size_t patch_capacity() const noexcept { return capacity_; }

private:
    const std::vector<TrainingExample>& pairs_;
    int patch_;
    std::optional<std::pair<double, double>> resize_range_;
    std::mt19937_64 rng_;
    std::size_t capacity_ = 1;
};

// Single-shot convenience used by tests: returns (y_batch, x_batch).
std::pair<Tensor<float>, Tensor<float>> sample_patches(const std::vector<TrainingExample>& pairs,
                                                       int patch, int count, std::uint64_t seed);

}  // namespace atrm
