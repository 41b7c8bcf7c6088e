#include "atrm/sampler.hpp"

#include <cmath>

#include "atrm/rng.hpp"

namespace atrm {

Tensor<float> bilinear_resize(const Tensor<float>& chw, double scale) {
    if (chw.rank() != 3) throw ShapeError("bilinear_resize: expected [C,H,W]");
    if (!(scale > 0.0)) throw ValueError("bilinear_resize: scale must be positive");
    const int C = static_cast<int>(chw.extent(0));
    const int H = static_cast<int>(chw.extent(1));
    const int W = static_cast<int>(chw.extent(2));
    const int oh = std::max(1, static_cast<int>(std::lround(H * scale)));
    const int ow = std::max(1, static_cast<int>(std::lround(W * scale)));

    Tensor<float> out({static_cast<std::size_t>(C), static_cast<std::size_t>(oh),
                       static_cast<std::size_t>(ow)});
    const double sy = static_cast<double>(H) / oh;
    const double sx = static_cast<double>(W) / ow;
    for (int c = 0; c < C; ++c) {
        for (int y = 0; y < oh; ++y) {
            double fy = (y + 0.5) * sy - 0.5;
            fy = std::clamp(fy, 0.0, static_cast<double>(H - 1));
            const int y0 = static_cast<int>(fy);
            const int y1 = std::min(y0 + 1, H - 1);
            const double ty = fy - y0;
            for (int x = 0; x < ow; ++x) {
                double fx = (x + 0.5) * sx - 0.5;
                fx = std::clamp(fx, 0.0, static_cast<double>(W - 1));
                const int x0 = static_cast<int>(fx);
                const int x1 = std::min(x0 + 1, W - 1);
                const double tx = fx - x0;
                const double v = (1 - ty) * ((1 - tx) * chw.at(c, y0, x0) + tx * chw.at(c, y0, x1)) +
                                 ty * ((1 - tx) * chw.at(c, y1, x0) + tx * chw.at(c, y1, x1));
                out.at(c, y, x) = static_cast<float>(v);
            }
        }
    }
    return out;
}

TrainingExample augment_resize(const TrainingExample& pair, double scale) {
    if (scale == 1.0) return pair;
    return {bilinear_resize(pair.y, scale), bilinear_resize(pair.x, scale)};
}

namespace {

std::size_t capacity_of(const std::vector<TrainingExample>& pairs, int patch) {
    // half-patch stride tiling count; the paper never defines an epoch, this
    // is the artifact's convention
    std::size_t total = 0;
    const int stride = std::max(1, patch / 2);
    for (const TrainingExample& p : pairs) {
        const int H = static_cast<int>(p.y.extent(1));
        const int W = static_cast<int>(p.y.extent(2));
        if (H < patch || W < patch) continue;
        total += static_cast<std::size_t>((H - patch) / stride + 1) *
                 static_cast<std::size_t>((W - patch) / stride + 1);
    }
    return std::max<std::size_t>(total, 1);
}

}  // namespace

PatchSampler::PatchSampler(const std::vector<TrainingExample>& pairs, int patch,
                           std::uint64_t seed,
                           std::optional<std::pair<double, double>> resize_range)
    : pairs_(pairs), patch_(patch), resize_range_(resize_range), rng_(make_rng(seed)) {
    if (pairs.empty()) throw ValueError("patch sampler: no training pairs");
    if (patch < 1) throw ValueError("patch sampler: patch size must be positive");
    for (const TrainingExample& p : pairs) {
        require_same_shape(p.y, p.x, "patch sampler pair");
        if (p.y.rank() != 3) throw ShapeError("patch sampler: pairs must be [C,H,W]");
        if (static_cast<int>(p.y.extent(1)) < patch || static_cast<int>(p.y.extent(2)) < patch) {
            throw ValueError("patch sampler: image " + shape_string(p.y) +
                             " smaller than patch size " + std::to_string(patch));
        }
    }
    if (resize_range_) {
        if (!(resize_range_->first > 0.0) || resize_range_->first > resize_range_->second) {
            throw ValueError("patch sampler: bad resize range");
        }
        for (const TrainingExample& p : pairs) {
            const int short_side = static_cast<int>(std::min(p.y.extent(1), p.y.extent(2)));
            if (std::lround(short_side * resize_range_->first) < patch) {
                throw ValueError("patch sampler: resize range can shrink " + shape_string(p.y) +
                                 " below the patch size " + std::to_string(patch));
            }
        }
    }
    capacity_ = capacity_of(pairs, patch);
}

void PatchSampler::sample(int count, Tensor<float>& y_batch, Tensor<float>& x_batch) {
    if (count < 1) throw ValueError("patch sampler: count must be positive");
    const std::size_t C = pairs_[0].y.extent(0);
    const auto p = static_cast<std::size_t>(patch_);
    const std::vector<std::size_t> shape{static_cast<std::size_t>(count), C, p, p};
    if (y_batch.shape() != shape) y_batch = Tensor<float>(shape);
    if (x_batch.shape() != shape) x_batch = Tensor<float>(shape);

    std::uniform_int_distribution<std::size_t> pick(0, pairs_.size() - 1);
    for (int b = 0; b < count; ++b) {
        const TrainingExample* pair = &pairs_[pick(rng_)];
        TrainingExample resized;
        if (resize_range_) {
            std::uniform_real_distribution<double> scale_dist(resize_range_->first,
                                                              resize_range_->second);
            resized = augment_resize(*pair, scale_dist(rng_));
            pair = &resized;
        }
        const std::size_t H = pair->y.extent(1);
        const std::size_t W = pair->y.extent(2);
        std::uniform_int_distribution<std::size_t> oy_dist(0, H - p);
        std::uniform_int_distribution<std::size_t> ox_dist(0, W - p);
        const std::size_t oy = oy_dist(rng_);
        const std::size_t ox = ox_dist(rng_);
        for (std::size_t c = 0; c < C; ++c) {
            for (std::size_t r = 0; r < p; ++r) {
                const float* ys = &pair->y.at(c, oy + r, ox);
                const float* xs = &pair->x.at(c, oy + r, ox);
                float* yd = &y_batch.at(static_cast<std::size_t>(b), c, r, 0);
                float* xd = &x_batch.at(static_cast<std::size_t>(b), c, r, 0);
                std::copy(ys, ys + p, yd);
                std::copy(xs, xs + p, xd);
            }
        }
    }
}

std::pair<Tensor<float>, Tensor<float>> sample_patches(const std::vector<TrainingExample>& pairs,
                                                       int patch, int count, std::uint64_t seed) {
    PatchSampler sampler(pairs, patch, seed);
    Tensor<float> y, x;
    sampler.sample(count, y, x);
    return {std::move(y), std::move(x)};
}

}  // namespace atrm
