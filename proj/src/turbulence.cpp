#include "atrm/turbulence.hpp"

#include <cmath>
#include <random>

#include "atrm/rng.hpp"

namespace atrm {
namespace {

// reflect-101 index folding (mirror about the edge pixel); handles kernels
// larger than the image.
int reflect_index(int i, int n) {
    if (n == 1) return 0;
    const int period = 2 * (n - 1);
    i = std::abs(i) % period;
    return i < n ? i : period - i;
}

// weight of a 1D feathered tile [lo, hi) at coordinate v
double feather_weight(int v, int lo, int hi, int margin) {
    if (v >= lo && v < hi) return 1.0;
    const int d = v < lo ? lo - v : v - hi + 1;
    if (d > margin) return 0.0;
    return 1.0 - static_cast<double>(d) / (margin + 1);
}

}  // namespace

void DistortionConfig::validate() const {
    if (psf_bank.empty()) throw ValueError("distortion config: psf bank is empty");
    for (const Psf& p : psf_bank) p.validate();
    if (tile_rows < 1 || tile_cols < 1) throw ValueError("distortion config: tile grid must be >= 1x1");
    if (!(scale_min > 0.0) || scale_max > 4.0 || scale_min > scale_max) {
        throw ValueError("distortion config: scale range must satisfy 0 < min <= max <= 4");
    }
    if (noise_sigma < 0.0) throw ValueError("distortion config: noise sigma must be >= 0");
    if (blend_margin < 0) throw ValueError("distortion config: blend margin must be >= 0");
}

DistortionConfig DistortionConfig::defaults(std::uint64_t seed) {
    DistortionConfig cfg;
    cfg.psf_bank = generate_psf_bank(9, 15, derive_seed(seed, 0x70736662616e6bULL));
    cfg.seed = seed;
    return cfg;
}

ImageFrame convolve_reflect(const ImageFrame& img, const Psf& psf) {
    psf.validate();
    ImageFrame out(img.width, img.height, img.channels);
    const int r = psf.size / 2;
    for (int c = 0; c < img.channels; ++c) {
        for (int y = 0; y < img.height; ++y) {
            for (int x = 0; x < img.width; ++x) {
                double acc = 0.0;
                for (int ky = 0; ky < psf.size; ++ky) {
                    const int sy = reflect_index(y + ky - r, img.height);
                    for (int kx = 0; kx < psf.size; ++kx) {
                        const int sx = reflect_index(x + kx - r, img.width);
                        acc += psf.at(ky, kx) * img.at(c, sy, sx);
                    }
                }
                out.at(c, y, x) = static_cast<float>(acc);
            }
        }
    }
    return out;
}

ImageFrame spatially_variant_blur(const ImageFrame& x, const DistortionConfig& config,
                                  std::uint64_t frame_seed) {
    config.validate();
    if (config.tile_rows > x.height || config.tile_cols > x.width) {
        throw ValueError("spatially_variant_blur: tile grid finer than the image");
    }

    auto rng = make_rng(derive_seed(config.seed, frame_seed));
    std::uniform_int_distribution<std::size_t> pick(0, config.psf_bank.size() - 1);
    std::uniform_real_distribution<double> scale_dist(config.scale_min, config.scale_max);

    const int H = x.height, W = x.width;
    const int margin = config.blend_margin;
    std::vector<double> acc(x.pixel_count(), 0.0);
    std::vector<double> wsum(static_cast<std::size_t>(H) * W, 0.0);

    for (int tr = 0; tr < config.tile_rows; ++tr) {
        const int r0 = static_cast<int>(static_cast<long>(tr) * H / config.tile_rows);
        const int r1 = static_cast<int>(static_cast<long>(tr + 1) * H / config.tile_rows);
        for (int tc = 0; tc < config.tile_cols; ++tc) {
            const int c0 = static_cast<int>(static_cast<long>(tc) * W / config.tile_cols);
            const int c1 = static_cast<int>(static_cast<long>(tc + 1) * W / config.tile_cols);

            const Psf kernel = resize_psf(config.psf_bank[pick(rng)], scale_dist(rng));
            const int kr = kernel.size / 2;

            // support of this tile's feather window, clamped to the image
            const int sy0 = std::max(0, r0 - margin), sy1 = std::min(H, r1 + margin);
            const int sx0 = std::max(0, c0 - margin), sx1 = std::min(W, c1 + margin);

            for (int y = sy0; y < sy1; ++y) {
                const double wy = feather_weight(y, r0, r1, margin);
                for (int xx = sx0; xx < sx1; ++xx) {
                    const double w = wy * feather_weight(xx, c0, c1, margin);
                    if (w <= 0.0) continue;
                    wsum[static_cast<std::size_t>(y) * W + xx] += w;
                    for (int c = 0; c < x.channels; ++c) {
                        double conv = 0.0;
                        for (int ky = 0; ky < kernel.size; ++ky) {
                            const int sy = reflect_index(y + ky - kr, H);
                            for (int kx = 0; kx < kernel.size; ++kx) {
                                const int sx = reflect_index(xx + kx - kr, W);
                                conv += kernel.at(ky, kx) * x.at(c, sy, sx);
                            }
                        }
                        acc[(static_cast<std::size_t>(c) * H + y) * W + xx] += w * conv;
                    }
                }
            }
        }
    }

    ImageFrame out(W, H, x.channels);
    for (int c = 0; c < x.channels; ++c) {
        for (int y = 0; y < H; ++y) {
            for (int xx = 0; xx < W; ++xx) {
                const double w = wsum[static_cast<std::size_t>(y) * W + xx];
                out.at(c, y, xx) =
                    static_cast<float>(acc[(static_cast<std::size_t>(c) * H + y) * W + xx] / w);
            }
        }
    }
    return out;
}

ImageFrame add_noise(const ImageFrame& img, double sigma, std::uint64_t seed) {
    if (sigma < 0.0) throw ValueError("add_noise: sigma must be >= 0");
    if (sigma == 0.0) return img;
    ImageFrame out = img;
    auto rng = make_rng(seed);
    std::normal_distribution<double> dist(0.0, sigma);
    for (float& v : out.pixels) v = static_cast<float>(v + dist(rng));
    return out;
}

FrameSequence simulate_sequence(const ImageFrame& clean, int frames,
                                const DistortionConfig& config) {
    if (frames < 1) throw ValueError("simulate_sequence: frames must be >= 1");
    FrameSequence seq;
    seq.reserve(frames);
    for (int i = 0; i < frames; ++i) {
        const std::uint64_t frame_seed = derive_seed(config.seed, static_cast<std::uint64_t>(i));
        ImageFrame frame = spatially_variant_blur(clean, config, frame_seed);
        frame = add_noise(frame, config.noise_sigma, derive_seed(frame_seed, 1));
        seq.push_back(std::move(frame));
    }
    return seq;
}

ImageFrame frame_average(const FrameSequence& seq, int window, int t) {
    if (window < 1) throw ValueError("frame_average: window must be >= 1");
    if (t < 0 || t >= static_cast<int>(seq.size())) {
        throw ValueError("frame_average: frame index out of range");
    }
    if (t - window + 1 < 0) {
        throw ValueError("frame_average: window exceeds available history at frame " +
                         std::to_string(t));
    }
    ImageFrame out(seq[t].width, seq[t].height, seq[t].channels);
    for (int i = t - window + 1; i <= t; ++i) {
        if (!seq[i].same_shape(out)) throw ShapeError("frame_average: frames differ in shape");
        for (std::size_t p = 0; p < out.pixels.size(); ++p) out.pixels[p] += seq[i].pixels[p];
    }
    const float inv = 1.0f / static_cast<float>(window);
    for (float& v : out.pixels) v *= inv;
    return out;
}

}  // namespace atrm
