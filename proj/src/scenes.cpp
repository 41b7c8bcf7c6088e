#include "atrm/scenes.hpp"

#include <cmath>
#include <random>

#include "atrm/rng.hpp"

namespace atrm {

ImageFrame make_chessboard(int size, int tiles) {
    if (size < 2 || tiles < 1) throw ValueError("make_chessboard: bad size or tile count");
    ImageFrame img(size, size, 1);
    const int tile = std::max(1, size / tiles);
    for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) {
            img.at(0, y, x) = ((y / tile) + (x / tile)) % 2 ? 0.9f : 0.1f;
        }
    }
    return img;
}

ImageFrame make_ripple_texture(int size, std::uint64_t seed) {
    if (size < 2) throw ValueError("make_ripple_texture: size too small");
    auto rng = make_rng(seed);
    std::uniform_real_distribution<double> angle(0.0, M_PI);
    std::uniform_real_distribution<double> freq(0.05, 0.35);  // cycles per pixel
    std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);

    constexpr int kWaves = 6;
    double ax[kWaves], ay[kWaves], ph[kWaves];
    for (int w = 0; w < kWaves; ++w) {
        const double th = angle(rng);
        const double f = freq(rng) * 2.0 * M_PI;
        ax[w] = f * std::cos(th);
        ay[w] = f * std::sin(th);
        ph[w] = phase(rng);
    }

    ImageFrame img(size, size, 1);
    for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) {
            double v = 0.0;
            for (int w = 0; w < kWaves; ++w) v += std::sin(ax[w] * x + ay[w] * y + ph[w]);
            img.at(0, y, x) = static_cast<float>(0.5 + 0.5 * v / kWaves + 0.08 * std::sin(0.9 * x) * std::sin(0.7 * y));
        }
    }
    return img;
}

ImageFrame make_plasma_texture(int size, std::uint64_t seed) {
    if (size < 2) throw ValueError("make_plasma_texture: size too small");
    ImageFrame img(size, size, 1);

    // octaves of bilinear value noise on coarse lattices
    double amplitude = 0.5;
    for (int octave = 0; octave < 5; ++octave) {
        const int cells = 4 << octave;  // lattice resolution
        auto rng = make_rng(derive_seed(seed, static_cast<std::uint64_t>(octave)));
        std::uniform_real_distribution<double> level(-1.0, 1.0);
        std::vector<double> lattice(static_cast<std::size_t>(cells + 1) * (cells + 1));
        for (double& v : lattice) v = level(rng);

        const double step = static_cast<double>(size) / cells;
        for (int y = 0; y < size; ++y) {
            const double fy = y / step;
            const int gy = std::min(static_cast<int>(fy), cells - 1);
            const double ty = fy - gy;
            for (int x = 0; x < size; ++x) {
                const double fx = x / step;
                const int gx = std::min(static_cast<int>(fx), cells - 1);
                const double tx = fx - gx;
                const double v00 = lattice[static_cast<std::size_t>(gy) * (cells + 1) + gx];
                const double v01 = lattice[static_cast<std::size_t>(gy) * (cells + 1) + gx + 1];
                const double v10 = lattice[static_cast<std::size_t>(gy + 1) * (cells + 1) + gx];
                const double v11 = lattice[static_cast<std::size_t>(gy + 1) * (cells + 1) + gx + 1];
                const double v = (1 - ty) * ((1 - tx) * v00 + tx * v01) + ty * ((1 - tx) * v10 + tx * v11);
                img.at(0, y, x) += static_cast<float>(amplitude * v);
            }
        }
        amplitude *= 0.55;
    }

    // squash into [0.05, 0.95]
    float lo = img.pixels[0], hi = img.pixels[0];
    for (float v : img.pixels) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const float span = hi - lo > 1e-9f ? hi - lo : 1.0f;
    for (float& v : img.pixels) v = 0.05f + 0.9f * (v - lo) / span;
    return img;
}

std::vector<NamedScene> bundled_scenes() {
    return {
        {"chessboard", make_chessboard(128, 8)},
        {"ripples", make_ripple_texture(128, 2024)},
        {"plasma", make_plasma_texture(128, 77)},
    };
}

}  // namespace atrm
