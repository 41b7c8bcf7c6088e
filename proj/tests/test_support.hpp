#pragma once

// Shared helpers for the test suites: reference implementations kept
// deliberately independent of the library's computational paths, plus
// random-tensor utilities.

#include <cmath>
#include <functional>
#include <random>

#include "atrm/tensor.hpp"

namespace testsup {

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

template <typename T>
atrm::Tensor<T> random_tensor(std::vector<std::size_t> shape, std::mt19937_64& gen,
                              double lo = -1.0, double hi = 1.0) {
    atrm::Tensor<T> t(std::move(shape));
    std::uniform_real_distribution<double> dist(lo, hi);
    for (auto& v : t.values()) v = static_cast<T>(dist(gen));
    return t;
}

template <typename T>
double max_abs_diff(const atrm::Tensor<T>& a, const atrm::Tensor<T>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(static_cast<double>(a[i]) - static_cast<double>(b[i])));
    }
    return m;
}

// max |a-b| / max(1e-12, |a|, |b|) over all elements
template <typename T>
double max_rel_diff(const atrm::Tensor<T>& a, const atrm::Tensor<T>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double av = a[i], bv = b[i];
        const double scale = std::max({1e-12, std::abs(av), std::abs(bv)});
        m = std::max(m, std::abs(av - bv) / scale);
    }
    return m;
}

// Direct quadruple-loop cross-correlation with zero same padding; the
// brute-force oracle for the conv engine. input [C,H,W] or [N,C,H,W].
template <typename T>
atrm::Tensor<T> conv_reference(const atrm::Tensor<T>& input, const atrm::Tensor<T>& weights,
                               const atrm::Tensor<T>& bias) {
    const bool batched = input.rank() == 4;
    const std::size_t N = batched ? input.extent(0) : 1;
    const std::size_t C = input.extent(batched ? 1 : 0);
    const std::size_t H = input.extent(batched ? 2 : 1);
    const std::size_t W = input.extent(batched ? 3 : 2);
    const std::size_t CO = weights.extent(0);
    const int n = static_cast<int>(weights.extent(2));
    const int pad = (n - 1) / 2;

    auto out_shape = batched ? std::vector<std::size_t>{N, CO, H, W}
                             : std::vector<std::size_t>{CO, H, W};
    atrm::Tensor<T> out(std::move(out_shape));
    const std::size_t HW = H * W;
    for (std::size_t b = 0; b < N; ++b) {
        for (std::size_t co = 0; co < CO; ++co) {
            for (std::size_t oy = 0; oy < H; ++oy) {
                for (std::size_t ox = 0; ox < W; ++ox) {
                    double acc = static_cast<double>(bias[co]);
                    for (std::size_t ci = 0; ci < C; ++ci) {
                        for (int ky = 0; ky < n; ++ky) {
                            const long iy = static_cast<long>(oy) + ky - pad;
                            if (iy < 0 || iy >= static_cast<long>(H)) continue;
                            for (int kx = 0; kx < n; ++kx) {
                                const long ix = static_cast<long>(ox) + kx - pad;
                                if (ix < 0 || ix >= static_cast<long>(W)) continue;
                                acc += static_cast<double>(
                                           weights.at(co, ci, static_cast<std::size_t>(ky),
                                                      static_cast<std::size_t>(kx))) *
                                       input[(b * C + ci) * HW + static_cast<std::size_t>(iy) * W +
                                             static_cast<std::size_t>(ix)];
                            }
                        }
                    }
                    out[(b * CO + co) * HW + oy * W + ox] = static_cast<T>(acc);
                }
            }
        }
    }
    return out;
}

// Central finite differences of a scalar function w.r.t. one tensor,
// evaluated in double precision.
inline atrm::Tensor<double> finite_difference(atrm::Tensor<double>& arg,
                                              const std::function<double()>& f,
                                              double h = 1e-5) {
    atrm::Tensor<double> grad(arg.shape());
    for (std::size_t i = 0; i < arg.size(); ++i) {
        const double saved = arg[i];
        arg[i] = saved + h;
        const double fp = f();
        arg[i] = saved - h;
        const double fm = f();
        arg[i] = saved;
        grad[i] = (fp - fm) / (2.0 * h);
    }
    return grad;
}

}  // namespace testsup
