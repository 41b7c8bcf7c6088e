#pragma once

#include "atrm/tensor.hpp"

namespace atrm {

enum class Mode { train, infer };

inline constexpr double kBnEpsilon = 1e-5;
// Fraction of the old running statistic kept per update.
inline constexpr double kBnMomentum = 0.9;

template <typename T>
struct BNState {
    Tensor<T> running_mean;  // [C]
    Tensor<T> running_var;   // [C]

    static BNState init(std::size_t channels) {
        return BNState{Tensor<T>({channels}, T{0}), Tensor<T>({channels}, T{1})};
    }
};

// Saved by the train-mode forward pass for the backward pass.
template <typename T>
struct BNCache {
    Tensor<T> x_hat;    // normalized input, same shape as x
    Tensor<T> inv_std;  // [C]
};

// Per-channel standardization over all non-channel positions.
// x: [C,H,W] or [N,C,H,W]. Train mode uses batch statistics (biased variance)
// and folds them into the running statistics; infer mode uses running
// statistics only. `cache` may be null when no backward pass is needed.
template <typename T>
Tensor<T> batchnorm_forward(const Tensor<T>& x, const Tensor<T>& gamma, const Tensor<T>& beta,
                            BNState<T>& state, Mode mode, BNCache<T>* cache = nullptr);

template <typename T>
struct BNGrads {
    Tensor<T> x;
    Tensor<T> gamma;
    Tensor<T> beta;
};

// Gradients of the train-mode forward.
template <typename T>
BNGrads<T> batchnorm_backward(const Tensor<T>& grad_out, const Tensor<T>& gamma,
                              const BNCache<T>& cache);

extern template Tensor<float> batchnorm_forward(const Tensor<float>&, const Tensor<float>&,
                                                const Tensor<float>&, BNState<float>&, Mode,
                                                BNCache<float>*);
extern template Tensor<double> batchnorm_forward(const Tensor<double>&, const Tensor<double>&,
                                                 const Tensor<double>&, BNState<double>&, Mode,
                                                 BNCache<double>*);
extern template BNGrads<float> batchnorm_backward(const Tensor<float>&, const Tensor<float>&,
                                                  const BNCache<float>&);
extern template BNGrads<double> batchnorm_backward(const Tensor<double>&, const Tensor<double>&,
                                                   const BNCache<double>&);

}  // namespace atrm
