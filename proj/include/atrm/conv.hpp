#pragma once

#include "atrm/tensor.hpp"

namespace atrm {

// Stride-1 cross-correlation with zero-filled same padding: output spatial
// size equals input spatial size.
struct ConvSpec {
    int in_channels = 1;
    int out_channels = 1;
    int kernel = 3;  // odd

    int pad() const noexcept { return (kernel - 1) / 2; }
    void validate() const;
};

// input: [C_in,H,W] or [N,C_in,H,W]; weights: [C_out,C_in,n,n]; bias: [C_out].
// Returns a tensor of the same rank with C_out channels.
template <typename T>
Tensor<T> conv2d_forward(const Tensor<T>& input, const Tensor<T>& weights, const Tensor<T>& bias,
                         const ConvSpec& spec);

template <typename T>
struct ConvGrads {
    Tensor<T> input;
    Tensor<T> weights;
    Tensor<T> bias;
};

// Gradients of sum(grad_out * output) w.r.t. input, weights and bias.
template <typename T>
ConvGrads<T> conv2d_backward(const Tensor<T>& grad_out, const Tensor<T>& input,
                             const Tensor<T>& weights, const ConvSpec& spec);

extern template Tensor<float> conv2d_forward(const Tensor<float>&, const Tensor<float>&,
                                             const Tensor<float>&, const ConvSpec&);
extern template Tensor<double> conv2d_forward(const Tensor<double>&, const Tensor<double>&,
                                              const Tensor<double>&, const ConvSpec&);
extern template ConvGrads<float> conv2d_backward(const Tensor<float>&, const Tensor<float>&,
                                                 const Tensor<float>&, const ConvSpec&);
extern template ConvGrads<double> conv2d_backward(const Tensor<double>&, const Tensor<double>&,
                                                  const Tensor<double>&, const ConvSpec&);

}  // namespace atrm
