#pragma once

#include "atrm/tensor.hpp"

namespace atrm {

// max(0, x) elementwise.
template <typename T>
Tensor<T> relu_forward(const Tensor<T>& x);

// Masks grad_out where x <= 0 (subgradient 0 at exactly 0).
template <typename T>
Tensor<T> relu_backward(const Tensor<T>& grad_out, const Tensor<T>& x);

extern template Tensor<float> relu_forward(const Tensor<float>&);
extern template Tensor<double> relu_forward(const Tensor<double>&);
extern template Tensor<float> relu_backward(const Tensor<float>&, const Tensor<float>&);
extern template Tensor<double> relu_backward(const Tensor<double>&, const Tensor<double>&);

}  // namespace atrm
