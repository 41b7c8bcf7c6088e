#pragma once

#include "atrm/tensor.hpp"

namespace atrm {

template <typename T>
struct LossResult {
    T value;
    Tensor<T> grad;  // dL/dpred
};

// L = 1/(2m) * sum_i |pred_i - (y_i - x_i)|^2 over m image pairs,
// gradient (1/m) * (pred - (y - x)). m is the batch extent for rank-4
// tensors and 1 otherwise.
template <typename T>
LossResult<T> residual_loss(const Tensor<T>& pred, const Tensor<T>& y, const Tensor<T>& x);

extern template LossResult<float> residual_loss(const Tensor<float>&, const Tensor<float>&,
                                                const Tensor<float>&);
extern template LossResult<double> residual_loss(const Tensor<double>&, const Tensor<double>&,
                                                 const Tensor<double>&);

}  // namespace atrm
