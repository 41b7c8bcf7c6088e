#include "atrm/loss.hpp"

namespace atrm {

template <typename T>
LossResult<T> residual_loss(const Tensor<T>& pred, const Tensor<T>& y, const Tensor<T>& x) {
    require_same_shape(pred, y, "residual_loss");
    require_same_shape(pred, x, "residual_loss");
    if (pred.size() == 0) throw ShapeError("residual_loss: empty batch");

    const std::size_t m = pred.rank() == 4 ? pred.extent(0) : 1;
    const T inv_m = T{1} / static_cast<T>(m);

    LossResult<T> result{T{0}, Tensor<T>(pred.shape())};
    double acc = 0.0;
    const T* p = pred.data();
    const T* yp = y.data();
    const T* xp = x.data();
    T* g = result.grad.data();
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const T diff = p[i] - (yp[i] - xp[i]);
        acc += static_cast<double>(diff) * diff;
        g[i] = diff * inv_m;
    }
    result.value = static_cast<T>(acc / (2.0 * static_cast<double>(m)));
    return result;
}

template LossResult<float> residual_loss(const Tensor<float>&, const Tensor<float>&,
                                         const Tensor<float>&);
template LossResult<double> residual_loss(const Tensor<double>&, const Tensor<double>&,
                                          const Tensor<double>&);

}  // namespace atrm
