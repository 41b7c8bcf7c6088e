#include "atrm/adam.hpp"

#include <cmath>

namespace atrm {

template <typename T>
void adam_step(const std::vector<Tensor<T>*>& params, const std::vector<Tensor<T>>& grads,
               AdamState<T>& state, T lr) {
    if (params.size() != grads.size() || params.size() != state.m.size() ||
        params.size() != state.v.size()) {
        throw ShapeError("adam_step: parameter/gradient/state list sizes disagree");
    }
    state.step += 1;
    const double bc1 = 1.0 - std::pow(static_cast<double>(state.beta1), state.step);
    const double bc2 = 1.0 - std::pow(static_cast<double>(state.beta2), state.step);

    for (std::size_t pi = 0; pi < params.size(); ++pi) {
        Tensor<T>& theta = *params[pi];
        const Tensor<T>& g = grads[pi];
        require_same_shape(theta, g, "adam_step");
        Tensor<T>& m = state.m[pi];
        Tensor<T>& v = state.v[pi];
        for (std::size_t i = 0; i < theta.size(); ++i) {
            m[i] = state.beta1 * m[i] + (T{1} - state.beta1) * g[i];
            v[i] = state.beta2 * v[i] + (T{1} - state.beta2) * g[i] * g[i];
            const T m_hat = static_cast<T>(m[i] / bc1);
            const T v_hat = static_cast<T>(v[i] / bc2);
            theta[i] -= lr * m_hat / (std::sqrt(v_hat) + state.eps);
        }
    }
}

template void adam_step(const std::vector<Tensor<float>*>&, const std::vector<Tensor<float>>&,
                        AdamState<float>&, float);
template void adam_step(const std::vector<Tensor<double>*>&, const std::vector<Tensor<double>>&,
                        AdamState<double>&, double);

}  // namespace atrm
