#pragma once

#include <cstdint>
#include <vector>

#include "atrm/model.hpp"
#include "atrm/tensor.hpp"

namespace atrm {

template <typename T>
struct AdamState {
    T beta1 = static_cast<T>(0.9);
    T beta2 = static_cast<T>(0.999);
    T eps = static_cast<T>(1e-8);
    std::uint64_t step = 0;
    std::vector<Tensor<T>> m;  // first moments, mirror the parameter list
    std::vector<Tensor<T>> v;  // second moments

    static AdamState for_model(const Model<T>& model) {
        AdamState state;
        for (const Tensor<T>* p : model.trainable_parameters()) {
            state.m.emplace_back(p->shape());
            state.v.emplace_back(p->shape());
        }
        return state;
    }
};

// One standard Adam update with bias correction. Increments state.step.
template <typename T>
void adam_step(const std::vector<Tensor<T>*>& params, const std::vector<Tensor<T>>& grads,
               AdamState<T>& state, T lr);

extern template void adam_step(const std::vector<Tensor<float>*>&,
                               const std::vector<Tensor<float>>&, AdamState<float>&, float);
extern template void adam_step(const std::vector<Tensor<double>*>&,
                               const std::vector<Tensor<double>>&, AdamState<double>&, double);

}  // namespace atrm
