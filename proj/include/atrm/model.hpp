#pragma once

#include <cstdint>
#include <vector>

#include "atrm/batchnorm.hpp"
#include "atrm/conv.hpp"
#include "atrm/tensor.hpp"

namespace atrm {

// Residual CNN layout: conv+relu, (d-2) x conv+bn+relu, conv.
// The network predicts the deformation map R(y); restoration is y - R(y).
struct NetworkConfig {
    int depth = 17;
    int kernel = 5;  // odd
    int width = 64;
    int in_channels = 1;   // 1 single-frame mode, 3 moving-object mode
    int out_channels = 1;  // == in_channels

    void validate() const;
};

// d*(n-1)+1 for a stride-1 stack of depth d with n x n kernels.
int receptive_field(const NetworkConfig& config);

template <typename T>
struct ConvLayer {
    Tensor<T> weights;  // [C_out,C_in,n,n]
    Tensor<T> bias;     // [C_out]
};

template <typename T>
struct HiddenLayer {
    ConvLayer<T> conv;
    Tensor<T> gamma;  // [width]
    Tensor<T> beta;   // [width]
    BNState<T> bn;
};

// Intermediate activations kept by forward_train for the backward pass.
template <typename T>
struct ForwardTrace {
    std::vector<Tensor<T>> acts;  // acts[0] = input, acts[k] = output of layer k after relu
    std::vector<Tensor<T>> pre;   // pre-relu activation of layers 1..d-1
    std::vector<BNCache<T>> bn;   // one per hidden layer
};

template <typename T>
class Model {
public:
    Model() = default;

    // He-style init: conv weights ~ N(0, 2/(n*n*fan_in)), biases 0, BN gamma 1,
    // beta 0, running stats (0, 1). Deterministic for a fixed seed.
    static Model init(const NetworkConfig& config, std::uint64_t seed);

    const NetworkConfig& config() const noexcept { return config_; }

    // Deformation map R(y). y: [C,H,W] or [N,C,H,W]. Train mode consumes and
    // updates BN running statistics; infer mode leaves the model untouched.
    Tensor<T> forward_residual(const Tensor<T>& y, Mode mode);
    Tensor<T> forward_residual(const Tensor<T>& y) const;  // infer

    // y - R(y). Values are not clamped here; clamping happens at image export.
    Tensor<T> restore(const Tensor<T>& y) const;

    // Train-mode forward that records everything backward() needs.
    Tensor<T> forward_train(const Tensor<T>& y, ForwardTrace<T>& trace);

    // Gradients w.r.t. every trainable parameter, aligned with
    // trainable_parameters(). grad_residual is dL/dR from the loss.
    std::vector<Tensor<T>> backward(const ForwardTrace<T>& trace,
                                    const Tensor<T>& grad_residual) const;

    // Fixed order: first W,b; per hidden layer W,b,gamma,beta; last W,b.
    std::vector<Tensor<T>*> trainable_parameters();
    std::vector<const Tensor<T>*> trainable_parameters() const;

    // Total stored floats: trainable parameters plus BN running statistics.
    std::size_t parameter_count() const;

    ConvLayer<T>& first() { return first_; }
    const ConvLayer<T>& first() const { return first_; }
    std::vector<HiddenLayer<T>>& hidden() { return hidden_; }
    const std::vector<HiddenLayer<T>>& hidden() const { return hidden_; }
    ConvLayer<T>& last() { return last_; }
    const ConvLayer<T>& last() const { return last_; }

    template <typename U>
    Model<U> cast() const {
        Model<U> out;
        out.config_ = config_;
        out.first_ = {first_.weights.template cast<U>(), first_.bias.template cast<U>()};
        for (const auto& h : hidden_) {
            out.hidden_.push_back(
                {{h.conv.weights.template cast<U>(), h.conv.bias.template cast<U>()},
                 h.gamma.template cast<U>(),
                 h.beta.template cast<U>(),
                 {h.bn.running_mean.template cast<U>(), h.bn.running_var.template cast<U>()}});
        }
        out.last_ = {last_.weights.template cast<U>(), last_.bias.template cast<U>()};
        return out;
    }

    bool operator==(const Model& other) const;

private:
    template <typename U>
    friend class Model;

    ConvSpec first_spec() const;
    ConvSpec hidden_spec() const;
    ConvSpec last_spec() const;

    NetworkConfig config_{};
    ConvLayer<T> first_;
    std::vector<HiddenLayer<T>> hidden_;
    ConvLayer<T> last_;
};

// Parameter count from config alone; must agree with Model::parameter_count().
std::size_t expected_parameter_count(const NetworkConfig& config);

extern template class Model<float>;
extern template class Model<double>;

}  // namespace atrm
