#include "atrm/model.hpp"

#include <cmath>
#include <random>

#include "atrm/activations.hpp"
#include "atrm/rng.hpp"

namespace atrm {

void NetworkConfig::validate() const {
    if (depth < 3) throw ValueError("network config: depth must be >= 3, got " + std::to_string(depth));
    if (kernel < 1 || kernel % 2 == 0) {
        throw ValueError("network config: kernel must be odd and >= 1, got " + std::to_string(kernel));
    }
    if (width < 1) throw ValueError("network config: width must be positive");
    if (in_channels != 1 && in_channels != 3) {
        throw ValueError("network config: in_channels must be 1 or 3, got " +
                         std::to_string(in_channels));
    }
    if (out_channels != in_channels) {
        throw ValueError("network config: out_channels must equal in_channels");
    }
}

int receptive_field(const NetworkConfig& config) {
    return config.depth * (config.kernel - 1) + 1;
}

std::size_t expected_parameter_count(const NetworkConfig& config) {
    const auto n2 = static_cast<std::size_t>(config.kernel) * config.kernel;
    const auto w = static_cast<std::size_t>(config.width);
    const auto ci = static_cast<std::size_t>(config.in_channels);
    const auto co = static_cast<std::size_t>(config.out_channels);
    const auto hidden = static_cast<std::size_t>(config.depth - 2);
    return (w * ci * n2 + w)                      // first conv
           + hidden * (w * w * n2 + w + 4 * w)    // hidden conv + gamma/beta/mean/var
           + (co * w * n2 + co);                  // last conv
}

namespace {

template <typename T>
ConvLayer<T> init_conv(int c_out, int c_in, int n, std::mt19937_64& rng) {
    const double std_dev = std::sqrt(2.0 / (static_cast<double>(n) * n * c_in));
    std::normal_distribution<double> dist(0.0, std_dev);
    ConvLayer<T> layer{Tensor<T>({static_cast<std::size_t>(c_out), static_cast<std::size_t>(c_in),
                                  static_cast<std::size_t>(n), static_cast<std::size_t>(n)}),
                       Tensor<T>({static_cast<std::size_t>(c_out)})};
    for (auto& v : layer.weights.values()) v = static_cast<T>(dist(rng));
    return layer;
}

}  // namespace

template <typename T>
Model<T> Model<T>::init(const NetworkConfig& config, std::uint64_t seed) {
    config.validate();
    Model<T> model;
    model.config_ = config;
    auto rng = make_rng(seed);
    model.first_ = init_conv<T>(config.width, config.in_channels, config.kernel, rng);
    model.hidden_.reserve(config.depth - 2);
    for (int i = 0; i < config.depth - 2; ++i) {
        HiddenLayer<T> h;
        h.conv = init_conv<T>(config.width, config.width, config.kernel, rng);
        h.gamma = Tensor<T>({static_cast<std::size_t>(config.width)}, T{1});
        h.beta = Tensor<T>({static_cast<std::size_t>(config.width)}, T{0});
        h.bn = BNState<T>::init(config.width);
        model.hidden_.push_back(std::move(h));
    }
    model.last_ = init_conv<T>(config.out_channels, config.width, config.kernel, rng);
    return model;
}

template <typename T>
ConvSpec Model<T>::first_spec() const {
    return {config_.in_channels, config_.width, config_.kernel};
}
template <typename T>
ConvSpec Model<T>::hidden_spec() const {
    return {config_.width, config_.width, config_.kernel};
}
template <typename T>
ConvSpec Model<T>::last_spec() const {
    return {config_.width, config_.out_channels, config_.kernel};
}

template <typename T>
Tensor<T> Model<T>::forward_residual(const Tensor<T>& y, Mode mode) {
    Tensor<T> act = relu_forward(conv2d_forward(y, first_.weights, first_.bias, first_spec()));
    for (auto& h : hidden_) {
        Tensor<T> c = conv2d_forward(act, h.conv.weights, h.conv.bias, hidden_spec());
        act = relu_forward(batchnorm_forward(c, h.gamma, h.beta, h.bn, mode));
    }
    return conv2d_forward(act, last_.weights, last_.bias, last_spec());
}

template <typename T>
Tensor<T> Model<T>::forward_residual(const Tensor<T>& y) const {
    // Infer mode never touches BN state; the const_cast is contained here.
    return const_cast<Model<T>*>(this)->forward_residual(y, Mode::infer);
}

template <typename T>
Tensor<T> Model<T>::restore(const Tensor<T>& y) const {
    Tensor<T> residual = forward_residual(y);
    Tensor<T> out(y.shape());
    const T* yp = y.data();
    const T* rp = residual.data();
    T* op = out.data();
    for (std::size_t i = 0; i < y.size(); ++i) op[i] = yp[i] - rp[i];
    return out;
}

template <typename T>
Tensor<T> Model<T>::forward_train(const Tensor<T>& y, ForwardTrace<T>& trace) {
    trace.acts.clear();
    trace.pre.clear();
    trace.bn.clear();
    trace.acts.push_back(y);

    Tensor<T> pre = conv2d_forward(y, first_.weights, first_.bias, first_spec());
    trace.pre.push_back(pre);
    trace.acts.push_back(relu_forward(pre));

    for (auto& h : hidden_) {
        Tensor<T> c = conv2d_forward(trace.acts.back(), h.conv.weights, h.conv.bias, hidden_spec());
        BNCache<T> cache;
        Tensor<T> b = batchnorm_forward(c, h.gamma, h.beta, h.bn, Mode::train, &cache);
        trace.bn.push_back(std::move(cache));
        trace.pre.push_back(b);
        trace.acts.push_back(relu_forward(b));
    }
    return conv2d_forward(trace.acts.back(), last_.weights, last_.bias, last_spec());
}

template <typename T>
std::vector<Tensor<T>> Model<T>::backward(const ForwardTrace<T>& trace,
                                          const Tensor<T>& grad_residual) const {
    const std::size_t n_hidden = hidden_.size();
    if (trace.acts.size() != n_hidden + 2 || trace.pre.size() != n_hidden + 1 ||
        trace.bn.size() != n_hidden) {
        throw ShapeError("model backward: trace does not match model depth");
    }

    // Grad slots in parameter order; filled back to front.
    std::vector<Tensor<T>> grads(2 + 4 * n_hidden + 2);

    ConvGrads<T> last_g = conv2d_backward(grad_residual, trace.acts.back(), last_.weights, last_spec());
    grads[2 + 4 * n_hidden] = std::move(last_g.weights);
    grads[2 + 4 * n_hidden + 1] = std::move(last_g.bias);

    Tensor<T> g = std::move(last_g.input);
    for (std::size_t i = n_hidden; i-- > 0;) {
        g = relu_backward(g, trace.pre[i + 1]);
        BNGrads<T> bn_g = batchnorm_backward(g, hidden_[i].gamma, trace.bn[i]);
        grads[2 + 4 * i + 2] = std::move(bn_g.gamma);
        grads[2 + 4 * i + 3] = std::move(bn_g.beta);
        ConvGrads<T> conv_g =
            conv2d_backward(bn_g.x, trace.acts[i + 1], hidden_[i].conv.weights, hidden_spec());
        grads[2 + 4 * i] = std::move(conv_g.weights);
        grads[2 + 4 * i + 1] = std::move(conv_g.bias);
        g = std::move(conv_g.input);
    }

    g = relu_backward(g, trace.pre[0]);
    ConvGrads<T> first_g = conv2d_backward(g, trace.acts[0], first_.weights, first_spec());
    grads[0] = std::move(first_g.weights);
    grads[1] = std::move(first_g.bias);
    return grads;
}

template <typename T>
std::vector<Tensor<T>*> Model<T>::trainable_parameters() {
    std::vector<Tensor<T>*> out;
    out.reserve(2 + 4 * hidden_.size() + 2);
    out.push_back(&first_.weights);
    out.push_back(&first_.bias);
    for (auto& h : hidden_) {
        out.push_back(&h.conv.weights);
        out.push_back(&h.conv.bias);
        out.push_back(&h.gamma);
        out.push_back(&h.beta);
    }
    out.push_back(&last_.weights);
    out.push_back(&last_.bias);
    return out;
}

template <typename T>
std::vector<const Tensor<T>*> Model<T>::trainable_parameters() const {
    auto mutable_list = const_cast<Model<T>*>(this)->trainable_parameters();
    return {mutable_list.begin(), mutable_list.end()};
}

template <typename T>
std::size_t Model<T>::parameter_count() const {
    std::size_t n = first_.weights.size() + first_.bias.size();
    for (const auto& h : hidden_) {
        n += h.conv.weights.size() + h.conv.bias.size() + h.gamma.size() + h.beta.size() +
             h.bn.running_mean.size() + h.bn.running_var.size();
    }
    return n + last_.weights.size() + last_.bias.size();
}

template <typename T>
bool Model<T>::operator==(const Model& other) const {
    if (config_.depth != other.config_.depth || config_.kernel != other.config_.kernel ||
        config_.width != other.config_.width || config_.in_channels != other.config_.in_channels ||
        config_.out_channels != other.config_.out_channels) {
        return false;
    }
    if (!(first_.weights == other.first_.weights && first_.bias == other.first_.bias)) return false;
    if (hidden_.size() != other.hidden_.size()) return false;
    for (std::size_t i = 0; i < hidden_.size(); ++i) {
        const auto& a = hidden_[i];
        const auto& b = other.hidden_[i];
        if (!(a.conv.weights == b.conv.weights && a.conv.bias == b.conv.bias &&
              a.gamma == b.gamma && a.beta == b.beta &&
              a.bn.running_mean == b.bn.running_mean && a.bn.running_var == b.bn.running_var)) {
            return false;
        }
    }
    return last_.weights == other.last_.weights && last_.bias == other.last_.bias;
}

template class Model<float>;
template class Model<double>;

}  // namespace atrm
