#include "atrm/batchnorm.hpp"

#include <cmath>

namespace atrm {
namespace {

struct BNDims {
    std::size_t batch;
    std::size_t channels;
    std::size_t plane;  // H*W
};

BNDims resolve(const std::vector<std::size_t>& shape, const char* what) {
    if (shape.size() == 3) return {1, shape[0], shape[1] * shape[2]};
    if (shape.size() == 4) return {shape[0], shape[1], shape[2] * shape[3]};
    throw ShapeError(std::string(what) + ": expected rank 3 or 4, got rank " +
                     std::to_string(shape.size()));
}

template <typename T>
void check_channel_param(const Tensor<T>& p, std::size_t channels, const char* name) {
    if (p.rank() != 1 || p.size() != channels) {
        throw ShapeError(std::string("batchnorm: ") + name + " must have shape [" +
                         std::to_string(channels) + "]");
    }
}

}  // namespace

template <typename T>
Tensor<T> batchnorm_forward(const Tensor<T>& x, const Tensor<T>& gamma, const Tensor<T>& beta,
                            BNState<T>& state, Mode mode, BNCache<T>* cache) {
    const BNDims d = resolve(x.shape(), "batchnorm_forward");
    check_channel_param(gamma, d.channels, "gamma");
    check_channel_param(beta, d.channels, "beta");
    check_channel_param(state.running_mean, d.channels, "running_mean");
    check_channel_param(state.running_var, d.channels, "running_var");

    const std::size_t per_channel = d.batch * d.plane;
    if (mode == Mode::train && per_channel < 2) {
        throw ValueError("batchnorm_forward: train mode needs at least 2 values per channel");
    }

    Tensor<T> out(x.shape());
    if (cache) {
        cache->x_hat = Tensor<T>(x.shape());
        cache->inv_std = Tensor<T>({d.channels});
    }

    const T eps = static_cast<T>(kBnEpsilon);
    const T momentum = static_cast<T>(kBnMomentum);

    for (std::size_t c = 0; c < d.channels; ++c) {
        T mean, inv_std;
        if (mode == Mode::train) {
            // batch statistics over (N,H,W), accumulated in double
            double sum = 0.0;
            for (std::size_t n = 0; n < d.batch; ++n) {
                const T* p = x.data() + (n * d.channels + c) * d.plane;
                for (std::size_t i = 0; i < d.plane; ++i) sum += p[i];
            }
            const double mu = sum / static_cast<double>(per_channel);
            double sq = 0.0;
            for (std::size_t n = 0; n < d.batch; ++n) {
                const T* p = x.data() + (n * d.channels + c) * d.plane;
                for (std::size_t i = 0; i < d.plane; ++i) {
                    const double dvi = static_cast<double>(p[i]) - mu;
                    sq += dvi * dvi;
                }
            }
            const double var = sq / static_cast<double>(per_channel);
            mean = static_cast<T>(mu);
            inv_std = static_cast<T>(1.0 / std::sqrt(var + static_cast<double>(eps)));
            state.running_mean[c] = momentum * state.running_mean[c] + (T{1} - momentum) * mean;
            state.running_var[c] =
                momentum * state.running_var[c] + (T{1} - momentum) * static_cast<T>(var);
        } else {
            mean = state.running_mean[c];
            inv_std = static_cast<T>(
                1.0 / std::sqrt(static_cast<double>(state.running_var[c]) + static_cast<double>(eps)));
        }

        const T g = gamma[c];
        const T b = beta[c];
        for (std::size_t n = 0; n < d.batch; ++n) {
            const T* p = x.data() + (n * d.channels + c) * d.plane;
            T* o = out.data() + (n * d.channels + c) * d.plane;
            T* xh = cache ? cache->x_hat.data() + (n * d.channels + c) * d.plane : nullptr;
            for (std::size_t i = 0; i < d.plane; ++i) {
                const T xhat = (p[i] - mean) * inv_std;
                if (xh) xh[i] = xhat;
                o[i] = g * xhat + b;
            }
        }
        if (cache) cache->inv_std[c] = inv_std;
    }
    return out;
}

template <typename T>
BNGrads<T> batchnorm_backward(const Tensor<T>& grad_out, const Tensor<T>& gamma,
                              const BNCache<T>& cache) {
    const BNDims d = resolve(grad_out.shape(), "batchnorm_backward");
    require_same_shape(grad_out, cache.x_hat, "batchnorm_backward");
    check_channel_param(gamma, d.channels, "gamma");

    const std::size_t per_channel = d.batch * d.plane;
    const T m = static_cast<T>(per_channel);

    BNGrads<T> grads{Tensor<T>(grad_out.shape()), Tensor<T>({d.channels}),
                     Tensor<T>({d.channels})};

    for (std::size_t c = 0; c < d.channels; ++c) {
        double sum_g = 0.0, sum_gx = 0.0;
        for (std::size_t n = 0; n < d.batch; ++n) {
            const std::size_t base = (n * d.channels + c) * d.plane;
            const T* g = grad_out.data() + base;
            const T* xh = cache.x_hat.data() + base;
            for (std::size_t i = 0; i < d.plane; ++i) {
                sum_g += g[i];
                sum_gx += static_cast<double>(g[i]) * xh[i];
            }
        }
        grads.beta[c] = static_cast<T>(sum_g);
        grads.gamma[c] = static_cast<T>(sum_gx);

        // d/dx of gamma * (x - mu(x)) * inv_std(x) + beta, batch statistics:
        // grad_x = gamma*inv_std/m * (m*g - sum(g) - x_hat * sum(g*x_hat))
        const T scale = gamma[c] * cache.inv_std[c] / m;
        const T sg = static_cast<T>(sum_g);
        const T sgx = static_cast<T>(sum_gx);
        for (std::size_t n = 0; n < d.batch; ++n) {
            const std::size_t base = (n * d.channels + c) * d.plane;
            const T* g = grad_out.data() + base;
            const T* xh = cache.x_hat.data() + base;
            T* gx = grads.x.data() + base;
            for (std::size_t i = 0; i < d.plane; ++i) {
                gx[i] = scale * (m * g[i] - sg - xh[i] * sgx);
            }
        }
    }
    return grads;
}

template Tensor<float> batchnorm_forward(const Tensor<float>&, const Tensor<float>&,
                                         const Tensor<float>&, BNState<float>&, Mode,
                                         BNCache<float>*);
template Tensor<double> batchnorm_forward(const Tensor<double>&, const Tensor<double>&,
                                          const Tensor<double>&, BNState<double>&, Mode,
                                          BNCache<double>*);
template BNGrads<float> batchnorm_backward(const Tensor<float>&, const Tensor<float>&,
                                           const BNCache<float>&);
template BNGrads<double> batchnorm_backward(const Tensor<double>&, const Tensor<double>&,
                                            const BNCache<double>&);

}  // namespace atrm
