#include "atrm/activations.hpp"

namespace atrm {

template <typename T>
Tensor<T> relu_forward(const Tensor<T>& x) {
    Tensor<T> out(x.shape());
    const T* in = x.data();
    T* o = out.data();
    for (std::size_t i = 0; i < x.size(); ++i) o[i] = in[i] > T{0} ? in[i] : T{0};
    return out;
}

template <typename T>
Tensor<T> relu_backward(const Tensor<T>& grad_out, const Tensor<T>& x) {
    require_same_shape(grad_out, x, "relu_backward");
    Tensor<T> out(x.shape());
    const T* g = grad_out.data();
    const T* in = x.data();
    T* o = out.data();
    for (std::size_t i = 0; i < x.size(); ++i) o[i] = in[i] > T{0} ? g[i] : T{0};
    return out;
}

template Tensor<float> relu_forward(const Tensor<float>&);
template Tensor<double> relu_forward(const Tensor<double>&);
template Tensor<float> relu_backward(const Tensor<float>&, const Tensor<float>&);
template Tensor<double> relu_backward(const Tensor<double>&, const Tensor<double>&);

}  // namespace atrm
