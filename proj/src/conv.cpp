#include "atrm/conv.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cstring>
#include <sstream>

namespace atrm {
namespace {

template <typename T>
using RowMat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using MapMat = Eigen::Map<RowMat<T>, 0, Eigen::OuterStride<>>;
template <typename T>
using ConstMapMat = Eigen::Map<const RowMat<T>, 0, Eigen::OuterStride<>>;

struct ConvDims {
    std::size_t batch;  // 1 for rank-3 inputs
    std::size_t c_in;
    std::size_t height;
    std::size_t width;
    bool batched;
};

ConvDims resolve_dims(const std::vector<std::size_t>& shape, const ConvSpec& spec,
                      const char* what) {
    ConvDims d{};
    if (shape.size() == 3) {
        d = {1, shape[0], shape[1], shape[2], false};
    } else if (shape.size() == 4) {
        d = {shape[0], shape[1], shape[2], shape[3], true};
    } else {
        throw ShapeError(std::string(what) + ": expected rank 3 or 4 input, got rank " +
                         std::to_string(shape.size()));
    }
    if (d.c_in != static_cast<std::size_t>(spec.in_channels)) {
        std::ostringstream os;
        os << what << ": input channel dimension is " << d.c_in << ", spec expects "
           << spec.in_channels;
        throw ShapeError(os.str());
    }
    return d;
}

void check_weights(const std::vector<std::size_t>& wshape, const ConvSpec& spec,
                   const char* what) {
    const auto co = static_cast<std::size_t>(spec.out_channels);
    const auto ci = static_cast<std::size_t>(spec.in_channels);
    const auto n = static_cast<std::size_t>(spec.kernel);
    if (wshape != std::vector<std::size_t>{co, ci, n, n}) {
        std::ostringstream os;
        os << what << ": weight shape does not match spec [" << co << "," << ci << "," << n << ","
           << n << "]";
        throw ShapeError(os.str());
    }
}

// Row block size for the im2col buffer, bounded to keep the scratch matrix
// around 32 MB so large frames do not blow up memory.
std::size_t pick_block_rows(std::size_t height, std::size_t width, std::size_t k) {
    const std::size_t budget = 8u << 20;  // elements
    std::size_t rows = budget / std::max<std::size_t>(1, k * width);
    return std::clamp<std::size_t>(rows, 1, height);
}

// Fills `col` (K x blockN, K = C_in*n*n, blockN = nrows*W) with the zero-padded
// input patches for output rows [row0, row0+nrows). Row-wise copies: for a fixed
// (ci,ky,kx) the column run of one output row is a contiguous slice of one input
// row shifted by kx-pad.
template <typename T>
void im2col_block(const T* img, const ConvDims& d, int kernel, int pad, std::size_t row0,
                  std::size_t nrows, T* col) {
    const std::size_t W = d.width;
    const std::size_t H = d.height;
    const std::size_t block_n = nrows * W;
    const int n = kernel;
    T* dst = col;
    for (std::size_t ci = 0; ci < d.c_in; ++ci) {
        const T* plane = img + ci * H * W;
        for (int ky = 0; ky < n; ++ky) {
            for (int kx = 0; kx < n; ++kx) {
                const int dx = kx - pad;
                for (std::size_t r = 0; r < nrows; ++r) {
                    const long iy = static_cast<long>(row0 + r) + ky - pad;
                    T* out_row = dst + r * W;
                    if (iy < 0 || iy >= static_cast<long>(H)) {
                        std::fill(out_row, out_row + W, T{0});
                        continue;
                    }
                    const T* in_row = plane + static_cast<std::size_t>(iy) * W;
                    // valid destination columns: ox with ox+dx in [0, W)
                    const long Wl = static_cast<long>(W);
                    const long first = std::clamp<long>(-dx, 0, Wl);
                    const long last = std::clamp<long>(Wl - dx, 0, Wl);
                    std::fill(out_row, out_row + first, T{0});
                    if (last > first) {
                        std::memcpy(out_row + first, in_row + first + dx,
                                    static_cast<std::size_t>(last - first) * sizeof(T));
                    }
                    std::fill(out_row + last, out_row + W, T{0});
                }
                dst += block_n;
            }
        }
    }
}

// Scatter-add transpose of im2col_block: accumulates `col` back into `img_grad`.
template <typename T>
void col2im_block(const T* col, const ConvDims& d, int kernel, int pad, std::size_t row0,
                  std::size_t nrows, T* img_grad) {
    const std::size_t W = d.width;
    const std::size_t H = d.height;
    const std::size_t block_n = nrows * W;
    const int n = kernel;
    const T* src = col;
    for (std::size_t ci = 0; ci < d.c_in; ++ci) {
        T* plane = img_grad + ci * H * W;
        for (int ky = 0; ky < n; ++ky) {
            for (int kx = 0; kx < n; ++kx) {
                const int dx = kx - pad;
                for (std::size_t r = 0; r < nrows; ++r) {
                    const long iy = static_cast<long>(row0 + r) + ky - pad;
                    if (iy < 0 || iy >= static_cast<long>(H)) continue;
                    const T* in_row = src + r * W;
                    T* out_row = plane + static_cast<std::size_t>(iy) * W;
                    const long Wl = static_cast<long>(W);
                    const long first = std::clamp<long>(-dx, 0, Wl);
                    const long last = std::clamp<long>(Wl - dx, 0, Wl);
                    for (long ox = first; ox < last; ++ox) out_row[ox + dx] += in_row[ox];
                }
                src += block_n;
            }
        }
    }
}

}  // namespace

void ConvSpec::validate() const {
    if (in_channels < 1 || out_channels < 1) {
        throw ValueError("conv spec: channel counts must be positive");
    }
    if (kernel < 1 || kernel % 2 == 0) {
        throw ValueError("conv spec: kernel must be odd and >= 1, got " + std::to_string(kernel));
    }
}

template <typename T>
Tensor<T> conv2d_forward(const Tensor<T>& input, const Tensor<T>& weights, const Tensor<T>& bias,
                         const ConvSpec& spec) {
    spec.validate();
    const ConvDims d = resolve_dims(input.shape(), spec, "conv2d_forward");
    check_weights(weights.shape(), spec, "conv2d_forward");
    if (bias.size() != static_cast<std::size_t>(spec.out_channels)) {
        throw ShapeError("conv2d_forward: bias length " + std::to_string(bias.size()) +
                         " != out_channels " + std::to_string(spec.out_channels));
    }

    const std::size_t co = static_cast<std::size_t>(spec.out_channels);
    const std::size_t K = d.c_in * spec.kernel * spec.kernel;
    const std::size_t HW = d.height * d.width;

    std::vector<std::size_t> out_shape =
        d.batched ? std::vector<std::size_t>{d.batch, co, d.height, d.width}
                  : std::vector<std::size_t>{co, d.height, d.width};
    Tensor<T> out(std::move(out_shape));

    const std::size_t block_rows = pick_block_rows(d.height, d.width, K);
    std::vector<T> col(K * block_rows * d.width);

    ConstMapMat<T> wmat(weights.data(), static_cast<Eigen::Index>(co),
                        static_cast<Eigen::Index>(K), Eigen::OuterStride<>(static_cast<Eigen::Index>(K)));

    for (std::size_t nidx = 0; nidx < d.batch; ++nidx) {
        const T* img = input.data() + nidx * d.c_in * HW;
        T* dst = out.data() + nidx * co * HW;
        for (std::size_t row0 = 0; row0 < d.height; row0 += block_rows) {
            const std::size_t nrows = std::min(block_rows, d.height - row0);
            const std::size_t block_n = nrows * d.width;
            im2col_block(img, d, spec.kernel, spec.pad(), row0, nrows, col.data());

            ConstMapMat<T> colmat(col.data(), static_cast<Eigen::Index>(K),
                                  static_cast<Eigen::Index>(block_n),
                                  Eigen::OuterStride<>(static_cast<Eigen::Index>(block_n)));
            MapMat<T> outmat(dst + row0 * d.width, static_cast<Eigen::Index>(co),
                             static_cast<Eigen::Index>(block_n),
                             Eigen::OuterStride<>(static_cast<Eigen::Index>(HW)));
            outmat.noalias() = wmat * colmat;
        }
        for (std::size_t c = 0; c < co; ++c) {
            const T b = bias[c];
            T* row = dst + c * HW;
            for (std::size_t i = 0; i < HW; ++i) row[i] += b;
        }
    }
    return out;
}

template <typename T>
ConvGrads<T> conv2d_backward(const Tensor<T>& grad_out, const Tensor<T>& input,
                             const Tensor<T>& weights, const ConvSpec& spec) {
    spec.validate();
    const ConvDims d = resolve_dims(input.shape(), spec, "conv2d_backward");
    check_weights(weights.shape(), spec, "conv2d_backward");

    const std::size_t co = static_cast<std::size_t>(spec.out_channels);
    const std::size_t K = d.c_in * spec.kernel * spec.kernel;
    const std::size_t HW = d.height * d.width;

    std::vector<std::size_t> go_shape =
        d.batched ? std::vector<std::size_t>{d.batch, co, d.height, d.width}
                  : std::vector<std::size_t>{co, d.height, d.width};
    if (grad_out.shape() != go_shape) {
        throw ShapeError("conv2d_backward: grad_out shape " + shape_string(grad_out) +
                         " does not match forward output");
    }

    ConvGrads<T> grads{Tensor<T>(input.shape()), Tensor<T>(weights.shape()),
                       Tensor<T>({co})};

    for (std::size_t c = 0; c < co; ++c) {
        T acc{0};
        for (std::size_t nidx = 0; nidx < d.batch; ++nidx) {
            const T* row = grad_out.data() + (nidx * co + c) * HW;
            for (std::size_t i = 0; i < HW; ++i) acc += row[i];
        }
        grads.bias[c] = acc;
    }

    const std::size_t block_rows = pick_block_rows(d.height, d.width, K);
    std::vector<T> col(K * block_rows * d.width);
    std::vector<T> col_grad(K * block_rows * d.width);

    ConstMapMat<T> wmat(weights.data(), static_cast<Eigen::Index>(co),
                        static_cast<Eigen::Index>(K),
                        Eigen::OuterStride<>(static_cast<Eigen::Index>(K)));
    MapMat<T> gwmat(grads.weights.data(), static_cast<Eigen::Index>(co),
                    static_cast<Eigen::Index>(K),
                    Eigen::OuterStride<>(static_cast<Eigen::Index>(K)));

    for (std::size_t nidx = 0; nidx < d.batch; ++nidx) {
        const T* img = input.data() + nidx * d.c_in * HW;
        const T* go = grad_out.data() + nidx * co * HW;
        T* gi = grads.input.data() + nidx * d.c_in * HW;
        for (std::size_t row0 = 0; row0 < d.height; row0 += block_rows) {
            const std::size_t nrows = std::min(block_rows, d.height - row0);
            const std::size_t block_n = nrows * d.width;
            im2col_block(img, d, spec.kernel, spec.pad(), row0, nrows, col.data());

            ConstMapMat<T> colmat(col.data(), static_cast<Eigen::Index>(K),
                                  static_cast<Eigen::Index>(block_n),
                                  Eigen::OuterStride<>(static_cast<Eigen::Index>(block_n)));
            ConstMapMat<T> gomat(go + row0 * d.width, static_cast<Eigen::Index>(co),
                                 static_cast<Eigen::Index>(block_n),
                                 Eigen::OuterStride<>(static_cast<Eigen::Index>(HW)));
            gwmat.noalias() += gomat * colmat.transpose();

            MapMat<T> cgmat(col_grad.data(), static_cast<Eigen::Index>(K),
                            static_cast<Eigen::Index>(block_n),
                            Eigen::OuterStride<>(static_cast<Eigen::Index>(block_n)));
            cgmat.noalias() = wmat.transpose() * gomat;
            col2im_block(col_grad.data(), d, spec.kernel, spec.pad(), row0, nrows, gi);
        }
    }
    return grads;
}

template Tensor<float> conv2d_forward(const Tensor<float>&, const Tensor<float>&,
                                      const Tensor<float>&, const ConvSpec&);
template Tensor<double> conv2d_forward(const Tensor<double>&, const Tensor<double>&,
                                       const Tensor<double>&, const ConvSpec&);
template ConvGrads<float> conv2d_backward(const Tensor<float>&, const Tensor<float>&,
                                          const Tensor<float>&, const ConvSpec&);
template ConvGrads<double> conv2d_backward(const Tensor<double>&, const Tensor<double>&,
                                           const Tensor<double>&, const ConvSpec&);

}  // namespace atrm
