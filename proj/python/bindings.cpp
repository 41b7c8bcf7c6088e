#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "atrm/checkpoint.hpp"
#include "atrm/image.hpp"
#include "atrm/metrics.hpp"
#include "atrm/model.hpp"
#include "atrm/psf.hpp"
#include "atrm/trainer.hpp"
#include "atrm/turbulence.hpp"

namespace py = pybind11;
using namespace atrm;

namespace {

using FloatArray = py::array_t<float, py::array::c_style | py::array::forcecast>;

Tensor<float> tensor_from_array(const FloatArray& arr) {
    std::vector<std::size_t> shape(arr.ndim());
    for (py::ssize_t i = 0; i < arr.ndim(); ++i) shape[i] = static_cast<std::size_t>(arr.shape(i));
    std::vector<float> data(arr.data(), arr.data() + arr.size());
    return Tensor<float>(std::move(shape), std::move(data));
}

py::array_t<float> array_from_tensor(const Tensor<float>& t) {
    std::vector<py::ssize_t> shape(t.shape().begin(), t.shape().end());
    py::array_t<float> out(shape);
    std::copy(t.values().begin(), t.values().end(), out.mutable_data());
    return out;
}

// [H,W] and [C,H,W] arrays both map onto CHW image frames.
ImageFrame frame_from_array(const FloatArray& arr) {
    if (arr.ndim() == 2) {
        ImageFrame f(static_cast<int>(arr.shape(1)), static_cast<int>(arr.shape(0)), 1);
        std::copy(arr.data(), arr.data() + arr.size(), f.pixels.begin());
        return f;
    }
    if (arr.ndim() == 3) {
        ImageFrame f(static_cast<int>(arr.shape(2)), static_cast<int>(arr.shape(1)),
                     static_cast<int>(arr.shape(0)));
        std::copy(arr.data(), arr.data() + arr.size(), f.pixels.begin());
        return f;
    }
    throw ValueError("expected a [H,W] or [C,H,W] array");
}

py::array_t<float> array_from_frame(const ImageFrame& f) {
    if (f.channels == 1) {
        py::array_t<float> out({f.height, f.width});
        std::copy(f.pixels.begin(), f.pixels.end(), out.mutable_data());
        return out;
    }
    py::array_t<float> out({f.channels, f.height, f.width});
    std::copy(f.pixels.begin(), f.pixels.end(), out.mutable_data());
    return out;
}

Tensor<float> input_tensor(const FloatArray& arr) {
    if (arr.ndim() == 2) {
        Tensor<float> t = tensor_from_array(arr);
        return Tensor<float>({1, t.extent(0), t.extent(1)}, std::vector<float>(t.values().begin(), t.values().end()));
    }
    if (arr.ndim() == 3 || arr.ndim() == 4) return tensor_from_array(arr);
    throw ValueError("expected a 2D, 3D or 4D array");
}

}  // namespace

PYBIND11_MODULE(_atrm, m) {
    m.doc() = "Residual-CNN atmospheric turbulence restoration core";

    py::register_exception<Error>(m, "AtrmError", PyExc_RuntimeError);

    py::class_<NetworkConfig>(m, "NetworkConfig")
        .def(py::init([](int depth, int kernel, int width, int in_channels) {
                 NetworkConfig cfg{depth, kernel, width, in_channels, in_channels};
                 cfg.validate();
                 return cfg;
             }),
             py::arg("depth") = 17, py::arg("kernel") = 5, py::arg("width") = 64,
             py::arg("in_channels") = 1)
        .def_readonly("depth", &NetworkConfig::depth)
        .def_readonly("kernel", &NetworkConfig::kernel)
        .def_readonly("width", &NetworkConfig::width)
        .def_readonly("in_channels", &NetworkConfig::in_channels)
        .def_readonly("out_channels", &NetworkConfig::out_channels);

    m.def("receptive_field", &receptive_field, py::arg("config"));
    m.def("desk_network", &desk_network, py::arg("in_channels") = 1);
    m.def("paper_network", &paper_network, py::arg("in_channels") = 1);

    py::class_<Model<float>>(m, "Model")
        .def_static("init", &Model<float>::init, py::arg("config"), py::arg("seed"))
        .def_property_readonly("config", &Model<float>::config)
        .def("parameter_count", &Model<float>::parameter_count)
        .def("forward_residual",
             [](const Model<float>& model, const FloatArray& y) {
                 return array_from_tensor(model.forward_residual(input_tensor(y)));
             },
             py::arg("y"))
        .def("restore",
             [](const Model<float>& model, const FloatArray& y) {
                 return array_from_tensor(model.restore(input_tensor(y)));
             },
             py::arg("y"))
        .def("save",
             [](const Model<float>& model, const std::filesystem::path& path) {
                 save_checkpoint(model, nullptr, path);
             },
             py::arg("path"))
        .def_static("load", [](const std::filesystem::path& path) {
            return load_checkpoint(path).model;
        }, py::arg("path"));

    m.def("psnr",
          [](const FloatArray& a, const FloatArray& b, double peak) {
              return psnr(frame_from_array(a), frame_from_array(b), peak);
          },
          py::arg("a"), py::arg("b"), py::arg("peak") = 1.0);
    m.def("ssim", [](const FloatArray& a, const FloatArray& b) {
        return ssim(frame_from_array(a), frame_from_array(b));
    }, py::arg("a"), py::arg("b"));

    m.def("generate_psf_bank",
          [](int count, int size, std::uint64_t seed) {
              py::list out;
              for (const Psf& p : generate_psf_bank(count, size, seed)) {
                  py::array_t<double> arr({p.size, p.size});
                  std::copy(p.weights.begin(), p.weights.end(), arr.mutable_data());
                  out.append(arr);
              }
              return out;
          },
          py::arg("count") = 9, py::arg("size") = 15, py::arg("seed") = 0);

    m.def("simulate_sequence",
          [](const FloatArray& clean, int frames, std::uint64_t seed, double noise_sigma) {
              DistortionConfig cfg = DistortionConfig::defaults(seed);
              cfg.noise_sigma = noise_sigma;
              py::list out;
              for (const ImageFrame& f : simulate_sequence(frame_from_array(clean), frames, cfg)) {
                  out.append(array_from_frame(f));
              }
              return out;
          },
          py::arg("clean"), py::arg("frames"), py::arg("seed") = 0, py::arg("noise_sigma") = 0.01);

    m.def("frame_average",
          [](const py::list& frames, int window, int t) {
              FrameSequence seq;
              for (const auto& f : frames) seq.push_back(frame_from_array(f.cast<FloatArray>()));
              return array_from_frame(frame_average(seq, window, t));
          },
          py::arg("frames"), py::arg("window"), py::arg("t"));

    m.def("train_on_pairs",
          [](Model<float>& model, const py::list& pairs, int epochs, int batch_size,
             int patch_size, double lr_start, double lr_end, std::uint64_t seed) {
              std::vector<TrainingExample> data;
              for (const auto& item : pairs) {
                  auto tup = item.cast<py::tuple>();
                  data.push_back({input_tensor(tup[0].cast<FloatArray>()),
                                  input_tensor(tup[1].cast<FloatArray>())});
              }
              TrainingConfig cfg;
              cfg.epochs = epochs;
              cfg.batch_size = batch_size;
              cfg.patch_size = patch_size;
              cfg.lr_start = lr_start;
              cfg.lr_end = lr_end;
              cfg.seed = seed;
              AdamState<float> adam = AdamState<float>::for_model(model);
              const TrainReport report = train(model, data, cfg, adam);
              py::list losses;
              for (const LossRow& row : report.trace) losses.append(row.loss);
              return losses;
          },
          py::arg("model"), py::arg("pairs"), py::arg("epochs") = 10, py::arg("batch_size") = 8,
          py::arg("patch_size") = 32, py::arg("lr_start") = 1e-3, py::arg("lr_end") = 1e-5,
          py::arg("seed") = 0);
}
