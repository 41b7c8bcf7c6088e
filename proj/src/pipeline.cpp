#include "atrm/pipeline.hpp"

#include <chrono>

#include "atrm/turbulence.hpp"

namespace atrm {
namespace {

Tensor<float> stack3(const ImageFrame& a, const ImageFrame& b, const ImageFrame& c) {
    const std::size_t plane = static_cast<std::size_t>(a.height) * a.width;
    Tensor<float> out({3, static_cast<std::size_t>(a.height), static_cast<std::size_t>(a.width)});
    std::copy(a.pixels.begin(), a.pixels.end(), out.data());
    std::copy(b.pixels.begin(), b.pixels.end(), out.data() + plane);
    std::copy(c.pixels.begin(), c.pixels.end(), out.data() + 2 * plane);
    return out;
}

Tensor<float> replicate3(const ImageFrame& img) { return stack3(img, img, img); }

}  // namespace

void InputMode::validate() const {
    if (in_frames != 1 && in_frames != 3) throw ValueError("input mode: in_frames must be 1 or 3");
    if (avg_window < 1) throw ValueError("input mode: avg_window must be >= 1");
}

std::vector<TrainingExample> build_training_examples(const std::vector<LoadedScene>& scenes,
                                                     const InputMode& mode, int holdout_frames) {
    mode.validate();
    if (holdout_frames < 0) throw ValueError("build_training_examples: negative holdout");

    std::vector<TrainingExample> examples;
    for (const LoadedScene& scene : scenes) {
        const int n = static_cast<int>(scene.distorted.size());
        const int usable = n - holdout_frames;
        if (mode.in_frames == 3 && n < 3) {
            throw ValueError("scene " + scene.name + " has " + std::to_string(n) +
                             " frames; 3-frame mode needs at least 3");
        }
        if (scene.clean.channels != 1) {
            throw ValueError("scene " + scene.name + ": only single-channel scenes are supported");
        }
        const int first_t = mode.in_frames == 1 ? mode.avg_window - 1 : mode.avg_window + 1;
        for (int t = first_t; t < usable; ++t) {
            if (mode.in_frames == 1) {
                ImageFrame y = frame_average(scene.distorted, mode.avg_window, t);
                examples.push_back({y.to_tensor(), scene.clean.to_tensor()});
            } else {
                ImageFrame c0 = frame_average(scene.distorted, mode.avg_window, t - 2);
                ImageFrame c1 = frame_average(scene.distorted, mode.avg_window, t - 1);
                ImageFrame c2 = frame_average(scene.distorted, mode.avg_window, t);
                examples.push_back({stack3(c0, c1, c2), replicate3(scene.clean)});
            }
        }
    }
    if (examples.empty()) {
        throw ValueError("build_training_examples: no usable frames (check holdout and window)");
    }
    return examples;
}

RestoreResult restore_sequence(const Model<float>& model, const FrameSequence& frames,
                               const InputMode& mode) {
    mode.validate();
    const int model_ch = model.config().in_channels;
    if (model_ch != mode.in_frames) {
        throw ValueError("restore: model expects " + std::to_string(model_ch) +
                         " input channels but input mode provides " + std::to_string(mode.in_frames));
    }
    const int n = static_cast<int>(frames.size());
    const int first_t = mode.in_frames == 1 ? mode.avg_window - 1 : mode.avg_window + 1;
    if (first_t >= n) {
        throw ValueError("restore: window of " + std::to_string(mode.avg_window) +
                         " frames exceeds the sequence length " + std::to_string(n));
    }

    RestoreResult result;
    using clock = std::chrono::steady_clock;
    for (int t = first_t; t < n; ++t) {
        Tensor<float> input;
        if (mode.in_frames == 1) {
            input = frame_average(frames, mode.avg_window, t).to_tensor();
        } else {
            input = stack3(frame_average(frames, mode.avg_window, t - 2),
                           frame_average(frames, mode.avg_window, t - 1),
                           frame_average(frames, mode.avg_window, t));
        }
        const auto t0 = clock::now();
        Tensor<float> restored = model.restore(input);
        const auto t1 = clock::now();
        result.seconds += std::chrono::duration<double>(t1 - t0).count();

        ImageFrame out;
        if (mode.in_frames == 1) {
            out = ImageFrame::from_tensor(restored);
        } else {
            // center channel carries the restored frame
            const int H = static_cast<int>(restored.extent(1));
            const int W = static_cast<int>(restored.extent(2));
            out = ImageFrame(W, H, 1);
            const float* src = restored.data() + static_cast<std::size_t>(H) * W;
            std::copy(src, src + static_cast<std::size_t>(H) * W, out.pixels.begin());
        }
        result.pixels += static_cast<double>(out.width) * out.height;
        result.frames.push_back({t, std::move(out)});
    }
    return result;
}

}  // namespace atrm
