#pragma once

#include <vector>

#include "atrm/tensor.hpp"

namespace atrm {

// Single- or three-channel image, planar channel-major storage, values
// nominally in [0,1]. Transient excursions outside [0,1] are allowed until
// export, where they are clamped.
struct ImageFrame {
    int width = 0;
    int height = 0;
    int channels = 1;
    std::vector<float> pixels;  // [channels][height][width]

    ImageFrame() = default;
    ImageFrame(int w, int h, int c = 1, float fill = 0.0f)
        : width(w), height(h), channels(c),
          pixels(static_cast<std::size_t>(w) * h * c, fill) {
        if (w < 1 || h < 1 || (c != 1 && c != 3)) {
            throw ValueError("image frame: bad dimensions");
        }
    }

    std::size_t pixel_count() const noexcept { return pixels.size(); }

    float& at(int c, int y, int x) {
        return pixels[(static_cast<std::size_t>(c) * height + y) * width + x];
    }
    float at(int c, int y, int x) const {
        return pixels[(static_cast<std::size_t>(c) * height + y) * width + x];
    }

    bool same_shape(const ImageFrame& o) const noexcept {
        return width == o.width && height == o.height && channels == o.channels;
    }

    Tensor<float> to_tensor() const {
        return Tensor<float>({static_cast<std::size_t>(channels), static_cast<std::size_t>(height),
                              static_cast<std::size_t>(width)},
                             pixels);
    }

    static ImageFrame from_tensor(const Tensor<float>& t) {
        if (t.rank() != 3) throw ShapeError("image from_tensor: expected [C,H,W]");
        const int c = static_cast<int>(t.extent(0));
        if (c != 1 && c != 3) throw ShapeError("image from_tensor: channels must be 1 or 3");
        ImageFrame f(static_cast<int>(t.extent(2)), static_cast<int>(t.extent(1)), c);
        f.pixels.assign(t.values().begin(), t.values().end());
        return f;
    }
};

using FrameSequence = std::vector<ImageFrame>;

}  // namespace atrm
