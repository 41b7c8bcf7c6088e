#pragma once

#include <filesystem>

#include "atrm/image.hpp"

namespace atrm {

// Binary PGM (P5) and PPM (P6), 8-bit, maxval 255 only. Pixel bytes are
// scaled by 1/255 on read; on write values are clamped to [0,1] and rounded
// half away from zero.
ImageFrame read_image(const std::filesystem::path& path);

// Picks P5 for single-channel frames and P6 for three-channel.
void write_image(const ImageFrame& frame, const std::filesystem::path& path);

// Round-trip quantization byte for one pixel value; exposed for tests.
std::uint8_t quantize_pixel(float v);

}  // namespace atrm
