#include "atrm/image_io.hpp"

#include <cmath>
#include <fstream>
#include <string>

namespace atrm {
namespace {

// Skips PNM whitespace and '#' comments, then reads one unsigned decimal.
int read_pnm_int(std::istream& in, const std::string& path) {
    int ch = in.get();
    while (ch != EOF) {
        if (ch == '#') {
            while (ch != EOF && ch != '\n') ch = in.get();
        } else if (!std::isspace(ch)) {
            break;
        }
        ch = in.get();
    }
    if (ch == EOF || !std::isdigit(ch)) {
        throw IoError(IoError::Kind::bad_header, "malformed PNM header in " + path);
    }
    long value = 0;
    while (ch != EOF && std::isdigit(ch)) {
        value = value * 10 + (ch - '0');
        if (value > 1 << 30) throw IoError(IoError::Kind::bad_header, "absurd PNM field in " + path);
        ch = in.get();
    }
    if (ch != EOF && !std::isspace(ch)) {
        throw IoError(IoError::Kind::bad_header, "malformed PNM header in " + path);
    }
    return static_cast<int>(value);
}

}  // namespace

std::uint8_t quantize_pixel(float v) {
    if (!(v > 0.0f)) return 0;  // also catches NaN
    if (v >= 1.0f) return 255;
    return static_cast<std::uint8_t>(std::floor(v * 255.0f + 0.5f));
}

ImageFrame read_image(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    const std::string name = path.string();
    if (!in) throw IoError(IoError::Kind::open_failed, "cannot open " + name);

    char m0 = 0, m1 = 0;
    in.get(m0);
    in.get(m1);
    if (!in || m0 != 'P' || (m1 != '5' && m1 != '6')) {
        throw IoError(IoError::Kind::bad_magic, "not a binary PGM/PPM file: " + name);
    }
    const int channels = m1 == '5' ? 1 : 3;

    const int width = read_pnm_int(in, name);
    const int height = read_pnm_int(in, name);
    const int maxval = read_pnm_int(in, name);
    if (width < 1 || height < 1) {
        throw IoError(IoError::Kind::bad_header, "bad PNM dimensions in " + name);
    }
    if (maxval != 255) {
        throw IoError(IoError::Kind::bad_header,
                      "unsupported maxval " + std::to_string(maxval) + " in " + name +
                          " (only 8-bit maxval 255)");
    }
    // header ends with exactly one whitespace byte, already consumed by
    // read_pnm_int; the raster follows.

    const std::size_t count = static_cast<std::size_t>(width) * height * channels;
    std::vector<std::uint8_t> raw(count);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(count));
    if (static_cast<std::size_t>(in.gcount()) != count) {
        throw IoError(IoError::Kind::truncated, "truncated pixel payload in " + name);
    }

    ImageFrame frame(width, height, channels);
    // interleaved on disk -> planar in memory
    const float scale = 1.0f / 255.0f;
    std::size_t idx = 0;
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            for (int c = 0; c < channels; ++c) {
                frame.at(c, y, x) = static_cast<float>(raw[idx++]) * scale;
            }
        }
    }
    return frame;
}

void write_image(const ImageFrame& frame, const std::filesystem::path& path) {
    if (frame.channels != 1 && frame.channels != 3) {
        throw ValueError("write_image: channels must be 1 or 3");
    }
    std::ofstream out(path, std::ios::binary);
    const std::string name = path.string();
    if (!out) throw IoError(IoError::Kind::open_failed, "cannot open " + name + " for write");

    out << (frame.channels == 1 ? "P5" : "P6") << "\n"
        << frame.width << " " << frame.height << "\n255\n";

    std::vector<std::uint8_t> raw(frame.pixel_count());
    std::size_t idx = 0;
    for (int y = 0; y < frame.height; ++y) {
        for (int x = 0; x < frame.width; ++x) {
            for (int c = 0; c < frame.channels; ++c) {
                raw[idx++] = quantize_pixel(frame.at(c, y, x));
            }
        }
    }
    out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (!out) throw IoError(IoError::Kind::write_failed, "write failed: " + name);
}

}  // namespace atrm
