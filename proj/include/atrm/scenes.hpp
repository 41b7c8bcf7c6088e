#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "atrm/image.hpp"

namespace atrm {

// Procedural clean images for the bundled evaluation scenes. All generators
// are deterministic.

// Alternating tiles at full contrast.
ImageFrame make_chessboard(int size, int tiles);

// Sum of oriented sinusoidal gratings; dense mid/high-frequency texture.
ImageFrame make_ripple_texture(int size, std::uint64_t seed);

// Multi-octave value noise with bilinear upsampling; cloudy texture with
// both smooth and sharp content.
ImageFrame make_plasma_texture(int size, std::uint64_t seed);

struct NamedScene {
    std::string name;
    ImageFrame clean;
};

// The three bundled 128x128 scenes: chessboard plus two textures.
std::vector<NamedScene> bundled_scenes();

}  // namespace atrm
