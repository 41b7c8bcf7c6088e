#pragma once

#include <filesystem>
#include <optional>

#include "atrm/adam.hpp"
#include "atrm/model.hpp"

namespace atrm {

// Checkpoint file layout (all integers little-endian):
//   bytes 0..3   magic "ATRM"
//   bytes 4..5   u16 format version (currently 1)
//   then         u32 depth, kernel, width, in_channels, out_channels
//   then         u8  optimizer-state-present flag
//   then         f32 parameter blobs in model order:
//                  first conv weights [width,in,n,n] row-major, bias;
//                  per hidden layer: weights, bias, gamma, beta,
//                                    running mean, running var;
//                  last conv weights, bias.
//   if flagged   Adam first moments for every trainable parameter in the
//                same order, then second moments, then u64 step counter.
inline constexpr char kCheckpointMagic[4] = {'A', 'T', 'R', 'M'};
inline constexpr std::uint16_t kCheckpointVersion = 1;

struct Checkpoint {
    Model<float> model;
    std::optional<AdamState<float>> adam;
};

void save_checkpoint(const Model<float>& model, const AdamState<float>* adam,
                     const std::filesystem::path& path);

Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace atrm
