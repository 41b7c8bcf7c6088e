#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "atrm/image.hpp"

namespace atrm {

// On-disk layout: <root>/<scene>/clean.pgm plus distorted_0001.pgm, ...
// (PPM for 3-channel data). Frames are numbered from 1 in file names.
struct LoadedScene {
    std::string name;
    ImageFrame clean;
    FrameSequence distorted;
};

// Loads every scene subdirectory under root, sorted by name. Scenes without
// a clean image or without distorted frames are an error.
std::vector<LoadedScene> load_dataset(const std::filesystem::path& root);

// Writes one scene in the layout above; extension picked by channel count.
void save_scene(const std::filesystem::path& root, const std::string& name,
                const ImageFrame* clean, const FrameSequence& distorted);

// All regular image files directly inside a directory, sorted by filename.
std::vector<std::filesystem::path> list_images(const std::filesystem::path& dir);

}  // namespace atrm
