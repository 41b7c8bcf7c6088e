#include "atrm/dataset.hpp"

#include <algorithm>

#include "atrm/image_io.hpp"

namespace fs = std::filesystem;

namespace atrm {
namespace {

bool is_image_file(const fs::path& p) {
    const auto ext = p.extension().string();
    return ext == ".pgm" || ext == ".ppm";
}

}  // namespace

std::vector<fs::path> list_images(const fs::path& dir) {
    if (!fs::is_directory(dir)) {
        throw IoError(IoError::Kind::open_failed, "not a directory: " + dir.string());
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && is_image_file(entry.path())) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    return files;
}

std::vector<LoadedScene> load_dataset(const fs::path& root) {
    if (!fs::is_directory(root)) {
        throw IoError(IoError::Kind::open_failed, "dataset root is not a directory: " + root.string());
    }
    std::vector<fs::path> scene_dirs;
    for (const auto& entry : fs::directory_iterator(root)) {
        if (entry.is_directory()) scene_dirs.push_back(entry.path());
    }
    std::sort(scene_dirs.begin(), scene_dirs.end());
    if (scene_dirs.empty()) {
        throw IoError(IoError::Kind::open_failed, "no scene directories under " + root.string());
    }

    std::vector<LoadedScene> scenes;
    for (const fs::path& dir : scene_dirs) {
        LoadedScene scene;
        scene.name = dir.filename().string();
        bool have_clean = false;
        std::vector<fs::path> frames;
        for (const fs::path& file : list_images(dir)) {
            const std::string stem = file.stem().string();
            if (stem == "clean") {
                scene.clean = read_image(file);
                have_clean = true;
            } else if (stem.rfind("distorted_", 0) == 0) {
                frames.push_back(file);
            }
        }
        if (!have_clean) {
            throw IoError(IoError::Kind::open_failed, "scene " + dir.string() + " has no clean image");
        }
        if (frames.empty()) {
            throw IoError(IoError::Kind::open_failed, "scene " + dir.string() + " has no distorted frames");
        }
        std::sort(frames.begin(), frames.end());
        for (const fs::path& f : frames) scene.distorted.push_back(read_image(f));
        scenes.push_back(std::move(scene));
    }
    return scenes;
}

void save_scene(const fs::path& root, const std::string& name, const ImageFrame* clean,
                const FrameSequence& distorted) {
    const fs::path dir = root / name;
    fs::create_directories(dir);
    const char* ext = nullptr;
    if (clean) {
        ext = clean->channels == 1 ? ".pgm" : ".ppm";
        write_image(*clean, dir / (std::string("clean") + ext));
    }
    for (std::size_t i = 0; i < distorted.size(); ++i) {
        const char* fext = distorted[i].channels == 1 ? ".pgm" : ".ppm";
        char buf[32];
        std::snprintf(buf, sizeof(buf), "distorted_%04zu%s", i + 1, fext);
        write_image(distorted[i], dir / buf);
    }
}

}  // namespace atrm
