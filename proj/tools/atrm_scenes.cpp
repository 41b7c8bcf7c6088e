// Writes the bundled clean test scenes as PGM files. The repository's
// data/scenes/ images were produced by this tool.
#include <filesystem>
#include <iostream>

#include "atrm/image_io.hpp"
#include "atrm/scenes.hpp"

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: atrm-scenes <output-dir>\n";
        return 1;
    }
    const std::filesystem::path out = argv[1];
    std::filesystem::create_directories(out);
    for (const atrm::NamedScene& scene : atrm::bundled_scenes()) {
        const auto path = out / (scene.name + ".pgm");
        atrm::write_image(scene.clean, path);
        std::cout << path.string() << "\n";
    }
    return 0;
}
