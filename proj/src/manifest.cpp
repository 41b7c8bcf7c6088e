#include "atrm/manifest.hpp"

#include <ctime>
#include <fstream>
#include <sstream>

#include "atrm/error.hpp"

namespace fs = std::filesystem;

namespace atrm {
namespace {

std::string hex64(std::uint64_t v) {
    std::ostringstream os;
    os << "0x" << std::hex << v;
    return os.str();
}

}  // namespace

std::uint64_t fnv1a64_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(IoError::Kind::open_failed, "cannot open " + path.string());
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    char buf[1 << 16];
    while (in) {
        in.read(buf, sizeof(buf));
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            hash ^= static_cast<unsigned char>(buf[i]);
            hash *= 0x100000001b3ULL;
        }
    }
    return hash;
}

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

RunManifest::RunManifest(const std::string& command, std::uint64_t seed) {
    doc_["tool"] = "atrm";
    doc_["command"] = command;
    doc_["seed"] = seed;
    doc_["started_utc"] = utc_timestamp();
    doc_["inputs"] = nlohmann::json::array();
    doc_["outputs"] = nlohmann::json::array();
    doc_["config"] = nlohmann::json::object();
}

void RunManifest::set_config(const std::string& key, const nlohmann::json& value) {
    doc_["config"][key] = value;
}

void RunManifest::add_input(const fs::path& path) {
    doc_["inputs"].push_back({{"path", path.string()}, {"fnv1a64", hex64(fnv1a64_file(path))}});
}

void RunManifest::add_output(const fs::path& path) {
    doc_["outputs"].push_back(path.string());
}

void RunManifest::set_throughput(double pixels_per_second, double pixels, double seconds) {
    doc_["throughput"] = {{"pixels_per_second", pixels_per_second},
                          {"pixels", pixels},
                          {"seconds", seconds}};
}

void RunManifest::write(const fs::path& path) {
    doc_["finished_utc"] = utc_timestamp();
    std::ofstream out(path);
    if (!out) throw IoError(IoError::Kind::open_failed, "cannot open " + path.string() + " for write");
    out << doc_.dump(2) << "\n";
    if (!out) throw IoError(IoError::Kind::write_failed, "write failed: " + path.string());
}

}  // namespace atrm
