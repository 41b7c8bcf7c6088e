#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

namespace atrm {

// Run manifests record everything needed to reproduce a CLI run: the
// command, its configuration, the seed, content hashes of the inputs and
// the produced outputs. Timestamps and throughput are informational; all
// other outputs of a run are bitwise reproducible from (inputs, config,
// seed).
class RunManifest {
public:
    RunManifest(const std::string& command, std::uint64_t seed);

    void set_config(const std::string& key, const nlohmann::json& value);
    void add_input(const std::filesystem::path& path);   // records a content hash
    void add_output(const std::filesystem::path& path);
    void set_throughput(double pixels_per_second, double pixels, double seconds);

    // Stamps the finish time and writes JSON.
    void write(const std::filesystem::path& path);

    const nlohmann::json& json() const noexcept { return doc_; }

private:
    nlohmann::json doc_;
};

// FNV-1a 64-bit over the file bytes.
std::uint64_t fnv1a64_file(const std::filesystem::path& path);

std::string utc_timestamp();

}  // namespace atrm
