#include "atrm/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace atrm {
namespace {

static_assert(std::endian::native == std::endian::little,
              "checkpoint IO assumes a little-endian host");

class Writer {
public:
    explicit Writer(const std::filesystem::path& path)
        : out_(path, std::ios::binary), path_(path.string()) {
        if (!out_) throw IoError(IoError::Kind::open_failed, "cannot open " + path_ + " for write");
    }

    void bytes(const void* p, std::size_t n) {
        out_.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
        if (!out_) throw IoError(IoError::Kind::write_failed, "write failed: " + path_);
    }

    void u8(std::uint8_t v) { bytes(&v, 1); }
    void u16(std::uint16_t v) { bytes(&v, 2); }
    void u32(std::uint32_t v) { bytes(&v, 4); }
    void u64(std::uint64_t v) { bytes(&v, 8); }
    void f32_blob(const Tensor<float>& t) { bytes(t.data(), t.size() * sizeof(float)); }

    void close() {
        out_.close();
        if (!out_) throw IoError(IoError::Kind::write_failed, "close failed: " + path_);
    }

private:
    std::ofstream out_;
    std::string path_;
};

class Reader {
public:
    explicit Reader(const std::filesystem::path& path)
        : in_(path, std::ios::binary), path_(path.string()) {
        if (!in_) throw IoError(IoError::Kind::open_failed, "cannot open " + path_);
    }

    void bytes(void* p, std::size_t n) {
        in_.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
        if (static_cast<std::size_t>(in_.gcount()) != n) {
            throw IoError(IoError::Kind::truncated, "truncated checkpoint: " + path_);
        }
    }

    std::uint8_t u8() { std::uint8_t v; bytes(&v, 1); return v; }
    std::uint16_t u16() { std::uint16_t v; bytes(&v, 2); return v; }
    std::uint32_t u32() { std::uint32_t v; bytes(&v, 4); return v; }
    std::uint64_t u64() { std::uint64_t v; bytes(&v, 8); return v; }
    void f32_blob(Tensor<float>& t) { bytes(t.data(), t.size() * sizeof(float)); }

    bool at_eof() {
        in_.peek();
        return in_.eof();
    }

    const std::string& path() const { return path_; }

private:
    std::ifstream in_;
    std::string path_;
};

}  // namespace

void save_checkpoint(const Model<float>& model, const AdamState<float>* adam,
                     const std::filesystem::path& path) {
    Writer w(path);
    w.bytes(kCheckpointMagic, 4);
    w.u16(kCheckpointVersion);
    const NetworkConfig& c = model.config();
    w.u32(static_cast<std::uint32_t>(c.depth));
    w.u32(static_cast<std::uint32_t>(c.kernel));
    w.u32(static_cast<std::uint32_t>(c.width));
    w.u32(static_cast<std::uint32_t>(c.in_channels));
    w.u32(static_cast<std::uint32_t>(c.out_channels));
    w.u8(adam ? 1 : 0);

    w.f32_blob(model.first().weights);
    w.f32_blob(model.first().bias);
    for (const auto& h : model.hidden()) {
        w.f32_blob(h.conv.weights);
        w.f32_blob(h.conv.bias);
        w.f32_blob(h.gamma);
        w.f32_blob(h.beta);
        w.f32_blob(h.bn.running_mean);
        w.f32_blob(h.bn.running_var);
    }
    w.f32_blob(model.last().weights);
    w.f32_blob(model.last().bias);

    if (adam) {
        const auto params = model.trainable_parameters();
        if (adam->m.size() != params.size() || adam->v.size() != params.size()) {
            throw ShapeError("save_checkpoint: optimizer state does not mirror parameters");
        }
        for (const auto& t : adam->m) w.f32_blob(t);
        for (const auto& t : adam->v) w.f32_blob(t);
        w.u64(adam->step);
    }
    w.close();
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    Reader r(path);
    char magic[4];
    r.bytes(magic, 4);
    if (std::memcmp(magic, kCheckpointMagic, 4) != 0) {
        throw IoError(IoError::Kind::bad_magic, "bad magic in " + r.path());
    }
    const std::uint16_t version = r.u16();
    if (version != kCheckpointVersion) {
        throw IoError(IoError::Kind::bad_version,
                      "unsupported checkpoint version " + std::to_string(version) + " in " + r.path());
    }

    NetworkConfig c;
    c.depth = static_cast<int>(r.u32());
    c.kernel = static_cast<int>(r.u32());
    c.width = static_cast<int>(r.u32());
    c.in_channels = static_cast<int>(r.u32());
    c.out_channels = static_cast<int>(r.u32());
    try {
        c.validate();
    } catch (const ValueError& e) {
        throw IoError(IoError::Kind::bad_header, std::string("invalid checkpoint config: ") + e.what());
    }
    const bool has_adam = r.u8() != 0;

    // Parameter shells with the right shapes, then fill from the stream.
    Checkpoint ck{Model<float>::init(c, 0), std::nullopt};
    Model<float>& m = ck.model;
    r.f32_blob(m.first().weights);
    r.f32_blob(m.first().bias);
    for (auto& h : m.hidden()) {
        r.f32_blob(h.conv.weights);
        r.f32_blob(h.conv.bias);
        r.f32_blob(h.gamma);
        r.f32_blob(h.beta);
        r.f32_blob(h.bn.running_mean);
        r.f32_blob(h.bn.running_var);
    }
    r.f32_blob(m.last().weights);
    r.f32_blob(m.last().bias);

    if (has_adam) {
        AdamState<float> adam = AdamState<float>::for_model(m);
        for (auto& t : adam.m) r.f32_blob(t);
        for (auto& t : adam.v) r.f32_blob(t);
        adam.step = r.u64();
        ck.adam = std::move(adam);
    }
    if (!r.at_eof()) {
        throw IoError(IoError::Kind::bad_header, "trailing data in checkpoint: " + r.path());
    }
    return ck;
}

}  // namespace atrm
