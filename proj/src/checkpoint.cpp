#include "mgkan/checkpoint.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

namespace mgkan {

namespace {

constexpr char kMagic[4] = {'M', 'G', 'K', 'N'};
constexpr std::uint32_t kVersion = 1;

void write_u32(std::ostream& os, std::uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    os.write(reinterpret_cast<const char*>(b), 4);
}

void write_u64(std::ostream& os, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint32_t read_u32(std::istream& is) {
    unsigned char b[4];
    if (!is.read(reinterpret_cast<char*>(b), 4)) throw CheckpointError("checkpoint: truncated");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
}

std::uint64_t read_u64(std::istream& is) {
    unsigned char b[8];
    if (!is.read(reinterpret_cast<char*>(b), 8)) throw CheckpointError("checkpoint: truncated");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

} // namespace

void save_checkpoint(const std::string& path, const Model& model,
                     const std::string& manifest_json) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw CheckpointError("cannot write checkpoint: " + path);
    os.write(kMagic, 4);
    write_u32(os, kVersion);
    write_u64(os, manifest_json.size());
    os.write(manifest_json.data(), static_cast<std::streamsize>(manifest_json.size()));
    write_u32(os, static_cast<std::uint32_t>(model.params().size()));
    for (const ParamTensor* p : model.params()) {
        write_u32(os, static_cast<std::uint32_t>(p->name.size()));
        os.write(p->name.data(), static_cast<std::streamsize>(p->name.size()));
        write_u32(os, static_cast<std::uint32_t>(p->value.rows()));
        write_u32(os, static_cast<std::uint32_t>(p->value.cols()));
        for (Index c = 0; c < p->value.cols(); ++c)
            for (Index r = 0; r < p->value.rows(); ++r) {
                double d = p->value(r, c);
                os.write(reinterpret_cast<const char*>(&d), sizeof(double));
            }
    }
    if (!os) throw CheckpointError("checkpoint write failed: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw CheckpointError("cannot open checkpoint: " + path);
    char magic[4];
    if (!is.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
        throw CheckpointError("checkpoint: bad magic");
    std::uint32_t version = read_u32(is);
    if (version != kVersion) throw CheckpointError("checkpoint: unsupported version");

    Checkpoint ckpt;
    std::uint64_t mlen = read_u64(is);
    if (mlen > (1ULL << 30)) throw CheckpointError("checkpoint: manifest too large");
    ckpt.manifest_json.resize(mlen);
    if (mlen > 0 && !is.read(ckpt.manifest_json.data(), static_cast<std::streamsize>(mlen)))
        throw CheckpointError("checkpoint: truncated manifest");

    std::uint32_t count = read_u32(is);
    for (std::uint32_t i = 0; i < count; ++i) {
        std::uint32_t nlen = read_u32(is);
        if (nlen > (1U << 16)) throw CheckpointError("checkpoint: name too long");
        std::string name(nlen, '\0');
        if (!is.read(name.data(), nlen)) throw CheckpointError("checkpoint: truncated name");
        std::uint32_t rows = read_u32(is);
        std::uint32_t cols = read_u32(is);
        if (static_cast<std::uint64_t>(rows) * cols > (1ULL << 28))
            throw CheckpointError("checkpoint: tensor too large");
        Matrix m(rows, cols);
        for (std::uint32_t c = 0; c < cols; ++c)
            for (std::uint32_t r = 0; r < rows; ++r) {
                double d;
                if (!is.read(reinterpret_cast<char*>(&d), sizeof(double)))
                    throw CheckpointError("checkpoint: truncated tensor data");
                m(r, c) = d;
            }
        if (!ckpt.tensors.emplace(std::move(name), std::move(m)).second)
            throw CheckpointError("checkpoint: duplicate tensor name");
    }
    return ckpt;
}

void apply_checkpoint(const Checkpoint& ckpt, Model& model) {
    if (ckpt.tensors.size() != model.params().size())
        throw CheckpointError("checkpoint: parameter count mismatch");
    for (ParamTensor* p : model.params()) {
        auto it = ckpt.tensors.find(p->name);
        if (it == ckpt.tensors.end())
            throw CheckpointError("checkpoint: missing tensor " + p->name);
        if (it->second.rows() != p->value.rows() || it->second.cols() != p->value.cols())
            throw CheckpointError("checkpoint: shape mismatch for " + p->name);
        p->value = it->second;
    }
}

} // namespace mgkan
