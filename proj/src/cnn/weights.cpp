#include "ctsev/cnn/weights.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <fstream>
#include <stdexcept>

#include <zlib.h>

#include "ctsev/binary_io.hpp"
#include "ctsev/error.hpp"

namespace ctsev::cnn {
namespace {

constexpr std::uint32_t kVersion = 1;

// (block, convs in block, out channels)
constexpr std::array<std::array<int, 3>, 5> kVggBlocks = {{{1, 2, 64}, {2, 2, 128}, {3, 3, 256}, {4, 3, 512}, {5, 3, 512}}};

std::string dims_str(const std::vector<std::uint32_t>& dims) {
    std::string s = "(";
    for (std::size_t i = 0; i < dims.size(); ++i) s += (i ? "," : "") + std::to_string(dims[i]);
    return s + ")";
}

}  // namespace

std::size_t NamedTensor::element_count() const {
    std::size_t n = 1;
    for (auto d : dims) n *= d;
    return n;
}

const NamedTensor& WeightStore::find(const std::string& name) const {
    for (const auto& t : tensors_) {
        if (t.name == name) return t;
    }
    throw std::out_of_range("weight tensor not found: " + name);
}

std::uint32_t WeightStore::checksum() const {
    uLong crc = crc32(0L, Z_NULL, 0);
    for (const auto& t : tensors_) {
        unsigned char le[4];
        const std::uint32_t c = payload_crc32(t.data);
        for (int i = 0; i < 4; ++i) le[i] = static_cast<unsigned char>(c >> (8 * i));
        crc = crc32(crc, le, 4);
    }
    return static_cast<std::uint32_t>(crc);
}

std::uint32_t payload_crc32(std::span<const float> data) {
    static_assert(std::endian::native == std::endian::little, "payload CRC assumes a little-endian host");
    uLong crc = crc32(0L, Z_NULL, 0);
    const auto* bytes = reinterpret_cast<const Bytef*>(data.data());
    std::size_t remaining = data.size_bytes();
    while (remaining > 0) {
        const auto chunk = static_cast<uInt>(std::min<std::size_t>(remaining, 1u << 30));
        crc = crc32(crc, bytes, chunk);
        bytes += chunk;
        remaining -= chunk;
    }
    return static_cast<std::uint32_t>(crc);
}

void write_weight_file(const std::filesystem::path& path, const WeightStore& store) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError(path.string() + ": cannot open for writing");
    io::BinaryWriter w(out);
    w.magic("VGGW");
    w.u32(kVersion);
    w.u32(static_cast<std::uint32_t>(store.size()));
    for (const auto& t : store.tensors()) {
        if (t.data.size() != t.element_count()) {
            throw std::invalid_argument("weight tensor " + t.name + ": payload does not match dims");
        }
        w.u16(static_cast<std::uint16_t>(t.name.size()));
        w.bytes(t.name.data(), t.name.size());
        w.u8(static_cast<std::uint8_t>(t.dims.size()));
        for (auto d : t.dims) w.u32(d);
        w.u32(payload_crc32(t.data));
        w.f32s(t.data);
    }
}

WeightStore read_weight_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError(path.string() + ": cannot open");
    io::BinaryReader r(in, path.string());
    r.expect_magic("VGGW");
    const std::uint32_t version = r.u32();
    if (version != kVersion) {
        throw FormatError(path.string() + ": unsupported VGGW version " + std::to_string(version));
    }
    const std::uint32_t count = r.u32();
    std::vector<NamedTensor> tensors;
    for (std::uint32_t i = 0; i < count; ++i) {
        NamedTensor t;
        t.name = r.string(r.u16());
        const std::uint8_t ndim = r.u8();
        t.dims.resize(ndim);
        std::uint64_t elements = 1;
        for (auto& d : t.dims) {
            d = r.u32();
            elements *= d;
            if (elements > (std::uint64_t{1} << 32)) {
                throw FormatError(path.string() + ": tensor " + t.name + " is implausibly large");
            }
        }
        const std::uint32_t stored_crc = r.u32();
        t.data.resize(static_cast<std::size_t>(elements));
        try {
            r.f32s(t.data);
        } catch (const TruncatedError&) {
            throw TruncatedError(path.string() + ": truncated inside tensor " + t.name);
        }
        const std::uint32_t actual = payload_crc32(t.data);
        if (actual != stored_crc) {
            throw ChecksumError(t.name, path.string() + ": checksum mismatch in tensor " + t.name);
        }
        tensors.push_back(std::move(t));
    }
    if (!r.at_end()) throw FormatError(path.string() + ": trailing bytes after last tensor");
    return WeightStore(std::move(tensors));
}

std::vector<std::string> vgg16_tensor_names() {
    std::vector<std::string> names;
    for (const auto& [block, convs, channels] : kVggBlocks) {
        (void)channels;
        for (int c = 1; c <= convs; ++c) {
            const std::string stem = "block" + std::to_string(block) + "_conv" + std::to_string(c);
            names.push_back(stem + "_w");
            names.push_back(stem + "_b");
        }
    }
    return names;
}

void validate_vgg16(const WeightStore& store) {
    const auto names = vgg16_tensor_names();
    if (store.size() != names.size()) {
        throw ShapeError("VGG-16 expects " + std::to_string(names.size()) + " tensors, found " +
                         std::to_string(store.size()));
    }
    std::uint32_t in_channels = 3;
    std::size_t idx = 0;
    for (const auto& [block, convs, channels] : kVggBlocks) {
        (void)block;
        for (int c = 0; c < convs; ++c) {
            const NamedTensor& w = store[idx];
            const NamedTensor& b = store[idx + 1];
            if (w.name != names[idx] || b.name != names[idx + 1]) {
                throw FormatError("VGG-16 tensor order: expected " + names[idx] + "/" + names[idx + 1] + ", found " +
                                  w.name + "/" + b.name);
            }
            const std::vector<std::uint32_t> want_w = {static_cast<std::uint32_t>(channels), in_channels, 3, 3};
            if (w.dims != want_w) {
                throw ShapeError("shape chain broken at " + w.name + ": expected " + dims_str(want_w) + ", found " +
                                 dims_str(w.dims));
            }
            if (b.dims != std::vector<std::uint32_t>{static_cast<std::uint32_t>(channels)}) {
                throw ShapeError("shape chain broken at " + b.name + ": expected (" + std::to_string(channels) +
                                 "), found " + dims_str(b.dims));
            }
            in_channels = static_cast<std::uint32_t>(channels);
            idx += 2;
        }
    }
}

WeightStore load_weights(const std::filesystem::path& path) {
    WeightStore store = read_weight_file(path);
    validate_vgg16(store);
    return store;
}

}  // namespace ctsev::cnn
