#include "ctsev/pipeline/feature_store.hpp"

#include <limits>

#include "ctsev/binary_io.hpp"
#include "ctsev/error.hpp"

namespace ctsev::pipeline {
namespace {

constexpr std::streamoff kRowsOffset = 8;

}  // namespace

std::uint64_t fnv1a(std::string_view text, std::uint64_t seed) {
    std::uint64_t h = seed;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

FeatureStore read_feature_store(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError(path.string() + ": cannot open");
    io::BinaryReader r(in, path.string());
    r.expect_magic("FSTR");
    FeatureStore store;
    store.dim = r.u32();
    const std::uint32_t rows = r.u32();
    store.fingerprint = r.u64();
    if (store.dim == 0) throw FormatError(path.string() + ": zero feature dimension");
    store.rows.reserve(rows);
    for (std::uint32_t i = 0; i < rows; ++i) {
        FeatureRow row;
        row.id = r.string(r.u16());
        row.label = r.u8();
        row.features.resize(store.dim);
        r.f32s(row.features);
        store.rows.push_back(std::move(row));
    }
    if (!r.at_end()) throw FormatError(path.string() + ": trailing bytes after " + std::to_string(rows) + " rows");
    return store;
}

std::optional<FeatureStoreHeader> peek_feature_store(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    char magic[4];
    if (!in.read(magic, 4) || std::string_view(magic, 4) != "FSTR") return std::nullopt;
    try {
        io::BinaryReader r(in, path.string());
        FeatureStoreHeader h;
        h.dim = r.u32();
        h.rows = r.u32();
        h.fingerprint = r.u64();
        return h;
    } catch (const Error&) {
        return std::nullopt;
    }
}

FeatureStoreWriter::FeatureStoreWriter(std::filesystem::path path, std::uint32_t dim, std::uint64_t fingerprint)
    : path_(std::move(path)), partial_(path_.string() + ".partial"), dim_(dim) {
    if (dim_ == 0) throw std::invalid_argument("FeatureStoreWriter: zero dimension");
    if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
    out_.open(partial_, std::ios::binary | std::ios::trunc);
    if (!out_) throw DataError(partial_.string() + ": cannot open for writing");
    io::BinaryWriter w(out_);
    w.magic("FSTR");
    w.u32(dim_);
    w.u32(0);
    w.u64(fingerprint);
}

FeatureStoreWriter::~FeatureStoreWriter() {
    if (!committed_) {
        out_.close();
        std::error_code ec;
        std::filesystem::remove(partial_, ec);
    }
}

void FeatureStoreWriter::append(const FeatureRow& row) {
    if (row.features.size() != dim_) throw std::invalid_argument("FeatureStoreWriter: row dimension mismatch");
    if (row.id.size() > std::numeric_limits<std::uint16_t>::max()) throw DataError("sample id too long: " + row.id);
    if (row.label < 0 || row.label > 255) throw std::invalid_argument("FeatureStoreWriter: label out of range");
    io::BinaryWriter w(out_);
    w.u16(static_cast<std::uint16_t>(row.id.size()));
    w.bytes(row.id.data(), row.id.size());
    w.u8(static_cast<std::uint8_t>(row.label));
    w.f32s(row.features);
    ++rows_;
}

void FeatureStoreWriter::flush() {
    const auto end = out_.tellp();
    out_.seekp(kRowsOffset);
    io::BinaryWriter(out_).u32(rows_);
    out_.seekp(end);
    out_.flush();
    if (!out_) throw DataError(partial_.string() + ": write failed");
}

void FeatureStoreWriter::commit() {
    flush();
    out_.close();
    std::filesystem::rename(partial_, path_);
    committed_ = true;
}

void write_feature_store(const std::filesystem::path& path, const FeatureStore& store) {
    FeatureStoreWriter w(path, store.dim, store.fingerprint);
    for (const auto& row : store.rows) w.append(row);
    w.commit();
}

}  // namespace ctsev::pipeline
