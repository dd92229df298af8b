#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ctsev::pipeline {

struct FeatureRow {
    std::string id;
    int label = 0;
    std::vector<float> features;

    friend bool operator==(const FeatureRow&, const FeatureRow&) = default;
};

struct FeatureStore {
    std::uint32_t dim = 0;
    std::uint64_t fingerprint = 0;
    std::vector<FeatureRow> rows;
};

// FSTR cache file, little-endian:
//   "FSTR" | dim u32 | rows u32 | fingerprint u64 |
//   per row: id_len u16 | id | label u8 | f32 x dim
FeatureStore read_feature_store(const std::filesystem::path& path);

// Header only; empty if the file is missing or not a feature store.
struct FeatureStoreHeader {
    std::uint32_t dim = 0;
    std::uint32_t rows = 0;
    std::uint64_t fingerprint = 0;
};
std::optional<FeatureStoreHeader> peek_feature_store(const std::filesystem::path& path);

// Appends rows to "<path>.partial", keeping the header row count current
// after every flush; commit() renames the file into place.
class FeatureStoreWriter {
public:
    FeatureStoreWriter(std::filesystem::path path, std::uint32_t dim, std::uint64_t fingerprint);
    ~FeatureStoreWriter();
    FeatureStoreWriter(const FeatureStoreWriter&) = delete;
    FeatureStoreWriter& operator=(const FeatureStoreWriter&) = delete;

    void append(const FeatureRow& row);
    void flush();
    void commit();

    std::uint32_t rows() const noexcept { return rows_; }

private:
    std::filesystem::path path_;
    std::filesystem::path partial_;
    std::ofstream out_;
    std::uint32_t dim_;
    std::uint32_t rows_ = 0;
    bool committed_ = false;
};

void write_feature_store(const std::filesystem::path& path, const FeatureStore& store);

// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view text, std::uint64_t seed = 0xcbf29ce484222325ull);

}  // namespace ctsev::pipeline
