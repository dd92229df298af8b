#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ctsev::pipeline {

inline constexpr int kNumClasses = 3;
inline constexpr std::array<std::string_view, kNumClasses> kClassNames = {"non_covid", "non_severe", "severe"};

// Accepts a class name or its index ("0".."2").
std::optional<int> parse_label(std::string_view token);

struct ManifestEntry {
    std::string id;  // path relative to the dataset root, '/' separated
    std::filesystem::path path;
    int label = 0;
};

struct SkippedFile {
    std::filesystem::path path;
    std::string reason;
};

struct DatasetManifest {
    std::vector<ManifestEntry> entries;
    std::string source;
    std::vector<SkippedFile> skipped;
    std::vector<std::string> warnings;

    std::array<std::size_t, kNumClasses> counts() const;
};

// `source` is either a directory laid out as <root>/{non_covid,non_severe,severe}/*
// or a CSV file of path,label rows (optional header; relative paths resolve
// against the CSV's directory). Files whose leading bytes are not a supported
// image are skipped and listed. Throws DataError for a malformed CSV line, a
// duplicate entry, or an empty result.
DatasetManifest ingest(const std::filesystem::path& source);

// class / count table with a total row.
std::string format_class_counts(const std::array<std::size_t, kNumClasses>& counts);

}  // namespace ctsev::pipeline
