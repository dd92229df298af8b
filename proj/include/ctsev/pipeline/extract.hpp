#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ctsev/imaging/preprocess.hpp"
#include "ctsev/pipeline/extractor.hpp"
#include "ctsev/pipeline/feature_store.hpp"
#include "ctsev/pipeline/manifest.hpp"

namespace ctsev::pipeline {

// Canonical text of every preprocessing parameter.
std::string describe(const imaging::PreprocessParams& params);

// Hash of the preprocessing parameters and the extractor identity.
std::uint64_t pipeline_fingerprint(const imaging::PreprocessParams& params, const FeatureExtractor& extractor);

struct ExtractFailure {
    std::string id;
    std::string reason;
};

struct ExtractResult {
    FeatureStore store;
    std::vector<ExtractFailure> failures;
    bool cache_hit = false;
    std::size_t computed = 0;
};

struct ExtractOptions {
    std::size_t workers = 0;  // 0 = default_workers()
    std::size_t batch = 0;    // rows per flush; 0 = 4 x workers
    double max_failure_fraction = 0.10;
};

// Preprocesses and embeds every manifest entry, writing rows to `cache` in
// manifest order. An existing cache with the same fingerprint and the same
// ids and labels is returned without recomputation. Per-image read or
// decode failures are recorded and skipped; more than the allowed fraction
// throws DataError and leaves no cache behind.
ExtractResult extract_all(const DatasetManifest& manifest, const imaging::PreprocessParams& params,
                          const FeatureExtractor& extractor, const std::filesystem::path& cache,
                          const ExtractOptions& options = {});

}  // namespace ctsev::pipeline
