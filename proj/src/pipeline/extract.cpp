#include "ctsev/pipeline/extract.hpp"

#include <cmath>
#include <cstdio>
#include <optional>

#include "ctsev/error.hpp"
#include "ctsev/imaging/image_io.hpp"
#include "ctsev/parallel.hpp"

namespace ctsev::pipeline {
namespace {

bool matches(const FeatureStore& store, const DatasetManifest& manifest) {
    if (store.rows.size() != manifest.entries.size()) return false;
    for (std::size_t i = 0; i < store.rows.size(); ++i) {
        if (store.rows[i].id != manifest.entries[i].id || store.rows[i].label != manifest.entries[i].label) return false;
    }
    return true;
}

}  // namespace

std::string describe(const imaging::PreprocessParams& p) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "size=%dx%d median_radius=%d clahe=%d grid=%dx%d clip_factor=%.17g bins=%d",
                  p.target_h, p.target_w, p.median_radius, p.apply_clahe ? 1 : 0, p.clahe.grid_rows,
                  p.clahe.grid_cols, p.clahe.clip_factor, p.clahe.bins);
    return buf;
}

std::uint64_t pipeline_fingerprint(const imaging::PreprocessParams& params, const FeatureExtractor& extractor) {
    return fnv1a(describe(params) + "|" + extractor.describe());
}

ExtractResult extract_all(const DatasetManifest& manifest, const imaging::PreprocessParams& params,
                          const FeatureExtractor& extractor, const std::filesystem::path& cache,
                          const ExtractOptions& options) {
    params.validate();
    const std::uint64_t fingerprint = pipeline_fingerprint(params, extractor);
    const auto dim = static_cast<std::uint32_t>(extractor.feature_length());

    ExtractResult result;
    if (const auto head = peek_feature_store(cache); head && head->fingerprint == fingerprint && head->dim == dim) {
        try {
            FeatureStore store = read_feature_store(cache);
            if (matches(store, manifest)) {
                result.store = std::move(store);
                result.cache_hit = true;
                return result;
            }
        } catch (const DataError&) {
            // unreadable cache: rebuild
        }
    }

    const std::size_t workers = options.workers ? options.workers : default_workers();
    const std::size_t batch = options.batch ? options.batch : 4 * workers;
    const std::size_t total = manifest.entries.size();
    const auto allowed = static_cast<std::size_t>(std::floor(options.max_failure_fraction * static_cast<double>(total)));

    FeatureStoreWriter writer(cache, dim, fingerprint);
    result.store.dim = dim;
    result.store.fingerprint = fingerprint;

    std::vector<std::optional<FeatureRow>> slots;
    std::vector<std::string> errors;
    for (std::size_t start = 0; start < total; start += batch) {
        const std::size_t n = std::min(batch, total - start);
        slots.assign(n, std::nullopt);
        errors.assign(n, {});
        parallel_for(n, workers, [&](std::size_t k) {
            const auto& e = manifest.entries[start + k];
            try {
                const auto img = imaging::preprocess(imaging::read_image(e.path), params);
                slots[k] = FeatureRow{e.id, e.label, extractor.extract(img, 1)};
            } catch (const DataError& ex) {
                errors[k] = ex.what();
            }
        });
        for (std::size_t k = 0; k < n; ++k) {
            if (slots[k]) {
                writer.append(*slots[k]);
                result.store.rows.push_back(std::move(*slots[k]));
                ++result.computed;
            } else {
                result.failures.push_back({manifest.entries[start + k].id, errors[k]});
            }
        }
        if (result.failures.size() > allowed) {
            throw DataError(std::to_string(result.failures.size()) + " of " + std::to_string(total) +
                            " images failed (first: " + result.failures.front().id + ": " +
                            result.failures.front().reason + ")");
        }
        writer.flush();
    }
    writer.commit();
    return result;
}

}  // namespace ctsev::pipeline
