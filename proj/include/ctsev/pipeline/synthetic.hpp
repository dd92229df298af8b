#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>

#include "ctsev/imaging/gray_image.hpp"
#include "ctsev/pipeline/manifest.hpp"

namespace ctsev::pipeline {

// CT-like slice: a bright body ellipse holding two dark textured lungs.
// label 0 leaves the lungs clear, 1 adds scattered small bright nodules,
// 2 adds a few large consolidations. Size varies per image; salt noise is
// sprinkled everywhere. Deterministic in `seed`.
imaging::GrayImage synthetic_slice(int label, std::uint64_t seed);

// Writes <dir>/<class>/<class>_NNNN.pgm for each class and returns the counts.
std::array<std::size_t, kNumClasses> generate_synthetic_dataset(const std::filesystem::path& dir,
                                                                std::size_t per_class, std::uint64_t seed);

}  // namespace ctsev::pipeline
