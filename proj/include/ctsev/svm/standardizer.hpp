#pragma once

#include <span>
#include <vector>

#include "ctsev/svm/matrix.hpp"

namespace ctsev::svm {

// Per-feature z-scoring with population statistics. Features with zero
// variance keep stddev 1 so they map to 0.
struct Standardizer {
    std::vector<double> mean;
    std::vector<double> stddev;

    // Requires at least two rows; throws std::invalid_argument otherwise.
    static Standardizer fit(const Matrix& x);

    std::size_t dim() const noexcept { return mean.size(); }
    std::vector<double> apply(std::span<const float> x) const;
    // Row-wise apply, stored back as float.
    Matrix transform(const Matrix& x) const;

    friend bool operator==(const Standardizer&, const Standardizer&) = default;
};

}  // namespace ctsev::svm
