#pragma once

#include <cstdint>
#include <span>

namespace ctsev::svm {

enum class KernelKind : std::uint8_t { linear = 0, rbf = 1 };

struct KernelSpec {
    KernelKind kind = KernelKind::linear;
    // rbf width; a non-positive value means 1 / feature_dim, resolved at training.
    double gamma = 0.0;

    KernelSpec resolved(std::size_t dim) const;
};

double dot(std::span<const float> x, std::span<const float> y);
double dot(std::span<const double> x, std::span<const float> y);

// linear: x.y, rbf: exp(-gamma |x - y|^2). Throws std::invalid_argument on a
// dimension mismatch or a non-positive rbf gamma.
double kernel_eval(const KernelSpec& spec, std::span<const float> x, std::span<const float> y);
double kernel_eval(const KernelSpec& spec, std::span<const double> x, std::span<const float> y);

}  // namespace ctsev::svm
