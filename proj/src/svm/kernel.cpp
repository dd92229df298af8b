#include "ctsev/svm/kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace ctsev::svm {
namespace {

template <typename A>
double dot_impl(std::span<const A> x, std::span<const float> y) {
    double acc[4] = {0.0, 0.0, 0.0, 0.0};
    const std::size_t n = x.size();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc[0] += static_cast<double>(x[i]) * y[i];
        acc[1] += static_cast<double>(x[i + 1]) * y[i + 1];
        acc[2] += static_cast<double>(x[i + 2]) * y[i + 2];
        acc[3] += static_cast<double>(x[i + 3]) * y[i + 3];
    }
    for (; i < n; ++i) acc[0] += static_cast<double>(x[i]) * y[i];
    return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

template <typename A>
double sq_dist(std::span<const A> x, std::span<const float> y) {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = static_cast<double>(x[i]) - y[i];
        acc += d * d;
    }
    return acc;
}

template <typename A>
double eval(const KernelSpec& spec, std::span<const A> x, std::span<const float> y) {
    if (x.size() != y.size()) throw std::invalid_argument("kernel: dimension mismatch");
    switch (spec.kind) {
        case KernelKind::linear: return dot_impl(x, y);
        case KernelKind::rbf:
            if (!(spec.gamma > 0.0)) throw std::invalid_argument("kernel: rbf gamma must be positive");
            return std::exp(-spec.gamma * sq_dist(x, y));
    }
    throw std::invalid_argument("kernel: unknown kind");
}

}  // namespace

KernelSpec KernelSpec::resolved(std::size_t dim) const {
    KernelSpec k = *this;
    if (k.kind == KernelKind::rbf && !(k.gamma > 0.0)) k.gamma = 1.0 / static_cast<double>(dim);
    return k;
}

double dot(std::span<const float> x, std::span<const float> y) {
    if (x.size() != y.size()) throw std::invalid_argument("dot: dimension mismatch");
    return dot_impl(x, y);
}

double dot(std::span<const double> x, std::span<const float> y) {
    if (x.size() != y.size()) throw std::invalid_argument("dot: dimension mismatch");
    return dot_impl(x, y);
}

double kernel_eval(const KernelSpec& spec, std::span<const float> x, std::span<const float> y) {
    return eval(spec, x, y);
}

double kernel_eval(const KernelSpec& spec, std::span<const double> x, std::span<const float> y) {
    return eval(spec, x, y);
}

}  // namespace ctsev::svm
