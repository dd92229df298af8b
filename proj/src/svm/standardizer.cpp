#include "ctsev/svm/standardizer.hpp"

#include <cmath>

namespace ctsev::svm {

Standardizer Standardizer::fit(const Matrix& x) {
    if (x.rows() < 2) throw std::invalid_argument("standardizer: need at least two rows");
    const std::size_t d = x.cols();
    Standardizer s;
    s.mean.assign(d, 0.0);
    s.stddev.assign(d, 0.0);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const auto r = x.row(i);
        for (std::size_t j = 0; j < d; ++j) s.mean[j] += r[j];
    }
    const double n = static_cast<double>(x.rows());
    for (double& m : s.mean) m /= n;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const auto r = x.row(i);
        for (std::size_t j = 0; j < d; ++j) {
            const double c = r[j] - s.mean[j];
            s.stddev[j] += c * c;
        }
    }
    for (double& v : s.stddev) {
        v = std::sqrt(v / n);
        if (!(v > 0.0)) v = 1.0;
    }
    return s;
}

std::vector<double> Standardizer::apply(std::span<const float> x) const {
    if (x.size() != dim()) throw std::invalid_argument("standardizer: dimension mismatch");
    std::vector<double> out(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) out[j] = (x[j] - mean[j]) / stddev[j];
    return out;
}

Matrix Standardizer::transform(const Matrix& x) const {
    if (x.cols() != dim()) throw std::invalid_argument("standardizer: dimension mismatch");
    Matrix out(x.rows(), x.cols());
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const auto src = x.row(i);
        auto dst = out.row(i);
        for (std::size_t j = 0; j < src.size(); ++j) dst[j] = static_cast<float>((src[j] - mean[j]) / stddev[j]);
    }
    return out;
}

}  // namespace ctsev::svm
