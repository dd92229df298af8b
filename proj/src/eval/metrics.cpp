#include "ctsev/eval/metrics.hpp"

#include <stdexcept>
#include <string>

namespace ctsev::eval {
namespace {

Metric ratio(std::uint64_t num, std::uint64_t den) {
    if (den == 0) return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

ConfusionMatrix::ConfusionMatrix(int classes) : k_(classes) {
    if (classes < 1) throw std::invalid_argument("confusion matrix: need at least one class");
    counts_.assign(static_cast<std::size_t>(classes) * static_cast<std::size_t>(classes), 0);
}

std::uint64_t ConfusionMatrix::operator()(int truth, int predicted) const {
    return counts_.at(static_cast<std::size_t>(truth) * static_cast<std::size_t>(k_) + static_cast<std::size_t>(predicted));
}

void ConfusionMatrix::add(int truth, int predicted, std::uint64_t count) {
    if (truth < 0 || truth >= k_ || predicted < 0 || predicted >= k_) {
        throw std::invalid_argument("confusion matrix: label out of range (" + std::to_string(truth) + ", " +
                                    std::to_string(predicted) + ") for k=" + std::to_string(k_));
    }
    counts_[static_cast<std::size_t>(truth) * static_cast<std::size_t>(k_) + static_cast<std::size_t>(predicted)] += count;
}

std::uint64_t ConfusionMatrix::total() const noexcept {
    std::uint64_t t = 0;
    for (auto c : counts_) t += c;
    return t;
}

std::uint64_t ConfusionMatrix::trace() const noexcept {
    std::uint64_t t = 0;
    for (int i = 0; i < k_; ++i) t += counts_[static_cast<std::size_t>(i) * static_cast<std::size_t>(k_ + 1)];
    return t;
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
    if (other.k_ != k_) throw std::invalid_argument("confusion matrix: class count mismatch");
    for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
    return *this;
}

ConfusionMatrix confusion_matrix(std::span<const int> truth, std::span<const int> predicted, int k) {
    if (truth.size() != predicted.size()) throw std::invalid_argument("confusion matrix: length mismatch");
    ConfusionMatrix cm(k);
    for (std::size_t i = 0; i < truth.size(); ++i) cm.add(truth[i], predicted[i]);
    return cm;
}

ClassCounts class_counts(const ConfusionMatrix& cm, int c) {
    if (c < 0 || c >= cm.classes()) throw std::invalid_argument("class_counts: class out of range");
    ClassCounts out;
    out.tp = cm(c, c);
    std::uint64_t column = 0, row = 0;
    for (int i = 0; i < cm.classes(); ++i) {
        column += cm(i, c);
        row += cm(c, i);
    }
    out.fp = column - out.tp;
    out.fn = row - out.tp;
    out.tn = cm.total() - out.tp - out.fp - out.fn;
    return out;
}

ClassMetrics class_metrics(const ClassCounts& n) {
    ClassMetrics m;
    m.counts = n;
    m.sensitivity = ratio(n.tp, n.tp + n.fn);
    m.specificity = ratio(n.tn, n.tn + n.fp);
    m.accuracy = ratio(n.tp + n.tn, n.tp + n.fn + n.fp + n.tn);
    m.precision = ratio(n.tp, n.tp + n.fp);
    m.f1 = ratio(2 * n.tp, 2 * n.tp + n.fn + n.fp);
    return m;
}

double overall_accuracy(const ConfusionMatrix& cm) {
    const auto total = cm.total();
    if (total == 0) throw std::invalid_argument("overall_accuracy: empty confusion matrix");
    return static_cast<double>(cm.trace()) / static_cast<double>(total);
}

Metric mean_of(std::span<const Metric> values) {
    if (values.empty()) return std::nullopt;
    double sum = 0.0;
    for (const auto& v : values) {
        if (!v) return std::nullopt;
        sum += *v;
    }
    return sum / static_cast<double>(values.size());
}

double mean_of(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("mean_of: empty input");
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

}  // namespace ctsev::eval
