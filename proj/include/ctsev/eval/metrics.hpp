#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace ctsev::eval {

// Rows are the true class, columns the predicted class.
class ConfusionMatrix {
public:
    explicit ConfusionMatrix(int classes);

    int classes() const noexcept { return k_; }
    std::uint64_t operator()(int truth, int predicted) const;
    void add(int truth, int predicted, std::uint64_t count = 1);
    std::uint64_t total() const noexcept;
    std::uint64_t trace() const noexcept;

    ConfusionMatrix& operator+=(const ConfusionMatrix& other);
    friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

private:
    int k_;
    std::vector<std::uint64_t> counts_;
};

// Throws std::invalid_argument on a length mismatch or a label outside [0, k).
ConfusionMatrix confusion_matrix(std::span<const int> truth, std::span<const int> predicted, int k);

struct ClassCounts {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;
    std::uint64_t tn = 0;

    friend bool operator==(const ClassCounts&, const ClassCounts&) = default;
};

ClassCounts class_counts(const ConfusionMatrix& cm, int c);

// A ratio whose denominator may be zero; empty means undefined.
using Metric = std::optional<double>;

struct ClassMetrics {
    ClassCounts counts;
    Metric sensitivity;  // tp / (tp + fn), also reported as recall
    Metric specificity;  // tn / (tn + fp)
    Metric accuracy;     // (tp + tn) / total
    Metric precision;    // tp / (tp + fp)
    Metric f1;           // 2 tp / (2 tp + fn + fp)

    const Metric& recall() const noexcept { return sensitivity; }
};

ClassMetrics class_metrics(const ClassCounts& counts);

// trace / total. Throws std::invalid_argument on an empty matrix.
double overall_accuracy(const ConfusionMatrix& cm);

// Mean of all values, undefined if any input is undefined or the span is empty.
Metric mean_of(std::span<const Metric> values);
double mean_of(std::span<const double> values);

}  // namespace ctsev::eval
