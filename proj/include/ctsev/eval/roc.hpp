#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace ctsev::eval {

struct RocPoint {
    double fpr;
    double tpr;
};

struct RocCurve {
    std::vector<double> thresholds;  // distinct scores, descending
    std::vector<RocPoint> points;    // (0,0), one per threshold
    double auc = 0.0;
};

// Sweeps every distinct score as a ">= threshold" cut. The area is the
// trapezoid sum computed from exact counts, which equals
// (concordant pairs + ties / 2) / (P * N). Throws std::invalid_argument
// unless both classes are present.
RocCurve roc_curve(std::span<const double> scores, std::span<const std::uint8_t> positive);

}  // namespace ctsev::eval
