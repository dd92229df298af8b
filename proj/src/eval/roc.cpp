#include "ctsev/eval/roc.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace ctsev::eval {
namespace {

std::pair<std::uint64_t, std::uint64_t> class_sizes(std::span<const double> scores, std::span<const std::uint8_t> positive) {
    if (scores.size() != positive.size()) throw std::invalid_argument("roc: scores and labels differ in length");
    std::uint64_t p = 0;
    for (bool b : positive) p += b;
    const std::uint64_t n = positive.size() - p;
    if (p == 0 || n == 0) throw std::invalid_argument("roc: need at least one positive and one negative");
    return {p, n};
}

}  // namespace

RocCurve roc_curve(std::span<const double> scores, std::span<const std::uint8_t> positive) {
    const auto [p, n] = class_sizes(scores, positive);
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    RocCurve roc;
    roc.points.push_back({0.0, 0.0});
    std::uint64_t tp = 0, fp = 0;
    // Twice the area in units of one (positive, negative) cell.
    std::uint64_t doubled_area = 0;
    for (std::size_t i = 0; i < order.size();) {
        const double threshold = scores[order[i]];
        const std::uint64_t tp_before = tp, fp_before = fp;
        while (i < order.size() && scores[order[i]] == threshold) {
            if (positive[order[i]]) ++tp;
            else ++fp;
            ++i;
        }
        doubled_area += (fp - fp_before) * (tp + tp_before);
        roc.thresholds.push_back(threshold);
        roc.points.push_back({static_cast<double>(fp) / static_cast<double>(n), static_cast<double>(tp) / static_cast<double>(p)});
    }
    roc.auc = static_cast<double>(doubled_area) / (2.0 * static_cast<double>(p) * static_cast<double>(n));
    return roc;
}

}  // namespace ctsev::eval
