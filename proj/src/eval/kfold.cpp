#include "ctsev/eval/kfold.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>

namespace ctsev::eval {

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("uniform_below: bound must be positive");
    const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % bound;
    for (;;) {
        const std::uint64_t v = rng();
        if (v < limit) return v % bound;
    }
}

void shuffle_indices(std::vector<std::size_t>& v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(uniform_below(rng, i));
        std::swap(v[i - 1], v[j]);
    }
}

std::vector<Fold> stratified_kfold(std::span<const int> labels, int k, std::uint64_t seed) {
    if (k < 2) throw std::invalid_argument("stratified_kfold: k must be at least 2");
    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] < 0) throw std::invalid_argument("stratified_kfold: negative label");
        by_class[labels[i]].push_back(i);
    }
    if (by_class.size() < 2) throw std::invalid_argument("stratified_kfold: need at least two classes");
    for (const auto& [label, members] : by_class) {
        if (members.size() < static_cast<std::size_t>(k)) {
            throw std::invalid_argument("stratified_kfold: class " + std::to_string(label) + " has " +
                                        std::to_string(members.size()) + " samples, fewer than k=" + std::to_string(k));
        }
    }

    std::mt19937_64 rng(seed);
    std::vector<Fold> folds(static_cast<std::size_t>(k));
    std::size_t next = 0;
    for (auto& [label, members] : by_class) {
        shuffle_indices(members, rng);
        for (std::size_t idx : members) {
            folds[next].push_back(idx);
            next = (next + 1) % static_cast<std::size_t>(k);
        }
    }
    for (auto& f : folds) std::sort(f.begin(), f.end());
    return folds;
}

}  // namespace ctsev::eval
