#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace ctsev::eval {

using Fold = std::vector<std::size_t>;

// Uniform integer in [0, bound) by rejection sampling, so the sequence is
// identical on every standard library.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);

// Fisher-Yates shuffle driven by uniform_below.
void shuffle_indices(std::vector<std::size_t>& v, std::mt19937_64& rng);

// Stratified k-fold split. Each class's indices are shuffled with the seeded
// generator and dealt round-robin; the dealing position carries over from one
// class to the next so fold sizes differ by at most one as well. Folds are
// returned with indices ascending. Throws std::invalid_argument if k < 2, a
// label is negative, fewer than two classes are present, or any class has
// fewer than k members.
std::vector<Fold> stratified_kfold(std::span<const int> labels, int k, std::uint64_t seed);

}  // namespace ctsev::eval
