#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "ctsev/svm/matrix.hpp"
#include "ctsev/svm/smo.hpp"
#include "ctsev/svm/standardizer.hpp"

namespace ctsev::svm {

// One-vs-rest ensemble over a shared standardizer. Class i's model treats
// label i as +1 and every other label as -1.
struct MulticlassSvm {
    Standardizer standardizer;
    std::vector<BinarySvm> models;

    std::size_t num_classes() const noexcept { return models.size(); }
    std::size_t dim() const noexcept { return standardizer.dim(); }
};

struct Prediction {
    int label = 0;
    std::vector<double> scores;
};

struct MulticlassParams {
    SmoParams smo;
    std::size_t workers = 1;  // one-vs-rest problems solved concurrently
};

// Fits the standardizer on `x`, then one SMO problem per class on the
// standardized rows (sharing one Gram matrix). `labels` must lie in
// [0, num_classes) and every class needs at least two rows, otherwise
// std::invalid_argument.
MulticlassSvm train_multiclass(const Matrix& x, std::span<const int> labels, int num_classes,
                               const MulticlassParams& params);

// Scores are the per-class decision values on the standardized input; the
// label is the first maximal score.
Prediction predict(const MulticlassSvm& model, std::span<const float> x);

// Index of the first maximum.
int argmax(std::span<const double> scores);

// "SVMM" container, little-endian:
//   magic | version u32 | kernel u8 | gamma f64 | C f64 | classes u8 |
//   dim u32 | mean f64[dim] | stddev f64[dim] |
//   per class: sv_count u32 | dim u32 | coeffs f64[sv_count] | bias f64 | svs f32[sv_count*dim]
void save_model(const std::filesystem::path& path, const MulticlassSvm& model);
MulticlassSvm load_model(const std::filesystem::path& path);

}  // namespace ctsev::svm
