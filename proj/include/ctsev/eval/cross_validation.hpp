#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ctsev/error.hpp"
#include "ctsev/eval/metrics.hpp"
#include "ctsev/eval/roc.hpp"
#include "ctsev/svm/matrix.hpp"
#include "ctsev/svm/multiclass.hpp"

namespace ctsev::eval {

struct CvDataset {
    std::vector<std::string> ids;  // unique; fixes the canonical sample order
    std::vector<int> labels;
    svm::Matrix features;
};

struct CvParams {
    int folds = 10;
    std::uint64_t seed = 42;
    int num_classes = 3;
    svm::SmoParams smo;
    std::size_t workers = 1;  // folds trained concurrently
};

// One held-out prediction.
struct OutOfFold {
    int fold = 0;
    std::string id;
    int truth = 0;
    int predicted = 0;
    std::vector<double> scores;
};

struct FoldReport {
    int fold = 0;
    std::size_t support = 0;
    double accuracy = 0.0;
    Metric precision;  // macro averages over classes
    Metric recall;
    Metric f1;
    ConfusionMatrix confusion{1};
};

struct FoldAverages {
    double support = 0.0;
    double accuracy = 0.0;
    Metric precision;
    Metric recall;
    Metric f1;
};

struct ClassReport {
    std::size_t support = 0;
    ClassMetrics metrics;
    std::optional<RocCurve> roc;  // absent when the class never occurs
};

struct CvReport {
    std::vector<FoldReport> folds;
    FoldAverages average;
    ConfusionMatrix pooled{1};
    double pooled_accuracy = 0.0;
    std::vector<ClassReport> classes;
    ClassMetrics macro;  // per-class values averaged; counts left zero
    Metric macro_auc;
    std::vector<OutOfFold> predictions;  // canonical (id) order
};

// Arithmetic means of the per-fold rows.
FoldAverages average_folds(const std::vector<FoldReport>& folds);

// Builds every report table from pooled out-of-fold predictions.
CvReport summarize(std::vector<OutOfFold> predictions, int num_classes, int folds);

class FoldTrainingError : public TrainingError {
public:
    FoldTrainingError(int fold, const std::string& what)
        : TrainingError("fold " + std::to_string(fold) + ": " + what), fold_(fold) {}
    int fold() const noexcept { return fold_; }

private:
    int fold_;
};

// Stratified k-fold cross-validation of the one-vs-rest SVM. Samples are
// first put in id order so the report does not depend on input order. Each
// fold standardizes and trains on the remaining folds only.
CvReport run_cv(const CvDataset& data, const CvParams& params);

}  // namespace ctsev::eval
