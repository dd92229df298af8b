#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "ctsev/eval/cross_validation.hpp"

namespace ctsev::eval {

// Ordered key/value lines written as "# key: value" at the top of each file.
using ReproBlock = std::vector<std::pair<std::string, std::string>>;

struct ReportContext {
    std::vector<std::string> class_names;
    ReproBlock repro;
};

// Writes into `dir` (created if needed):
//   folds.csv        per-fold support/accuracy/precision/recall/f1 + average row
//   classes.csv      pooled per-class metrics + macro row
//   confusion.txt    aligned pooled confusion matrix
//   confusion.csv
//   roc_<class>.csv  threshold,fpr,tpr
//   roc.svg          the per-class ROC curves in one plot
//   predictions.csv  out-of-fold predictions; input to read_predictions()
// Percentages carry four decimals; undefined metrics print as "undefined".
void write_report(const CvReport& report, const std::filesystem::path& dir, const ReportContext& ctx);

std::string format_confusion(const ConfusionMatrix& cm, const std::vector<std::string>& names);
std::string render_roc_svg(const CvReport& report, const std::vector<std::string>& names);

struct SavedPredictions {
    ReproBlock repro;
    std::vector<std::string> class_names;
    int folds = 0;
    std::vector<OutOfFold> predictions;
};

// Parses predictions.csv as written by write_report. Throws DataError.
SavedPredictions read_predictions(const std::filesystem::path& path);

}  // namespace ctsev::eval
