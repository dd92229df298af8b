#include "ctsev/eval/cross_validation.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

#include "ctsev/eval/kfold.hpp"
#include "ctsev/parallel.hpp"

namespace ctsev::eval {
namespace {

struct MacroMetrics {
    Metric precision;
    Metric recall;
    Metric f1;
    Metric specificity;
    Metric accuracy;
};

MacroMetrics macro_over(const std::vector<ClassMetrics>& per_class) {
    auto collect = [&](auto member) {
        std::vector<Metric> v;
        for (const auto& m : per_class) v.push_back(m.*member);
        return mean_of(std::span<const Metric>(v));
    };
    return {collect(&ClassMetrics::precision), collect(&ClassMetrics::sensitivity), collect(&ClassMetrics::f1),
            collect(&ClassMetrics::specificity), collect(&ClassMetrics::accuracy)};
}

std::vector<ClassMetrics> per_class_metrics(const ConfusionMatrix& cm) {
    std::vector<ClassMetrics> out;
    for (int c = 0; c < cm.classes(); ++c) out.push_back(class_metrics(class_counts(cm, c)));
    return out;
}

}  // namespace

FoldAverages average_folds(const std::vector<FoldReport>& folds) {
    if (folds.empty()) throw std::invalid_argument("average_folds: no folds");
    std::vector<double> support, accuracy;
    std::vector<Metric> precision, recall, f1;
    for (const auto& f : folds) {
        support.push_back(static_cast<double>(f.support));
        accuracy.push_back(f.accuracy);
        precision.push_back(f.precision);
        recall.push_back(f.recall);
        f1.push_back(f.f1);
    }
    return {mean_of(std::span<const double>(support)), mean_of(std::span<const double>(accuracy)),
            mean_of(std::span<const Metric>(precision)), mean_of(std::span<const Metric>(recall)),
            mean_of(std::span<const Metric>(f1))};
}

CvReport summarize(std::vector<OutOfFold> predictions, int num_classes, int folds) {
    if (predictions.empty()) throw std::invalid_argument("summarize: no predictions");
    CvReport report;
    report.pooled = ConfusionMatrix(num_classes);

    for (int f = 0; f < folds; ++f) {
        FoldReport fr;
        fr.fold = f;
        fr.confusion = ConfusionMatrix(num_classes);
        for (const auto& p : predictions) {
            if (p.fold == f) fr.confusion.add(p.truth, p.predicted);
        }
        fr.support = fr.confusion.total();
        if (fr.support == 0) throw std::invalid_argument("summarize: fold " + std::to_string(f) + " is empty");
        fr.accuracy = overall_accuracy(fr.confusion);
        const MacroMetrics macro = macro_over(per_class_metrics(fr.confusion));
        fr.precision = macro.precision;
        fr.recall = macro.recall;
        fr.f1 = macro.f1;
        report.pooled += fr.confusion;
        report.folds.push_back(std::move(fr));
    }
    if (report.pooled.total() != predictions.size()) {
        throw std::invalid_argument("summarize: prediction fold index out of range");
    }
    report.average = average_folds(report.folds);
    report.pooled_accuracy = overall_accuracy(report.pooled);

    const auto per_class = per_class_metrics(report.pooled);
    std::vector<Metric> aucs;
    for (int c = 0; c < num_classes; ++c) {
        ClassReport cr;
        cr.metrics = per_class[static_cast<std::size_t>(c)];
        cr.support = cr.metrics.counts.tp + cr.metrics.counts.fn;
        std::vector<double> scores;
        std::vector<std::uint8_t> positive;
        for (const auto& p : predictions) {
            if (p.scores.size() != static_cast<std::size_t>(num_classes)) {
                throw std::invalid_argument("summarize: prediction " + p.id + " has the wrong score count");
            }
            scores.push_back(p.scores[static_cast<std::size_t>(c)]);
            positive.push_back(p.truth == c);
        }
        const auto npos = static_cast<std::size_t>(std::count(positive.begin(), positive.end(), 1));
        if (npos > 0 && npos < positive.size()) {
            cr.roc = roc_curve(scores, positive);
            aucs.push_back(cr.roc->auc);
        } else {
            aucs.push_back(std::nullopt);
        }
        report.classes.push_back(std::move(cr));
    }
    const MacroMetrics macro = macro_over(per_class);
    report.macro.precision = macro.precision;
    report.macro.sensitivity = macro.recall;
    report.macro.f1 = macro.f1;
    report.macro.specificity = macro.specificity;
    report.macro.accuracy = macro.accuracy;
    report.macro_auc = mean_of(std::span<const Metric>(aucs));
    report.predictions = std::move(predictions);
    return report;
}

CvReport run_cv(const CvDataset& data, const CvParams& params) {
    const std::size_t n = data.labels.size();
    if (data.features.rows() != n || data.ids.size() != n) {
        throw std::invalid_argument("run_cv: ids, labels and features differ in length");
    }
    std::vector<std::size_t> canonical(n);
    std::iota(canonical.begin(), canonical.end(), std::size_t{0});
    std::sort(canonical.begin(), canonical.end(), [&](std::size_t a, std::size_t b) { return data.ids[a] < data.ids[b]; });
    for (std::size_t i = 1; i < n; ++i) {
        if (data.ids[canonical[i]] == data.ids[canonical[i - 1]]) {
            throw std::invalid_argument("run_cv: duplicate sample id " + data.ids[canonical[i]]);
        }
    }

    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = data.labels[canonical[i]];
    const svm::Matrix features = data.features.select(canonical);
    const auto folds = stratified_kfold(labels, params.folds, params.seed);

    std::vector<std::vector<OutOfFold>> per_fold(folds.size());
    parallel_for(folds.size(), params.workers, [&](std::size_t f) {
        std::vector<char> held(n, 0);
        for (std::size_t i : folds[f]) held[i] = 1;
        std::vector<std::size_t> train;
        for (std::size_t i = 0; i < n; ++i) {
            if (!held[i]) train.push_back(i);
        }
        std::vector<int> train_labels;
        for (std::size_t i : train) train_labels.push_back(labels[i]);

        svm::MulticlassSvm model;
        try {
            model = svm::train_multiclass(features.select(train), train_labels, params.num_classes,
                                          svm::MulticlassParams{params.smo, 1});
        } catch (const TrainingError& e) {
            throw FoldTrainingError(static_cast<int>(f), e.what());
        }
        for (std::size_t i : folds[f]) {
            svm::Prediction p = svm::predict(model, features.row(i));
            per_fold[f].push_back({static_cast<int>(f), data.ids[canonical[i]], labels[i], p.label, std::move(p.scores)});
        }
    });

    std::vector<OutOfFold> pooled;
    for (auto& fold : per_fold) {
        for (auto& p : fold) pooled.push_back(std::move(p));
    }
    std::sort(pooled.begin(), pooled.end(), [](const OutOfFold& a, const OutOfFold& b) { return a.id < b.id; });
    return summarize(std::move(pooled), params.num_classes, params.folds);
}

}  // namespace ctsev::eval
