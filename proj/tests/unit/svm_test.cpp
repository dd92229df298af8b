#include <array>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "ctsev/error.hpp"
#include "ctsev/svm/kernel.hpp"
#include "ctsev/svm/multiclass.hpp"
#include "ctsev/svm/smo.hpp"
#include "ctsev/svm/standardizer.hpp"
#include "oracles.hpp"

using namespace ctsev::svm;

namespace {

Matrix rows(std::vector<std::vector<float>> r) {
    Matrix m;
    for (const auto& row : r) m.append_row(row);
    return m;
}

SmoParams tight(double c, KernelSpec k = {}) {
    SmoParams p;
    p.c = c;
    p.kernel = k;
    p.tol = 1e-9;
    return p;
}

// Slope and intercept of a linear model read off its decision values.
std::vector<double> linear_wb(const BinarySvm& m, std::size_t dim) {
    std::vector<float> x(dim, 0.0f);
    const double b = m.decision_value(std::span<const float>(x));
    std::vector<double> wb;
    for (std::size_t d = 0; d < dim; ++d) {
        x.assign(dim, 0.0f);
        x[d] = 1.0f;
        wb.push_back(m.decision_value(std::span<const float>(x)) - b);
    }
    wb.push_back(b);
    return wb;
}

}  // namespace

TEST(Standardizer, PopulationStatisticsAndConstantFeature) {
    const auto s = Standardizer::fit(rows({{1, 10}, {3, 10}}));
    EXPECT_EQ(s.mean, (std::vector<double>{2, 10}));
    EXPECT_EQ(s.stddev, (std::vector<double>{1, 1}));
    const std::vector<float> x = {3, 12};
    EXPECT_EQ(s.apply(x), (std::vector<double>{1, 2}));
    EXPECT_THROW(Standardizer::fit(rows({{1, 2}})), std::invalid_argument);
}

TEST(Standardizer, TransformHasZeroMeanUnitVariance) {
    const auto blobs = oracle::three_blobs(1, 20);
    const auto z = Standardizer::fit(blobs.x).transform(blobs.x);
    for (std::size_t d = 0; d < z.cols(); ++d) {
        double sum = 0, sq = 0;
        for (std::size_t i = 0; i < z.rows(); ++i) sum += z.row(i)[d];
        const double mean = sum / static_cast<double>(z.rows());
        for (std::size_t i = 0; i < z.rows(); ++i) sq += (z.row(i)[d] - mean) * (z.row(i)[d] - mean);
        EXPECT_NEAR(mean, 0.0, 1e-6);
        EXPECT_NEAR(sq / static_cast<double>(z.rows()), 1.0, 1e-5);
    }
}

TEST(Kernel, LinearAndRbf) {
    const std::vector<float> a = {0, 0}, b = {1, 1}, c = {2, 3};
    EXPECT_EQ(kernel_eval({KernelKind::linear, 0}, b, c), 5.0);
    EXPECT_DOUBLE_EQ(kernel_eval({KernelKind::rbf, 0.5}, a, b), std::exp(-1.0));
    EXPECT_EQ(kernel_eval({KernelKind::rbf, 0.5}, c, c), 1.0);
    EXPECT_DOUBLE_EQ((KernelSpec{KernelKind::rbf, 0}).resolved(4).gamma, 0.25);
    EXPECT_THROW(kernel_eval({KernelKind::rbf, -1}, a, b), std::invalid_argument);
    EXPECT_THROW(kernel_eval({}, a, std::vector<float>{1}), std::invalid_argument);
}

TEST(Smo, TwoPointAnalytic) {
    const auto x = rows({{1}, {-1}});
    const std::vector<int> y = {1, -1};
    const auto r = smo_solve(x, y, tight(10));
    EXPECT_NEAR(r.alpha[0], 0.5, 1e-6);
    EXPECT_NEAR(r.alpha[1], 0.5, 1e-6);
    const auto wb = linear_wb(r.model, 1);
    EXPECT_NEAR(wb[0], 1.0, 1e-6);
    EXPECT_NEAR(wb[1], 0.0, 1e-6);
    EXPECT_NEAR(r.objective, 0.5, 1e-9);
}

TEST(Smo, FourPointAnalytic) {
    const auto x = rows({{2, 0}, {2, 1}, {0, 0}, {0, 1}});
    const std::vector<int> y = {1, 1, -1, -1};
    const auto r = smo_solve(x, y, tight(100));
    const auto wb = linear_wb(r.model, 2);
    EXPECT_NEAR(wb[0], 1.0, 1e-6);
    EXPECT_NEAR(wb[1], 0.0, 1e-6);
    EXPECT_NEAR(wb[2], -1.0, 1e-6);
    EXPECT_NEAR(r.objective, 0.5, 1e-6);  // ||w||^2 / 2
    const std::vector<float> probe = {1.5f, 7.0f};
    EXPECT_NEAR(r.model.decision_value(std::span<const float>(probe)), 0.5, 1e-6);
}

TEST(Smo, MatchesBruteForceDual) {
    std::mt19937_64 rng(31);
    std::normal_distribution<float> g(0.0f, 1.0f);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 2 + rng() % 5;
        Matrix x;
        std::vector<int> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = i == 0 ? 1 : i == 1 ? -1 : (rng() % 2 ? 1 : -1);
            x.append_row(std::vector<float>{g(rng) + 0.8f * static_cast<float>(y[i]), g(rng)});
        }
        const double c = std::array{0.1, 1.0, 10.0}[static_cast<std::size_t>(trial % 3)];
        const KernelSpec k = trial % 2 ? KernelSpec{KernelKind::rbf, 0.7} : KernelSpec{};
        const Gram gram(x, k);
        std::vector<std::vector<double>> K(n, std::vector<double>(n));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) K[i][j] = gram(i, j);
        }
        const auto best = oracle::brute_force_dual(K, y, c);
        const auto r = smo_solve(gram, x, y, tight(c, k));
        EXPECT_NEAR(r.objective, best.objective, 1e-6) << "trial " << trial;
        EXPECT_NEAR(dual_objective(gram, y, r.alpha), r.objective, 1e-12);
        EXPECT_LE(r.max_kkt_violation, 1e-3);
        double balance = 0;
        for (std::size_t i = 0; i < n; ++i) {
            balance += r.alpha[i] * y[i];
            EXPECT_GE(r.alpha[i], 0.0);
            EXPECT_LE(r.alpha[i], c);
        }
        EXPECT_LE(std::abs(balance), 1e-9);
    }
}

TEST(Smo, DefaultToleranceKeepsKktResidualSmall) {
    const auto blobs = oracle::three_blobs(2, 30);
    std::vector<int> y(blobs.labels.size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = blobs.labels[i] == 1 ? 1 : -1;
    SmoParams p;
    p.kernel = {KernelKind::rbf, 0.25};
    const auto r = smo_solve(blobs.x, y, p);
    EXPECT_LE(r.max_kkt_violation, 1e-3);
    for (std::size_t i = 0; i < y.size(); ++i) EXPECT_GT(y[i] * r.model.decision_value(blobs.x.row(i)), 0.0);
}

TEST(Smo, RejectsBadLabels) {
    const auto x = rows({{1}, {2}});
    EXPECT_THROW(smo_solve(x, std::vector<int>{1, 1}, {}), std::invalid_argument);
    EXPECT_THROW(smo_solve(x, std::vector<int>{1, 0}, {}), std::invalid_argument);
}

TEST(Smo, UpdateBudgetThrowsWithIterate) {
    const auto blobs = oracle::three_blobs(3, 20);
    std::vector<int> y(blobs.labels.size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = blobs.labels[i] == 0 ? 1 : -1;
    SmoParams p;
    p.max_updates = 1;
    try {
        smo_solve(blobs.x, y, p);
        FAIL() << "expected SmoNotConverged";
    } catch (const SmoNotConverged& e) {
        EXPECT_EQ(e.best().alpha.size(), y.size());
    }
}

TEST(Multiclass, ThreeBlobsPerfectOnTrainingData) {
    const auto blobs = oracle::three_blobs(4, 40);
    for (KernelSpec k : {KernelSpec{}, KernelSpec{KernelKind::rbf, 0.0}}) {
        MulticlassParams params;
        params.smo.kernel = k;
        const auto model = train_multiclass(blobs.x, blobs.labels, 3, params);
        ASSERT_EQ(model.num_classes(), 3u);
        for (std::size_t i = 0; i < blobs.x.rows(); ++i) {
            const auto p = predict(model, blobs.x.row(i));
            ASSERT_EQ(p.label, blobs.labels[i]);
            ASSERT_EQ(p.scores.size(), 3u);
        }
    }
}

TEST(Multiclass, MissingClassIsRejected) {
    const auto blobs = oracle::three_blobs(5, 5);
    std::vector<int> labels = blobs.labels;
    for (auto& l : labels) l = l == 2 ? 1 : l;
    EXPECT_THROW(train_multiclass(blobs.x, labels, 3, {}), std::invalid_argument);
    labels[0] = 3;
    EXPECT_THROW(train_multiclass(blobs.x, labels, 3, {}), std::invalid_argument);
}

TEST(Multiclass, ArgmaxTakesFirstMaximum) {
    EXPECT_EQ(argmax(std::vector<double>{0.5, 2.0, 2.0}), 1);
    EXPECT_EQ(argmax(std::vector<double>{-1.0}), 0);
}

TEST(ModelFile, RoundTripIsExact) {
    oracle::TempDir dir("svmm");
    const auto blobs = oracle::three_blobs(6, 15);
    MulticlassParams params;
    params.smo.kernel = {KernelKind::rbf, 0.0};
    params.smo.c = 2.0;
    const auto model = train_multiclass(blobs.x, blobs.labels, 3, params);
    save_model(dir / "m.svmm", model);
    const auto back = load_model(dir / "m.svmm");
    EXPECT_EQ(back.standardizer, model.standardizer);
    ASSERT_EQ(back.num_classes(), 3u);
    for (std::size_t c = 0; c < 3; ++c) {
        EXPECT_EQ(back.models[c].dual_coeffs(), model.models[c].dual_coeffs());
        EXPECT_EQ(back.models[c].bias(), model.models[c].bias());
        EXPECT_EQ(back.models[c].support_vectors(), model.models[c].support_vectors());
        EXPECT_EQ(back.models[c].penalty(), 2.0);
        EXPECT_EQ(back.models[c].kernel().gamma, 0.25);
    }
    for (std::size_t i = 0; i < blobs.x.rows(); ++i) {
        EXPECT_EQ(predict(back, blobs.x.row(i)).scores, predict(model, blobs.x.row(i)).scores);
    }
}

TEST(ModelFile, TruncatedAndBadMagic) {
    oracle::TempDir dir("svmm");
    const auto blobs = oracle::three_blobs(7, 5);
    save_model(dir / "m.svmm", train_multiclass(blobs.x, blobs.labels, 3, {}));
    std::ifstream in(dir / "m.svmm", std::ios::binary);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::ofstream(dir / "short.svmm", std::ios::binary) << bytes.substr(0, bytes.size() - 4);
    EXPECT_THROW(load_model(dir / "short.svmm"), ctsev::TruncatedError);
    bytes[1] = 'X';
    std::ofstream(dir / "magic.svmm", std::ios::binary) << bytes;
    EXPECT_THROW(load_model(dir / "magic.svmm"), ctsev::FormatError);
}
