#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ctsev/error.hpp"
#include "ctsev/svm/kernel.hpp"
#include "ctsev/svm/matrix.hpp"

namespace ctsev::svm {

// Soft-margin binary SVM in dual form: f(x) = sum_i coeff_i K(sv_i, x) + bias
// with coeff_i = alpha_i * y_i and 0 < alpha_i <= C for every stored vector.
class BinarySvm {
public:
    BinarySvm() = default;
    BinarySvm(KernelSpec kernel, double c, Matrix support_vectors, std::vector<double> dual_coeffs, double bias);

    const KernelSpec& kernel() const noexcept { return kernel_; }
    double penalty() const noexcept { return c_; }
    const Matrix& support_vectors() const noexcept { return svs_; }
    const std::vector<double>& dual_coeffs() const noexcept { return coeffs_; }
    double bias() const noexcept { return bias_; }
    std::size_t dim() const noexcept { return svs_.cols(); }

    // Throws std::invalid_argument on a dimension mismatch.
    double decision_value(std::span<const float> x) const;
    double decision_value(std::span<const double> x) const;

private:
    template <typename T>
    double decide(std::span<const T> x) const;

    KernelSpec kernel_;
    double c_ = 1.0;
    Matrix svs_;
    std::vector<double> coeffs_;
    double bias_ = 0.0;
    std::vector<double> weights_;  // linear kernel only: sum_i coeff_i sv_i
};

struct SmoParams {
    double c = 1.0;
    KernelSpec kernel;
    double tol = 1e-3;
    int max_passes = 10;
    std::size_t max_updates = 1'000'000;
};

// Dense symmetric kernel matrix over the training rows.
class Gram {
public:
    Gram(const Matrix& x, const KernelSpec& kernel, std::size_t workers = 1);

    std::size_t size() const noexcept { return n_; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return values_[i * n_ + j]; }
    std::span<const double> row(std::size_t i) const noexcept { return {values_.data() + i * n_, n_}; }

private:
    std::size_t n_;
    std::vector<double> values_;
};

struct SmoResult {
    BinarySvm model;
    std::vector<double> alpha;        // one per training row
    double objective = 0.0;           // dual objective at alpha
    double max_kkt_violation = 0.0;   // with the final bias
    std::size_t updates = 0;          // successful pair updates
    std::size_t sweeps = 0;
};

class SmoNotConverged : public TrainingError {
public:
    SmoNotConverged(const std::string& what, SmoResult best) : TrainingError(what), best_(std::move(best)) {}
    const SmoResult& best() const noexcept { return best_; }

private:
    SmoResult best_;
};

// Sequential minimal optimization on
//   max  sum(alpha) - 1/2 sum_ij alpha_i alpha_j y_i y_j K_ij
//   s.t. 0 <= alpha_i <= C, sum_i alpha_i y_i = 0.
//
// Sweeps visit training rows in index order. A row is a violator when its
// optimality gap against the most extreme opposing row exceeds tol. Its
// partner is chosen among the rows that form a violating pair with it: the
// one maximizing |E_i - E_j| (lowest index on ties), falling back to the next
// candidates in that order if the step would make no progress. Stops after
// max_passes consecutive sweeps without an update. The bias is the mean of
// y_i - sum_j alpha_j y_j K_ij over unbounded support vectors, or the
// midpoint of the feasible interval when there are none.
//
// Labels must be +1/-1 with both present (std::invalid_argument otherwise).
// Exceeding max_updates throws SmoNotConverged carrying the current iterate.
SmoResult smo_solve(const Matrix& x, std::span<const int> y, const SmoParams& params);
SmoResult smo_solve(const Gram& gram, const Matrix& x, std::span<const int> y, const SmoParams& params);

BinarySvm smo_train(const Matrix& x, std::span<const int> y, const SmoParams& params);

// Dual objective and worst KKT residual of `alpha` on a precomputed Gram.
double dual_objective(const Gram& gram, std::span<const int> y, std::span<const double> alpha);
double max_kkt_violation(const Gram& gram, std::span<const int> y, std::span<const double> alpha, double bias,
                         double c);

}  // namespace ctsev::svm
