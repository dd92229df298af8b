#include "ctsev/svm/smo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "ctsev/parallel.hpp"

namespace ctsev::svm {
namespace {

constexpr double kEps = 1e-12;

void check_labels(std::span<const int> y, std::size_t rows) {
    if (y.size() != rows) throw std::invalid_argument("smo: label count does not match row count");
    bool pos = false, neg = false;
    for (int v : y) {
        if (v == 1) pos = true;
        else if (v == -1) neg = true;
        else throw std::invalid_argument("smo: labels must be +1 or -1");
    }
    if (!pos || !neg) throw std::invalid_argument("smo: training data needs both classes");
}

class Solver {
public:
    Solver(const Gram& gram, std::span<const int> y, const SmoParams& p)
        : k_(gram), y_(y), c_(p.c), tol_(p.tol), n_(y.size()), alpha_(n_, 0.0), g_(n_, 0.0) {}

    // Bias each row would need to sit exactly on the margin.
    double target(std::size_t i) const { return y_[i] - g_[i]; }

    // Rows whose target must stay <= b + tol ("upper") or >= b - tol ("lower").
    bool in_upper(std::size_t i) const {
        return (alpha_[i] > 0.0 && alpha_[i] < c_) || (y_[i] > 0 ? alpha_[i] == 0.0 : alpha_[i] == c_);
    }
    bool in_lower(std::size_t i) const {
        return (alpha_[i] > 0.0 && alpha_[i] < c_) || (y_[i] > 0 ? alpha_[i] == c_ : alpha_[i] == 0.0);
    }

    struct Extremes {
        double upper_max = -std::numeric_limits<double>::infinity();
        double lower_min = std::numeric_limits<double>::infinity();
    };

    Extremes extremes() const {
        Extremes e;
        for (std::size_t i = 0; i < n_; ++i) {
            const double t = target(i);
            if (in_upper(i)) e.upper_max = std::max(e.upper_max, t);
            if (in_lower(i)) e.lower_min = std::min(e.lower_min, t);
        }
        return e;
    }

    bool is_violator(std::size_t i, const Extremes& e) const {
        const double t = target(i);
        return (in_upper(i) && t - e.lower_min > tol_) || (in_lower(i) && e.upper_max - t > tol_);
    }

    double snap(double a) const {
        if (a < kEps * c_) return 0.0;
        if (a > c_ * (1.0 - kEps)) return c_;
        return a;
    }

    // Analytic two-variable update. Returns false when no progress is possible.
    bool take_step(std::size_t i, std::size_t j) {
        if (i == j) return false;
        const double ai = alpha_[i];
        const double aj = alpha_[j];
        const double yi = y_[i];
        const double yj = y_[j];
        const double s = yi * yj;
        double lo, hi;
        if (s < 0) {
            lo = std::max(0.0, aj - ai);
            hi = std::min(c_, c_ + aj - ai);
        } else {
            lo = std::max(0.0, ai + aj - c_);
            hi = std::min(c_, ai + aj);
        }
        if (hi - lo < kEps * c_) return false;

        // E_i - E_j; the bias cancels.
        const double ei_ej = (g_[i] - yi) - (g_[j] - yj);
        const double kii = k_(i, i), kjj = k_(j, j), kij = k_(i, j);
        const double eta = kii + kjj - 2.0 * kij;
        double aj_new;
        if (eta > kEps) {
            aj_new = std::clamp(aj + yj * ei_ej / eta, lo, hi);
        } else {
            // Flat or concave direction: pick the better end of the segment.
            auto objective_at = [&](double a) {
                const double d_j = a - aj;
                const double d_i = -s * d_j;
                return d_i + d_j - (d_i * yi * g_[i] + d_j * yj * g_[j]) -
                       0.5 * (d_i * d_i * kii + d_j * d_j * kjj + 2.0 * d_i * d_j * yi * yj * kij);
            };
            const double f_lo = objective_at(lo);
            const double f_hi = objective_at(hi);
            if (f_lo > f_hi + kEps) aj_new = lo;
            else if (f_hi > f_lo + kEps) aj_new = hi;
            else return false;
        }
        aj_new = snap(aj_new);
        if (std::abs(aj_new - aj) < kEps * (aj_new + aj + kEps)) return false;
        const double ai_new = snap(ai + s * (aj - aj_new));

        const double di = (ai_new - ai) * yi;
        const double dj = (aj_new - aj) * yj;
        const auto row_i = k_.row(i);
        const auto row_j = k_.row(j);
        for (std::size_t t = 0; t < n_; ++t) g_[t] += di * row_i[t] + dj * row_j[t];
        alpha_[i] = ai_new;
        alpha_[j] = aj_new;
        return true;
    }

    // Partners are the rows forming a violating pair with i, tried in order
    // of decreasing |E_i - E_j| with the lowest index first on ties.
    bool optimize_row(std::size_t i, const Extremes& e) {
        const double ti = target(i);
        const bool up = in_upper(i) && ti - e.lower_min > tol_;
        const bool low = in_lower(i) && e.upper_max - ti > tol_;
        order_.clear();
        for (std::size_t j = 0; j < n_; ++j) {
            const double tj = target(j);
            if ((up && in_lower(j) && ti - tj > tol_) || (low && in_upper(j) && tj - ti > tol_)) order_.push_back(j);
        }
        auto gap = [&](std::size_t j) { return std::abs(ti - target(j)); };
        const auto best = std::max_element(order_.begin(), order_.end(),
                                           [&](std::size_t a, std::size_t b) { return gap(a) < gap(b); });
        if (best == order_.end()) return false;
        if (take_step(i, *best)) return true;
        std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) { return gap(a) > gap(b); });
        for (std::size_t j : order_) {
            if (take_step(i, j)) return true;
        }
        return false;
    }

    double bias() const {
        double sum = 0.0;
        std::size_t free = 0;
        for (std::size_t i = 0; i < n_; ++i) {
            if (alpha_[i] > 0.0 && alpha_[i] < c_) {
                sum += target(i);
                ++free;
            }
        }
        if (free > 0) return sum / static_cast<double>(free);
        const Extremes e = extremes();
        if (!std::isfinite(e.upper_max)) return e.lower_min;
        if (!std::isfinite(e.lower_min)) return e.upper_max;
        return 0.5 * (e.upper_max + e.lower_min);
    }

    const Gram& k_;
    std::span<const int> y_;
    double c_;
    double tol_;
    std::size_t n_;
    std::vector<double> alpha_;
    std::vector<double> g_;  // sum_j alpha_j y_j K_ij
    std::vector<std::size_t> order_;
};

SmoResult finish(const Solver& s, const Matrix& x, const SmoParams& params, std::size_t updates, std::size_t sweeps,
                 const Gram& gram, std::span<const int> y) {
    SmoResult r;
    r.alpha = s.alpha_;
    r.updates = updates;
    r.sweeps = sweeps;
    const double b = s.bias();
    std::vector<std::size_t> sv;
    std::vector<double> coeffs;
    for (std::size_t i = 0; i < r.alpha.size(); ++i) {
        if (r.alpha[i] > 0.0) {
            sv.push_back(i);
            coeffs.push_back(r.alpha[i] * y[i]);
        }
    }
    r.model = BinarySvm(params.kernel, params.c, x.select(sv), std::move(coeffs), b);
    r.objective = dual_objective(gram, y, r.alpha);
    r.max_kkt_violation = max_kkt_violation(gram, y, r.alpha, b, params.c);
    return r;
}

}  // namespace

BinarySvm::BinarySvm(KernelSpec kernel, double c, Matrix support_vectors, std::vector<double> dual_coeffs, double bias)
    : kernel_(kernel), c_(c), svs_(std::move(support_vectors)), coeffs_(std::move(dual_coeffs)), bias_(bias) {
    if (coeffs_.size() != svs_.rows()) throw std::invalid_argument("BinarySvm: one coefficient per support vector");
    if (kernel_.kind == KernelKind::linear) {
        weights_.assign(svs_.cols(), 0.0);
        for (std::size_t i = 0; i < svs_.rows(); ++i) {
            const auto sv = svs_.row(i);
            for (std::size_t j = 0; j < sv.size(); ++j) weights_[j] += coeffs_[i] * sv[j];
        }
    }
}

template <typename T>
double BinarySvm::decide(std::span<const T> x) const {
    if (x.size() != dim() && svs_.rows() > 0) throw std::invalid_argument("decision_value: dimension mismatch");
    if (kernel_.kind == KernelKind::linear) {
        double acc = 0.0;
        for (std::size_t j = 0; j < weights_.size(); ++j) acc += weights_[j] * x[j];
        return acc + bias_;
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < svs_.rows(); ++i) acc += coeffs_[i] * kernel_eval(kernel_, x, svs_.row(i));
    return acc + bias_;
}

double BinarySvm::decision_value(std::span<const float> x) const { return decide(x); }
double BinarySvm::decision_value(std::span<const double> x) const { return decide(x); }

Gram::Gram(const Matrix& x, const KernelSpec& kernel, std::size_t workers) : n_(x.rows()), values_(n_ * n_) {
    parallel_for(n_, workers, [&](std::size_t i) {
        for (std::size_t j = 0; j <= i; ++j) values_[i * n_ + j] = kernel_eval(kernel, x.row(i), x.row(j));
    });
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = i + 1; j < n_; ++j) values_[i * n_ + j] = values_[j * n_ + i];
    }
}

double dual_objective(const Gram& gram, std::span<const int> y, std::span<const double> alpha) {
    double linear = 0.0, quad = 0.0;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        linear += alpha[i];
        if (alpha[i] == 0.0) continue;
        for (std::size_t j = 0; j < alpha.size(); ++j) quad += alpha[i] * alpha[j] * y[i] * y[j] * gram(i, j);
    }
    return linear - 0.5 * quad;
}

double max_kkt_violation(const Gram& gram, std::span<const int> y, std::span<const double> alpha, double bias,
                         double c) {
    double worst = 0.0;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        double f = bias;
        for (std::size_t j = 0; j < alpha.size(); ++j) f += alpha[j] * y[j] * gram(i, j);
        const double margin = y[i] * f;
        double v = 0.0;
        if (alpha[i] <= 0.0) v = std::max(0.0, 1.0 - margin);
        else if (alpha[i] >= c) v = std::max(0.0, margin - 1.0);
        else v = std::abs(margin - 1.0);
        worst = std::max(worst, v);
    }
    return worst;
}

SmoResult smo_solve(const Gram& gram, const Matrix& x, std::span<const int> y, const SmoParams& params) {
    check_labels(y, x.rows());
    if (gram.size() != x.rows()) throw std::invalid_argument("smo: Gram size does not match row count");
    if (!(params.c > 0.0)) throw std::invalid_argument("smo: C must be positive");
    SmoParams p = params;
    p.kernel = params.kernel.resolved(x.cols());

    Solver s(gram, y, p);
    std::size_t updates = 0;
    std::size_t sweeps = 0;
    int quiet = 0;
    while (quiet < p.max_passes) {
        ++sweeps;
        std::size_t changed = 0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            const auto e = s.extremes();
            if (!s.is_violator(i, e)) continue;
            if (s.optimize_row(i, e)) {
                ++changed;
                if (++updates >= p.max_updates) {
                    throw SmoNotConverged("smo: no convergence after " + std::to_string(updates) + " pair updates",
                                          finish(s, x, p, updates, sweeps, gram, y));
                }
            }
        }
        quiet = changed == 0 ? quiet + 1 : 0;
    }
    return finish(s, x, p, updates, sweeps, gram, y);
}

SmoResult smo_solve(const Matrix& x, std::span<const int> y, const SmoParams& params) {
    check_labels(y, x.rows());
    return smo_solve(Gram(x, params.kernel.resolved(x.cols())), x, y, params);
}

BinarySvm smo_train(const Matrix& x, std::span<const int> y, const SmoParams& params) {
    return smo_solve(x, y, params).model;
}

}  // namespace ctsev::svm
