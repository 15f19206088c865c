#include <algorithm>
#include <cmath>
#include <limits>
#include <list>
#include <string>
#include <unordered_map>

#include "aeids/classifiers.hpp"
#include "aeids/error.hpp"
#include "aeids/log.hpp"

namespace aeids {
namespace {

constexpr double kTau = 1e-12;

/// Least-recently-used cache of signed kernel columns Q_i[k] = y_i y_k K(x_i, x_k).
class KernelColumnCache {
public:
    KernelColumnCache(const Matrix& x, std::span<const int> y, double gamma, std::size_t cache_mb)
        : x_(x), y_(y), gamma_(gamma) {
        const std::size_t column_bytes = std::max<std::size_t>(1, x.rows()) * sizeof(double);
        capacity_ = std::max<std::size_t>(2, cache_mb * 1024 * 1024 / column_bytes);
    }

    /// Valid until two further distinct columns are requested.
    const std::vector<double>& column(std::size_t i) {
        if (auto it = index_.find(i); it != index_.end()) {
            lru_.splice(lru_.begin(), lru_, it->second);
            return it->second->values;
        }
        if (lru_.size() >= capacity_) {
            index_.erase(lru_.back().index);
            lru_.pop_back();
        }
        lru_.push_front({i, compute(i)});
        index_[i] = lru_.begin();
        return lru_.front().values;
    }

private:
    struct Entry {
        std::size_t index;
        std::vector<double> values;
    };

    std::vector<double> compute(std::size_t i) const {
        std::vector<double> col(x_.rows());
        const auto xi = x_.row(i);
        for (std::size_t k = 0; k < x_.rows(); ++k) {
            col[k] = static_cast<double>(y_[i] * y_[k]) * std::exp(-gamma_ * squared_distance(xi, x_.row(k)));
        }
        return col;
    }

    const Matrix& x_;
    std::span<const int> y_;
    double gamma_;
    std::size_t capacity_;
    std::list<Entry> lru_;
    std::unordered_map<std::size_t, std::list<Entry>::iterator> index_;
};

}  // namespace

double rbf_kernel(std::span<const double> a, std::span<const double> b, double gamma) {
    if (a.size() != b.size()) throw Error("rbf_kernel: dimension mismatch");
    return std::exp(-gamma * squared_distance(a, b));
}

double scale_gamma(const Matrix& x) {
    if (x.empty() || x.cols() == 0) throw InputError("scale_gamma: empty input");
    const auto& v = x.data();
    double mean = 0.0;
    for (double e : v) mean += e;
    mean /= static_cast<double>(v.size());
    double var = 0.0;
    for (double e : v) var += (e - mean) * (e - mean);
    var /= static_cast<double>(v.size());
    return var > 0.0 ? 1.0 / (static_cast<double>(x.cols()) * var) : 1.0;
}

SvmSolution solve_svm_dual(const Matrix& x, std::span<const int> y, double c, double gamma, double tol,
                           std::size_t max_iter, std::size_t cache_mb) {
    const std::size_t n = x.rows();
    if (y.size() != n) throw Error("svm: feature/label count mismatch");
    if (!(c > 0.0)) throw InputError("svm.c must be > 0");
    if (!(gamma > 0.0)) throw InputError("svm.gamma must be > 0");
    if (!(tol > 0.0)) throw InputError("svm.tol must be > 0");

    SvmSolution sol;
    sol.alpha.assign(n, 0.0);
    sol.gradient.assign(n, -1.0);
    auto& alpha = sol.alpha;
    auto& grad = sol.gradient;
    KernelColumnCache cache(x, y, gamma, cache_mb);
    // K(x, x) = 1 for the RBF kernel, so the diagonal of Q is all ones.
    constexpr double qd = 1.0;

    auto upper = [&](std::size_t t) { return alpha[t] >= c; };
    auto lower = [&](std::size_t t) { return alpha[t] <= 0.0; };

    while (sol.iterations < max_iter) {
        // i maximises -y_t G_t over I_up.
        double gmax = -std::numeric_limits<double>::infinity();
        std::size_t i = n;
        for (std::size_t t = 0; t < n; ++t) {
            if (y[t] == 1) {
                if (!upper(t) && -grad[t] >= gmax) {
                    gmax = -grad[t];
                    i = t;
                }
            } else if (!lower(t) && grad[t] >= gmax) {
                gmax = grad[t];
                i = t;
            }
        }
        // j minimises the second-order objective decrease over I_low.
        double gmax2 = -std::numeric_limits<double>::infinity();
        std::size_t j = n;
        double best = std::numeric_limits<double>::infinity();
        const std::vector<double>* qi = i < n ? &cache.column(i) : nullptr;
        for (std::size_t t = 0; t < n; ++t) {
            if (y[t] == 1) {
                if (lower(t)) continue;
                gmax2 = std::max(gmax2, grad[t]);
                const double diff = gmax + grad[t];
                if (qi && diff > 0.0) {
                    double quad = qd + qd - 2.0 * y[i] * (*qi)[t];
                    if (quad <= 0.0) quad = kTau;
                    const double obj = -(diff * diff) / quad;
                    if (obj <= best) {
                        best = obj;
                        j = t;
                    }
                }
            } else {
                if (upper(t)) continue;
                gmax2 = std::max(gmax2, -grad[t]);
                const double diff = gmax - grad[t];
                if (qi && diff > 0.0) {
                    double quad = qd + qd + 2.0 * y[i] * (*qi)[t];
                    if (quad <= 0.0) quad = kTau;
                    const double obj = -(diff * diff) / quad;
                    if (obj <= best) {
                        best = obj;
                        j = t;
                    }
                }
            }
        }
        sol.gap = gmax + gmax2;
        if (sol.gap < tol || i == n || j == n) {
            sol.converged = true;
            break;
        }
        ++sol.iterations;

        const std::vector<double>& col_i = cache.column(i);
        const std::vector<double>& col_j = cache.column(j);
        const double old_ai = alpha[i];
        const double old_aj = alpha[j];
        double ai = old_ai;
        double aj = old_aj;
        if (y[i] != y[j]) {
            double quad = qd + qd + 2.0 * col_i[j];
            if (quad <= 0.0) quad = kTau;
            const double delta = (-grad[i] - grad[j]) / quad;
            const double diff = ai - aj;
            ai += delta;
            aj += delta;
            if (diff > 0.0) {
                if (aj < 0.0) {
                    aj = 0.0;
                    ai = diff;
                }
            } else if (ai < 0.0) {
                ai = 0.0;
                aj = -diff;
            }
            if (diff > 0.0) {
                if (ai > c) {
                    ai = c;
                    aj = c - diff;
                }
            } else if (aj > c) {
                aj = c;
                ai = c + diff;
            }
        } else {
            double quad = qd + qd - 2.0 * col_i[j];
            if (quad <= 0.0) quad = kTau;
            const double delta = (grad[i] - grad[j]) / quad;
            const double sum = ai + aj;
            ai -= delta;
            aj += delta;
            if (sum > c) {
                if (ai > c) {
                    ai = c;
                    aj = sum - c;
                }
            } else if (aj < 0.0) {
                aj = 0.0;
                ai = sum;
            }
            if (sum > c) {
                if (aj > c) {
                    aj = c;
                    ai = sum - c;
                }
            } else if (ai < 0.0) {
                ai = 0.0;
                aj = sum;
            }
        }
        alpha[i] = ai;
        alpha[j] = aj;
        const double dai = ai - old_ai;
        const double daj = aj - old_aj;
        for (std::size_t t = 0; t < n; ++t) grad[t] += col_i[t] * dai + col_j[t] * daj;
    }

    // rho from free vectors, else the midpoint of the feasible interval.
    double ub = std::numeric_limits<double>::infinity();
    double lb = -std::numeric_limits<double>::infinity();
    double sum_free = 0.0;
    std::size_t free_count = 0;
    for (std::size_t t = 0; t < n; ++t) {
        const double yg = y[t] * grad[t];
        if (upper(t)) {
            if (y[t] == -1) ub = std::min(ub, yg);
            else lb = std::max(lb, yg);
        } else if (lower(t)) {
            if (y[t] == 1) ub = std::min(ub, yg);
            else lb = std::max(lb, yg);
        } else {
            ++free_count;
            sum_free += yg;
        }
    }
    sol.rho = free_count > 0 ? sum_free / static_cast<double>(free_count) : (ub + lb) / 2.0;
    return sol;
}

double SvmModel::decision_value(std::span<const double> x) const {
    if (x.size() != support_vectors.cols()) {
        throw Error("svm: query dimension " + std::to_string(x.size()) + ", model " +
                    std::to_string(support_vectors.cols()));
    }
    double s = bias;
    for (std::size_t i = 0; i < support_vectors.rows(); ++i) {
        s += dual_coef[i] * std::exp(-gamma * squared_distance(support_vectors.row(i), x));
    }
    return s;
}

SvmModel fit_svm(const Matrix& train, std::span<const BinaryLabel> labels, const SvmConfig& config) {
    if (train.rows() != labels.size()) throw Error("fit_svm: feature/label count mismatch");
    std::vector<int> y(labels.size());
    bool has_pos = false, has_neg = false;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        y[i] = svm_sign(labels[i]);
        (y[i] > 0 ? has_pos : has_neg) = true;
    }
    if (!has_pos || !has_neg) throw InputError("svm: training data must contain both classes");

    const double gamma = config.gamma.value_or(scale_gamma(train));
    const auto sol = solve_svm_dual(train, y, config.c, gamma, config.tol, config.max_iter, config.cache_mb);

    SvmModel model;
    model.gamma = gamma;
    model.c = config.c;
    model.bias = -sol.rho;
    model.iterations = sol.iterations;
    model.converged = sol.converged;
    for (std::size_t i = 0; i < sol.alpha.size(); ++i) {
        if (sol.alpha[i] > 0.0) {
            model.support_vectors.append_row(train.row(i));
            model.dual_coef.push_back(sol.alpha[i] * y[i]);
        }
    }
    if (model.support_vectors.empty()) model.support_vectors = Matrix(0, train.cols());
    if (!model.converged) {
        warn("svm: SMO stopped at max_iter=" + std::to_string(config.max_iter) + " with KKT gap " +
             std::to_string(sol.gap) + "; using last iterate");
    }
    return model;
}

BinaryLabel predict_svm(const SvmModel& model, std::span<const double> x) {
    return model.decision_value(x) >= 0.0 ? BinaryLabel::anomalous : BinaryLabel::normal;
}

}  // namespace aeids
