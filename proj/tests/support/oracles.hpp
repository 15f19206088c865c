#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "aeids/autoencoder.hpp"
#include "aeids/classifiers.hpp"
#include "aeids/evaluation.hpp"
#include "aeids/matrix.hpp"

namespace aeids::support {

/// Plain nested-loop forward pass: returns every activation, input first.
std::vector<std::vector<double>> naive_activations(const Autoencoder& model, std::span<const double> x);

/// Central-difference gradient of the single-sample loss, in layer order
/// (weights then biases for every layer).
std::vector<double> numeric_gradient(const Autoencoder& model, std::span<const double> x, double h);

/// The analytic gradient flattened in the same order as numeric_gradient.
std::vector<double> flatten(const Gradients& g);

/// Sort every distance, take the first k (ties by index), majority vote with
/// ties to anomalous.
BinaryLabel brute_force_knn(const Matrix& points, std::span<const BinaryLabel> labels, std::size_t k,
                            std::span<const double> x);

/// Exact solution of a small SVM dual by enumerating every assignment of each
/// multiplier to {0, C, free} and solving the free system with Gaussian
/// elimination. Only practical for a handful of points.
struct QpSolution {
    std::vector<double> alpha;
    double bias = 0.0;
    double objective = 0.0;
    bool found = false;
};
QpSolution enumerate_svm_dual(const Matrix& x, std::span<const int> y, double c, double gamma);

double qp_decision(const Matrix& x, std::span<const int> y, const QpSolution& qp, double gamma,
                   std::span<const double> query);

/// Outcome of a property check: pass flag plus a one-line description.
struct CheckResult {
    bool ok = true;
    std::string detail;
};

CheckResult check_gradients(std::size_t models, std::uint64_t seed);
CheckResult check_adam_recurrence(std::uint64_t seed);
CheckResult check_knn_oracle(std::size_t instances, std::uint64_t seed);
CheckResult check_kmeans_monotone(std::size_t instances, std::uint64_t seed);
CheckResult check_svm_fixture();
CheckResult check_metric_identities(std::size_t instances, std::uint64_t seed);

}  // namespace aeids::support
