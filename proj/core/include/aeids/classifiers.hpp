#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "aeids/dataset.hpp"
#include "aeids/features.hpp"
#include "aeids/matrix.hpp"

namespace aeids {

// ---------------------------------------------------------------------------
// Z-score reference threshold on the reconstruction error.

struct ReferenceThreshold {
    double mean = 0.0;
    double stddev = 0.0;  // population form (divide by n)
    double z_ac = 0.0;
    double threshold = 0.0;  // mean + z_ac * stddev
};

ReferenceThreshold fit_reference(std::span<const double> reconstruction_errors, double z_ac = 0.0);

/// Normal when re <= threshold.
BinaryLabel classify_reference(const ReferenceThreshold& thr, double re);

// ---------------------------------------------------------------------------
// Exact k-nearest neighbours, Euclidean.

struct KnnModel {
    Matrix points;
    std::vector<BinaryLabel> labels;
    std::size_t k = 11;
};

/// Stores the data. Throws if k == 0 or k > |train|; warns when k is even.
KnnModel fit_knn(Matrix train, std::vector<BinaryLabel> labels, std::size_t k = 11);

/// Majority over the k nearest (distance ties go to the lower training index;
/// vote ties go to anomalous).
BinaryLabel predict_knn(const KnnModel& model, std::span<const double> x);

// ---------------------------------------------------------------------------
// K-Means (k-means++ seeding, Lloyd iterations), clusters labelled by the
// majority training label.

struct KMeansConfig {
    std::size_t clusters = 2;
    std::uint64_t seed = 0;
    std::size_t max_iter = 300;
    double tol = 1e-4;  // stop once every centroid moves less than this
};

struct KMeansModel {
    Matrix centroids;
    std::vector<BinaryLabel> cluster_labels;
    /// Inertia after each assignment step, ending with the final one.
    std::vector<double> inertia_history;
    double inertia = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

KMeansModel fit_kmeans(const Matrix& train, std::span<const BinaryLabel> labels, const KMeansConfig& config = {});

/// Index of the closest centroid; ties go to the lower index.
std::size_t nearest_centroid(const Matrix& centroids, std::span<const double> x);

/// Assignments and total squared distance for a fixed set of centroids.
std::vector<std::size_t> assign_clusters(const Matrix& centroids, const Matrix& points, double* inertia = nullptr);

BinaryLabel predict_kmeans(const KMeansModel& model, std::span<const double> x);

// ---------------------------------------------------------------------------
// Soft-margin SVM with an RBF kernel, dual solved by SMO.

struct SvmConfig {
    double c = 1.0;
    /// Unset selects 1 / (d * Var(X)).
    std::optional<double> gamma;
    double tol = 1e-3;
    std::size_t max_iter = 10'000'000;
    std::size_t cache_mb = 256;
};

double rbf_kernel(std::span<const double> a, std::span<const double> b, double gamma);

/// 1 / (d * Var(X)) with the variance over every entry of X; 1.0 for constant X.
double scale_gamma(const Matrix& x);

/// Normal is -1, anomalous is +1.
inline int svm_sign(BinaryLabel label) noexcept { return label == BinaryLabel::anomalous ? 1 : -1; }

/// Full dual solution, including zero multipliers.
struct SvmSolution {
    std::vector<double> alpha;
    /// Gradient of the dual objective, (Q alpha - e).
    std::vector<double> gradient;
    double rho = 0.0;  // decision = sum alpha_i y_i K(x_i, x) - rho
    double gap = 0.0;  // maximal KKT violation at exit
    std::size_t iterations = 0;
    bool converged = false;
};

/// SMO with second-order working-set selection over an LRU kernel-column
/// cache. `y` holds +1 / -1.
SvmSolution solve_svm_dual(const Matrix& x, std::span<const int> y, double c, double gamma, double tol,
                           std::size_t max_iter, std::size_t cache_mb = 256);

struct SvmModel {
    Matrix support_vectors;
    std::vector<double> dual_coef;  // alpha_i * y_i, nonzero only
    double bias = 0.0;
    double gamma = 1.0;
    double c = 1.0;
    std::size_t iterations = 0;
    bool converged = true;

    double decision_value(std::span<const double> x) const;
};

/// Throws on single-class data. Non-convergence returns the last iterate with
/// converged = false and a warning.
SvmModel fit_svm(const Matrix& train, std::span<const BinaryLabel> labels, const SvmConfig& config = {});

/// Anomalous when the decision value is >= 0.
BinaryLabel predict_svm(const SvmModel& model, std::span<const double> x);

// ---------------------------------------------------------------------------

enum class ClassifierKind : std::uint8_t { reference, knn, kmeans, svm };

inline constexpr ClassifierKind kAllClassifiers[] = {ClassifierKind::reference, ClassifierKind::knn,
                                                     ClassifierKind::kmeans, ClassifierKind::svm};

std::string_view to_string(ClassifierKind kind) noexcept;
ClassifierKind parse_classifier_kind(std::string_view text);

/// A fitted decision mechanism together with the feature mode it consumes.
struct ClassifierModel {
    FeatureMode mode = FeatureMode::re_only;
    std::variant<ReferenceThreshold, KnnModel, KMeansModel, SvmModel> model;

    ClassifierKind kind() const noexcept;
    std::size_t input_dim() const noexcept;
    BinaryLabel predict(std::span<const double> features) const;
    std::vector<BinaryLabel> predict_all(const Matrix& features, std::size_t jobs = 1) const;
};

}  // namespace aeids
